"""Adaptive-K computation, trade-off selection, and neighbor-graph
construction (plain / mutual / directed variants)."""

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .dataset import Dataset
from .density import DistanceIndex, build_index
from .fitness import FitnessKernel

VARIANTS = ("plain", "mutual", "directed")
EPSILON_SIGMA = 1.0 / 3.0  # 3*sigma = 1: noise moves k by at most 1
DEFAULT_ETA_GRID = tuple(round(0.1 * i, 1) for i in range(11))


@dataclass(frozen=True)
class KVector:
    """Per-sample neighbor counts from K = (1 - eta) * kappa + eta * F + eps."""

    values: np.ndarray
    eta: float
    kappa: int
    epsilon_seed: Optional[int] = None
    sigma: float = EPSILON_SIGMA

    def __post_init__(self):
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class NeighborGraph:
    w: np.ndarray
    adjacency: np.ndarray
    variant: str
    node_labels: np.ndarray

    def __post_init__(self):
        self.w.flags.writeable = False
        self.adjacency.flags.writeable = False
        self.node_labels.flags.writeable = False

    @property
    def n(self) -> int:
        return self.w.shape[0]


def compute_k(
    f: FitnessKernel,
    kappa: int,
    eta: float,
    seed: Optional[int] = None,
    noise: bool = True,
) -> KVector:
    """Evaluate the adaptive-K blend and round to valid integer counts.

    Noise draws are Normal(0, (1/3)^2), clamped to [-1, 1] so a single draw
    can change k by at most one. Real-valued K is rounded half-to-even and
    clamped to [1, n-1].
    """
    if f.state != "scaled":
        raise ValueError("fitness kernel must be scaled before computing K")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    n = len(f)
    if kappa >= n:
        raise ValueError(f"kappa={kappa} must be smaller than n={n}")
    if kappa < 1:
        raise ValueError("kappa must be a positive integer")

    raw = (1.0 - eta) * kappa + eta * f.values
    if noise:
        rng = np.random.default_rng(seed)
        eps = np.clip(rng.normal(0.0, EPSILON_SIGMA, size=n), -1.0, 1.0)
        raw = raw + eps
    values = np.clip(np.rint(raw).astype(np.int64), 1, n - 1)
    return KVector(values=values, eta=float(eta), kappa=int(kappa), epsilon_seed=seed)


def build_w(index: DistanceIndex, k: KVector) -> np.ndarray:
    """Binary selection matrix: W[i, j] = 1 iff j is among i's k_i nearest."""
    n = index.n
    if len(k) != n:
        raise ValueError("K vector length does not match index size")
    w = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        w[i, index.order[i, : k.values[i]]] = 1
    return w


def realize(w: np.ndarray, variant: str, labels: np.ndarray) -> NeighborGraph:
    """Adjacency realization: plain = max(W, W^T), mutual = min(W, W^T),
    directed = W."""
    w = np.asarray(w, dtype=np.uint8)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("W must be square")
    if np.any(np.diag(w)):
        raise ValueError("W must have a zero diagonal")
    if variant == "plain":
        adjacency = np.maximum(w, w.T)
    elif variant == "mutual":
        adjacency = np.minimum(w, w.T)
    elif variant == "directed":
        adjacency = w.copy()
    else:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    return NeighborGraph(
        w=w.copy(),
        adjacency=adjacency,
        variant=variant,
        node_labels=np.asarray(labels, dtype=np.int64).copy(),
    )


def _stratified_split(labels: np.ndarray, test_frac: float, rng) -> Tuple[np.ndarray, np.ndarray]:
    train, test = [], []
    for c in np.unique(labels):
        ids = np.flatnonzero(labels == c)
        rng.shuffle(ids)
        n_test = max(1, int(round(test_frac * len(ids))))
        if n_test >= len(ids):
            n_test = len(ids) - 1
        test.extend(ids[:n_test])
        train.extend(ids[n_test:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


def select_eta(
    train: Dataset,
    f: FitnessKernel,
    kappa: int,
    grid: Sequence[float] = DEFAULT_ETA_GRID,
    seed: Optional[int] = None,
    variant: str = "plain",
    repeats: int = 3,
) -> Tuple[float, float]:
    """Pick eta by inner-split accuracy.

    Scores each grid value on stratified 80/20 splits of the training data
    (mean over ``repeats``); ties go to the smaller eta. Noise is left off
    during selection so the argmax is stable.
    """
    from .classify import GraphClassifier, predict_batch

    grid = list(grid)
    if not grid:
        raise ValueError("eta grid must be non-empty")
    if any(not 0.0 <= g <= 1.0 for g in grid):
        raise ValueError("eta grid values must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    scores = np.zeros(len(grid))
    used = 0
    for _ in range(repeats):
        tr, va = _stratified_split(train.labels, 0.2, rng)
        if len(np.unique(train.labels[tr])) < train.m or len(tr) <= kappa:
            warnings.warn("skipping degenerate inner split (class absent)")
            continue
        used += 1
        inner_index = build_index(train.features[tr])
        inner_f = f.subset(tr)
        inner_labels = train.labels[tr]
        for gi, eta in enumerate(grid):
            k = compute_k(inner_f, kappa, eta, seed=None, noise=False)
            g = realize(build_w(inner_index, k), variant, inner_labels)
            clf = GraphClassifier(
                graph=g, index=inner_index, train_labels=inner_labels, fallback_k=kappa
            )
            preds = predict_batch(clf, train.features[va])
            scores[gi] += float(np.mean(preds == train.labels[va]))
    if used == 0:
        return float(grid[0]), float("nan")
    scores /= used
    # ties go to the smaller eta regardless of grid order
    order = np.argsort(grid, kind="stable")
    sorted_scores = scores[order]
    best_sorted = int(np.argmax(sorted_scores))
    best = int(order[best_sorted])
    return float(grid[best]), float(scores[best])


def eta_equivalence_check(
    f_raw: np.ndarray,
    kappa: int,
    range1: Tuple[float, float],
    range2: Tuple[float, float],
    eta1: float,
) -> Tuple[float, float]:
    """Verify that kappa-symmetric scaling ranges are interchangeable.

    Returns (eta2, max_abs_diff) where eta2 = alpha * eta1 with
    alpha = span1 / span2; the two K blends agree to < 1e-9.
    """
    f_raw = np.asarray(f_raw, dtype=np.float64)
    if f_raw.max() == f_raw.min():
        raise ValueError("f_raw must be non-constant")
    for lo, hi in (range1, range2):
        if hi == lo:
            raise ValueError("degenerate scaling range")
        if abs((lo + hi) / 2.0 - kappa) > 1e-9:
            raise ValueError(f"range ({lo}, {hi}) is not symmetric about kappa={kappa}")

    def scale(values, lo, hi):
        return (values - values.min()) * (hi - lo) / (values.max() - values.min()) + lo

    alpha = (range1[1] - range1[0]) / (range2[1] - range2[0])
    eta2 = alpha * eta1
    k1 = (1.0 - eta1) * kappa + eta1 * scale(f_raw, *range1)
    k2 = (1.0 - eta2) * kappa + eta2 * scale(f_raw, *range2)
    return float(eta2), float(np.max(np.abs(k1 - k2)))


def export_graph(
    graph: NeighborGraph,
    k: KVector,
    path,
    features: Optional[np.ndarray] = None,
    preprocessor_state: Optional[dict] = None,
) -> None:
    """Write a tab-separated edge list plus a JSON sidecar.

    The sidecar carries everything needed to rebuild a classifier from the
    export (per-node k, labels, and optionally the training features and
    preprocessing state).
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        src, dst = np.nonzero(graph.adjacency)
        for i, j in zip(src, dst):
            fh.write(f"{i}\t{j}\t{graph.variant}\n")
    sidecar = {
        "schema_version": 1,
        "n": graph.n,
        "kappa": k.kappa,
        "eta": k.eta,
        "seed": k.epsilon_seed,
        "variant": graph.variant,
        "k": k.values.tolist(),
        "labels": graph.node_labels.tolist(),
    }
    if features is not None:
        sidecar["features"] = np.asarray(features).tolist()
    if preprocessor_state is not None:
        sidecar["preprocessor"] = preprocessor_state
    with Path(str(path) + ".json").open("w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=2)
        fh.write("\n")
