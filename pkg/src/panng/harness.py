"""Experiment orchestration: stratified cross-validation, eta sweeps,
borderline-quantile analysis, and JSON report emission."""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classify import GraphClassifier, predict_batch
from .dataset import Dataset, Preprocessor
from .density import build_index, kde
from .fitness import LearnConfig, learn_fitness, scale_fitness
from .graph import DEFAULT_ETA_GRID, build_w, compute_k, realize, select_eta

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CVConfig:
    folds: int = 10
    seed: int = 0
    kappa: int = 10
    eta: Union[str, float] = "auto"  # "auto" or a fixed value in [0, 1]
    variant: str = "plain"
    noise: bool = True
    bandwidth: float = 0.5
    learning_rate: float = 0.05
    max_iterations: int = 1000
    threshold: float = 1e-2
    eta_grid: Tuple[float, ...] = DEFAULT_ETA_GRID

    def learn_config(self) -> LearnConfig:
        return LearnConfig(
            threshold=self.threshold,
            learning_rate=self.learning_rate,
            max_iterations=self.max_iterations,
            bandwidth=self.bandwidth,
        )


@dataclass
class EvalReport:
    per_fold_accuracy: List[float]
    mean_accuracy: float
    chosen_eta_per_fold: List[float]
    baseline_accuracy: float
    gain: float
    borderline: Dict[int, Tuple[Optional[float], Optional[float]]] = field(default_factory=dict)
    metadata: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "per_fold_accuracy": self.per_fold_accuracy,
            "mean_accuracy": self.mean_accuracy,
            "chosen_eta_per_fold": self.chosen_eta_per_fold,
            "baseline_accuracy": self.baseline_accuracy,
            "gain": self.gain,
            "borderline": {str(q): list(v) for q, v in self.borderline.items()},
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            per_fold_accuracy=list(d["per_fold_accuracy"]),
            mean_accuracy=d["mean_accuracy"],
            chosen_eta_per_fold=list(d["chosen_eta_per_fold"]),
            baseline_accuracy=d["baseline_accuracy"],
            gain=d["gain"],
            borderline={float(q): tuple(v) for q, v in d.get("borderline", {}).items()},
            metadata=dict(d.get("metadata", {})),
        )


def compute_gain(panng_accuracy: float, baseline_accuracy: float) -> float:
    if baseline_accuracy <= 0:
        return 0.0
    return (panng_accuracy - baseline_accuracy) / baseline_accuracy


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> List[np.ndarray]:
    """Disjoint, covering, seed-reproducible test folds.

    Shuffled members of each class are dealt round-robin, so classes
    smaller than the fold count degrade gracefully.
    """
    n = len(labels)
    if not 2 <= folds <= n:
        raise ValueError(f"folds={folds} must lie in [2, n={n}]")
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        ids = np.flatnonzero(labels == c)
        rng.shuffle(ids)
        for j, i in enumerate(ids):
            assignment[i] = (j + offset) % folds
        offset += len(ids)
    out = [np.flatnonzero(assignment == f) for f in range(folds)]
    if any(len(f) == 0 for f in out):
        raise ValueError("a fold has an empty test split")
    return out


def _fold_matrices(dataset: Dataset, tr: np.ndarray, te: np.ndarray):
    """Train/test feature matrices with preprocessing statistics fit on the
    training rows only (when the raw table is available)."""
    if dataset.source is not None:
        pre = Preprocessor(na_values=dataset.na_values, norm=dataset.norm)
        pre.fit(dataset.source, row_indices=tr)
        return pre.transform(dataset.source, row_indices=tr), pre.transform(
            dataset.source, row_indices=te
        )
    return dataset.features[tr], dataset.features[te]


@dataclass
class _CVRun:
    fold_test_ids: List[np.ndarray]
    panng_fold_acc: List[float]
    knng_fold_acc: List[float]
    chosen_eta: List[float]
    panng_pooled: np.ndarray  # prediction-correct flags per sample id
    knng_pooled: np.ndarray


def _run_cv(dataset: Dataset, config: CVConfig) -> _CVRun:
    folds = stratified_folds(dataset.labels, config.folds, config.seed)
    learn_cfg = config.learn_config()

    panng_acc, knng_acc, chosen = [], [], []
    panng_ok = np.zeros(dataset.n, dtype=bool)
    knng_ok = np.zeros(dataset.n, dtype=bool)

    for fold_idx, te in enumerate(folds):
        te_mask = np.zeros(dataset.n, dtype=bool)
        te_mask[te] = True
        tr = np.flatnonzero(~te_mask)
        x_tr, x_te = _fold_matrices(dataset, tr, te)
        y_tr, y_te = dataset.labels[tr], dataset.labels[te]
        train_ds = Dataset.from_arrays(x_tr, y_tr, m=dataset.m)

        index = build_index(x_tr)
        px = kde(x_tr, config.bandwidth, normalize=True)
        fk = scale_fitness(learn_fitness(train_ds, px, learn_cfg), config.kappa)

        fold_seed = int(
            np.random.SeedSequence([config.seed, fold_idx]).generate_state(1)[0]
        )
        if config.eta == "auto":
            eta, _ = select_eta(
                train_ds,
                fk,
                config.kappa,
                grid=config.eta_grid,
                seed=fold_seed,
                variant=config.variant,
            )
        else:
            eta = float(config.eta)
        chosen.append(eta)

        k = compute_k(fk, config.kappa, eta, seed=fold_seed, noise=config.noise)
        graph = realize(build_w(index, k), config.variant, y_tr)
        clf = GraphClassifier(graph=graph, index=index, train_labels=y_tr, fallback_k=config.kappa)
        preds = predict_batch(clf, x_te)
        panng_acc.append(float(np.mean(preds == y_te)))
        panng_ok[te] = preds == y_te

        # plain kNNG baseline on the identical fold: eta = 0, noise off
        k0 = compute_k(fk, config.kappa, 0.0, seed=fold_seed, noise=False)
        graph0 = realize(build_w(index, k0), "plain", y_tr)
        clf0 = GraphClassifier(
            graph=graph0, index=index, train_labels=y_tr, fallback_k=config.kappa
        )
        preds0 = predict_batch(clf0, x_te)
        knng_acc.append(float(np.mean(preds0 == y_te)))
        knng_ok[te] = preds0 == y_te

    return _CVRun(
        fold_test_ids=folds,
        panng_fold_acc=panng_acc,
        knng_fold_acc=knng_acc,
        chosen_eta=chosen,
        panng_pooled=panng_ok,
        knng_pooled=knng_ok,
    )


def cross_validate(dataset: Dataset, config: CVConfig) -> EvalReport:
    run = _run_cv(dataset, config)
    mean_acc = float(np.mean(run.panng_fold_acc))
    baseline = float(np.mean(run.knng_fold_acc))
    return EvalReport(
        per_fold_accuracy=run.panng_fold_acc,
        mean_accuracy=mean_acc,
        chosen_eta_per_fold=run.chosen_eta,
        baseline_accuracy=baseline,
        gain=compute_gain(mean_acc, baseline),
        metadata={
            "dataset": dataset.name,
            "n": dataset.n,
            "d": dataset.d,
            "m": dataset.m,
            "folds": config.folds,
            "seed": config.seed,
            "kappa": config.kappa,
            "eta": config.eta,
            "variant": config.variant,
            "noise": config.noise,
            "bandwidth": config.bandwidth,
            "norm": dataset.norm,
        },
    )


def borderline_subset(dataset: Dataset, quantile_i: float, bandwidth: float = 0.5) -> np.ndarray:
    """Ids of the ceil(n * i / 100) samples with the smallest density."""
    if not 0 < quantile_i <= 100:
        raise ValueError("quantile must lie in (0, 100]")
    density = kde(dataset.features, bandwidth, normalize=True)
    count = int(np.ceil(dataset.n * quantile_i / 100.0))
    order = np.argsort(density.values, kind="stable")  # ties: smallest id first
    return np.sort(order[:count])


def borderline_accuracy(
    dataset: Dataset, config: CVConfig, quantiles: Sequence[float]
) -> Dict[float, Tuple[Optional[float], Optional[float]]]:
    """Paired (paNNG, kNNG) accuracies restricted to each borderline subset.

    Test predictions are pooled across folds; the density ranking uses the
    full feature matrix and never sees labels.
    """
    out: Dict[float, Tuple[Optional[float], Optional[float]]] = {}
    if not quantiles:
        return out
    run = _run_cv(dataset, config)
    for q in quantiles:
        ids = borderline_subset(dataset, q, config.bandwidth)
        if len(ids) == 0:
            out[float(q)] = (None, None)
            continue
        out[float(q)] = (
            float(np.mean(run.panng_pooled[ids])),
            float(np.mean(run.knng_pooled[ids])),
        )
    return out


def eta_sweep(dataset: Dataset, config: CVConfig, grid: Sequence[float]) -> Dict[float, float]:
    """Full cross-validation at each fixed eta."""
    if not grid:
        raise ValueError("eta grid must be non-empty")
    out = {}
    for eta in grid:
        report = cross_validate(dataset, replace(config, eta=float(eta)))
        out[float(eta)] = report.mean_accuracy
    return out


def emit_report(report: EvalReport, path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def load_report(path) -> EvalReport:
    with Path(path).open(encoding="utf-8") as fh:
        return EvalReport.from_dict(json.load(fh))
