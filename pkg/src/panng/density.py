"""Pairwise-distance indexing, variable-k neighbor queries, and Gaussian KDE."""

from dataclasses import dataclass

import numpy as np

from ._kernels import kde_values, pairwise_sq_dists

DENSITY_FLOOR = 1e-300  # applied before logs/divisions


@dataclass(frozen=True)
class DistanceIndex:
    """Brute-force neighbor index: per-point orderings sorted by distance.

    ``order[i]`` holds the other n-1 point ids sorted by ascending distance
    to point i, ties broken by ascending id.
    """

    reference: np.ndarray
    order: np.ndarray
    metric: str = "euclidean"

    def __post_init__(self):
        self.reference.flags.writeable = False
        self.order.flags.writeable = False

    @property
    def n(self) -> int:
        return self.reference.shape[0]

    @property
    def d(self) -> int:
        return self.reference.shape[1]


@dataclass(frozen=True)
class DensityEstimate:
    values: np.ndarray
    bandwidth: float
    normalized: bool

    def __post_init__(self):
        self.values.flags.writeable = False

    def __len__(self) -> int:
        return len(self.values)


def build_index(features: np.ndarray, metric: str = "euclidean") -> DistanceIndex:
    features = np.ascontiguousarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[:, None]
    if metric != "euclidean":
        raise ValueError(f"unsupported metric {metric!r}")
    n = features.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points to build an index")
    if not np.all(np.isfinite(features)):
        raise ValueError("non-finite input features")
    d2 = pairwise_sq_dists(features)
    np.fill_diagonal(d2, np.inf)
    # stable sort keeps equal distances in ascending-id order; self sorts last
    order = np.argsort(d2, axis=1, kind="stable")[:, : n - 1]
    return DistanceIndex(reference=features, order=np.ascontiguousarray(order), metric=metric)


def knn_of(index: DistanceIndex, i: int, k: int) -> np.ndarray:
    if not 1 <= k <= index.n - 1:
        raise ValueError(f"k={k} out of range [1, {index.n - 1}]")
    return index.order[i, :k].copy()


def query_nearest(index: DistanceIndex, x: np.ndarray) -> int:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != index.d:
        raise ValueError(f"query has dimension {x.shape[0]}, index has {index.d}")
    d2 = np.einsum("ij,ij->i", index.reference - x, index.reference - x)
    return int(np.argmin(d2))  # argmin returns the smallest id on ties


def query_nearest_batch(index: DistanceIndex, xs: np.ndarray) -> np.ndarray:
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if xs.shape[1] != index.d:
        raise ValueError(f"queries have dimension {xs.shape[1]}, index has {index.d}")
    ref = index.reference
    d2 = (
        np.einsum("ij,ij->i", xs, xs)[:, None]
        + np.einsum("ij,ij->i", ref, ref)[None, :]
        - 2.0 * xs @ ref.T
    )
    return np.argmin(d2, axis=1)


def kde(points: np.ndarray, bandwidth: float, normalize: bool = False) -> DensityEstimate:
    """Gaussian-kernel density estimate over the given points.

    values[i] = sum_j exp(-||p_i - p_j||^2 / (2 h^2)); optionally divided by
    the total so the values sum to one.
    """
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    values = kde_values(np.asarray(points, dtype=np.float64), bandwidth)
    np.maximum(values, DENSITY_FLOOR, out=values)
    if normalize:
        values = values / values.sum()
        np.maximum(values, DENSITY_FLOOR, out=values)
    return DensityEstimate(values=values, bandwidth=float(bandwidth), normalized=normalize)
