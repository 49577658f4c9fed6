"""Seeded synthetic datasets used by the tests and bundled benchmarks."""

import numpy as np

from .dataset import Dataset


def two_overlap(
    n: int = 400, seed: int = 0, separation: float = 2.2, weight: float = 0.5
) -> Dataset:
    """Two overlapping 2-D Gaussian classes.

    Borderline mass sits between the cluster centers. ``weight`` sets the
    class-0 share; an imbalanced split makes the minority side locally
    sparse in the overlap, which is where adaptive k pays off."""
    rng = np.random.default_rng(seed)
    n0 = int(round(weight * n))
    a = rng.normal(loc=(0.0, 0.0), scale=1.0, size=(n0, 2))
    b = rng.normal(loc=(separation, 0.0), scale=1.0, size=(n - n0, 2))
    x = np.vstack([a, b])
    y = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n - n0, dtype=np.int64)])
    perm = rng.permutation(n)
    return Dataset.from_arrays(x[perm], y[perm], name=f"synth-overlap-{seed}")


def blobs(n: int = 200, seed: int = 0) -> Dataset:
    """Two well-separated 2-D blobs; any reasonable classifier is perfect."""
    rng = np.random.default_rng(seed)
    half = n // 2
    a = rng.normal(loc=(0.0, 0.0), scale=0.3, size=(half, 2))
    b = rng.normal(loc=(10.0, 10.0), scale=0.3, size=(n - half, 2))
    x = np.vstack([a, b])
    y = np.concatenate([np.zeros(half, dtype=np.int64), np.ones(n - half, dtype=np.int64)])
    perm = rng.permutation(n)
    return Dataset.from_arrays(x[perm], y[perm], name=f"synth-blobs-{seed}")


def gaussian_line(n: int = 60, seed: int = 0) -> Dataset:
    """1-D two-Gaussian mixture with two balanced classes, for descent tests."""
    rng = np.random.default_rng(seed)
    half = n // 2
    x = np.concatenate([rng.normal(-1.5, 0.5, half), rng.normal(1.5, 0.5, n - half)])
    y = np.concatenate([np.zeros(half, dtype=np.int64), np.ones(n - half, dtype=np.int64)])
    return Dataset.from_arrays(x[:, None], y, name=f"gaussian-line-{seed}")


def borderline_line_instance():
    """17-point 1-D two-class instance with a borderline point.

    The borderline point (index 8, class 0) has two same-class points
    nearby, the rest of its class far away, and the other class filling
    the middle distances. A direct kNN vote over the other 16 points is
    correct for k in {1, 2, 3} and flips to the wrong class for k in
    {5..11}.

    Returns (positions (17, 1), labels (17,), borderline_index).
    """
    red = [-0.25, -0.1, -3.0, -3.2, -3.4, -3.6, -3.8, -4.0, 0.0]
    blue = [0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3]
    positions = np.array(red + blue, dtype=np.float64)[:, None]
    labels = np.array([0] * len(red) + [1] * len(blue), dtype=np.int64)
    borderline = 8  # the point at 0.0
    return positions, labels, borderline
