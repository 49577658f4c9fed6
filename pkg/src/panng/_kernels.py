"""Hot numeric kernels: pairwise distances, Gaussian KDE, and the
fitness-loss gradient.

Each kernel has a numba-compiled implementation and a vectorized
pure-numpy fallback. The fallback is selected automatically when numba
is unavailable, or can be forced with ``PANNG_NO_NUMBA=1`` (used by
``benchmarks/bench_kernels.py`` to compare both paths).
"""

import os

import numpy as np


def _numba_disabled() -> bool:
    return os.environ.get("PANNG_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _pairwise_sq_dists_np(x):
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    return d2


def _kde_values_np(points, h):
    d2 = _pairwise_sq_dists_np(points)
    return np.exp(-d2 / (2.0 * h * h)).sum(axis=1)


def _kl_gradient_np(f, px, h):
    # Exact gradient of sum_i px_i * log(px_i / pf_i) with
    # pf_i = rho_i / sum_k rho_k and rho_i = sum_j exp(-(f_i-f_j)^2 / 2h^2).
    diff = f[:, None] - f[None, :]
    r = np.exp(-diff * diff / (2.0 * h * h))
    rho = r.sum(axis=1)
    z = rho.sum()
    s = (r * diff).sum(axis=1)
    c = px / rho
    cross = f * (r @ c) - r @ (c * f)
    return (px * s / rho + cross - 2.0 * s / z) / (h * h)


# ---------------------------------------------------------------------------
# numba implementations (same contracts, loop form)
# ---------------------------------------------------------------------------

_HAS_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit, prange

        _HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _HAS_NUMBA = False

if _HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _pairwise_sq_dists_nb(x):
        n, d = x.shape
        out = np.empty((n, n), dtype=np.float64)
        for i in prange(n):
            out[i, i] = 0.0
            for j in range(i + 1, n):
                acc = 0.0
                for q in range(d):
                    t = x[i, q] - x[j, q]
                    acc += t * t
                out[i, j] = acc
                out[j, i] = acc
        return out

    @njit(cache=True, parallel=True)
    def _kde_values_nb(points, h):
        n, d = points.shape
        inv = 1.0 / (2.0 * h * h)
        out = np.empty(n, dtype=np.float64)
        for i in prange(n):
            acc = 0.0
            for j in range(n):
                d2 = 0.0
                for q in range(d):
                    t = points[i, q] - points[j, q]
                    d2 += t * t
                acc += np.exp(-d2 * inv)
            out[i] = acc
        return out

    @njit(cache=True, parallel=True)
    def _kl_gradient_nb(f, px, h):
        n = f.shape[0]
        inv = 1.0 / (2.0 * h * h)
        rho = np.empty(n, dtype=np.float64)
        s = np.empty(n, dtype=np.float64)
        for m in prange(n):
            acc_r = 0.0
            acc_s = 0.0
            for j in range(n):
                d = f[m] - f[j]
                e = np.exp(-d * d * inv)
                acc_r += e
                acc_s += e * d
            rho[m] = acc_r
            s[m] = acc_s
        z = rho.sum()
        c = px / rho
        grad = np.empty(n, dtype=np.float64)
        for m in prange(n):
            cross = 0.0
            for i in range(n):
                d = f[m] - f[i]
                cross += c[i] * np.exp(-d * d * inv) * d
            grad[m] = (px[m] * s[m] / rho[m] + cross - 2.0 * s[m] / z) / (h * h)
        return grad

    BACKEND = "numba"
    _pairwise_impl = _pairwise_sq_dists_nb
    _kde_impl = _kde_values_nb
    _grad_impl = _kl_gradient_nb
else:
    BACKEND = "numpy"
    _pairwise_impl = _pairwise_sq_dists_np
    _kde_impl = _kde_values_np
    _grad_impl = _kl_gradient_np


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def pairwise_sq_dists(x: np.ndarray) -> np.ndarray:
    """Full (n, n) matrix of squared Euclidean distances."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _pairwise_impl(x)


def kde_values(points: np.ndarray, h: float) -> np.ndarray:
    """Unnormalized Gaussian KDE: out[i] = sum_j exp(-||p_i - p_j||^2 / 2h^2)."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    return _kde_impl(points, float(h))


def kl_gradient(f: np.ndarray, px: np.ndarray, h: float) -> np.ndarray:
    """Gradient of the sample-wise KL loss with respect to the fitness values."""
    f = np.ascontiguousarray(f, dtype=np.float64)
    px = np.ascontiguousarray(px, dtype=np.float64)
    return _grad_impl(f, px, float(h))
