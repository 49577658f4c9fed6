import os
import subprocess
import sys

import numpy as np

from panng._kernels import (
    BACKEND,
    _kde_values_np,
    _kl_gradient_np,
    _pairwise_sq_dists_np,
    kde_values,
    kl_gradient,
    pairwise_sq_dists,
)


class TestActiveBackend:
    def test_backend_reported(self):
        assert BACKEND in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        env = dict(os.environ, PANNG_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", "from panng._kernels import BACKEND; print(BACKEND)"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        assert out.stdout.strip() == "numpy"


class TestBackendAgreement:
    """The active path and the pure-numpy fallback must agree bitwise-closely."""

    def test_pairwise(self):
        rng = np.random.default_rng(0)
        x = np.ascontiguousarray(rng.normal(size=(40, 6)))
        assert np.allclose(pairwise_sq_dists(x), _pairwise_sq_dists_np(x), atol=1e-10)

    def test_kde(self):
        rng = np.random.default_rng(1)
        pts = np.ascontiguousarray(rng.normal(size=(50, 3)))
        assert np.allclose(kde_values(pts, 0.5), _kde_values_np(pts, 0.5), rtol=1e-12)

    def test_gradient(self):
        rng = np.random.default_rng(2)
        f = rng.normal(size=30)
        px = rng.random(30) + 1e-3
        px /= px.sum()
        assert np.allclose(kl_gradient(f, px, 0.5), _kl_gradient_np(f, px, 0.5), atol=1e-12)


class TestContracts:
    def test_pairwise_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(3)
        d2 = pairwise_sq_dists(rng.normal(size=(15, 4)))
        assert np.allclose(d2, d2.T)
        assert np.all(np.diag(d2) == 0.0)
        assert np.all(d2 >= 0.0)

    def test_pairwise_hand_computed(self):
        d2 = pairwise_sq_dists(np.array([[0.0, 0.0], [3.0, 4.0]]))
        assert np.allclose(d2, [[0.0, 25.0], [25.0, 0.0]])

    def test_kde_accepts_1d(self):
        a = kde_values(np.array([0.0, 1.0, 2.0]), 1.0)
        b = kde_values(np.array([[0.0], [1.0], [2.0]]), 1.0)
        assert np.array_equal(a, b)

    def test_kde_self_contribution(self):
        # every point contributes exp(0) = 1 to itself
        assert np.all(kde_values(np.random.default_rng(4).normal(size=(10, 2)), 0.3) >= 1.0)
