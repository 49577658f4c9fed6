import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panng.density import build_index, kde, knn_of, query_nearest

from conftest import brute_force_orderings


class TestBuildIndex:
    def test_line_ordering(self):
        idx = build_index(np.array([[0.0], [1.0], [3.0]]))
        assert idx.order[1].tolist() == [0, 2]

    def test_identical_points_tie_break_by_id(self):
        idx = build_index(np.zeros((4, 2)))
        for i in range(4):
            assert idx.order[i].tolist() == [j for j in range(4) if j != i]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(50, 5))
        idx = build_index(x)
        expected = brute_force_orderings(x)
        for i in range(50):
            assert idx.order[i].tolist() == expected[i]

    def test_orderings_are_permutations(self):
        rng = np.random.default_rng(3)
        idx = build_index(rng.normal(size=(20, 3)))
        for i in range(20):
            assert sorted(idx.order[i].tolist()) == [j for j in range(20) if j != i]

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            build_index(np.array([[1.0]]))
        with pytest.raises(ValueError):
            build_index(np.array([[np.nan], [1.0]]))
        with pytest.raises(ValueError):
            build_index(np.zeros((3, 2)), metric="cosine")


class TestKnnOf:
    def test_full_neighborhood(self):
        idx = build_index(np.arange(6.0)[:, None])
        assert sorted(knn_of(idx, 2, 5).tolist()) == [0, 1, 3, 4, 5]

    def test_line_k1(self):
        idx = build_index(np.array([[0.0], [1.0], [3.0]]))
        assert knn_of(idx, 1, 1).tolist() == [0]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(30, 4))
        idx = build_index(x)
        expected = brute_force_orderings(x)
        for i in range(30):
            assert knn_of(idx, i, 7).tolist() == expected[i][:7]

    def test_k_out_of_range(self):
        idx = build_index(np.arange(5.0)[:, None])
        with pytest.raises(ValueError):
            knn_of(idx, 0, 0)
        with pytest.raises(ValueError):
            knn_of(idx, 0, 5)

    def test_prefix_monotonicity(self):
        rng = np.random.default_rng(13)
        idx = build_index(rng.normal(size=(25, 3)))
        for i in range(25):
            for k in range(1, 24):
                assert knn_of(idx, i, k).tolist() == knn_of(idx, i, k + 1).tolist()[:k]


class TestQueryNearest:
    def test_exact_hit(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(10, 3))
        idx = build_index(x)
        assert query_nearest(idx, x[4]) == 4

    def test_tie_break_smallest_id(self):
        x = np.array([[0.0], [5.0], [1.0], [9.0], [1.0], [3.0]])
        idx = build_index(x)
        # query at 1.0 is equidistant from ids 2 and 4
        assert query_nearest(idx, np.array([1.0])) == 2

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(17)
        x = rng.normal(size=(100, 4))
        idx = build_index(x)
        for _ in range(20):
            q = rng.normal(size=4)
            expected = int(np.argmin(((x - q) ** 2).sum(axis=1)))
            assert query_nearest(idx, q) == expected

    def test_self_query_property(self):
        rng = np.random.default_rng(19)
        x = rng.normal(size=(40, 2))
        idx = build_index(x)
        assert all(query_nearest(idx, x[i]) == i for i in range(40))

    def test_dimension_mismatch(self):
        idx = build_index(np.zeros((3, 2)))
        with pytest.raises(ValueError):
            query_nearest(idx, np.zeros(3))


class TestKde:
    def test_repeated_point_normalized(self):
        est = kde(np.zeros((3, 1)), bandwidth=1.0, normalize=True)
        assert np.allclose(est.values, 1.0 / 3.0)

    def test_isolated_points(self):
        est = kde(np.array([0.0, 10.0, 20.0]), bandwidth=0.5)
        assert np.allclose(est.values, 1.0, atol=1e-80)

    def test_hand_computed_values(self):
        # independent evaluation of the three-Gaussian sums at h = 0.5
        e_half = math.exp(-0.5)
        e_two = math.exp(-2.0)
        expected = [1.0 + e_half + e_two, e_half + 1.0 + e_half, e_two + e_half + 1.0]
        est = kde(np.array([0.0, 0.5, 1.0]), bandwidth=0.5)
        assert np.allclose(est.values, expected, rtol=1e-12)

    def test_rejects_nonpositive_bandwidth(self):
        with pytest.raises(ValueError):
            kde(np.zeros(3), bandwidth=0.0)

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.floats(-50, 50), min_size=2, max_size=20),
        st.floats(0.1, 5.0),
    )
    def test_positive_and_normalized(self, points, h):
        est = kde(np.array(points), bandwidth=h, normalize=True)
        assert np.all(est.values > 0)
        assert abs(est.values.sum() - 1.0) < 1e-9

    def test_permutation_symmetry(self):
        rng = np.random.default_rng(23)
        pts = rng.normal(size=(15, 2))
        perm = rng.permutation(15)
        a = kde(pts, 0.7).values
        b = kde(pts[perm], 0.7).values
        assert np.allclose(a[perm], b, rtol=1e-12)
