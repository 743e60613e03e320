import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softstream import (
    Dataset,
    SoftParams,
    approx_factor,
    hard_cost,
    membership_matrix,
    memberships,
    soft_centroids,
    soft_cost,
    soft_cost_closed,
    squared_distance,
)

from conftest import random_instance

# frozen by an independent high-precision evaluation of the formulas
SOFT_CENTROIDS_0_10 = (0.0015239256324291375, 9.998476074367571)
SOFT_COST_GENERIC_1D = 0.3630592544572422  # {0,2}, centers {0.5,1.7}, m=0.5
SOFT_COST_WEIGHTED_2D = 3.001387292448078
APPROX_FACTOR_16_01 = 1.360790000174377  # 16**(1/9)


class TestDataset:
    def test_flat_list_is_1d_points(self):
        ds = Dataset.from_points([0.0, 1.0, 2.0])
        assert ds.n == 3 and ds.dim == 1

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Dataset.from_points([[0.0], [np.inf]])

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError, match="positive"):
            Dataset([[0.0], [1.0]], [1.0, 0.0])
        with pytest.raises(ValueError, match="weights shape"):
            Dataset([[0.0], [1.0]], [1.0])


class TestSoftParams:
    @pytest.mark.parametrize("m", [0.0, 1.0, -0.5, 1.5, float("nan")])
    def test_rejects_out_of_range(self, m):
        with pytest.raises(ValueError):
            SoftParams(m)

    def test_g_derived_from_m(self):
        assert SoftParams(0.5).g == 1.0
        assert SoftParams(0.1).g == pytest.approx(9.0)


class TestSquaredDistance:
    def test_identity(self):
        assert squared_distance((0.0, 0.0), (0.0, 0.0)) == 0.0

    def test_three_four_five(self):
        assert squared_distance((0.0, 0.0), (3.0, 4.0)) == 25.0

    def test_hand_sum(self):
        assert squared_distance((1.0, 1.0, 1.0), (2.0, 3.0, 5.0)) == 21.0

    def test_dim_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            squared_distance((0.0,), (0.0, 1.0))

    # magnitudes are kept well away from the subnormal range, where squared
    # differences legitimately underflow to zero
    _coord = st.one_of(
        st.just(0.0), st.floats(1e-8, 1e6), st.floats(-1e6, -1e-8)
    )

    @given(st.lists(_coord, min_size=1, max_size=6), st.lists(_coord, min_size=1, max_size=6))
    def test_symmetry_and_identity_of_indiscernibles(self, a, b):
        if len(a) != len(b):
            b = (b * len(a))[: len(a)]
        assert squared_distance(a, b) == squared_distance(b, a)
        assert squared_distance(a, a) == 0.0
        if a != b:
            assert squared_distance(a, b) > 0.0


class TestHardCost:
    def test_zero_when_points_sit_on_centers(self):
        ds = Dataset.from_points([[0.0, 0.0], [5.0, 5.0]])
        assert hard_cost(ds, [[0.0, 0.0], [5.0, 5.0]]) == 0.0

    def test_two_points_one_center(self):
        ds = Dataset.from_points([0.0, 2.0])
        assert hard_cost(ds, [1.0]) == 2.0

    def test_four_points_two_centers(self):
        ds = Dataset.from_points([0.0, 1.0, 4.0, 5.0])
        assert hard_cost(ds, [0.5, 4.5]) == 1.0

    def test_weights_scale_cost(self):
        unif = Dataset.from_points([0.0, 2.0])
        doubled = Dataset([[0.0], [2.0]], [2.0, 2.0])
        assert hard_cost(doubled, [1.0]) == 2.0 * hard_cost(unif, [1.0])

    def test_empty_dataset_rejected(self):
        empty = Dataset(np.empty((0, 2)), np.empty(0))
        with pytest.raises(ValueError, match="empty"):
            hard_cost(empty, [[0.0, 0.0]])

    def test_dim_mismatch_rejected(self):
        ds = Dataset.from_points([[0.0, 0.0]])
        with pytest.raises(ValueError, match="mismatch"):
            hard_cost(ds, [[0.0, 0.0, 0.0]])


class TestMemberships:
    def test_single_center(self):
        u = memberships([3.0, 4.0], [[0.0, 0.0]], SoftParams(0.3))
        np.testing.assert_array_equal(u, [1.0])

    @pytest.mark.parametrize("m", [0.1, 0.25, 0.5, 0.9])
    def test_equidistant_split(self, m):
        u = memberships([0.0], [[-1.0], [1.0]], SoftParams(m))
        np.testing.assert_allclose(u, [0.5, 0.5], rtol=0, atol=1e-15)

    def test_distances_one_two(self):
        # distances (1, 2) with exponent 2/m = 4
        u = memberships([0.0], [[1.0], [-2.0]], SoftParams(0.5))
        np.testing.assert_allclose(u, [16.0 / 17.0, 1.0 / 17.0], rtol=1e-15)

    def test_coincident_single_center_is_indicator(self):
        u = memberships([2.0], [[2.0], [7.0]], SoftParams(0.5))
        np.testing.assert_array_equal(u, [1.0, 0.0])

    def test_coincident_duplicates_split_uniformly(self):
        u = memberships([2.0], [[2.0], [7.0], [2.0]], SoftParams(0.5))
        np.testing.assert_array_equal(u, [0.5, 0.0, 0.5])

    def test_rows_sum_to_one_on_random_instances(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            data, centers = random_instance(rng, max_n=40, coincident=True)
            u = membership_matrix(data, centers, SoftParams(rng.uniform(0.05, 0.95)))
            np.testing.assert_allclose(u.sum(axis=1), 1.0, rtol=0, atol=1e-12)
            assert np.all(u >= 0.0)

    @given(
        st.lists(st.floats(0.01, 1e4), min_size=2, max_size=6),
        st.floats(0.05, 0.95),
    )
    @settings(max_examples=200)
    def test_normalization_property(self, dists, m):
        # place centers on the x axis at the given distances from the origin
        centers = [[d] + [0.0] for d in dists]
        u = memberships([0.0, 0.0], centers, SoftParams(m))
        assert abs(u.sum() - 1.0) <= 1e-12


class TestSoftCentroids:
    def test_single_center_is_weighted_mean(self):
        ds = Dataset([[0.0], [10.0]], [3.0, 1.0])
        c = soft_centroids(ds, [[4.0]], SoftParams(0.5))
        np.testing.assert_allclose(c, [[2.5]])

    def test_symmetric_data_pulls_to_global_mean(self):
        # fully symmetric square: uniform memberships force every centroid
        # to the global mean
        ds = Dataset.from_points([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        c = soft_centroids(ds, [[0.5, 0.5], [-0.5, -0.5]], SoftParams(0.5))
        # centers are symmetric images of each other, so memberships mirror;
        # both centroids land symmetric about the mean (0, 0)
        np.testing.assert_allclose(c[0], -c[1], atol=1e-12)

    def test_frozen_two_point_instance(self):
        ds = Dataset.from_points([0.0, 10.0])
        c = soft_centroids(ds, [1.0, 9.0], SoftParams(0.5))
        np.testing.assert_allclose(
            c.ravel(), SOFT_CENTROIDS_0_10, rtol=1e-14, atol=0
        )

    def test_zero_mass_center_stays_put(self):
        # with m = 0.1 the far center's membership underflows to exactly 0
        ds = Dataset.from_points([0.0, 1.0])
        c = soft_centroids(ds, [[0.5], [1e20]], SoftParams(0.1))
        assert c[1, 0] == 1e20
        assert 0.0 <= c[0, 0] <= 1.0

    def test_output_inside_bounding_box(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            data, centers = random_instance(rng, max_n=30)
            c = soft_centroids(data, centers, SoftParams(rng.uniform(0.05, 0.95)))
            lo = data.points.min(axis=0) - 1e-9
            hi = data.points.max(axis=0) + 1e-9
            inside = (c >= lo) & (c <= hi)
            # zero-mass centers keep their (possibly outside) position
            u = membership_matrix(data, centers, SoftParams(0.5))
            assert np.all(inside.all(axis=1) | (u.sum(axis=0) == 0.0))


class TestSoftCost:
    def test_zero_at_unique_coincident_center(self):
        ds = Dataset.from_points([[3.0, 3.0], [3.0, 3.0]])
        assert soft_cost(ds, [[3.0, 3.0]], SoftParams(0.5)) == 0.0

    def test_single_center_equals_hard_cost(self):
        rng = np.random.default_rng(11)
        data, _ = random_instance(rng, max_n=50)
        center = rng.normal(size=(1, data.dim))
        assert soft_cost(data, center, SoftParams(0.3)) == pytest.approx(
            hard_cost(data, center), rel=1e-12
        )

    def test_coincident_pair_is_zero(self):
        ds = Dataset.from_points([0.0, 2.0])
        assert soft_cost(ds, [0.0, 2.0], SoftParams(0.5)) == 0.0

    def test_frozen_generic_value(self):
        ds = Dataset.from_points([0.0, 2.0])
        v = soft_cost(ds, [0.5, 1.7], SoftParams(0.5))
        assert v == pytest.approx(SOFT_COST_GENERIC_1D, rel=1e-13)

    def test_frozen_weighted_2d_value(self):
        ds = Dataset([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [3.0, 4.0]],
                     [1.0, 2.0, 1.0, 0.5])
        v = soft_cost(ds, [[0.5, 0.5], [2.0, 3.0]], SoftParams(0.25))
        assert v == pytest.approx(SOFT_COST_WEIGHTED_2D, rel=1e-13)

    def test_empty_dataset_rejected(self):
        empty = Dataset(np.empty((0, 1)), np.empty(0))
        with pytest.raises(ValueError, match="empty"):
            soft_cost(empty, [[0.0]], SoftParams(0.5))


class TestSoftCostClosed:
    def test_single_center_reduces_to_hard_cost(self):
        ds = Dataset.from_points([1.0, 2.0, 7.0])
        c = [[3.0]]
        assert soft_cost_closed(ds, c, SoftParams(0.7)) == pytest.approx(
            hard_cost(ds, c), rel=1e-12
        )

    def test_frozen_generic_value(self):
        ds = Dataset.from_points([0.0, 2.0])
        v = soft_cost_closed(ds, [0.5, 1.7], SoftParams(0.5))
        assert v == pytest.approx(SOFT_COST_GENERIC_1D, rel=1e-13)

    def test_coincident_pair_matches_membership_form(self):
        ds = Dataset.from_points([0.0, 2.0])
        assert soft_cost_closed(ds, [0.0, 2.0], SoftParams(0.5)) == 0.0

    def test_identity_with_membership_form(self):
        rng = np.random.default_rng(77)
        for _ in range(300):
            data, centers = random_instance(rng, coincident=rng.random() < 0.3)
            params = SoftParams(float(rng.choice([0.1, 0.25, 0.5, 0.9])))
            direct = soft_cost(data, centers, params)
            closed = soft_cost_closed(data, centers, params)
            assert closed == pytest.approx(direct, rel=1e-9, abs=1e-300)


class TestApproxFactor:
    def test_exponent_one(self):
        assert approx_factor(10, SoftParams(0.5)) == 10.0

    def test_m_to_zero_limit(self):
        assert approx_factor(100, SoftParams(1e-9)) == pytest.approx(1.0, abs=1e-6)

    def test_frozen_sixteen_tenth(self):
        assert approx_factor(16, SoftParams(0.1)) == pytest.approx(
            APPROX_FACTOR_16_01, rel=1e-15
        )

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            approx_factor(0, SoftParams(0.5))

    def test_at_least_one(self):
        for k in (1, 2, 7, 40):
            for m in (0.05, 0.5, 0.95):
                assert approx_factor(k, SoftParams(m)) >= 1.0


class TestSandwichProperty:
    @pytest.mark.parametrize("m", [0.1, 0.25, 0.5, 0.9])
    def test_hard_le_soft_le_factor_times_hard(self, m):
        rng = np.random.default_rng(2024)
        params = SoftParams(m)
        for _ in range(100):
            data, centers = random_instance(rng, max_n=80)
            hard = hard_cost(data, centers)
            soft = soft_cost(data, centers, params)
            k = np.asarray(centers).shape[0]
            assert soft >= hard * (1 - 1e-9)
            assert soft <= approx_factor(k, params) * hard * (1 + 1e-9)

    def test_math_example(self):
        # k=1 collapses the sandwich to equality
        ds = Dataset.from_points([1.0, 5.0])
        params = SoftParams(0.4)
        assert soft_cost(ds, [2.0], params) == pytest.approx(
            hard_cost(ds, [2.0]) * approx_factor(1, params)
        )
