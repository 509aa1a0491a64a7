from itertools import permutations

import numpy as np
import pytest

from fairscore.errors import DataError
from fairscore.models import EmpiricalDistribution, MonotoneMap, TransportPlan
from fairscore.engine.transport import (
    map_from_plan,
    optimal_plan_1d,
    projection,
    pushforward,
    transport_cost,
    wasserstein2,
)


def uniform(*values):
    return EmpiricalDistribution.from_atoms(values)


_PERMUTATIONS = {}


def brute_force_cost(a: np.ndarray, b: np.ndarray) -> float:
    """Minimum quadratic matching cost over every permutation of equal-mass atoms."""
    n = a.size
    if n not in _PERMUTATIONS:
        _PERMUTATIONS[n] = np.array(list(permutations(range(n))))
    costs = ((a[None, :] - b[_PERMUTATIONS[n]]) ** 2).mean(axis=1)
    return float(costs.min())


class TestOptimalPlan:
    def test_matches_sorted_atoms(self):
        plan = optimal_plan_1d(uniform(1, 2, 3), uniform(2, 4, 6))
        assert [(s, t) for s, t, _ in plan.triples()] == [(1, 2), (2, 4), (3, 6)]
        assert plan.masses.tolist() == pytest.approx([1 / 3] * 3)

    def test_plan_to_itself_is_diagonal(self, rng):
        dist = EmpiricalDistribution.from_atoms(rng.normal(size=7), rng.random(7))
        plan = optimal_plan_1d(dist, dist)
        assert plan.is_diagonal()
        assert transport_cost(dist, plan) == 0.0

    def test_everything_goes_to_a_point_mass(self):
        plan = optimal_plan_1d(uniform(0, 1), EmpiricalDistribution.point_mass(5.0))
        assert plan.triples() == [(0.0, 5.0, 0.5), (1.0, 5.0, 0.5)]

    def test_marginals_and_monotone_support(self, rng):
        for _ in range(50):
            a = EmpiricalDistribution.from_atoms(rng.normal(size=6), rng.random(6) + 0.1)
            b = EmpiricalDistribution.from_atoms(rng.normal(size=9), rng.random(9) + 0.1)
            plan = optimal_plan_1d(a, b)
            assert plan.is_monotone()
            atoms, mass = plan.source_marginal()
            assert np.array_equal(atoms, a.support)
            assert np.allclose(mass, a.masses, atol=1e-12)
            atoms, mass = plan.target_marginal()
            assert np.array_equal(atoms, b.support)
            assert np.allclose(mass, b.masses, atol=1e-12)

    def test_cost_equals_brute_force_minimum(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 9))
            a = np.sort(rng.normal(size=n))
            b = np.sort(rng.normal(2.0, 3.0, size=n))
            cost = transport_cost(uniform(*a), optimal_plan_1d(uniform(*a), uniform(*b)))
            assert cost == pytest.approx(brute_force_cost(a, b), rel=1e-12, abs=1e-15)

    def test_agrees_with_pot(self, rng):
        ot = pytest.importorskip("ot")
        for _ in range(20):
            a = EmpiricalDistribution.from_atoms(rng.normal(size=10), rng.random(10) + 0.1)
            b = EmpiricalDistribution.from_atoms(rng.normal(1.0, 2.0, size=15), rng.random(15) + 0.1)
            expected = ot.wasserstein_1d(a.support, b.support, a.masses, b.masses, p=2)
            assert wasserstein2(a, b) ** 2 == pytest.approx(float(expected), rel=1e-9)


class TestMapFromPlan:
    def test_diagonal_plan_gives_identity(self):
        dist = uniform(1, 4, 9)
        score_map = map_from_plan(optimal_plan_1d(dist, dist), dist)
        assert np.array_equal(score_map.targets, dist.support)

    def test_reads_off_deterministic_plan(self):
        a = uniform(1, 2, 3)
        score_map = map_from_plan(optimal_plan_1d(a, uniform(2, 4, 6)), a)
        assert score_map.knots() == [(1.0, 2.0), (2.0, 4.0), (3.0, 6.0)]

    def test_split_mass_goes_to_the_weighted_mean(self):
        source = EmpiricalDistribution(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        target = EmpiricalDistribution(np.array([0.0, 10.0, 20.0]), np.array([0.25, 0.25, 0.5]))
        score_map = map_from_plan(optimal_plan_1d(source, target), source)
        assert score_map.knots() == [(1.0, 5.0), (2.0, 20.0)]

    def test_projection_reports_spread_and_residual(self):
        source = EmpiricalDistribution(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        target = EmpiricalDistribution(np.array([0.0, 10.0, 20.0]), np.array([0.25, 0.25, 0.5]))
        means, spread, residual = projection(optimal_plan_1d(source, target), source)
        assert means.tolist() == [5.0, 20.0]
        assert spread.tolist() == [10.0, 0.0]
        assert residual.tolist() == [12.5, 0.0]
        # the projected image is within sqrt(total residual) of the target
        image = pushforward(source, map_from_plan(optimal_plan_1d(source, target), source))
        assert wasserstein2(image, target) <= np.sqrt(residual.sum()) + 1e-12

    def test_marginal_mismatch_is_rejected(self):
        source = uniform(1, 2)
        plan = TransportPlan(np.array([1.0, 2.0]), np.array([3.0, 4.0]), np.array([0.2, 0.8]))
        with pytest.raises(DataError):
            map_from_plan(plan, source)

    def test_translated_target_shifts_the_map(self, rng):
        for _ in range(100):
            a = EmpiricalDistribution.from_atoms(rng.normal(size=6), rng.random(6) + 0.1)
            b = EmpiricalDistribution.from_atoms(rng.normal(size=8), rng.random(8) + 0.1)
            z = float(rng.uniform(-20, 20))
            base = map_from_plan(optimal_plan_1d(a, b), a)
            shifted = map_from_plan(optimal_plan_1d(a, b.translate(z)), a)
            assert np.allclose(shifted.targets, base.targets + z, rtol=0.0, atol=1e-9)


class TestCostAndDistance:
    def test_costs(self):
        a = uniform(1, 2, 3)
        assert transport_cost(a, optimal_plan_1d(a, uniform(2, 4, 6))) == pytest.approx(14 / 3)
        assert transport_cost(a, optimal_plan_1d(a, a.translate(4.0))) == pytest.approx(16.0)

    def test_distances(self):
        a = uniform(1, 2, 3)
        assert wasserstein2(a, a) == 0.0
        assert wasserstein2(a, uniform(2, 4, 6)) == pytest.approx(2.1602, abs=1e-4)
        assert wasserstein2(a, a.translate(7.0)) == pytest.approx(7.0)

    def test_metric_axioms(self, rng):
        for _ in range(100):
            a, b, c = (
                EmpiricalDistribution.from_atoms(rng.normal(size=n), rng.random(n) + 0.05)
                for n in rng.integers(1, 8, size=3)
            )
            assert wasserstein2(a, b) == pytest.approx(wasserstein2(b, a), rel=1e-12, abs=1e-15)
            assert wasserstein2(a, c) <= wasserstein2(a, b) + wasserstein2(b, c) + 1e-9


class TestPushforward:
    def test_identity(self):
        dist = uniform(1, 5, 6)
        assert pushforward(dist, MonotoneMap.identity(dist.support)).same_as(dist)

    def test_shift(self):
        dist = uniform(1, 5, 6)
        shift = MonotoneMap.from_knots([(s, s + 3.0) for s in dist.support])
        assert pushforward(dist, shift).same_as(dist.translate(3.0))

    def test_collisions_merge(self):
        dist = uniform(1, 2)
        image = pushforward(dist, MonotoneMap.from_knots([(1, 5), (2, 5)]))
        assert image.support.tolist() == [5.0]
        assert image.masses.tolist() == [1.0]


class TestMonotoneMap:
    def test_rejects_decreasing_targets(self):
        with pytest.raises(DataError):
            MonotoneMap.from_knots([(1, 5), (2, 4)])

    def test_rejects_unsorted_sources(self):
        with pytest.raises(DataError):
            MonotoneMap.from_knots([(2, 4), (1, 5)])

    def test_call_clamps_outside_the_knots(self):
        score_map = MonotoneMap.from_knots([(10, 25), (20, 35), (30, 45)])
        assert score_map(5.0) == 25.0
        assert score_map(15.0) == 30.0
        assert score_map(99.0) == 45.0

    def test_apply_requires_an_observed_score(self):
        score_map = MonotoneMap.from_knots([(10, 25), (20, 35)])
        assert score_map.apply(20.0) == 35.0
        with pytest.raises(DataError, match="outside"):
            score_map.apply(15.0)

    def test_binned_lookup(self):
        score_map = MonotoneMap(np.array([10.5, 20.5]), np.array([2.0, 4.0]), 0.5, 1.0, np.array([10, 20]))
        assert score_map.apply(10.25) == pytest.approx(0.5 * 10.25 + 2.0)
        assert score_map.apply(np.array([20.0, 20.9])).tolist() == pytest.approx([14.0, 14.45])
