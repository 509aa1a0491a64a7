from fractions import Fraction

import numpy as np
import pytest

from fairscore.errors import DataError, UsageError
from fairscore.models import EmpiricalDistribution, GroupKey, ScoreRecord
from fairscore.engine.distributions import cdf, empirical_distribution, mixture, partition_population, quantile


class TestPartition:
    def test_one_record_per_combination_gives_six_groups(self, make_records):
        records = make_records({(g, e): [50] for g in (0, 1) for e in (0, 1, 2)})
        partition = partition_population(records, ("gender", "ethnicity"))
        assert len(partition.keys) == 6
        assert set(partition.exact_weights.values()) == {Fraction(1, 6)}

    def test_single_trait_vector_is_one_group(self, make_records):
        partition = partition_population(make_records({(0, 0): [1, 2, 3]}), ("gender", "ethnicity"))
        assert partition.keys == (GroupKey(("0", "0")),)
        assert partition.weights[GroupKey(("0", "0"))] == 1.0

    def test_weights_follow_counts(self, make_records):
        records = make_records({(0, 0): [1, 2], (1, 0): [3], (1, 1): [4]})
        partition = partition_population(records, ("gender", "ethnicity"))
        assert [partition.exact_weights[key] for key in partition.keys] == [
            Fraction(1, 2),
            Fraction(1, 4),
            Fraction(1, 4),
        ]
        assert sum(partition.weights.values()) == pytest.approx(1.0, abs=1e-12)

    def test_keys_are_sorted_and_cover_every_record(self, make_records):
        records = make_records({(1, 1): [1], (0, 2): [2, 3], (0, 0): [4]})
        partition = partition_population(records, ("gender", "ethnicity"))
        assert list(partition.keys) == sorted(partition.keys)
        covered = np.sort(np.concatenate([partition.groups[key] for key in partition.keys]))
        assert covered.tolist() == list(range(len(records)))
        assert partition.key_of(0) == GroupKey(("1", "1"))

    def test_empty_population_is_rejected(self):
        with pytest.raises(DataError):
            partition_population([], ("gender",))

    def test_inconsistent_traits_are_rejected(self):
        records = [ScoreRecord("a", ("0",), 1.0), ScoreRecord("b", ("0", "1"), 2.0)]
        with pytest.raises(DataError, match="traits"):
            partition_population(records, ("gender",))

    def test_duplicate_ids_are_rejected(self):
        records = [ScoreRecord("a", ("0",), 1.0), ScoreRecord("a", ("1",), 2.0)]
        with pytest.raises(DataError, match="duplicate"):
            partition_population(records, ("gender",))

    def test_non_finite_score_is_rejected(self):
        with pytest.raises(DataError):
            ScoreRecord("a", ("0",), float("nan"))


class TestEmpiricalDistribution:
    def test_bins_at_centers(self):
        dist = empirical_distribution([10, 10, 20], 1.0)
        assert dist.support.tolist() == [10.5, 20.5]
        assert dist.masses.tolist() == pytest.approx([2 / 3, 1 / 3])

    def test_single_value_is_point_mass(self):
        dist = empirical_distribution([5], 1.0)
        assert len(dist) == 1
        assert dist.masses.tolist() == [1.0]

    def test_integer_range_gives_equal_bins(self):
        dist = empirical_distribution(np.arange(3, 89), 1.0)
        assert len(dist) == 86
        assert np.allclose(dist.masses, 1 / 86)

    def test_mean_anchor_uses_bin_means(self):
        dist = empirical_distribution([10.0, 10.4, 20.0], 1.0, anchor="mean")
        assert dist.support.tolist() == pytest.approx([10.2, 20.0])
        assert dist.bins.tolist() == [10, 20]

    def test_binning_is_idempotent(self, rng):
        values = rng.normal(50, 10, size=500)
        once = empirical_distribution(values, 2.0)
        centered = (np.floor(values / 2.0) + 0.5) * 2.0
        twice = empirical_distribution(centered, 2.0)
        assert np.array_equal(once.support, twice.support)
        assert np.array_equal(once.masses, twice.masses)
        assert np.array_equal(once.bins, twice.bins)

    def test_rejects_bad_input(self):
        with pytest.raises(DataError):
            empirical_distribution([], 1.0)
        with pytest.raises(DataError):
            empirical_distribution([1.0, float("inf")], 1.0)
        with pytest.raises(UsageError):
            empirical_distribution([1.0], 0.0)
        with pytest.raises(UsageError):
            empirical_distribution([1.0], 1.0, anchor="edge")

    def test_validation(self):
        with pytest.raises(DataError):
            EmpiricalDistribution(np.array([2.0, 1.0]), np.array([0.5, 0.5]))
        with pytest.raises(DataError):
            EmpiricalDistribution(np.array([1.0, 2.0]), np.array([0.5, 0.6]))
        with pytest.raises(DataError):
            EmpiricalDistribution(np.array([1.0, 2.0]), np.array([1.5, -0.5]))

    def test_arrays_are_read_only(self):
        dist = EmpiricalDistribution.from_atoms([3.0, 1.0, 3.0])
        with pytest.raises(ValueError):
            dist.support[0] = 0.0

    def test_from_atoms_merges_ties(self):
        dist = EmpiricalDistribution.from_atoms([3.0, 1.0, 3.0, 2.0])
        assert dist.support.tolist() == [1.0, 2.0, 3.0]
        assert dist.masses.tolist() == pytest.approx([0.25, 0.25, 0.5])

    def test_summary(self):
        dist = EmpiricalDistribution.from_atoms([1.0, 2.0, 3.0])
        summary = dist.summary()
        assert summary["mean"] == pytest.approx(2.0)
        assert summary["median"] == 2.0
        assert summary["min"] == 1.0 and summary["max"] == 3.0


class TestCdfAndQuantile:
    def test_point_mass(self):
        dist = EmpiricalDistribution.point_mass(5.0)
        assert cdf(dist, 5.0) == 1.0
        assert cdf(dist, 4.999) == 0.0
        assert quantile(dist, 0.3) == 5.0

    def test_two_atoms(self):
        dist = EmpiricalDistribution(np.array([1.0, 3.0]), np.array([0.5, 0.5]))
        assert cdf(dist, 2.0) == 0.5
        assert quantile(dist, 0.5) == 1.0
        assert quantile(dist, 0.51) == 3.0

    def test_three_atoms(self):
        dist = EmpiricalDistribution.from_atoms([1.0, 2.0, 3.0])
        assert cdf(dist, 2.0) == pytest.approx(2 / 3)
        assert quantile(dist, 1.0) == 3.0

    def test_limits(self):
        dist = EmpiricalDistribution.from_atoms([1.0, 2.0])
        assert cdf(dist, -np.inf) == 0.0
        assert cdf(dist, np.inf) == 1.0

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.5, float("nan")])
    def test_quantile_level_out_of_range(self, p):
        with pytest.raises(UsageError):
            quantile(EmpiricalDistribution.point_mass(1.0), p)

    def test_round_trip_on_random_distributions(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 12))
            dist = EmpiricalDistribution.from_atoms(rng.normal(size=n), rng.random(n) + 0.01)
            levels = dist.cumulative
            assert np.all(dist.cdf(dist.quantile(levels)) >= levels - 1e-12)
            grid = np.linspace(0.001, 1.0, 200)
            assert np.all(np.diff(dist.quantile(grid)) >= 0)
            assert np.all(dist.quantile(dist.cdf(dist.support)) <= dist.support)


def test_mixture_weights_atoms():
    a = EmpiricalDistribution.point_mass(0.0)
    b = EmpiricalDistribution.from_atoms([0.0, 10.0])
    mixed = mixture([a, b], [0.5, 0.5])
    assert mixed.support.tolist() == [0.0, 10.0]
    assert mixed.masses.tolist() == pytest.approx([0.75, 0.25])
    with pytest.raises(UsageError):
        mixture([a, b], [0.5, 0.6])
