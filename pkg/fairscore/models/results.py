"""Result containers for barycenters, repairs, rankings and evaluation reports."""

from dataclasses import dataclass, field

import numpy as np

from fairscore.models.distribution import EmpiricalDistribution
from fairscore.models.population import GroupKey, GroupPartition
from fairscore.models.transport import MonotoneMap, TransportPlan, bin_indices


@dataclass(frozen=True, eq=False)
class BarycenterResult:
    """Weighted barycenter nu and the optimal map of every input onto it."""

    barycenter: EmpiricalDistribution
    per_group_maps: dict
    plans: dict = field(repr=False)
    weights: tuple[float, ...]
    grid: str
    # max over groups of sqrt(sum mass * (target - projected target)^2); bounds W2(T_k#mu_k, nu)
    resolution: float
    # widest range of barycenter atoms merged into one source atom
    max_spread: float = 0.0

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "grid": self.grid,
            "resolution": self.resolution,
            "max_spread": self.max_spread,
            "weights": list(self.weights),
            "barycenter": self.barycenter.summary(),
        }


@dataclass(frozen=True, eq=False)
class RepairResult:
    """Fair scores of a population together with the intermediate distributions."""

    partition: GroupPartition
    raw: np.ndarray
    fair: np.ndarray
    thetas: dict[GroupKey, float]
    per_group_maps: dict[GroupKey, MonotoneMap]
    barycenter: EmpiricalDistribution
    raw_group_dists: dict[GroupKey, EmpiricalDistribution]
    fair_group_dists: dict[GroupKey, EmpiricalDistribution]
    aggregate_fair: EmpiricalDistribution
    resolution: float
    bin_width: float
    grid: str
    small_groups: tuple[GroupKey, ...] = ()
    max_spread: float = 0.0

    @property
    def fair_scores(self) -> dict[str, float]:
        return dict(zip(self.partition.ids, self.fair.tolist()))

    @property
    def raw_scores(self) -> dict[str, float]:
        return dict(zip(self.partition.ids, self.raw.tolist()))

    @property
    def grid_tolerance(self) -> float:
        """Bound on the parity gap of a full repair.

        Every fair group distribution at theta = 1 is within ``resolution`` of the barycenter,
        and so is the population mixture of them.
        """
        return 2.0 * self.resolution

    def distribution_rows(self) -> list[dict]:
        """Raw and fair score histograms of every group next to the barycenter, one row per score bin."""
        features = self.partition.features
        columns = {}
        for key in self.partition.keys:
            label = key.label(features)
            columns[f"raw[{label}]"] = self.raw_group_dists[key]
            columns[f"fair[{label}]"] = self.fair_group_dists[key]
        columns["barycenter"] = self.barycenter

        bins = np.unique(np.concatenate([bin_indices(d.support, self.bin_width) for d in columns.values()]))
        masses = {}
        for name, dist in columns.items():
            position = np.searchsorted(bins, bin_indices(dist.support, self.bin_width))
            masses[name] = np.bincount(position, weights=dist.masses, minlength=bins.size)

        rows = []
        for i, b in enumerate(bins.tolist()):
            row = {"score": (b + 0.5) * self.bin_width}
            for name in columns:
                row[name] = float(masses[name][i])
            rows.append(row)
        return rows

    def to_dict(self):
        """Manifest view: per-group parameters and barycenter summary (scores excluded)."""
        features = self.partition.features
        counts = self.partition.counts
        weights = self.partition.weights
        return {
            "population": self.partition.size,
            "features": list(features),
            "bin_width": self.bin_width,
            "grid": self.grid,
            "resolution": self.resolution,
            "grid_tolerance": self.grid_tolerance,
            "max_spread": self.max_spread,
            "groups": [
                {
                    "key": list(key.values),
                    "label": key.label(features),
                    "count": counts[key],
                    "weight": weights[key],
                    "theta": self.thetas[key],
                    "small": key in self.small_groups,
                    "fair_mean": self.fair_group_dists[key].mean(),
                }
                for key in self.partition.keys
            ],
            "barycenter": self.barycenter.summary(),
            "aggregate_fair": self.aggregate_fair.summary(),
        }


@dataclass(frozen=True, eq=False)
class Ranking:
    """Record indices ordered best first (score descending, id ascending)."""

    order: np.ndarray
    ids: tuple[str, ...]

    def __len__(self):
        return int(self.order.size)

    def positions(self) -> np.ndarray:
        """0-based rank position of every record index."""
        positions = np.empty_like(self.order)
        positions[self.order] = np.arange(self.order.size)
        return positions


@dataclass(frozen=True, eq=False)
class FairnessReport:
    """Metric curves over a k-grid plus scalar fairness and utility figures."""

    features: tuple[str, ...]
    keys: tuple[GroupKey, ...]
    population: int
    k_grid: np.ndarray
    threshold: float
    precision: np.ndarray
    ndcg: np.ndarray
    selected_share: dict[GroupKey, np.ndarray]
    disparity: dict[GroupKey, np.ndarray]
    individual_fairness_error: float
    decision_maker_utility: float
    parity_gap: float
    crossing_ranks: dict[GroupKey, int | None]
    group_stats: dict[GroupKey, dict]

    def curve_rows(self) -> list[dict]:
        """One row per grid point, ready for CSV output."""
        rows = []
        for i, k in enumerate(self.k_grid.tolist()):
            row = {"k": k, "precision_at_k": float(self.precision[i]), "ndcg_at_k": float(self.ndcg[i])}
            for key in self.keys:
                label = key.label(self.features)
                row[f"share[{label}]"] = float(self.selected_share[key][i])
                row[f"disparity[{label}]"] = float(self.disparity[key][i])
            rows.append(row)
        return rows

    def min_crossing_rank(self) -> int | None:
        """Smallest crossing rank over groups that reach the threshold at all."""
        ranks = [rank for rank in self.crossing_ranks.values() if rank is not None]
        return min(ranks) if ranks else None

    def max_crossing_rank(self) -> int | None:
        """Cutoff from which every group passes; None when some group never does."""
        ranks = list(self.crossing_ranks.values())
        if not ranks or any(rank is None for rank in ranks):
            return None
        return max(ranks)

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "population": self.population,
            "k_grid": {
                "start": int(self.k_grid[0]),
                "stop": int(self.k_grid[-1]),
                "points": int(self.k_grid.size),
            },
            "threshold": self.threshold,
            "individual_fairness_error": self.individual_fairness_error,
            "decision_maker_utility": self.decision_maker_utility,
            "parity_gap": self.parity_gap,
            "min_precision_at_k": float(self.precision.min()),
            "min_ndcg_at_k": float(self.ndcg.min()),
            "crossing_ranks": {
                key.label(self.features): rank for key, rank in self.crossing_ranks.items()
            },
            "groups": [
                {"key": list(key.values), "label": key.label(self.features), **self.group_stats[key]}
                for key in self.keys
            ],
        }
