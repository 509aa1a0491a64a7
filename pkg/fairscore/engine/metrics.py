"""Fairness and utility evaluation of repaired scores."""

import logging
from collections.abc import Mapping
from typing import Sequence

import numpy as np

from fairscore.errors import DataError, MissingScoreError, UsageError
from fairscore.models import EmpiricalDistribution, FairnessReport, GroupKey, GroupPartition, Ranking
from fairscore.engine.distributions import mixture
from fairscore.engine.transport import wasserstein2

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.8


def aligned_scores(partition: GroupPartition, scores, what: str = "scores") -> np.ndarray:
    """Scores as an array aligned with the partition's records (from a mapping or a sequence)."""
    if isinstance(scores, Mapping):
        missing = [record_id for record_id in partition.ids if record_id not in scores]
        if missing:
            raise MissingScoreError(f"{what} missing for {len(missing)} records, e.g. {missing[:3]}")
        values = np.fromiter((scores[i] for i in partition.ids), dtype=float, count=partition.size)
    else:
        values = np.asarray(scores, dtype=float)
        if values.shape != (partition.size,):
            raise MissingScoreError(f"expected {partition.size} {what}, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise MissingScoreError(f"{what} contain missing or non-finite values")
    return values


def _displacements(partition, raw_scores, fair_scores):
    raw = aligned_scores(partition, raw_scores, "raw scores")
    fair = aligned_scores(partition, fair_scores, "fair scores")
    return fair - raw


def individual_fairness_error(partition: GroupPartition, raw_scores, fair_scores) -> float:
    """
    E_ind = sum_k w_k * Var_k(fair - raw).

    Equals half the mean squared change of pairwise score differences within groups.
    """
    d = _displacements(partition, raw_scores, fair_scores)
    return float(sum(partition.weight(key) * np.var(d[partition.groups[key]]) for key in partition.keys))


def decision_maker_utility(partition: GroupPartition, raw_scores, fair_scores) -> float:
    """U = -1/2 * sum_k w_k * mean_k((fair - raw)^2); zero iff nothing moved."""
    d = _displacements(partition, raw_scores, fair_scores)
    return float(-0.5 * sum(partition.weight(key) * np.mean(d[partition.groups[key]] ** 2) for key in partition.keys))


def mean_displacements(partition: GroupPartition, raw_scores, fair_scores) -> dict[GroupKey, float]:
    d = _displacements(partition, raw_scores, fair_scores)
    return {key: float(np.mean(d[partition.groups[key]])) for key in partition.keys}


def lipschitz_moduli(partition: GroupPartition, raw_scores, fair_scores) -> dict[GroupKey, float]:
    """Largest fair-score increment per raw-score increment between neighbouring raw scores, per group."""
    raw = aligned_scores(partition, raw_scores, "raw scores")
    fair = aligned_scores(partition, fair_scores, "fair scores")
    moduli = {}
    for key in partition.keys:
        indices = partition.groups[key]
        levels, first = np.unique(raw[indices], return_index=True)
        if levels.size < 2:
            moduli[key] = 0.0
            continue
        images = fair[indices][first]
        moduli[key] = float(np.max(np.abs(np.diff(images)) / np.diff(levels)))
    return moduli


def parity_gap(fair_group_dists, weights) -> float:
    """max_k W2(nu_k, nu_bar) with nu_bar the weighted mixture; zero under statistical parity."""
    if isinstance(fair_group_dists, Mapping):
        keys = list(fair_group_dists)
        dists = [fair_group_dists[key] for key in keys]
        weights = [weights[key] for key in keys] if isinstance(weights, Mapping) else list(weights)
    else:
        dists = list(fair_group_dists)
        weights = list(weights)
    aggregate = mixture(dists, weights)
    return max(wasserstein2(dist, aggregate) for dist in dists)


def group_distributions(partition: GroupPartition, scores) -> dict[GroupKey, EmpiricalDistribution]:
    values = aligned_scores(partition, scores)
    return {key: EmpiricalDistribution.from_atoms(values[partition.groups[key]]) for key in partition.keys}


def rank_by_score(ids: Sequence[str], scores) -> Ranking:
    """Ranking by score descending, ties broken by ascending id."""
    scores = np.asarray(scores, dtype=float)
    ids = tuple(ids)
    if scores.shape != (len(ids),):
        raise MissingScoreError(f"expected {len(ids)} scores, got {scores.size}")
    id_rank = np.empty(len(ids), dtype=np.int64)
    id_rank[np.argsort(np.asarray(ids, dtype=str), kind="stable")] = np.arange(len(ids))
    order = np.lexsort((id_rank, -scores))
    order.setflags(write=False)
    return Ranking(order=order, ids=ids)


def _check_k(k: int, size: int):
    if int(k) != k or not 1 <= k <= size:
        raise UsageError(f"k must lie in [1, {size}], got {k!r}")


def check_k_grid(k_grid, size: int) -> np.ndarray:
    grid = np.asarray(k_grid, dtype=np.int64)
    if grid.ndim != 1 or grid.size == 0:
        raise UsageError("the k-grid needs at least one point")
    if np.any(np.diff(grid) <= 0) or grid[0] < 1 or grid[-1] > size:
        raise UsageError(f"the k-grid must be strictly increasing within [1, {size}]")
    return grid


def make_k_grid(population: int, step: int) -> np.ndarray:
    """k = step, 2*step, ... up to the population size (just the population if it is smaller)."""
    if step < 1:
        raise UsageError(f"k step must be positive, got {step!r}")
    if population < step:
        return np.array([population], dtype=np.int64)
    return np.arange(step, population + 1, step, dtype=np.int64)


def precision_curve(raw_ranking: Ranking, fair_ranking: Ranking, k_grid) -> np.ndarray:
    """P@k for every k: share of the fair top-k that is also in the raw top-k."""
    grid = check_k_grid(k_grid, len(raw_ranking))
    raw_position = raw_ranking.positions()[fair_ranking.order]
    # item at fair position i counts for k iff max(i, raw position) < k
    last_needed = np.sort(np.maximum(np.arange(len(fair_ranking)), raw_position))
    overlap = np.searchsorted(last_needed, grid, side="left")
    return overlap / grid


def precision_at_k(raw_ranking: Ranking, fair_ranking: Ranking, k: int) -> float:
    """|top-k(fair) & top-k(raw)| / k."""
    _check_k(k, len(raw_ranking))
    return float(precision_curve(raw_ranking, fair_ranking, [k])[0])


def _gains(raw_scores) -> np.ndarray:
    gains = np.asarray(raw_scores, dtype=float)
    if np.any(gains < 0):
        raise DataError("NDCG gains (raw scores) must be nonnegative")
    return gains


def ndcg_curve(raw_scores, fair_ranking: Ranking, k_grid) -> np.ndarray:
    """NDCG@k for every k, with raw scores as gains and the raw order as the ideal."""
    gains = _gains(raw_scores)
    grid = check_k_grid(k_grid, len(fair_ranking))
    discount = 1.0 / np.log2(np.arange(2, gains.size + 2))
    dcg = np.cumsum(gains[fair_ranking.order] * discount)[grid - 1]
    ideal = np.cumsum(np.sort(gains)[::-1] * discount)[grid - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ideal > 0, dcg / ideal, 1.0)
    return np.clip(ratio, 0.0, 1.0)


def ndcg_at_k(raw_scores, fair_ranking: Ranking, k: int) -> float:
    """Normalized discounted cumulative gain of the fair top-k."""
    _check_k(k, len(fair_ranking))
    return float(ndcg_curve(raw_scores, fair_ranking, [k])[0])


def disparity_ratio(selected_share: float, group_weight: float) -> float:
    """Share of the group among the selected divided by its share of the population."""
    if not group_weight > 0:
        raise DataError("group weight must be positive")
    return selected_share / group_weight


def selected_counts(ranking: Ranking, partition: GroupPartition, group: GroupKey, k_grid) -> np.ndarray:
    grid = check_k_grid(k_grid, len(ranking))
    label = partition.keys.index(group) if group in partition.groups else None
    if label is None or len(partition.groups[group]) == 0:
        raise DataError(f"group {group} has no members")
    members = partition.labels[ranking.order] == label
    return np.cumsum(members)[grid - 1]


def selected_share_curve(ranking: Ranking, partition: GroupPartition, group: GroupKey, k_grid) -> np.ndarray:
    """Fraction of the top-k that belongs to ``group``."""
    grid = check_k_grid(k_grid, len(ranking))
    return selected_counts(ranking, partition, group, grid) / grid


def disparity_curve(ranking: Ranking, partition: GroupPartition, group: GroupKey, k_grid) -> np.ndarray:
    return selected_share_curve(ranking, partition, group, k_grid) / partition.weight(group)


def disparity_measure(ranking: Ranking, partition: GroupPartition, group: GroupKey, k: int) -> float:
    """(members of ``group`` in the top-k / k) / w_group."""
    _check_k(k, len(ranking))
    share = float(selected_share_curve(ranking, partition, group, [k])[0])
    return disparity_ratio(share, partition.weight(group))


def first_sustained(values: np.ndarray, k_grid: np.ndarray, threshold: float) -> int | None:
    """Smallest grid k from which ``values`` stay at or above ``threshold``."""
    failing = np.flatnonzero(values < threshold)
    if failing.size == 0:
        return int(k_grid[0])
    last = int(failing[-1])
    return int(k_grid[last + 1]) if last + 1 < k_grid.size else None


def crossing_rank(
    ranking: Ranking,
    partition: GroupPartition,
    group: GroupKey,
    threshold: float = DEFAULT_THRESHOLD,
    k_grid=None,
) -> int | None:
    """Smallest grid k from which the group's disparity stays at or above ``threshold``."""
    if not 0.0 < threshold <= 1.0:
        raise UsageError(f"threshold must lie in (0, 1], got {threshold!r}")
    grid = check_k_grid(np.arange(1, len(ranking) + 1) if k_grid is None else k_grid, len(ranking))
    return first_sustained(disparity_curve(ranking, partition, group, grid), grid, threshold)


def evaluate(
    partition: GroupPartition,
    raw_scores,
    fair_scores,
    k_grid,
    threshold: float = DEFAULT_THRESHOLD,
    fair_group_dists: Mapping | None = None,
) -> FairnessReport:
    """Full evaluation of a repair over a k-grid."""
    if not 0.0 < threshold <= 1.0:
        raise UsageError(f"threshold must lie in (0, 1], got {threshold!r}")
    raw = aligned_scores(partition, raw_scores, "raw scores")
    fair = aligned_scores(partition, fair_scores, "fair scores")
    grid = check_k_grid(k_grid, partition.size)

    raw_ranking = rank_by_score(partition.ids, raw)
    fair_ranking = rank_by_score(partition.ids, fair)
    if fair_group_dists is None:
        fair_group_dists = group_distributions(partition, fair)

    shares, disparities, crossings = {}, {}, {}
    for key in partition.keys:
        shares[key] = selected_share_curve(fair_ranking, partition, key, grid)
        disparities[key] = shares[key] / partition.weight(key)
        crossings[key] = first_sustained(disparities[key], grid, threshold)

    shifts = mean_displacements(partition, raw, fair)
    moduli = lipschitz_moduli(partition, raw, fair)
    counts, weights = partition.counts, partition.weights
    stats = {
        key: {
            "count": counts[key],
            "weight": weights[key],
            "raw_mean": float(np.mean(raw[partition.groups[key]])),
            "fair_mean": float(np.mean(fair[partition.groups[key]])),
            "mean_displacement": shifts[key],
            "lipschitz": moduli[key],
        }
        for key in partition.keys
    }
    logger.debug("evaluated %d records on %d grid points", partition.size, grid.size)
    return FairnessReport(
        features=partition.features,
        keys=partition.keys,
        population=partition.size,
        k_grid=grid,
        threshold=float(threshold),
        precision=precision_curve(raw_ranking, fair_ranking, grid),
        ndcg=ndcg_curve(raw, fair_ranking, grid),
        selected_share=shares,
        disparity=disparities,
        individual_fairness_error=individual_fairness_error(partition, raw, fair),
        decision_maker_utility=decision_maker_utility(partition, raw, fair),
        parity_gap=parity_gap(fair_group_dists, weights),
        crossing_ranks=crossings,
        group_stats=stats,
    )
