"""The continuous fairness repair: per-group displacement toward the barycenter."""

import logging
from typing import Sequence

import numpy as np

from fairscore.config import Config, parse_grid_size
from fairscore.errors import InvariantViolation, UsageError
from fairscore.models import MonotoneMap, RepairResult, ScoreRecord, ThetaPolicy
from fairscore.engine.barycenter import barycenter, displacement_interpolate
from fairscore.engine.distributions import empirical_distribution, mixture, partition_population

logger = logging.getLogger(__name__)


def resolve_grid_size(grid_size, population: int) -> int | None:
    """None -> population size capped at the configured maximum; 'exact' -> None."""
    grid_size = parse_grid_size(grid_size)
    if grid_size is None:
        return Config.default_grid_size(population)
    if grid_size == "exact":
        return None
    return grid_size


def apply_map_to_individual(raw_score, score_map: MonotoneMap):
    """Fair score of an individual (or array of individuals) through the bin of its raw score."""
    return score_map.apply(raw_score)


def _check_monotone(raw: np.ndarray, fair: np.ndarray, label: str):
    order = np.argsort(raw, kind="stable")
    if np.any(np.diff(fair[order]) < 0):
        raise InvariantViolation(f"repair of group {label} is not monotone in the raw score")


def repair(
    records: Sequence[ScoreRecord],
    schema: Sequence[str],
    policy: ThetaPolicy,
    bin_width: float = 1.0,
    grid_size=None,
    min_group_size: int | None = None,
    round_to: int | None = None,
) -> RepairResult:
    """
    Repair raw scores group by group.

    Partition the population, bin every group's scores, compute the barycenter with the
    population weights w_k, move each group a fraction theta_k of the way along its
    optimal map and send every individual through the map of its group.

    Args:
        records: Scored population.
        schema: Protected feature names.
        policy: Theta per group.
        bin_width: Width of the score bins.
        grid_size: Quantile grid of the barycenter (None, 'exact' or a positive integer).
        min_group_size: Groups below this size are repaired but flagged.
        round_to: Optionally round fair scores to this many decimals.

    Returns:
        RepairResult with fair scores aligned to ``records``.
    """
    if not bin_width > 0:
        raise UsageError(f"bin width must be positive, got {bin_width!r}")
    if min_group_size is None:
        min_group_size = Config.MIN_GROUP_SIZE
    partition = partition_population(records, schema)
    thetas = policy.resolve(partition)
    raw = np.fromiter((record.raw_score for record in records), dtype=float, count=len(records))

    keys = partition.keys
    dists = [empirical_distribution(raw[partition.groups[key]], bin_width, anchor="mean") for key in keys]
    weights = [partition.weight(key) for key in keys]
    nu = barycenter(dists, weights, resolve_grid_size(grid_size, partition.size), keys)

    small = tuple(key for key in keys if len(partition.groups[key]) < min_group_size)
    for key in small:
        logger.warning(
            "group %s has only %d members; the repair is unreliable for small groups",
            key.label(partition.features),
            len(partition.groups[key]),
        )

    fair = np.empty_like(raw)
    maps, fair_dists = {}, {}
    for key, dist in zip(keys, dists):
        indices = partition.groups[key]
        score_map, fair_dist = displacement_interpolate(dist, nu.per_group_maps[key], thetas[key])
        values = apply_map_to_individual(raw[indices], score_map)
        if round_to is not None:
            values = np.round(values, round_to)
        _check_monotone(raw[indices], values, key.label(partition.features))
        fair[indices] = values
        maps[key] = score_map
        fair_dists[key] = fair_dist
    fair.setflags(write=False)
    raw.setflags(write=False)

    return RepairResult(
        partition=partition,
        raw=raw,
        fair=fair,
        thetas=thetas,
        per_group_maps=maps,
        barycenter=nu.barycenter,
        raw_group_dists=dict(zip(keys, dists)),
        fair_group_dists=fair_dists,
        aggregate_fair=mixture([fair_dists[key] for key in keys], weights),
        resolution=nu.resolution,
        max_spread=nu.max_spread,
        bin_width=float(bin_width),
        grid=nu.grid,
        small_groups=small,
    )
