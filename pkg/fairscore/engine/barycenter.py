"""Wasserstein-2 barycenters of 1-D distributions and displacement interpolation."""

import logging
from typing import Hashable, Sequence

import numpy as np

from fairscore.errors import UsageError
from fairscore.models import BarycenterResult, EmpiricalDistribution, MonotoneMap
from fairscore.models.policy import check_theta
from fairscore.engine.transport import (
    level_index,
    merged_levels,
    optimal_plan_1d,
    projection,
    pushforward,
)

logger = logging.getLogger(__name__)


def _check_weights(dists, weights) -> np.ndarray:
    if not dists:
        raise UsageError("a barycenter needs at least one distribution")
    if len(dists) != len(weights):
        raise UsageError(f"got {len(dists)} distributions but {len(weights)} weights")
    weights = np.asarray(weights, dtype=float)
    if np.any(~(weights > 0)):
        raise UsageError("barycenter weights must be positive")
    if abs(float(weights.sum()) - 1.0) > 1e-9:
        raise UsageError(f"barycenter weights must sum to 1, got {float(weights.sum())!r}")
    return weights


def barycenter(
    dists: Sequence[EmpiricalDistribution],
    weights: Sequence[float],
    grid_size: int | None = None,
    keys: Sequence[Hashable] | None = None,
) -> BarycenterResult:
    """
    Weighted barycenter via quantile averaging.

    In one dimension the barycenter's quantile function is sum_k w_k * Q_k. With
    ``grid_size=None`` the average is taken on the common refinement of all cumulative
    mass levels, which is exact for empirical inputs; an integer ``grid_size`` samples it
    on the mid-point grid p_i = (i - 1/2) / grid_size instead.

    Args:
        dists: Group distributions mu_k.
        weights: Positive weights w_k summing to 1.
        grid_size: Number of quantile nodes, or None for the exact grid.
        keys: Labels for the per-group maps (defaults to 0..G-1).

    Returns:
        BarycenterResult with nu, the optimal map mu_k -> nu of every group and the
        largest W2 distance from a projected group to nu allowed by the grid.
    """
    weights = _check_weights(dists, weights)
    keys = list(range(len(dists))) if keys is None else list(keys)
    if len(keys) != len(dists):
        raise UsageError("one key per distribution is required")

    if grid_size is None:
        levels = merged_levels(*(d.cumulative for d in dists))
        masses = np.diff(levels, prepend=0.0)
        live = masses > 0
        levels, masses = levels[live], masses[live]
        quantiles = [d.support[level_index(d.cumulative, levels)] for d in dists]
        grid = "exact"
    else:
        if int(grid_size) != grid_size or grid_size < 1:
            raise UsageError(f"grid size must be a positive integer, got {grid_size!r}")
        grid_size = int(grid_size)
        levels = (np.arange(1, grid_size + 1) - 0.5) / grid_size
        masses = np.full(grid_size, 1.0 / grid_size)
        quantiles = [d.quantile(levels) for d in dists]
        grid = f"uniform:{grid_size}"

    atoms = np.zeros_like(levels)
    for w, q in zip(weights, quantiles):
        atoms += w * q
    nu = EmpiricalDistribution.from_atoms(atoms, masses)
    logger.info("barycenter of %d groups on %s grid: %d atoms", len(dists), grid, len(nu))

    maps, plans = {}, {}
    resolution = max_spread = 0.0
    for key, dist in zip(keys, dists):
        plan = optimal_plan_1d(dist, nu)
        means, spread, residual = projection(plan, dist)
        plans[key] = plan
        maps[key] = MonotoneMap(dist.support, means, 0.0, dist.bin_width, dist.bins)
        resolution = max(resolution, float(np.sqrt(residual.sum())))
        max_spread = max(max_spread, float(spread.max()))

    return BarycenterResult(
        barycenter=nu,
        per_group_maps=maps,
        plans=plans,
        weights=tuple(weights.tolist()),
        grid=grid,
        resolution=resolution,
        max_spread=max_spread,
    )


def interpolate_map(map_to_target: MonotoneMap, theta: float) -> MonotoneMap:
    """The map (1 - theta) * Id + theta * T."""
    theta = check_theta(theta)
    return MonotoneMap(
        map_to_target.sources,
        theta * map_to_target.offsets,
        (1.0 - theta) + theta * map_to_target.slope,
        map_to_target.bin_width,
        map_to_target.bins,
    )


def displacement_interpolate(
    source: EmpiricalDistribution, map_to_target: MonotoneMap, theta: float
) -> tuple[MonotoneMap, EmpiricalDistribution]:
    """
    Point theta of the Wasserstein geodesic from ``source`` toward the map's target.

    Returns:
        (interpolated map, pushforward of ``source`` under it)
    """
    interpolated = interpolate_map(map_to_target, theta)
    return interpolated, pushforward(source, interpolated)
