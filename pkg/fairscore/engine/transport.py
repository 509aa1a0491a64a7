"""Exact one-dimensional quadratic optimal transport between empirical distributions."""

import numpy as np

from fairscore.errors import DataError
from fairscore.models import EmpiricalDistribution, MonotoneMap, TransportPlan
from fairscore.models.transport import MARGINAL_TOLERANCE

# cumulative masses closer than this are treated as the same quantile level
LEVEL_TOLERANCE = 1e-13


def merged_levels(*cumulatives: np.ndarray) -> np.ndarray:
    """Sorted union of cumulative mass levels; near-coincident levels are merged."""
    levels = np.unique(np.concatenate(cumulatives))
    if levels.size > 1:
        keep = np.append(np.diff(levels) > LEVEL_TOLERANCE, True)
        levels = levels[keep]
    levels[-1] = 1.0
    return levels


def level_index(cumulative: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Atom index holding each quantile level: first i with cumulative[i] >= level."""
    index = np.searchsorted(cumulative, levels - LEVEL_TOLERANCE, side="left")
    return np.minimum(index, cumulative.size - 1)


def optimal_plan_1d(source: EmpiricalDistribution, target: EmpiricalDistribution) -> TransportPlan:
    """
    Monotone (north-west corner) coupling of two distributions.

    Walks both cumulative mass functions jointly: every interval between consecutive
    levels couples the source atom and the target atom holding it. In one dimension
    this coupling minimizes the quadratic cost.
    """
    levels = merged_levels(source.cumulative, target.cumulative)
    masses = np.diff(levels, prepend=0.0)
    i = level_index(source.cumulative, levels)
    j = level_index(target.cumulative, levels)
    live = masses > 0
    return TransportPlan(source.support[i[live]], target.support[j[live]], masses[live])


def _rows(plan: TransportPlan, source: EmpiricalDistribution) -> np.ndarray:
    """Source atom index of every plan triple, checking the source marginal."""
    rows = np.minimum(np.searchsorted(source.support, plan.sources), len(source) - 1)
    if np.any(source.support[rows] != plan.sources):
        raise DataError("plan sources are not atoms of the source distribution")
    leaving = np.bincount(rows, weights=plan.masses, minlength=len(source))
    gap = float(np.max(np.abs(leaving - source.masses)))
    if gap > MARGINAL_TOLERANCE:
        raise DataError(f"plan marginal does not match the source distribution (off by {gap:.3g})")
    return rows


def projection(
    plan: TransportPlan, source: EmpiricalDistribution
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Barycentric projection of a plan.

    The residual of a source atom is sum mass * (target - mean target)^2 over its triples;
    the square root of the total residual bounds W2 between the projected image and the
    plan's target.

    Returns:
        (mean target of every source atom, spread max - min of its targets, residual)
    """
    rows = _rows(plan, source)
    n = len(source)
    mass = np.bincount(rows, weights=plan.masses, minlength=n)
    weighted = np.bincount(rows, weights=plan.masses * plan.targets, minlength=n)
    low = np.full(n, np.inf)
    high = np.full(n, -np.inf)
    np.minimum.at(low, rows, plan.targets)
    np.maximum.at(high, rows, plan.targets)

    covered = mass > 0
    means = np.where(covered, weighted / np.where(covered, mass, 1.0), np.nan)
    means = np.where(covered, np.clip(means, low, high), np.nan)
    spread = np.where(covered, high - low, 0.0)
    deviation = plan.targets - np.where(covered, means, 0.0)[rows]
    residual = np.bincount(rows, weights=plan.masses * deviation * deviation, minlength=n)
    if not np.all(covered):
        # zero-mass atoms inherit the nearest covered target to the left (right at the start)
        index = np.where(covered, np.arange(n), -1)
        index = np.maximum.accumulate(index)
        index[index < 0] = int(np.argmax(covered))
        means = means[index]
    return means, spread, residual


def map_from_plan(plan: TransportPlan, source: EmpiricalDistribution) -> MonotoneMap:
    """Monotone map sending each source atom to the mass-weighted mean of its targets."""
    means, _, _ = projection(plan, source)
    return MonotoneMap(source.support, means, 0.0, source.bin_width, source.bins)


def transport_cost(source: EmpiricalDistribution, plan: TransportPlan) -> float:
    """Quadratic cost sum mass * (target - source)^2 of a plan out of ``source``."""
    _rows(plan, source)
    displacement = plan.targets - plan.sources
    return float(np.dot(plan.masses, displacement * displacement))


def wasserstein2(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """Wasserstein-2 distance: square root of the optimal quadratic cost."""
    return float(np.sqrt(transport_cost(a, optimal_plan_1d(a, b))))


def pushforward(source: EmpiricalDistribution, score_map: MonotoneMap) -> EmpiricalDistribution:
    """Image of ``source`` under ``score_map``; atoms landing together are merged."""
    if len(score_map) == len(source) and np.array_equal(score_map.sources, source.support):
        images = score_map.targets
    else:
        images = np.interp(source.support, score_map.sources, score_map.targets)
    return EmpiricalDistribution.from_atoms(images, source.masses)
