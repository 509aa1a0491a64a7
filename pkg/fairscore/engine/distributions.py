"""Group partitions and binned empirical score distributions."""

import logging
from collections import defaultdict
from typing import Sequence

import numpy as np

from fairscore.errors import DataError, UsageError
from fairscore.models import EmpiricalDistribution, GroupKey, GroupPartition, ScoreRecord
from fairscore.models.transport import bin_indices

logger = logging.getLogger(__name__)

ANCHORS = ("center", "mean")


def partition_population(records: Sequence[ScoreRecord], schema: Sequence[str]) -> GroupPartition:
    """
    Split records into groups by their protected-trait vector.

    Args:
        records: The scored population.
        schema: Protected feature names; every record carries one trait per feature.

    Returns:
        GroupPartition with groups keyed in lexicographic order.
    """
    features = tuple(str(name) for name in schema)
    if not records:
        raise DataError("cannot partition an empty population")

    members: dict[tuple[str, ...], list[int]] = defaultdict(list)
    seen: set[str] = set()
    for index, record in enumerate(records):
        if len(record.traits) != len(features):
            raise DataError(
                f"record {record.id!r} has {len(record.traits)} traits, schema {list(features)} needs {len(features)}"
            )
        if record.id in seen:
            raise DataError(f"duplicate record id {record.id!r}")
        seen.add(record.id)
        members[record.traits].append(index)

    keys = tuple(sorted(GroupKey(traits) for traits in members))
    labels = np.empty(len(records), dtype=np.int64)
    groups = {}
    for label, key in enumerate(keys):
        indices = np.asarray(members[key.values], dtype=np.int64)
        indices.setflags(write=False)
        labels[indices] = label
        groups[key] = indices
    labels.setflags(write=False)

    logger.debug("partitioned %d records into %d groups", len(records), len(keys))
    return GroupPartition(
        features=features,
        ids=tuple(record.id for record in records),
        keys=keys,
        labels=labels,
        groups=groups,
    )


def empirical_distribution(values, bin_width: float, anchor: str = "center") -> EmpiricalDistribution:
    """
    Bin values into intervals [i*w, (i+1)*w) with masses count/total.

    With ``anchor="center"`` each bin's atom sits at i*w + w/2; with ``anchor="mean"`` it
    sits at the mean of the values the bin holds.
    """
    if not bin_width > 0:
        raise UsageError(f"bin width must be positive, got {bin_width!r}")
    if anchor not in ANCHORS:
        raise UsageError(f"anchor must be one of {ANCHORS}, got {anchor!r}")
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DataError("cannot bin an empty sample")
    if not np.all(np.isfinite(values)):
        raise DataError("scores must be finite")

    bins, inverse = np.unique(bin_indices(values, bin_width), return_inverse=True)
    counts = np.bincount(inverse, minlength=bins.size)
    masses = counts / values.size
    if anchor == "center":
        support = bins * bin_width + bin_width / 2
    else:
        support = np.bincount(inverse, weights=values, minlength=bins.size) / counts
        lower = bins * bin_width
        upper = np.nextafter((bins + 1) * bin_width, -np.inf)
        support = np.clip(support, lower, upper)
    return EmpiricalDistribution(support, masses, bin_width=float(bin_width), bins=bins)


def cdf(dist: EmpiricalDistribution, x):
    """Right-continuous distribution function of ``dist`` at ``x``."""
    return dist.cdf(x)


def quantile(dist: EmpiricalDistribution, p):
    """Generalized inverse of the distribution function, p in (0, 1]."""
    return dist.quantile(p)


def mixture(dists: Sequence[EmpiricalDistribution], weights: Sequence[float]) -> EmpiricalDistribution:
    """The weighted mixture sum_k w_k * dist_k, merging coinciding atoms."""
    if len(dists) != len(weights) or not dists:
        raise UsageError("mixture needs one weight per distribution")
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise UsageError("mixture weights must be nonnegative and sum to 1")
    support = np.concatenate([d.support for d in dists])
    masses = np.concatenate([w * d.masses for d, w in zip(dists, weights)])
    return EmpiricalDistribution.from_atoms(support, masses)
