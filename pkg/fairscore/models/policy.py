"""Per-group fairness parameter policies."""

import logging
import math
from dataclasses import dataclass, field

from fairscore.errors import UsageError
from fairscore.models.population import GroupKey, GroupPartition

logger = logging.getLogger(__name__)


def check_theta(theta: float, what: str = "theta") -> float:
    try:
        theta = float(theta)
    except (TypeError, ValueError):
        raise UsageError(f"{what} must be a number in [0, 1], got {theta!r}") from None
    if math.isnan(theta) or not 0.0 <= theta <= 1.0:
        raise UsageError(f"{what} must lie in [0, 1], got {theta!r}")
    return theta


@dataclass(frozen=True)
class GroupSelector:
    """Assigns ``theta`` to every group whose traits match ``selection``."""

    selection: tuple[tuple[str, str], ...]
    theta: float

    def __post_init__(self):
        check_theta(self.theta, f"theta for {self}")

    @classmethod
    def parse(cls, text: str) -> "GroupSelector":
        """Parse ``feature=value[,feature=value...]:theta``, e.g. ``ethnicity=2:1.0``."""
        head, sep, tail = str(text).rpartition(":")
        if not sep or not head:
            raise UsageError(f"group override must look like 'feature=value:theta', got {text!r}")
        pairs = []
        for part in head.split(","):
            name, eq, value = part.partition("=")
            if not eq or not name.strip() or not value.strip():
                raise UsageError(f"group override must look like 'feature=value:theta', got {text!r}")
            pairs.append((name.strip(), value.strip()))
        return cls(tuple(pairs), check_theta(tail, f"theta in {text!r}"))

    def matches(self, key: GroupKey, features: tuple[str, ...]) -> bool:
        return key.matches(features, dict(self.selection))

    def __str__(self):
        return ",".join(f"{name}={value}" for name, value in self.selection)


@dataclass(frozen=True)
class ThetaPolicy:
    """
    Fairness parameter per group.

    ``default_theta`` applies to every group; ``selectors`` are applied in order (later
    wins), then explicit ``overrides`` by group key take precedence.
    """

    default_theta: float = 1.0
    overrides: dict[GroupKey, float] = field(default_factory=dict)
    selectors: tuple[GroupSelector, ...] = ()

    def __post_init__(self):
        check_theta(self.default_theta, "default theta")
        for key, theta in self.overrides.items():
            check_theta(theta, f"theta for group {key}")

    @classmethod
    def uniform(cls, theta: float) -> "ThetaPolicy":
        return cls(default_theta=theta)

    def resolve(self, partition: GroupPartition) -> dict[GroupKey, float]:
        """Theta for every group of ``partition``."""
        thetas = {key: float(self.default_theta) for key in partition.keys}
        for selector in self.selectors:
            unknown = [name for name, _ in selector.selection if name not in partition.features]
            if unknown:
                raise UsageError(f"group override {selector} names unknown features {unknown}")
            matched = [key for key in partition.keys if selector.matches(key, partition.features)]
            if not matched:
                logger.warning("group override %s matches no group", selector)
            for key in matched:
                thetas[key] = selector.theta
        for key, theta in self.overrides.items():
            if key not in thetas:
                raise UsageError(f"theta override for unknown group {key.label(partition.features)}")
            thetas[key] = float(theta)
        return thetas

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "default_theta": self.default_theta,
            "overrides": {key.label(): theta for key, theta in self.overrides.items()},
            "selectors": [{"match": str(s), "theta": s.theta} for s in self.selectors],
        }
