"""Parameters of synthetic scored populations."""

import math
from dataclasses import dataclass

from fairscore.errors import DataError
from fairscore.models.population import GroupKey


@dataclass(frozen=True)
class SyntheticGroup:
    """Integer scores of one group, drawn around ``mean`` with spread ``std_dev``."""

    key: GroupKey
    count: int
    mean: float
    std_dev: float

    def __post_init__(self):
        if not isinstance(self.key, GroupKey):
            object.__setattr__(self, "key", GroupKey(tuple(str(v) for v in self.key)))
        if int(self.count) != self.count or self.count <= 0:
            raise DataError(f"group {self.key}: count must be a positive integer, got {self.count!r}")
        if not math.isfinite(self.mean):
            raise DataError(f"group {self.key}: mean must be finite")
        if not (math.isfinite(self.std_dev) and self.std_dev > 0):
            raise DataError(f"group {self.key}: std_dev must be positive, got {self.std_dev!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticGroup":
        try:
            return cls(
                key=GroupKey(tuple(str(v) for v in data["key"])),
                count=int(data["count"]),
                mean=float(data["mean"]),
                std_dev=float(data["std_dev"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"invalid synthetic group entry {data!r}: {e}") from None

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {"key": list(self.key.values), "count": self.count, "mean": self.mean, "std_dev": self.std_dev}


@dataclass(frozen=True)
class SyntheticSpec:
    """Full synthetic population design: groups, integer score range and seed."""

    features: tuple[str, ...]
    groups: tuple[SyntheticGroup, ...]
    min_score: int
    max_score: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "groups", tuple(self.groups))
        if not self.groups:
            raise DataError("a synthetic spec needs at least one group")
        if int(self.min_score) != self.min_score or int(self.max_score) != self.max_score:
            raise DataError("score range bounds must be integers")
        if not self.min_score < self.max_score:
            raise DataError(f"min_score must be below max_score, got [{self.min_score}, {self.max_score}]")
        keys = [group.key for group in self.groups]
        if len(set(keys)) != len(keys):
            raise DataError("synthetic groups must have distinct keys")
        for group in self.groups:
            if len(group.key.values) != len(self.features):
                raise DataError(f"group {group.key} does not match features {list(self.features)}")

    @property
    def population(self) -> int:
        return sum(group.count for group in self.groups)

    def with_seed(self, seed: int) -> "SyntheticSpec":
        return SyntheticSpec(self.features, self.groups, self.min_score, self.max_score, int(seed))

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticSpec":
        try:
            return cls(
                features=tuple(str(f) for f in data["features"]),
                groups=tuple(SyntheticGroup.from_dict(g) for g in data["groups"]),
                min_score=int(data["min_score"]),
                max_score=int(data["max_score"]),
                seed=int(data.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, DataError):
                raise
            raise DataError(f"invalid synthetic spec: {e}") from None

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "features": list(self.features),
            "min_score": self.min_score,
            "max_score": self.max_score,
            "seed": self.seed,
            "groups": [group.to_dict() for group in self.groups],
        }
