"""Population records, group keys and group partitions."""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from fairscore.errors import DataError


@dataclass(frozen=True)
class ScoreRecord:
    """One scored individual."""

    id: str
    traits: tuple[str, ...]
    raw_score: float

    def __post_init__(self):
        if not isinstance(self.traits, tuple):
            object.__setattr__(self, "traits", tuple(str(t) for t in self.traits))
        if not math.isfinite(self.raw_score):
            raise DataError(f"record {self.id!r}: raw score must be finite, got {self.raw_score!r}")

    def to_dict(self, features: tuple[str, ...] | None = None):
        """Convert to dictionary for JSON serialization."""
        if features is None:
            traits = list(self.traits)
        else:
            traits = dict(zip(features, self.traits))
        return {"id": self.id, "traits": traits, "raw_score": self.raw_score}


@dataclass(frozen=True, order=True)
class GroupKey:
    """Protected-trait combination identifying a group; ordered lexicographically."""

    values: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(str(v) for v in self.values))

    def label(self, features: tuple[str, ...] | None = None) -> str:
        """Readable label such as ``gender=0,ethnicity=2``."""
        if features is None:
            return ",".join(self.values)
        return ",".join(f"{name}={value}" for name, value in zip(features, self.values))

    def matches(self, features: tuple[str, ...], selection: dict[str, str]) -> bool:
        lookup = dict(zip(features, self.values))
        return all(lookup.get(name) == value for name, value in selection.items())

    def __str__(self):
        return self.label()


@dataclass(frozen=True, eq=False)
class GroupPartition:
    """A population split into groups with exact weights w_k = |group| / |population|."""

    features: tuple[str, ...]
    ids: tuple[str, ...]
    keys: tuple[GroupKey, ...]
    labels: np.ndarray
    groups: dict[GroupKey, np.ndarray] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def counts(self) -> dict[GroupKey, int]:
        return {key: len(self.groups[key]) for key in self.keys}

    @property
    def exact_weights(self) -> dict[GroupKey, Fraction]:
        return {key: Fraction(len(self.groups[key]), self.size) for key in self.keys}

    @property
    def weights(self) -> dict[GroupKey, float]:
        return {key: len(self.groups[key]) / self.size for key in self.keys}

    def weight(self, key: GroupKey) -> float:
        if key not in self.groups:
            raise DataError(f"unknown group {key.label(self.features)}")
        return len(self.groups[key]) / self.size

    def indices(self, key: GroupKey) -> np.ndarray:
        if key not in self.groups:
            raise DataError(f"unknown group {key.label(self.features)}")
        return self.groups[key]

    def key_of(self, index: int) -> GroupKey:
        return self.keys[int(self.labels[index])]

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "features": list(self.features),
            "population": self.size,
            "groups": [
                {
                    "key": list(key.values),
                    "label": key.label(self.features),
                    "count": len(self.groups[key]),
                    "weight": len(self.groups[key]) / self.size,
                }
                for key in self.keys
            ],
        }
