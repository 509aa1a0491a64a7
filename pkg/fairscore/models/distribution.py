"""Weighted one-dimensional empirical score distributions."""

from dataclasses import dataclass, field

import numpy as np

from fairscore.errors import DataError, UsageError

MASS_TOLERANCE = 1e-12


def _frozen(array) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """
    Atoms ``support`` with probability ``masses``.

    Binned distributions also remember their integer ``bins`` (one per atom) and the
    ``bin_width`` used to produce them, so a raw score can be looked up by bin.
    """

    support: np.ndarray
    masses: np.ndarray
    bin_width: float | None = None
    bins: np.ndarray | None = None
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        support = _frozen(self.support)
        masses = _frozen(self.masses)
        if support.ndim != 1 or masses.shape != support.shape:
            raise DataError("support and masses must be 1-D arrays of equal length")
        if support.size == 0:
            raise DataError("a distribution needs at least one atom")
        if not (np.all(np.isfinite(support)) and np.all(np.isfinite(masses))):
            raise DataError("support and masses must be finite")
        if np.any(np.diff(support) <= 0):
            raise DataError("support must be strictly increasing")
        if np.any(masses < 0):
            raise DataError("masses must be nonnegative")
        total = float(masses.sum())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise DataError(f"masses must sum to 1, got {total!r}")
        if self.bins is not None:
            bins = np.array(self.bins, dtype=np.int64, copy=True)
            if bins.shape != support.shape or np.any(np.diff(bins) <= 0):
                raise DataError("bins must be strictly increasing and align with the support")
            if self.bin_width is None or not self.bin_width > 0:
                raise DataError("binned distributions need a positive bin_width")
            bins.setflags(write=False)
            object.__setattr__(self, "bins", bins)

        cumulative = np.cumsum(masses)
        cumulative = cumulative / cumulative[-1]
        cumulative.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "cumulative", cumulative)

    @classmethod
    def from_atoms(cls, values, weights=None) -> "EmpiricalDistribution":
        """Build from (possibly repeated, unsorted) values; equal values are merged."""
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            raise DataError("cannot build a distribution from an empty sample")
        if not np.all(np.isfinite(values)):
            raise DataError("values must be finite")
        if weights is None:
            weights = np.ones_like(values)
        weights = np.asarray(weights, dtype=float).ravel()
        if weights.shape != values.shape or np.any(weights < 0) or not weights.sum() > 0:
            raise DataError("weights must be nonnegative, align with values and not all vanish")
        support, inverse = np.unique(values, return_inverse=True)
        masses = np.bincount(inverse, weights=weights, minlength=support.size)
        keep = masses > 0
        masses = masses[keep] / masses[keep].sum()
        return cls(support[keep], masses)

    @classmethod
    def point_mass(cls, value: float) -> "EmpiricalDistribution":
        return cls(np.array([value], dtype=float), np.array([1.0]))

    def __len__(self):
        return int(self.support.size)

    @property
    def is_binned(self) -> bool:
        return self.bins is not None

    def cdf(self, x):
        """Right-continuous distribution function."""
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(self.support, x, side="right")
        padded = np.concatenate(([0.0], self.cumulative))
        result = padded[index]
        return float(result) if result.ndim == 0 else result

    def quantile(self, p):
        """Generalized inverse: smallest atom x with cdf(x) >= p, for p in (0, 1]."""
        p = np.asarray(p, dtype=float)
        if np.any(~(p > 0)) or np.any(p > 1):
            raise UsageError("quantile level must lie in (0, 1]")
        index = np.minimum(np.searchsorted(self.cumulative, p, side="left"), self.support.size - 1)
        result = self.support[index]
        return float(result) if result.ndim == 0 else result

    def mean(self) -> float:
        return float(np.dot(self.masses, self.support))

    def variance(self) -> float:
        centered = self.support - self.mean()
        return float(np.dot(self.masses, centered * centered))

    def std(self) -> float:
        return float(np.sqrt(self.variance()))

    def translate(self, shift: float) -> "EmpiricalDistribution":
        """The translated measure nu_z(B) = nu(B - z)."""
        return EmpiricalDistribution(self.support + shift, self.masses)

    def same_as(self, other: "EmpiricalDistribution", atol: float = 1e-9) -> bool:
        """Atom-wise equality within ``atol``."""
        return (
            len(self) == len(other)
            and bool(np.allclose(self.support, other.support, rtol=0.0, atol=atol))
            and bool(np.allclose(self.masses, other.masses, rtol=0.0, atol=atol))
        )

    def summary(self) -> dict:
        return {
            "atoms": len(self),
            "mean": self.mean(),
            "std": self.std(),
            "min": float(self.support[0]),
            "max": float(self.support[-1]),
            "median": self.quantile(0.5),
        }

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "support": self.support.tolist(),
            "masses": self.masses.tolist(),
            "bin_width": self.bin_width,
        }
