"""Transport plans and monotone score maps."""

from dataclasses import dataclass

import numpy as np

from fairscore.errors import DataError

MARGINAL_TOLERANCE = 1e-9


def _frozen(array, dtype=float) -> np.ndarray:
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def bin_indices(values, bin_width: float) -> np.ndarray:
    """Integer bin index floor(value / bin_width) of each value."""
    return np.floor(np.asarray(values, dtype=float) / bin_width).astype(np.int64)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """A coupling given as triples (source atom, target atom, mass)."""

    sources: np.ndarray
    targets: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        sources, targets, masses = _frozen(self.sources), _frozen(self.targets), _frozen(self.masses)
        if not (sources.shape == targets.shape == masses.shape) or sources.ndim != 1:
            raise DataError("plan triples must be 1-D arrays of equal length")
        if np.any(masses < 0):
            raise DataError("plan masses must be nonnegative")
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "masses", masses)

    def __len__(self):
        return int(self.masses.size)

    def triples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.sources.tolist(), self.targets.tolist(), self.masses.tolist()))

    def source_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct source atoms and the plan mass leaving each."""
        atoms, inverse = np.unique(self.sources, return_inverse=True)
        return atoms, np.bincount(inverse, weights=self.masses, minlength=atoms.size)

    def target_marginal(self) -> tuple[np.ndarray, np.ndarray]:
        atoms, inverse = np.unique(self.targets, return_inverse=True)
        return atoms, np.bincount(inverse, weights=self.masses, minlength=atoms.size)

    def is_monotone(self) -> bool:
        """No crossing: s < s' never pairs with t > t' among positive-mass triples."""
        live = self.masses > 0
        sources, targets = self.sources[live], self.targets[live]
        order = np.lexsort((targets, sources))
        return bool(np.all(np.diff(targets[order]) >= 0))

    def is_diagonal(self) -> bool:
        live = self.masses > 0
        return bool(np.all(self.sources[live] == self.targets[live]))

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {"triples": [list(t) for t in self.triples()]}


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    """
    Nondecreasing raw-to-fair score map.

    The knots are ``(sources[i], slope * sources[i] + offsets[i])``. A raw score x falling
    into the bin of knot i is sent to ``slope * x + offsets[i]``; plain maps (slope 0)
    send every score of a bin to the knot target. Without bins a raw score must hit a
    knot exactly. Calling the map evaluates the piecewise-linear interpolation through
    the knots, clamped to the end knots outside their range.
    """

    sources: np.ndarray
    offsets: np.ndarray
    slope: float = 0.0
    bin_width: float | None = None
    bins: np.ndarray | None = None

    def __post_init__(self):
        sources, offsets = _frozen(self.sources), _frozen(self.offsets)
        if sources.ndim != 1 or sources.shape != offsets.shape or sources.size == 0:
            raise DataError("a map needs matching, nonempty knot arrays")
        if np.any(np.diff(sources) <= 0):
            raise DataError("map sources must be strictly increasing")
        if not 0.0 <= self.slope <= 1.0:
            raise DataError(f"map slope must lie in [0, 1], got {self.slope!r}")
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "slope", float(self.slope))
        if self.bins is not None:
            bins = _frozen(self.bins, dtype=np.int64)
            if bins.shape != sources.shape or np.any(np.diff(bins) <= 0):
                raise DataError("map bins must be strictly increasing and align with the knots")
            if self.bin_width is None or not self.bin_width > 0:
                raise DataError("binned maps need a positive bin_width")
            object.__setattr__(self, "bins", bins)
        if np.any(np.diff(self.targets) < 0):
            raise DataError("map targets must be nondecreasing")

    @classmethod
    def from_knots(cls, knots, bin_width: float | None = None, bins=None) -> "MonotoneMap":
        knots = np.asarray(knots, dtype=float).reshape(-1, 2)
        return cls(knots[:, 0], knots[:, 1], 0.0, bin_width, bins)

    @classmethod
    def identity(cls, sources, bin_width: float | None = None, bins=None) -> "MonotoneMap":
        sources = np.asarray(sources, dtype=float)
        return cls(sources, np.zeros_like(sources), 1.0, bin_width, bins)

    @property
    def targets(self) -> np.ndarray:
        return self.slope * self.sources + self.offsets

    def knots(self) -> list[tuple[float, float]]:
        return list(zip(self.sources.tolist(), self.targets.tolist()))

    def __len__(self):
        return int(self.sources.size)

    def __call__(self, x):
        result = np.interp(np.asarray(x, dtype=float), self.sources, self.targets)
        return float(result) if np.ndim(result) == 0 else result

    def knot_index(self, raw) -> np.ndarray:
        """Knot index of each raw score; raises DataError outside the observed support."""
        raw = np.atleast_1d(np.asarray(raw, dtype=float))
        if self.bins is not None:
            keys, table = bin_indices(raw, self.bin_width), self.bins
        else:
            keys, table = raw, self.sources
        index = np.minimum(np.searchsorted(table, keys), table.size - 1)
        missing = table[index] != keys
        if np.any(missing):
            outside = raw[missing][:5].tolist()
            raise DataError(f"raw scores outside the mapped support: {outside}")
        return index

    def apply(self, raw):
        """Fair score(s) for raw score(s) under the exact bin lookup rule."""
        scalar = np.ndim(raw) == 0
        values = np.atleast_1d(np.asarray(raw, dtype=float))
        result = self.slope * values + self.offsets[self.knot_index(values)]
        return float(result[0]) if scalar else result

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        return {
            "knots": [list(k) for k in self.knots()],
            "slope": self.slope,
            "bin_width": self.bin_width,
        }
