"""Uniform grids, sampled functions, error tables, and membership checks.

The data model is deliberately small: a `Grid` is an arithmetic progression
of nodes, a `SampledFn` is one real value per node, and an `ErrorFn` tabulates
a nonnegative error allowance per offset multiple of the grid step.  All
types are immutable after construction and every operation is a pure
function, so everything here is safe to call concurrently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal, Sequence

import numpy as np

#: Additive slack used by all inequality checks unless the caller overrides it.
#: Envelope outputs come out of floating-point min/max chains, so exact
#: comparisons would flag harmless last-ulp noise.
DEFAULT_TOL = 1e-9

#: Relative tolerance for deciding that sample spacings agree.
SPACING_RTOL = 1e-9


class GridError(ValueError):
    """Invalid construction parameters for a grid or grid-shaped table."""


class DimensionMismatchError(ValueError):
    """Operands do not live on compatible grids or offset ranges."""


class IngestionError(ValueError):
    """Sample records cannot be interpreted as a uniform grid."""


class ConfigurationError(ValueError):
    """An algorithm configuration value is out of range."""


class PreconditionError(ValueError):
    """A mathematical precondition failed.

    When the failure is exhibited by a concrete index pair, the violating
    `Witness` is attached so callers can report it.
    """

    def __init__(self, message: str, witness: "Witness | None" = None):
        super().__init__(message)
        self.witness = witness


class WitnessKind(str, Enum):
    MONOTONE = "monotone-violation"
    HOLDER = "holder-violation"
    SUBADDITIVE = "subadd-violation"
    ABS_SUBADDITIVE = "abs-subadd-violation"
    SANDWICH = "sandwich-violation"


@dataclass(frozen=True)
class Witness:
    """Index tuple exhibiting a failed inequality, with both sides recorded.

    The stored pair always realizes the maximal violation found, so repeated
    runs on identical inputs report the same witness.
    """

    kind: WitnessKind
    indices: tuple[int, ...]
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "indices": list(self.indices),
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True)
class Grid:
    """Uniform grid: nodes origin + i*step for 0 <= i < count."""

    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.origin, self.step)):
            raise GridError("grid origin and step must be finite")
        if self.step <= 0:
            raise GridError(f"grid step must be positive, got {self.step}")
        if int(self.count) != self.count or self.count < 2:
            raise GridError(f"grid needs at least 2 nodes, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))

    def node(self, i: int) -> float:
        return self.origin + i * self.step

    def nodes(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.count)

    @property
    def length(self) -> float:
        """Physical length spanned by the grid."""
        return (self.count - 1) * self.step


def make_grid(origin: float, step: float, count: int) -> Grid:
    """Construct a validated uniform grid."""
    return Grid(origin, step, count)


def _frozen_values(values, length: int | None, label: str) -> np.ndarray:
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1:
        raise GridError(f"{label} values must be one-dimensional")
    if length is not None and len(vals) != length:
        raise DimensionMismatchError(
            f"{label} has {len(vals)} values but the grid has {length} nodes"
        )
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise GridError(f"{label} value at position {bad} is not finite")
    vals = vals.copy()
    vals.setflags(write=False)
    return vals


@dataclass(frozen=True, eq=False)
class SampledFn:
    """Real function sampled at every node of a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _frozen_values(self.values, self.grid.count, "function")
        )

    def __neg__(self) -> "SampledFn":
        return SampledFn(self.grid, -self.values)

    def window(self, start: int, stop: int) -> "SampledFn":
        """Restriction to node indices start..stop-1 (at least 2 nodes)."""
        if not (0 <= start < stop <= self.grid.count):
            raise ValueError(f"invalid window [{start}, {stop})")
        sub = Grid(self.grid.node(start), self.grid.step, stop - start)
        return SampledFn(sub, self.values[start:stop])


@dataclass(frozen=True, eq=False)
class ErrorFn:
    """Nonnegative error allowance tabulated at offsets 0, h, 2h, ...

    ``values[k]`` is the allowance at physical offset ``k * grid_step``.
    """

    grid_step: float
    values: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.grid_step) and self.grid_step > 0):
            raise GridError(f"error table step must be positive, got {self.grid_step}")
        object.__setattr__(self, "grid_step", float(self.grid_step))
        vals = _frozen_values(self.values, None, "error table")
        if len(vals) < 2:
            raise GridError("error table needs at least 2 offsets")
        if np.any(vals < 0):
            bad = int(np.flatnonzero(vals < 0)[0])
            raise GridError(f"error table value at offset {bad} is negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def offsets(self) -> np.ndarray:
        return self.grid_step * np.arange(len(self.values))


def steps_compatible(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=SPACING_RTOL, abs_tol=0.0)


def offsets_table(f: SampledFn, phi: ErrorFn) -> np.ndarray:
    """Error values aligned with f's grid offsets, or raise on mismatch."""
    if not steps_compatible(phi.grid_step, f.grid.step):
        raise DimensionMismatchError(
            f"error table step {phi.grid_step} does not match grid step {f.grid.step}"
        )
    if len(phi.values) < f.grid.count:
        raise DimensionMismatchError(
            f"error table covers {len(phi.values)} offsets, grid needs {f.grid.count}"
        )
    return phi.values


def is_phi_monotone(
    f: SampledFn, phi: ErrorFn, tol: float = DEFAULT_TOL
) -> tuple[bool, Witness | None]:
    """Check f[i] <= f[j] + phi[j-i] + tol for all node pairs i <= j.

    Returns ``(True, None)`` on success, otherwise ``(False, witness)`` where
    the witness records the pair with the largest violation.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    table = offsets_table(f, phi)
    v = f.values
    n = len(v)
    best_margin = tol
    best: tuple[int, int] | None = None
    for k in range(n):
        margins = (v[: n - k] - v[k:]) - table[k]
        i = int(np.argmax(margins))
        m = float(margins[i])
        if m > best_margin:
            best_margin = m
            best = (i, i + k)
    if best is None:
        return True, None
    i, j = best
    lhs = float(v[i])
    rhs = float(v[j] + table[j - i])
    return False, Witness(WitnessKind.MONOTONE, (i, j), lhs, rhs)


def is_phi_holder(
    f: SampledFn, phi: ErrorFn, tol: float = DEFAULT_TOL
) -> tuple[bool, Witness | None]:
    """Check |f[i] - f[j]| <= phi[|i-j|] + tol for all node pairs.

    Equivalent to both f and -f passing `is_phi_monotone`.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    table = offsets_table(f, phi)
    v = f.values
    n = len(v)
    best_margin = tol
    best: tuple[int, int] | None = None
    for k in range(n):
        margins = np.abs(v[: n - k] - v[k:]) - table[k]
        i = int(np.argmax(margins))
        m = float(margins[i])
        if m > best_margin:
            best_margin = m
            best = (i, i + k)
    if best is None:
        return True, None
    i, j = best
    lhs = float(abs(v[i] - v[j]))
    rhs = float(table[j - i])
    return False, Witness(WitnessKind.HOLDER, (i, j), lhs, rhs)


def cone_combine(
    coeffs: Sequence[float],
    fns: Sequence[SampledFn],
    errs: Sequence[ErrorFn],
    mode: Literal["monotone", "holder"],
) -> tuple[SampledFn, ErrorFn]:
    """Combine (f_i, phi_i) pairs linearly, producing a pair of the same kind.

    In ``monotone`` mode the coefficients must be nonnegative and the output
    error table is ``sum(a_i * phi_i)``; in ``holder`` mode arbitrary signs
    are allowed and the table is ``sum(|a_i| * phi_i)``.  If every input pair
    passes the corresponding membership check, so does the output pair.
    """
    if mode not in ("monotone", "holder"):
        raise ValueError(f"unknown mode {mode!r}")
    if not (len(coeffs) == len(fns) == len(errs)) or not fns:
        raise ValueError("coeffs, fns and errs must be nonempty and equally long")
    grid = fns[0].grid
    for f in fns:
        if f.grid != grid:
            raise DimensionMismatchError("all functions must share one grid")
    if mode == "monotone" and any(c < 0 for c in coeffs):
        raise ValueError("monotone mode requires nonnegative coefficients")
    n = grid.count
    fvals = np.zeros(n)
    evals = np.zeros(n)
    for c, f, e in zip(coeffs, fns, errs):
        table = offsets_table(f, e)
        fvals = fvals + c * f.values
        weight = c if mode == "monotone" else abs(c)
        evals = evals + weight * table[:n]
    return SampledFn(grid, fvals), ErrorFn(grid.step, evals)


def pointwise_extrema(
    fns: Sequence[SampledFn], which: Literal["sup", "inf"]
) -> SampledFn:
    """Nodewise maximum (``sup``) or minimum (``inf``) of a finite family.

    Membership in the monotone or Hölder class with a shared error table is
    preserved by both operations.
    """
    if which not in ("sup", "inf"):
        raise ValueError(f"unknown extremum {which!r}")
    if not fns:
        raise ValueError("need at least one function")
    grid = fns[0].grid
    for f in fns:
        if f.grid != grid:
            raise DimensionMismatchError("all functions must share one grid")
    stacked = np.vstack([f.values for f in fns])
    out = stacked.max(axis=0) if which == "sup" else stacked.min(axis=0)
    return SampledFn(grid, out)


def ingest_samples(records: Iterable[tuple[float, float]]) -> SampledFn:
    """Build a SampledFn from (t, value) records on a uniform time grid.

    Requires at least two records with strictly increasing, uniformly spaced
    abscissas (relative spacing tolerance 1e-9) and finite values.  The grid
    step is the median spacing; nonuniform input is rejected rather than
    resampled.
    """
    recs = [(float(t), float(v)) for t, v in records]
    if len(recs) < 2:
        raise IngestionError(f"need at least 2 records, got {len(recs)}")
    for i, (t, v) in enumerate(recs):
        if not (math.isfinite(t) and math.isfinite(v)):
            raise IngestionError(f"record {i}: non-finite entry ({t}, {v})")
    ts = np.array([t for t, _ in recs])
    vs = np.array([v for _, v in recs])
    diffs = np.diff(ts)
    for i, d in enumerate(diffs):
        if d <= 0:
            word = "duplicate" if d == 0 else "decreasing"
            raise IngestionError(f"record {i + 1}: {word} abscissa {ts[i + 1]}")
    step = float(np.median(diffs))
    for i, d in enumerate(diffs):
        if abs(d - step) > SPACING_RTOL * step:
            raise IngestionError(
                f"record {i + 1}: spacing {d} deviates from inferred step {step}"
            )
    return SampledFn(Grid(float(ts[0]), step, len(recs)), vs)
