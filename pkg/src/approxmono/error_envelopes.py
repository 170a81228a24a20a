"""Algebra of error tables: subadditivity checks and minorant envelopes.

Two envelopes are computed for a tabulated error function.  The subadditive
envelope is the largest subadditive table below the input; on a grid it is
the minimum of the table summed over all compositions of each offset into
positive parts, which a quadratic min-plus recurrence computes exactly.  The
absolutely subadditive envelope additionally allows signed parts, which turns
the minimization into a nonnegative-cost shortest-path problem on the integer
lattice.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    DEFAULT_TOL,
    ConfigurationError,
    ErrorFn,
    Witness,
    WitnessKind,
)


@dataclass(frozen=True)
class PowerErrorSpec:
    """Parameters of the power-law error table eps * u**p (zero at u = 0)."""

    epsilon: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not math.isfinite(self.p):
            raise ValueError(f"exponent must be finite, got {self.p}")


@dataclass(frozen=True)
class AlphaConfig:
    """Controls for the signed shortest-path envelope.

    ``mass_radius`` caps the accumulated offset index while composing signed
    parts; it must be at least the largest offset of the table it is used on.
    ``tolerance`` is the additive slack used by feasibility checks that ride
    on the envelope.
    """

    mass_radius: int
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if int(self.mass_radius) != self.mass_radius or self.mass_radius < 1:
            raise ConfigurationError(
                f"mass_radius must be a positive integer, got {self.mass_radius}"
            )
        object.__setattr__(self, "mass_radius", int(self.mass_radius))
        if not (math.isfinite(self.tolerance) and self.tolerance >= 0):
            raise ConfigurationError(
                f"tolerance must be finite and >= 0, got {self.tolerance}"
            )


def default_mass_radius(count: int) -> int:
    """Default accumulated-offset cap for a table with ``count`` offsets."""
    return 4 * (count - 1)


def power_error(spec: PowerErrorSpec, step: float, count: int) -> ErrorFn:
    """Tabulate eps * (k*step)**p at offsets k = 0..count-1, zero at k = 0."""
    if not (math.isfinite(step) and step > 0):
        raise ValueError(f"step must be positive, got {step}")
    if count < 2:
        raise ValueError(f"need at least 2 offsets, got {count}")
    vals = np.zeros(count)
    if spec.epsilon > 0:
        u = step * np.arange(1, count)
        with np.errstate(over="ignore", invalid="ignore"):
            vals[1:] = spec.epsilon * u**spec.p
    if not np.all(np.isfinite(vals)):
        raise OverflowError("power error table overflows the double range")
    return ErrorFn(step, vals)


def is_subadditive(
    phi: ErrorFn, tol: float = DEFAULT_TOL
) -> tuple[bool, Witness | None]:
    """Check phi[j+k] <= phi[j] + phi[k] + tol for all j, k >= 0, j+k < N."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    v = phi.values
    n = len(v)
    best_margin = tol
    best: tuple[int, int] | None = None
    for j in range(n):
        margins = v[j:] - v[j] - v[: n - j]
        k = int(np.argmax(margins))
        m = float(margins[k])
        if m > best_margin:
            best_margin = m
            best = (j, k)
    if best is None:
        return True, None
    j, k = best
    lhs = float(v[j + k])
    rhs = float(v[j] + v[k])
    return False, Witness(WitnessKind.SUBADDITIVE, (j, k), lhs, rhs)


def is_absolutely_subadditive(
    phi: ErrorFn, tol: float = DEFAULT_TOL
) -> tuple[bool, Witness | None]:
    """Check phi[|j+k|] <= phi[|j|] + phi[|k|] + tol over signed offsets.

    Signed index pairs with |j|, |k|, |j+k| all below the table length are
    examined; by the (j, k) -> (-j, -k) symmetry only j >= 0 is scanned.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    v = phi.values
    n = len(v)
    best_margin = tol
    best: tuple[int, int] | None = None
    for j in range(n):
        ks = np.arange(-(n - 1), n - j)
        margins = v[np.abs(j + ks)] - v[j] - v[np.abs(ks)]
        pos = int(np.argmax(margins))
        m = float(margins[pos])
        if m > best_margin:
            best_margin = m
            best = (j, int(ks[pos]))
    if best is None:
        return True, None
    j, k = best
    lhs = float(v[abs(j + k)])
    rhs = float(v[j] + v[abs(k)])
    return False, Witness(WitnessKind.ABS_SUBADDITIVE, (j, k), lhs, rhs)


def subadditive_envelope(phi: ErrorFn) -> ErrorFn:
    """Largest subadditive minorant of the table.

    ``out[k]`` is the cheapest way to write offset k as a sum of positive
    offsets, paying the table value for each part; ``out[0]`` equals the
    input at 0.  The output is subadditive, dominated by the input, and the
    map is idempotent and monotone in its argument.
    """
    v = phi.values
    n = len(v)
    env = v.astype(float).copy()
    for k in range(2, n):
        # split off a last part of size k-j from an optimally composed prefix
        candidates = env[1:k] + v[k - 1 : 0 : -1]
        m = candidates.min()
        if m < env[k]:
            env[k] = m
    return ErrorFn(phi.grid_step, env)


def _lattice_shortest_paths(costs: np.ndarray, mass_radius: int) -> np.ndarray:
    """Distances from 0 on the lattice {-M..M} with edges +-j of cost[j].

    Label-setting search over nonnegative costs; zero-cost edges are fine.
    Heap entries are (distance, node) so ties settle by node index, making
    the computation deterministic.  Stops once all nonnegative targets
    0..len(costs)-1 are settled.
    """
    n = len(costs)
    steps = costs[1:]
    nstep = n - 1
    size = 2 * mass_radius + 1
    src = mass_radius
    dist = np.full(size, np.inf)
    dist[src] = 0.0
    settled = np.zeros(size, dtype=bool)
    heap: list[tuple[float, int]] = [(0.0, src)]
    pending = n
    while heap and pending:
        du, u = heapq.heappop(heap)
        if settled[u] or du > dist[u]:
            continue
        settled[u] = True
        if src <= u < src + n:
            pending -= 1
        hi = min(u + nstep, size - 1)
        if hi > u:
            m = hi - u
            seg = dist[u + 1 : hi + 1]
            cand = du + steps[:m]
            mask = cand < seg
            if mask.any():
                seg[mask] = cand[mask]
                for off in np.nonzero(mask)[0].tolist():
                    heapq.heappush(heap, (float(cand[off]), u + 1 + off))
        lo = max(u - nstep, 0)
        if lo < u:
            m = u - lo
            seg = dist[lo:u]
            cand = du + steps[:m][::-1]
            mask = cand < seg
            if mask.any():
                seg[mask] = cand[mask]
                for off in np.nonzero(mask)[0].tolist():
                    heapq.heappush(heap, (float(cand[off]), lo + off))
    return dist


def absolutely_subadditive_envelope(
    phi: ErrorFn, cfg: AlphaConfig | None = None
) -> ErrorFn:
    """Largest absolutely subadditive minorant of the table.

    ``out[k]`` is the cheapest multiset of signed offsets summing to k, each
    offset below the table length in magnitude, paying the table value of the
    magnitude for every part.  Computed as a shortest path on the integer
    lattice capped at ``cfg.mass_radius`` accumulated offset; any multiset
    can be reordered so its running sums stay within the largest offset, so
    the result is already exact at the minimal legal radius and can only
    stay equal or shrink as the radius grows.

    The output is dominated by `subadditive_envelope` pointwise, and the two
    coincide whenever the input is nondecreasing.
    """
    v = phi.values
    n = len(v)
    mass_radius = cfg.mass_radius if cfg is not None else default_mass_radius(n)
    if mass_radius < n - 1:
        raise ConfigurationError(
            f"mass_radius {mass_radius} is below the largest table offset {n - 1}"
        )
    dist = _lattice_shortest_paths(v, mass_radius)
    out = dist[mass_radius : mass_radius + n].copy()
    # offset 0 needs at least one part: either the literal 0-offset entry or
    # a closing step back from a reachable node
    cycle = float((dist[mass_radius + 1 : mass_radius + n] + v[1:]).min())
    out[0] = min(float(v[0]), cycle)
    return ErrorFn(phi.grid_step, out)
