"""Shared generators and brute-force oracles for the test suite.

Random data is drawn from a dyadic lattice (integer multiples of 2**-16)
so that every sum and difference the library forms is exact in double
precision; equalities and inequalities asserted by the tests then hold
bit-for-bit instead of up to rounding noise.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from approxmono import (
    ErrorFn,
    Grid,
    SampledFn,
    monotone_lower_envelope,
)

SCALE = 2.0**-16


def dyadic(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    """Uniform values on the dyadic lattice inside [lo, hi]."""
    lo_i = math.ceil(lo / SCALE)
    hi_i = math.floor(hi / SCALE)
    return rng.integers(lo_i, hi_i + 1, size).astype(float) * SCALE


def rand_fn(rng: np.random.Generator, grid: Grid, amp: float = 2.0) -> SampledFn:
    return SampledFn(grid, dyadic(rng, -amp, amp, grid.count))


def rand_error(
    rng: np.random.Generator,
    n: int,
    step: float = 1.0,
    lo: float = 0.0,
    hi: float = 1.0,
    zero_at_origin: bool = True,
) -> ErrorFn:
    vals = dyadic(rng, lo, hi, n)
    if zero_at_origin:
        vals[0] = 0.0
    return ErrorFn(step, vals)


def rand_concave_increasing_error(
    rng: np.random.Generator, n: int, step: float = 1.0
) -> ErrorFn:
    """Increasing subadditive table: cumulative sums of nonincreasing gains."""
    gains = np.sort(dyadic(rng, SCALE, 0.5, n - 1))[::-1]
    vals = np.concatenate([[0.0], np.cumsum(gains)])
    return ErrorFn(step, vals)


def mono_member(rng: np.random.Generator, grid: Grid, phi: ErrorFn) -> SampledFn:
    """Random function passing the monotone check against phi exactly."""
    return monotone_lower_envelope(rand_fn(rng, grid), phi)


def separating_step_fn(grid: Grid, phi: ErrorFn, split: int) -> SampledFn:
    """Zero left of the split node, minus the error table right of it.

    For increasing subadditive phi vanishing at 0, this passes the Hölder
    check against phi but drops by phi[k] across offset k, so it fails the
    monotone check against any table strictly below phi at k.
    """
    vals = np.zeros(grid.count)
    for i in range(split + 1, grid.count):
        vals[i] = -phi.values[i - split]
    return SampledFn(grid, vals)


def brute_sigma(values) -> np.ndarray:
    """Minimum of the table summed over all compositions of each offset."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    out = np.empty(n)
    out[0] = values[0]
    for k in range(1, n):
        best = math.inf
        for mask in range(1 << (k - 1)):
            cost = 0.0
            prev = 0
            for pos in range(1, k):
                if (mask >> (pos - 1)) & 1:
                    cost = cost + float(values[pos - prev])
                    prev = pos
            cost = cost + float(values[k - prev])
            if cost < best:
                best = cost
        out[k] = best
    return out


def brute_alpha(values) -> np.ndarray:
    """Minimum over signed-offset multisets, searched under a cost budget.

    Exhaustive over every multiset whose cost stays below twice the largest
    table value (no cheaper candidate can exist beyond that, since a single
    direct part already costs at most the maximum).  Requires strictly
    positive costs away from offset 0 so the search terminates.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    assert n >= 2 and values[1:].min() > 0, "oracle needs positive step costs"
    steps = [(j, float(values[j])) for j in range(1, n)]
    steps += [(-j, float(values[j])) for j in range(1, n)]
    best = [float(values[k]) for k in range(n)]
    budget = 2.0 * float(values.max())

    def dfs(start: int, total: int, cost: float) -> None:
        for idx in range(start, len(steps)):
            d, c = steps[idx]
            nc = cost + c
            if nc >= budget or nc >= max(best):
                continue
            nt = total + d
            if 0 <= nt < n and nc < best[nt]:
                best[nt] = nc
            dfs(idx, nt, nc)

    dfs(0, 0, 0.0)
    return np.array(best)


def bellman_ford_alpha(values, mass_radius: int) -> np.ndarray:
    """Signed-offset minimization by label-correcting rounds.

    Independent of the label-setting implementation; handles zero costs.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    size = 2 * mass_radius + 1
    dist = np.full(size, np.inf)
    dist[mass_radius] = 0.0
    for _ in range(size):
        prev = dist.copy()
        for j in range(1, n):
            c = values[j]
            dist[j:] = np.minimum(dist[j:], dist[: size - j] + c)
            dist[: size - j] = np.minimum(dist[: size - j], dist[j:] + c)
        if np.array_equal(prev, dist):
            break
    out = dist[mass_radius : mass_radius + n].copy()
    cycle = (dist[mass_radius + 1 : mass_radius + n] + values[1:]).min()
    out[0] = min(values[0], cycle)
    return out


def brute_variation(fv, table, a: int, b: int) -> float:
    """Maximal partition variation by enumerating interior node subsets."""
    fv = np.asarray(fv, dtype=float)
    table = np.asarray(table, dtype=float)
    interior = list(range(a + 1, b))
    best = -math.inf
    for r in range(len(interior) + 1):
        for chosen in itertools.combinations(interior, r):
            nodes = [a, *chosen, b]
            acc = 0.0
            for x, y in zip(nodes, nodes[1:]):
                acc = acc + (abs(float(fv[y] - fv[x])) - float(table[y - x]))
            if acc > best:
                best = acc
    return best
