"""CSV serialization for sampled functions and error tables.

Sample files carry a ``t,value`` header, error tables a ``u,phi`` header with
offsets ascending from 0.  Floats are written with 17 significant digits so
doubles round-trip exactly; lines end with LF.
"""
from __future__ import annotations

import numpy as np

from .grid import ErrorFn, IngestionError, SampledFn, ingest_samples

SAMPLES_HEADER = "t,value"
ERROR_HEADER = "u,phi"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def samples_to_csv(f: SampledFn) -> str:
    ts = f.grid.nodes()
    lines = [SAMPLES_HEADER]
    lines.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(ts, f.values))
    return "\n".join(lines) + "\n"


def error_to_csv(phi: ErrorFn) -> str:
    us = phi.offsets()
    lines = [ERROR_HEADER]
    lines.extend(f"{_fmt(u)},{_fmt(v)}" for u, v in zip(us, phi.values))
    return "\n".join(lines) + "\n"


def _parse_rows(text: str, header: str) -> list[tuple[float, float]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != header:
        found = lines[0].strip() if lines else "<empty>"
        raise IngestionError(f"expected header {header!r}, found {found!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise IngestionError(f"line {lineno}: expected 2 fields, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise IngestionError(f"line {lineno}: cannot parse {line!r}") from None
    return rows


def samples_from_csv(text: str) -> SampledFn:
    return ingest_samples(_parse_rows(text, SAMPLES_HEADER))


def error_from_csv(text: str) -> ErrorFn:
    rows = _parse_rows(text, ERROR_HEADER)
    if len(rows) < 2:
        raise IngestionError(f"error table needs at least 2 rows, got {len(rows)}")
    if rows[0][0] != 0.0:
        raise IngestionError(f"error table offsets must start at 0, got {rows[0][0]}")
    # reuse the uniform-spacing validation, then reinterpret as offsets
    as_fn = ingest_samples(rows)
    vals = np.array([v for _, v in rows])
    if np.any(vals < 0):
        bad = int(np.flatnonzero(vals < 0)[0])
        raise IngestionError(f"error table row {bad} is negative")
    return ErrorFn(as_fn.grid.step, vals)
