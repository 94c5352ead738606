"""Curve CSV and report JSON formats.

CSV header is ``t,x,y,z`` optionally followed by
``x1,y1,z1,x2,y2,z2,x3,y3,z3`` (derivatives of order 1..3). Numbers use
Python's shortest round-trip ``repr``; lines end with LF.
"""

from __future__ import annotations

import io
import json
import math
from typing import IO

import numpy as np

from .exceptions import ArgumentError
from .geometry import SampledCurve, TzitzeicaReport
from .numkit import as_grid

__all__ = [
    "BASE_COLUMNS",
    "DERIV_COLUMNS",
    "CurveFormatError",
    "curve_to_array",
    "curve_from_array",
    "format_curve_csv",
    "write_curve_csv",
    "parse_curve_csv",
    "read_curve_csv",
    "format_report_json",
]

BASE_COLUMNS = ("t", "x", "y", "z")
DERIV_COLUMNS = ("x1", "y1", "z1", "x2", "y2", "z2", "x3", "y3", "z3")


class CurveFormatError(ArgumentError):
    """Malformed curve CSV; message names the offending row/column."""


def _fmt(v: float) -> str:
    v = float(v)
    if not math.isfinite(v):
        raise ArgumentError(f"cannot serialise non-finite value {v}")
    return repr(v)


def curve_to_array(curve: SampledCurve, derivs: bool = True) -> np.ndarray:
    """(n, 4) or (n, 13) matrix in CSV column order."""
    cols = [curve.t[None, :], curve.positions]
    if derivs:
        cols += [curve.derivative(k) for k in (1, 2, 3)]
    return np.vstack(cols).T


def curve_from_array(X, provenance: str = "external") -> SampledCurve:
    """Inverse of :func:`curve_to_array`; the t column must be uniform."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] not in (4, 13):
        raise CurveFormatError(f"expected 4 or 13 columns, got shape {X.shape}")
    t = X[:, 0]
    if np.any(np.diff(t) <= 0):
        bad = int(np.flatnonzero(np.diff(t) <= 0)[0]) + 1
        raise CurveFormatError(f"row {bad + 1}: t is not strictly increasing")
    try:
        grid = as_grid(t)
    except ArgumentError as exc:
        raise CurveFormatError(f"column t: {exc}") from None
    positions = X[:, 1:4].T
    derivatives = None
    if X.shape[1] == 13:
        derivatives = X[:, 4:13].T.reshape(3, 3, -1)
    return SampledCurve(grid, positions, derivatives, provenance)


def format_curve_csv(curve: SampledCurve, derivs: bool = False) -> str:
    header = list(BASE_COLUMNS) + (list(DERIV_COLUMNS) if derivs else [])
    rows = curve_to_array(curve, derivs)
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def write_curve_csv(curve: SampledCurve, stream: IO[str], derivs: bool = False) -> None:
    stream.write(format_curve_csv(curve, derivs))


def parse_curve_csv(text: str, provenance: str = "external") -> SampledCurve:
    """Parse CSV text, reporting the first malformed row or column."""
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise CurveFormatError("empty input")
    header = [h.strip() for h in lines[0].split(",")]
    if header not in (list(BASE_COLUMNS), list(BASE_COLUMNS + DERIV_COLUMNS)):
        raise CurveFormatError(f"row 1: unexpected header {','.join(header)!r}")
    width = len(header)
    values = np.empty((len(lines) - 1, width))
    for r, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != width:
            raise CurveFormatError(f"row {r}: expected {width} columns, found {len(cells)}")
        for c, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise CurveFormatError(f"row {r}, column {header[c]}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise CurveFormatError(f"row {r}, column {header[c]}: non-finite value")
            values[r - 2, c] = v
    if values.shape[0] < 7:
        raise CurveFormatError(f"need at least 7 data rows, found {values.shape[0]}")
    return curve_from_array(values, provenance)


def read_curve_csv(path: str, provenance: str | None = None) -> SampledCurve:
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_curve_csv(text, provenance or path)


def format_report_json(report: TzitzeicaReport, extra: dict | None = None) -> str:
    data = report.to_dict()
    if extra:
        data.update(extra)
    return json.dumps(data, indent=2, allow_nan=False) + "\n"
