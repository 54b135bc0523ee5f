"""Rate-distortion curves for the trace-3 source family and CSV output."""
from __future__ import annotations

import io
from typing import Iterable

import numpy as np

from .ratedist import RatePoint, rd_curve
from .states import family_cm
from .symcore import Base

FIGURE1_TRACE = 3.0
FIGURE1_NS = (0.0, 0.05, 0.10, 0.15, 0.20, 0.25)
FIGURE1_NN_MAX = 2.0
FIGURE1_STEPS = 201

CSV_HEADER = ",".join(RatePoint.FIELDS)


def figure1_curves(base: Base = "bits") -> dict[float, list[RatePoint]]:
    """One curve per source photon number, pure (N_s = 0) through thermal (N_s = 0.25)."""
    grid = np.linspace(0.0, FIGURE1_NN_MAX, FIGURE1_STEPS)
    return {ns: rd_curve(family_cm(FIGURE1_TRACE, ns), grid, base) for ns in FIGURE1_NS}


def format_number(v: float) -> str:
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def curve_csv(points: Iterable[RatePoint]) -> str:
    buf = io.StringIO(newline="")
    buf.write(CSV_HEADER + "\n")
    for p in points:
        buf.write(",".join(format_number(v) for v in p.row()) + "\n")
    return buf.getvalue()


def figure1_filename(n_s: float) -> str:
    return f"figure1_ns{n_s:.2f}.csv"
