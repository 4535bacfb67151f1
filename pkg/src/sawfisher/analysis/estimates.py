"""Connective-constant envelopes and truncated critical-exponent diagnostics.

Nothing here extrapolates: the exponent numbers are plain least-squares
slopes over a reported window and are labelled heuristic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import EmptySeries, InsufficientData
from ..lattice import BallGraph, VertexId, bfs_distance
from ..saw.counts import CountSeries, DisplacementSeries, two_point_table

MIN_POINTS = 8


@dataclass
class MuEstimate:
    roots: list[float]
    ratios: list[Fraction]
    upper_bound: float | None
    in_unit_range: bool

    @property
    def last_root(self) -> float:
        return self.roots[-1]

    @property
    def last_ratio(self) -> Fraction:
        return self.ratios[-1]

    def to_dict(self) -> dict:
        return {
            "roots": {str(n): r for n, r in enumerate(self.roots, start=1)},
            "ratios": {str(n): float(r) for n, r in enumerate(self.ratios, start=1)},
            "upper_bound": self.upper_bound,
            "in_unit_range": self.in_unit_range,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _root(c: int, n: int) -> float:
    return math.exp(math.log(c) / n)


def estimate_mu(series: CountSeries, vertex_transitive: bool = False, cubic: bool = True) -> MuEstimate:
    """Root estimates ``c_n^(1/n)`` and ratio estimates ``c_{n+1}/c_n``.

    For a single-vertex series on a vertex-transitive graph, counts are
    submultiplicative, so every root estimate bounds the connective constant
    from above; the smallest is reported.  The unit-range sanity check
    applies to the last ratio estimate of cubic inputs.
    """
    counts = series.counts[1:]
    if not counts or any(c <= 0 for c in counts):
        raise EmptySeries("EmptySeries: need positive counts for n >= 1")
    roots = [_root(c, n) for n, c in enumerate(counts, start=1)]
    ratios = [Fraction(b, a) for a, b in zip(counts, counts[1:])]
    upper = min(roots) if (vertex_transitive and series.single_vertex) else None
    ok = True
    if cubic and ratios:
        ok = 1 <= ratios[-1] <= 2
    return MuEstimate(roots, ratios, upper, ok)


@dataclass
class Regression:
    slope: float
    intercept: float
    residual: float
    window: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "rms_residual": self.residual,
            "window": list(self.window),
        }


@dataclass
class DiagnosticsReport:
    gamma: float
    gamma_fit: Regression
    nu: float
    nu_fit: Regression
    y_table: dict[float, float]
    v_table: dict[float, float]
    fisher_residual: float | None = None
    note: str = "heuristic least-squares slopes on truncated data"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "gamma_fit": self.gamma_fit.to_dict(),
            "nu": self.nu,
            "nu_fit": self.nu_fit.to_dict(),
            "Y": {repr(k): v for k, v in self.y_table.items()},
            "V": {repr(k): v for k, v in self.v_table.items()},
            "fisher_residual": self.fisher_residual,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _fit(ns: list[int], ys: list[float]) -> Regression:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return Regression(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))), (ns[0], ns[-1]))


def _window(ns: list[int]) -> list[int]:
    if len(ns) < MIN_POINTS:
        raise InsufficientData(f"InsufficientData: {len(ns)} usable lengths, need {MIN_POINTS}")
    size = max(MIN_POINTS, len(ns) // 2)
    return ns[-size:]


def truncated_y(series: CountSeries, x: float, y: float) -> float:
    """``sum_n c_n x^n / n^y`` with the n = 0 denominator read as 1."""
    total = 0.0
    for n, c in enumerate(series.counts):
        term = c * x**n
        total += term if n == 0 else term / n**y
    return total


def truncated_v(disp: DisplacementSeries, z: float) -> float:
    total = 0.0
    for n, m in enumerate(disp.mean_sq()):
        if n == 0 or not disp.counts[n]:
            continue
        total += m / n ** (2 * z + 1)
    return total


def exponent_diagnostics(
    series: CountSeries,
    disp: DisplacementSeries,
    mu: float,
    y_grid=(0.0, 0.5, 1.0, 1.5, 2.0),
    z_grid=(0.0, 0.25, 0.5, 0.75, 1.0),
    eta: float | None = None,
) -> DiagnosticsReport:
    if mu < 1:
        raise ValueError("mu must be >= 1")
    ns = [n for n, c in enumerate(series.counts) if n >= 1 and c > 0]
    win = _window(ns)
    log_mu = math.log(mu)
    gfit = _fit(win, [math.log(series.counts[n]) - n * log_mu for n in win])
    msd = disp.mean_sq()
    dn = [n for n in range(1, disp.n_max + 1) if disp.counts[n] and msd[n] > 0]
    dwin = _window(dn)
    nfit = _fit(dwin, [math.log(msd[n]) for n in dwin])
    gamma = gfit.slope + 1
    nu = nfit.slope / 2
    x = 1 / mu
    y_table = {float(y): truncated_y(series, x, y) for y in y_grid}
    v_table = {float(z): truncated_v(disp, z) for z in z_grid}
    resid = None if eta is None else gamma - nu * (2 - eta)
    return DiagnosticsReport(gamma, gfit, nu, nfit, y_table, v_table, resid)


def two_point_decay(
    ball: BallGraph, pairs: list[tuple[VertexId, VertexId]], x: float, n_max: int, workers: int = 1
) -> list[dict]:
    """Truncated two-point sums against graph distance, one row per pair."""
    by_source: dict[VertexId, list[VertexId]] = {}
    for v, w in pairs:
        by_source.setdefault(v, []).append(w)
    rows = []
    for v, targets in by_source.items():
        table = two_point_table(ball, v, targets, n_max, workers)
        dist = bfs_distance(ball, v)
        for w in targets:
            counts = table[w]
            z = sum(c * x**n for n, c in enumerate(counts))
            rows.append(
                {
                    "source": v.label(),
                    "target": w.label(),
                    "distance": dist[w],
                    "degree": n_max,
                    "value": z,
                }
            )
    return rows
