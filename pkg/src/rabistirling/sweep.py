"""Parameter scans behind the efficiency figures and the critical-scaling check."""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cycle import (EFFECTIVE, CycleResult, StirlingSpec, carnot_efficiency, plateau_value,
                    run_cycle)
from .errors import CriticalPointError
from .medium import DEFAULT_CRITICAL_TOL, MediumParams, gap_for_g

PI = math.pi
OMEGA0 = 0.4 * PI
G1 = 0.1
POINTS = 64

CSV_COLUMNS = ("figure", "xi", "zeta", "gamma", "omega0", "g1", "g2", "T_C", "T_H", "alpha",
               "Q_AB", "Q_BC", "Q_CD", "Q_DA", "W", "Q_in", "eta", "eta_c",
               "sigma1", "sigma2", "Lambda", "flags")
RESULT_COLUMNS = CSV_COLUMNS[10:21]

FLAG_CRITICAL = "critical_point"


@dataclass(frozen=True)
class SweepSpec:
    """Grid of cycles.

    Each curve fixes one entry from every list that is not the axis; the axis
    runs along the curve.  ``axis`` is ``"xi"`` (needs ``gammas``), ``"gamma"``
    (needs ``xis``) or ``"g2"`` (needs ``gammas``).
    """

    figure: str
    axis: str
    axis_values: tuple
    T_Cs: tuple
    alphas: tuple
    gammas: tuple = ()
    xis: tuple = ()
    omega0: float = OMEGA0
    g1: float = G1
    medium_mode: str = EFFECTIVE
    fock_max: int | None = None
    critical_tol: float = DEFAULT_CRITICAL_TOL

    def __post_init__(self):
        vals = np.asarray(self.axis_values, dtype=float)
        if vals.size == 0:
            raise ValueError("axis must not be empty")
        if np.any(np.diff(vals) <= 0):
            raise ValueError("axis values must be strictly increasing")
        if self.axis not in ("xi", "gamma", "g2"):
            raise ValueError(f"unknown axis {self.axis!r}")
        outer = self.xis if self.axis == "gamma" else self.gammas
        if not outer:
            raise ValueError(f"axis {self.axis!r} needs a fixed {'xi' if self.axis == 'gamma' else 'gamma'} list")
        if not self.T_Cs or not self.alphas:
            raise ValueError("T_C and alpha lists must be non-empty")
        if min(self.T_Cs) <= 0 or min(self.alphas) <= 1 or self.omega0 <= 0:
            raise ValueError("need T_C > 0, alpha > 1, omega0 > 0")

    @property
    def outer(self) -> tuple:
        return self.xis if self.axis == "gamma" else self.gammas

    def curves(self):
        """(outer value, T_C, alpha) per curve, in emission order."""
        return list(itertools.product(self.outer, self.T_Cs, self.alphas))

    def points(self):
        for outer, T_C, alpha in self.curves():
            for a in self.axis_values:
                yield outer, T_C, alpha, float(a)


@dataclass(frozen=True)
class SweepRow:
    figure: str
    xi: float
    zeta: float
    gamma: float
    omega0: float
    g1: float
    g2: float
    T_C: float
    T_H: float
    alpha: float
    result: CycleResult | None
    flags: tuple = field(default=())

    def __getattr__(self, name):
        if name in RESULT_COLUMNS:
            return getattr(self.result, name) if self.result is not None else math.nan
        raise AttributeError(name)

    @property
    def is_engine(self) -> bool:
        return self.result is not None and self.result.is_engine

    def values(self) -> list:
        return [getattr(self, c) if c != "flags" else ";".join(self.flags) for c in CSV_COLUMNS]


def _point(spec: SweepSpec, outer, T_C, alpha, a) -> SweepRow:
    w0 = spec.omega0
    if spec.axis == "gamma":
        gamma, xi = a, outer
        g2 = math.sqrt(2.0) * xi / math.sqrt(gamma / w0)
    elif spec.axis == "xi":
        gamma, xi = outer, a
        g2 = math.sqrt(2.0) * xi / math.sqrt(gamma / w0)
    else:
        gamma, g2 = outer, a
        xi = g2 * math.sqrt(gamma / w0 / 2.0)
    T_H = alpha * T_C
    base = dict(figure=spec.figure, xi=xi, zeta=gamma / w0, gamma=gamma, omega0=w0, g1=spec.g1,
                g2=g2, T_C=T_C, T_H=T_H, alpha=alpha)
    try:
        cyc = StirlingSpec(spec.g1, g2, T_C, T_H, spec.medium_mode, spec.fock_max, spec.critical_tol)
        result = run_cycle(cyc, MediumParams(w0, gamma, xi * w0))
    except CriticalPointError:
        return SweepRow(**base, result=None, flags=(FLAG_CRITICAL,))
    return SweepRow(**base, result=result, flags=result.warnings)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every grid point; row order is fixed by the grid, not by scheduling."""
    pts = list(spec.points())
    if workers <= 1:
        return [_point(spec, *p) for p in pts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: _point(spec, *p), pts))


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def write_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


# ---------------------------------------------------------------- presets

def xi_at(g, gamma, omega0=OMEGA0):
    return g * math.sqrt(gamma / omega0 / 2.0)


def gamma_at(g, xi, omega0=OMEGA0):
    return 2.0 * xi * xi * omega0 / (g * g)


def _fig2(T_Cs, gammas, points):
    # shared xi axis keeping every curve in the normal phase and above g1
    lo = xi_at(0.12, max(gammas))
    hi = xi_at(0.98, min(gammas))
    return dict(axis="xi", axis_values=tuple(np.linspace(lo, hi, points)), gammas=gammas,
                T_Cs=T_Cs, alphas=(1.5,))


def _fig3(alpha, points):
    xi = 9.0
    axis = np.linspace(gamma_at(0.98, xi), 1000 * PI, points)
    return dict(axis="gamma", axis_values=tuple(axis), xis=(xi,),
                T_Cs=tuple(t * PI for t in (0.008, 0.016, 0.024, 0.032)), alphas=(alpha,))


def _fig4(gamma, alpha, points):
    axis = np.linspace(xi_at(1.02, gamma), xi_at(2.0, gamma), points)
    return dict(axis="xi", axis_values=tuple(axis), gammas=(gamma,),
                T_Cs=tuple(t * PI for t in (0.002, 0.006, 0.010, 0.014)), alphas=(alpha,))


_FIG2_GAMMAS = tuple(g * PI for g in (200, 300, 400, 500))
_FIG2_TCS = tuple(t * PI for t in (0.008, 0.016, 0.024, 0.032))

PRESET_BUILDERS = {
    "fig2a": lambda n: _fig2((0.008 * PI,), _FIG2_GAMMAS, n),
    "fig2b": lambda n: _fig2((0.016 * PI,), _FIG2_GAMMAS, n),
    "fig2c": lambda n: _fig2((0.024 * PI,), _FIG2_GAMMAS, n),
    "fig2d": lambda n: _fig2(_FIG2_TCS, (200 * PI,), n),
    "fig2e": lambda n: _fig2(_FIG2_TCS, (300 * PI,), n),
    "fig2f": lambda n: _fig2(_FIG2_TCS, (400 * PI,), n),
    "fig3a": lambda n: _fig3(1.4, n),
    "fig3b": lambda n: _fig3(1.6, n),
    "fig3c": lambda n: _fig3(1.8, n),
    "fig3d": lambda n: _fig3(2.0, n),
    "fig4a": lambda n: _fig4(200 * PI, 1.5, n),
    "fig4b": lambda n: _fig4(300 * PI, 1.5, n),
    "fig4c": lambda n: _fig4(400 * PI, 1.5, n),
    "fig4d": lambda n: _fig4(200 * PI, 1.4, n),
    "fig4e": lambda n: _fig4(200 * PI, 1.6, n),
    "fig4f": lambda n: _fig4(200 * PI, 1.8, n),
}

FIGURE_PRESETS = tuple(PRESET_BUILDERS)


def preset(name: str, points: int = POINTS, **overrides) -> SweepSpec:
    if name not in PRESET_BUILDERS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(FIGURE_PRESETS)}")
    kw = PRESET_BUILDERS[name](points)
    kw.update(overrides)
    return SweepSpec(figure=name, **kw)


# ---------------------------------------------------------------- critical scaling

@dataclass(frozen=True)
class ScalingPoint:
    g2: float
    eta: float
    eta_c: float
    plateau: float
    plateau_scaling: float
    predicted: float
    result: CycleResult


@dataclass(frozen=True)
class ScalingScan:
    points: tuple
    final_decade: tuple
    spread: float
    spread_scaling: float


def relative_spread(values) -> float:
    v = np.asarray(values, dtype=float)
    return float((v.max() - v.min()) / abs(v).min())


def scaling_scan(g1=G1, zeta=500.0, T_C=0.008 * PI, alpha=1.5, decades=4, omega0=OMEGA0,
                 per_decade=8, critical_tol=DEFAULT_CRITICAL_TOL) -> ScalingScan:
    """Approach g2 -> 1 from below with 1 - g2 log-spaced over [1e-2, 1e-(2+decades)].

    Each point records P = (eta_c - eta) |ln(gap(g2)/T_H)| and the same with
    |g2 - 1|^(1/2) in place of gap/T_H.  ``spread`` is (max - min)/min of P over
    the final decade.
    """
    if decades < 3:
        raise ValueError("need at least 3 decades")
    gamma = zeta * omega0
    params = MediumParams(omega0, gamma, 0.0)
    T_H = alpha * T_C
    dist = np.logspace(-2, -(2 + decades), decades * per_decade + 1)
    pts = []
    for d in dist:
        g2 = 1.0 - d
        spec = StirlingSpec(g1, g2, T_C, T_H, critical_tol=critical_tol)
        r = run_cycle(spec, params)
        ratio = gap_for_g(g2, omega0) / T_H
        pred = r.eta_c - r.Lambda / math.log(ratio)
        pts.append(ScalingPoint(g2, r.eta, r.eta_c, plateau_value(r, ratio),
                                plateau_value(r, math.sqrt(d)), pred, r))
    final = tuple(p for p, d in zip(pts, dist) if d <= 10.0 ** -(1 + decades) * 1.0000001)
    return ScalingScan(tuple(pts), final, relative_spread([p.plateau for p in final]),
                       relative_spread([p.plateau_scaling for p in final]))


def scaling_rows(scan: ScalingScan, zeta, omega0=OMEGA0) -> list[SweepRow]:
    gamma = zeta * omega0
    rows = []
    for p in scan.points:
        r = p.result
        rows.append(SweepRow("scaling", p.g2 * math.sqrt(zeta / 2.0), zeta, gamma, omega0, r.g1, r.g2,
                             r.T_C, r.T_H, r.alpha, r, r.warnings))
    return rows


def carnot_ratio(rows) -> np.ndarray:
    return np.array([r.eta / carnot_efficiency(r.alpha) for r in rows])
