"""Quasistatic four-stroke Stirling cycle on the Rabi medium.

Corners: A = (T_H, g1), B = (T_H, g2), C = (T_C, g2), D = (T_C, g1).
Isothermal strokes A-B and C-D exchange T * dS; isochoric strokes B-C and D-A
exchange the internal-energy change.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .errors import DegenerateCycleError, DomainError, NotAnEngineError, SizeError
from .fullmodel import MAX_DIM, converged_spectrum, lowest_levels
from .medium import DEFAULT_CRITICAL_TOL, EffectiveSpectrum, MediumParams, Phase, spectrum_for_g
from .thermo import occupation, spectrum_thermo, tower_entropy

log = logging.getLogger(__name__)

EFFECTIVE = "effective"
EXACT = "exact"

# thermal weight of the excluded spin branch above which the effective model is suspect
BRANCH_WEIGHT_LIMIT = 1e-6
# exact-mode level budget: keep every level within this many T_H of the ground state
EXACT_ENERGY_WINDOW = 40.0
EXACT_MAX_LEVELS = 2000

FLAG_NOT_ENGINE = "not_an_engine"
FLAG_BRANCH = "excluded_branch_populated"
FLAG_CROSSES = "crosses_critical"
FLAG_UNCONVERGED = "exact_unconverged"


@dataclass(frozen=True)
class StirlingSpec:
    """Cycle definition.

    ``medium_mode`` is ``"effective"`` (closed-form spectra) or ``"exact"``
    (converged Fock-space spectra; ``fock_max=None`` picks the cutoff
    automatically).
    """

    g1: float
    g2: float
    T_C: float
    T_H: float
    medium_mode: str = EFFECTIVE
    fock_max: int | None = None
    critical_tol: float = DEFAULT_CRITICAL_TOL

    def __post_init__(self):
        if self.g1 < 0:
            raise DomainError(f"g1 must be non-negative, got {self.g1}")
        if self.g1 == self.g2:
            raise DegenerateCycleError(f"g1 == g2 == {self.g1}: the cycle encloses no area")
        if self.g1 > self.g2:
            raise DomainError(f"need g1 < g2, got g1={self.g1}, g2={self.g2}")
        if not self.T_C > 0:
            raise DomainError(f"T_C must be positive, got {self.T_C}")
        if not self.T_H > self.T_C:
            raise DomainError(f"need T_H > T_C, got T_H={self.T_H}, T_C={self.T_C}")
        if self.medium_mode not in (EFFECTIVE, EXACT):
            raise DomainError(f"unknown medium mode {self.medium_mode!r}")

    @classmethod
    def from_alpha(cls, g1, g2, T_C, alpha, **kw) -> "StirlingSpec":
        if not alpha > 1:
            raise DomainError(f"alpha must exceed 1, got {alpha}")
        return cls(g1, g2, T_C, alpha * T_C, **kw)

    @property
    def alpha(self) -> float:
        return self.T_H / self.T_C


@dataclass(frozen=True)
class CycleResult:
    g1: float
    g2: float
    T_C: float
    T_H: float
    Q_AB: float
    Q_BC: float
    Q_CD: float
    Q_DA: float
    W: float
    Q_in: float
    eta: float
    eta_c: float
    sigma1: float
    sigma2: float
    Lambda: float
    dS_AB: float
    dS_BC: float
    dS_CD: float
    dS_DA: float
    S_A: float
    S_B: float
    S_C: float
    S_D: float
    U_A: float
    U_B: float
    U_C: float
    U_D: float
    # eta_c - eta from -Lambda / (dS_AB (1 + sigma2)); keeps full relative
    # precision where eta itself rounds to eta_c
    carnot_deficit: float = math.nan
    warnings: tuple = field(default=())

    @property
    def alpha(self) -> float:
        return self.T_H / self.T_C

    @property
    def is_engine(self) -> bool:
        # decided on the scaled heats, which stay finite when W and Q_in underflow
        return FLAG_NOT_ENGINE not in self.warnings

    @property
    def entropy_closure(self) -> float:
        return self.dS_AB + self.dS_BC + self.dS_CD + self.dS_DA

    def require_engine(self) -> "CycleResult":
        if not self.is_engine:
            raise NotAnEngineError(
                f"cycle is not an engine: W={self.W:.6g}, Q_in={self.Q_in:.6g}", result=self)
        return self


def carnot_efficiency(alpha: float) -> float:
    if not alpha > 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    return 1.0 - 1.0 / alpha


def _assemble(g1, g2, T_C, T_H, q, ds, S, U, scale, flags):
    """Combine per-stroke heats ``q`` and entropy changes ``ds`` measured in units of ``scale``.

    Ratios (eta, sigma1, sigma2) are formed before rescaling so they survive
    when the bare heats underflow.
    """
    q_ab, q_bc, q_cd, q_da = q
    ds_ab, ds_bc, ds_cd, ds_da = ds
    w = q_ab + q_bc + q_cd + q_da
    q_in = q_ab + q_da
    eta_c = carnot_efficiency(T_H / T_C)
    eta = w / q_in if q_in != 0 else math.nan
    sigma1 = (q_bc - T_C * (ds_da + ds_bc)) / q_ab if q_ab != 0 else math.nan
    sigma2 = q_da / q_ab if q_ab != 0 else math.nan
    lam = (1.0 - eta_c) * (q_da / T_H + q_bc / T_C - ds_da - ds_bc)
    deficit = -lam / (ds_ab * (1.0 + sigma2)) if ds_ab != 0 else math.nan
    flags = list(flags)
    if not (w > 0 and q_in > 0):
        flags.append(FLAG_NOT_ENGINE)
    return CycleResult(
        g1, g2, T_C, T_H,
        Q_AB=q_ab * scale, Q_BC=q_bc * scale, Q_CD=q_cd * scale, Q_DA=q_da * scale,
        W=w * scale, Q_in=q_in * scale, eta=eta, eta_c=eta_c,
        sigma1=sigma1, sigma2=sigma2, Lambda=lam * scale,
        dS_AB=ds_ab * scale, dS_BC=ds_bc * scale, dS_CD=ds_cd * scale, dS_DA=ds_da * scale,
        S_A=S[0], S_B=S[1], S_C=S[2], S_D=S[3],
        U_A=U[0], U_B=U[1], U_C=U[2], U_D=U[3], carnot_deficit=deficit,
        warnings=tuple(flags),
    )


def cycle_from_spectra(low: EffectiveSpectrum, high: EffectiveSpectrum, T_C: float, T_H: float,
                       flags=()) -> CycleResult:
    """Cycle between the closed-form towers ``low`` (at g1) and ``high`` (at g2)."""
    if not (T_H > T_C > 0):
        raise DomainError("need T_H > T_C > 0")
    corners = [(low, T_H), (high, T_H), (high, T_C), (low, T_C)]  # A, B, C, D
    xs = [sp.gap / T for sp, T in corners]
    if min(xs) <= 0:
        raise DomainError("cycle needs positive gaps")
    # common factor e^-shift pulled out of every thermal quantity; only legal when
    # the ln(d) terms cancel, i.e. both couplings share one degeneracy
    shift = min(xs) if low.degeneracy == high.degeneracy else 0.0
    u = [sp.gap * occupation(x, shift) for (sp, _), x in zip(corners, xs)]
    s = [tower_entropy(x, shift) for x in xs]
    dlog = math.log(high.degeneracy / low.degeneracy)
    ds_ab = s[1] - s[0] + dlog
    ds_bc = s[2] - s[1]
    ds_cd = s[3] - s[2] - dlog
    ds_da = s[0] - s[3]
    q = (T_H * ds_ab, u[2] - u[1], T_C * ds_cd, u[0] - u[3])
    scale = math.exp(-shift)
    S = [si * scale + math.log(sp.degeneracy) for si, (sp, _) in zip(s, corners)]
    U = [ui * scale + sp.ground_energy for ui, (sp, _) in zip(u, corners)]
    return _assemble(low.g, high.g, T_C, T_H, q, (ds_ab, ds_bc, ds_cd, ds_da), S, U, scale, flags)


def cycle_from_levels(levels_low, levels_high, T_C: float, T_H: float, g1=math.nan, g2=math.nan,
                      flags=()) -> CycleResult:
    """Cycle between two explicit level lists (exact-diagonalization path)."""
    if not (T_H > T_C > 0):
        raise DomainError("need T_H > T_C > 0")
    a = spectrum_thermo(levels_low, T_H)
    b = spectrum_thermo(levels_high, T_H)
    c = spectrum_thermo(levels_high, T_C)
    d = spectrum_thermo(levels_low, T_C)
    ds = (b.S - a.S, c.S - b.S, d.S - c.S, a.S - d.S)
    q = (T_H * ds[0], c.U_rel - b.U_rel, T_C * ds[2], a.U_rel - d.U_rel)
    return _assemble(g1, g2, T_C, T_H, q, ds, [a.S, b.S, c.S, d.S],
                     [a.U, b.U, c.U, d.U], 1.0, flags)


def _exact_levels(params: MediumParams, eff: EffectiveSpectrum, T_H, fock_max):
    n_up = math.ceil(EXACT_ENERGY_WINDOW * T_H / eff.gap) + 1
    k = min(max(4, eff.degeneracy * n_up + 2), EXACT_MAX_LEVELS)
    if fock_max is not None:
        return lowest_levels(params, fock_max, k), True
    try:
        return converged_spectrum(params, k=k, fock_start=max(32, 2 * k)).levels, True
    except SizeError as exc:
        log.warning("exact spectrum at g=%.6g not converged: %s", eff.g, exc)
        return exc.spectrum.levels, False


def run_cycle(spec: StirlingSpec, params_template: MediumParams, strict: bool = False) -> CycleResult:
    """Run the cycle with omega0 and gamma taken from ``params_template``.

    The returned result carries a ``not_an_engine`` flag when W <= 0 or
    Q_in <= 0; with ``strict=True`` that raises :class:`NotAnEngineError`.
    """
    omega0, gamma = params_template.omega0, params_template.gamma
    low = spectrum_for_g(spec.g1, omega0, gamma, spec.critical_tol)
    high = spectrum_for_g(spec.g2, omega0, gamma, spec.critical_tol)
    flags = []
    if low.phase != high.phase:
        flags.append(FLAG_CROSSES)
    if math.exp(-2.0 * gamma / spec.T_H) > BRANCH_WEIGHT_LIMIT:
        flags.append(FLAG_BRANCH)
    if spec.medium_mode == EFFECTIVE:
        result = cycle_from_spectra(low, high, spec.T_C, spec.T_H, flags)
    else:
        lv = []
        for eff in (low, high):
            params = params_template.with_coupling(eff.g)
            levels, ok = _exact_levels(params, eff, spec.T_H, spec.fock_max)
            if not ok:
                flags.append(FLAG_UNCONVERGED)
            lv.append(levels)
        result = cycle_from_levels(lv[0], lv[1], spec.T_C, spec.T_H, spec.g1, spec.g2, flags)
    if strict:
        result.require_engine()
    return result


def asymptotic_efficiency(spec: StirlingSpec, params: MediumParams, result: CycleResult | None = None,
                          gap_form: str = "gap") -> float:
    """Logarithmic near-critical predictor eta_c - Lambda / ln(gap(g2) / T_H).

    ``gap_form="scaling"`` replaces gap/T_H by |g2 - 1|^(1/2), the universal
    form with zv = 1/2.
    """
    if not 0 < spec.g2 < 1:
        raise DomainError("the predictor applies to 0 < g2 < 1")
    if result is None:
        result = run_cycle(spec, params)
    if gap_form == "gap":
        ratio = spectrum_for_g(spec.g2, params.omega0, params.gamma, spec.critical_tol).gap / spec.T_H
    elif gap_form == "scaling":
        ratio = abs(spec.g2 - 1.0) ** 0.5
    else:
        raise DomainError(f"unknown gap_form {gap_form!r}")
    if ratio >= 1:
        raise DomainError(f"gap/T_H = {ratio:.6g} >= 1: outside the logarithmic regime")
    return result.eta_c - result.Lambda / math.log(ratio)


def plateau_value(result: CycleResult, gap_ratio: float) -> float:
    """(eta_c - eta) * |ln(gap_ratio)|, which tends to -Lambda near criticality."""
    return (result.eta_c - result.eta) * abs(math.log(gap_ratio))
