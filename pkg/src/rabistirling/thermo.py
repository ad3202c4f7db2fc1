"""Gibbs-state thermodynamics of a gapped bosonic tower and of finite level lists."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .medium import EffectiveSpectrum

SMALL_X = 1e-6
LARGE_X = 700.0
SIMPSON_MAX_DEPTH = 40


def heat_capacity_C(x: float) -> float:
    """Heat capacity of one bosonic mode, (x/2)^2 / sinh^2(x/2), with x = gap/T."""
    if not x > 0:
        raise DomainError(f"heat capacity needs x > 0, got {x}")
    if x < SMALL_X:
        return 1.0 - x * x / 12.0
    if x > LARGE_X:
        return x * x * math.exp(-x)
    h = 0.5 * x
    return (h / math.sinh(h)) ** 2


def _log_one_minus_exp(x):
    # ln(1 - e^-x)
    if x < SMALL_X:
        return math.log(x) - x / 2.0 + x * x / 24.0
    if x > math.log(2.0):
        return math.log1p(-math.exp(-x))
    return math.log(-math.expm1(-x))


def occupation(x, shift=0.0):
    """Bose factor 1/(e^x - 1), multiplied by e^shift (shift <= x)."""
    if x < SMALL_X and shift == 0.0:
        return 1.0 / x - 0.5 + x / 12.0
    return math.exp(shift - x) / -math.expm1(-x)


def tower_entropy(x, shift=0.0):
    """Entropy of a non-degenerate harmonic tower at x = gap/T, multiplied by e^shift.

    The scaled form stays representable when every corner of a cycle is deep in
    the frozen regime and the bare entropies underflow.
    """
    if shift == 0.0:
        if x < SMALL_X:
            return 1.0 - x / 2.0 + x * x / 12.0 - _log_one_minus_exp(x)
        if x > LARGE_X:
            return (x + 1.0) * math.exp(-x)
        return x / math.expm1(x) - _log_one_minus_exp(x)
    y = math.exp(-x)
    # -ln(1 - y)/y -> 1 for y -> 0
    log_term = 1.0 if y < 1e-17 else -math.log1p(-y) / y
    return math.exp(shift - x) * (x / -math.expm1(-x) + log_term)


@dataclass(frozen=True)
class ThermoPoint:
    """Equilibrium state of an :class:`EffectiveSpectrum` at temperature ``T``.

    ``Z`` is measured relative to ``E0``; ``U_thermal = U - E0`` is kept separately
    so differences at fixed coupling do not lose precision against a large offset.
    """

    T: float
    gap: float
    degeneracy: int
    E0: float
    Z: float
    U: float
    U_thermal: float
    S: float
    C: float


def thermo_point(spectrum: EffectiveSpectrum, T: float) -> ThermoPoint:
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    x = spectrum.gap / T
    if not x > 0:
        raise DomainError("thermo_point needs a positive gap")
    d = spectrum.degeneracy
    u_th = spectrum.gap * occupation(x)
    return ThermoPoint(
        T=T,
        gap=spectrum.gap,
        degeneracy=d,
        E0=spectrum.ground_energy,
        Z=d / -math.expm1(-x),
        U=u_th + spectrum.ground_energy,
        U_thermal=u_th,
        S=tower_entropy(x) + math.log(d),
        C=heat_capacity_C(x),
    )


def adaptive_simpson(f, a, b, tol, max_depth=SIMPSON_MAX_DEPTH):
    """Adaptive Simpson quadrature of ``f`` over [a, b] with Richardson correction."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def _isochoric_integral(integrand, T1, T2):
    if not (T1 > 0 and T2 > 0):
        raise DomainError(f"temperatures must be positive, got {T1}, {T2}")
    if T1 == T2:
        return 0.0
    # tolerance scaled by a coarse magnitude estimate; never looser than 1e-10*|T2-T1|
    grid = np.linspace(T1, T2, 33)
    coarse = abs(np.trapezoid([integrand(t) for t in grid], grid))
    tol = 1e-10 * min(abs(T2 - T1), coarse) if coarse > 0 else 1e-10 * abs(T2 - T1)
    return adaptive_simpson(integrand, T1, T2, tol)


def isochoric_heat_integral(spectrum: EffectiveSpectrum, T1: float, T2: float) -> float:
    """Heat taken up at fixed coupling between T1 and T2, as the integral of C(gap/T) dT."""
    gap = spectrum.gap
    return _isochoric_integral(lambda t: heat_capacity_C(gap / t), T1, T2)


def isochoric_entropy_integral(spectrum: EffectiveSpectrum, T1: float, T2: float) -> float:
    gap = spectrum.gap
    return _isochoric_integral(lambda t: heat_capacity_C(gap / t) / t, T1, T2)


@dataclass(frozen=True)
class SpectrumThermo:
    """Gibbs quantities of an explicit level list.

    ``Z`` is relative to ``E_min``; ``U_rel = U - E_min``.
    """

    levels: np.ndarray
    T: float
    E_min: float
    Z: float
    U: float
    U_rel: float
    S: float
    F: float


def spectrum_thermo(levels, T: float) -> SpectrumThermo:
    levels = np.asarray(levels, dtype=float)
    if levels.ndim != 1 or levels.size == 0:
        raise DomainError("levels must be a non-empty 1-d sequence")
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    if not np.all(np.isfinite(levels)):
        raise DomainError("levels must be finite")
    levels = np.sort(levels)
    e_min = float(levels[0])
    rel = levels - e_min
    w = np.exp(-rel / T)
    # ln Z via the excited weights alone: Z is often 1 + (tiny)
    z_ex = float(w[1:].sum())
    Z = 1.0 + z_ex
    u_rel = float(np.dot(rel[1:], w[1:]) / Z)
    log_z = math.log1p(z_ex)
    S = u_rel / T + log_z
    return SpectrumThermo(levels, T, e_min, Z, e_min + u_rel, u_rel, max(S, 0.0), e_min - T * log_z)
