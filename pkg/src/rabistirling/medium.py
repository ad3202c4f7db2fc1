"""Working-medium parameters and the closed-form low-energy spectrum.

Units are natural (hbar = k_B = 1); frequencies and temperatures are plain
numbers, conventionally angular kHz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import CriticalPointError, DomainError

DEFAULT_CRITICAL_TOL = 1e-9


class Phase(str, Enum):
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"


@dataclass(frozen=True)
class MediumParams:
    """Physical parameters of the two-qubit Rabi medium.

    Parameters
    ----------
    omega0 : float
        Bosonic mode frequency.
    gamma : float
        Spin-spin coupling strength.
    lam : float
        Spin-mode coupling strength (``lambda`` in the model).
    epsilon : float, optional
        Qubit transition frequency. Only the odd-parity sector and the full
        two-qubit Hamiltonian use it; defaults to ``omega0``.
    """

    omega0: float
    gamma: float
    lam: float
    epsilon: float | None = None

    def __post_init__(self):
        if not self.omega0 > 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", float(self.omega0))
        elif not self.epsilon >= 0:
            raise DomainError(f"epsilon must be non-negative, got {self.epsilon}")

    @classmethod
    def from_ratios(cls, omega0, zeta, xi, epsilon=None) -> "MediumParams":
        """Build from the dimensionless ratios zeta = gamma/omega0, xi = lambda/omega0."""
        return cls(omega0, zeta * omega0, xi * omega0, epsilon)

    @classmethod
    def from_coupling(cls, g, omega0, gamma, epsilon=None) -> "MediumParams":
        return cls(omega0, gamma, lambda_for_g(g, omega0, gamma), epsilon)

    @property
    def xi(self) -> float:
        return self.lam / self.omega0

    @property
    def zeta(self) -> float:
        return self.gamma / self.omega0

    @property
    def g(self) -> float:
        return effective_coupling(self)

    def with_coupling(self, g) -> "MediumParams":
        """Same omega0, gamma and epsilon, with lambda re-solved for coupling ``g``."""
        return MediumParams(self.omega0, self.gamma,
                            lambda_for_g(g, self.omega0, self.gamma), self.epsilon)


@dataclass(frozen=True)
class EffectiveSpectrum:
    """Harmonic low-energy tower: ``ground_energy + n * gap``, each level ``degeneracy``-fold."""

    phase: Phase
    gap: float
    ground_energy: float
    degeneracy: int
    g: float
    omega0: float


def effective_coupling(params: MediumParams) -> float:
    return math.sqrt(2.0) * params.lam / math.sqrt(params.omega0 * params.gamma)


def lambda_for_g(g, omega0, gamma) -> float:
    """Spin-mode coupling that puts the medium at effective coupling ``g``."""
    if g < 0:
        raise DomainError(f"g must be non-negative, got {g}")
    if not (omega0 > 0 and gamma > 0):
        raise DomainError("omega0 and gamma must be positive")
    return g * math.sqrt(omega0 * gamma / 2.0)


def gap_for_g(g, omega0) -> float:
    """Excitation gap of the effective model, no critical-point check."""
    if g < 1:
        return omega0 * math.sqrt((1.0 - g) * (1.0 + g))
    g2 = g * g
    # 1 - g^-4 factored to keep precision just above g = 1
    return omega0 * math.sqrt((g2 - 1.0) * (g2 + 1.0)) / g2


def spectrum_for_g(g, omega0, gamma, critical_tol=DEFAULT_CRITICAL_TOL) -> EffectiveSpectrum:
    if g < 0:
        raise DomainError(f"g must be non-negative, got {g}")
    if abs(g - 1.0) <= critical_tol:
        raise CriticalPointError(
            f"effective coupling g={g!r} is within {critical_tol:g} of the critical point")
    gap = gap_for_g(g, omega0)
    if g < 1:
        return EffectiveSpectrum(Phase.NORMAL, gap, gap / 2.0 - gamma, 1, g, omega0)
    shift = gamma * (g * g + 1.0 / (g * g)) / 2.0
    return EffectiveSpectrum(Phase.SUPERRADIANT, gap, gap / 2.0 - shift, 2, g, omega0)


def effective_spectrum(params: MediumParams,
                       critical_tol: float = DEFAULT_CRITICAL_TOL) -> EffectiveSpectrum:
    """Closed-form gap, ground offset and degeneracy in either phase.

    Raises
    ------
    CriticalPointError
        If ``|g - 1| <= critical_tol``.
    """
    return spectrum_for_g(effective_coupling(params), params.omega0, params.gamma, critical_tol)
