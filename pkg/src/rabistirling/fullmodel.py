"""Truncated Fock-space Hamiltonians, their spectra, and checks of the effective model.

Basis ordering is fixed: spin index major, Fock index minor.  Single-spin
sectors use spin states (down, up) with sigma_z = diag(-1, +1).  The two-qubit
space uses |s1 s2> with index 2*s1 + s2, so (dd, du, ud, uu).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DomainError, SizeError
from .medium import MediumParams, spectrum_for_g

MAX_DIM = 8192

FULL4 = "Full4"
EVEN_SECTOR = "EvenSector"
ODD_SECTOR = "OddSector"
ROTATED_EVEN = "RotatedEven"
ROTATED_ODD = "RotatedOdd"

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]])
EYE2 = np.eye(2)

# two-qubit basis indices grouped by sigma1^z sigma2^z parity
EVEN_SPINS = (0, 3)  # dd, uu
ODD_SPINS = (1, 2)   # du, ud


@dataclass(frozen=True)
class FockHamiltonian:
    fock_max: int
    matrix: np.ndarray
    basis_label: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class ConvergedSpectrum:
    levels: np.ndarray
    fock_max_used: int
    k: int
    tol_achieved: float
    converged: bool = True


def _check_size(fock_max, n_spin, max_dim):
    if fock_max < 1:
        raise DomainError(f"fock_max must be >= 1, got {fock_max}")
    dim = n_spin * (fock_max + 1)
    if dim > max_dim:
        raise SizeError(f"dimension {dim} exceeds cap {max_dim}")
    return dim


def _boson_ops(fock_max):
    n = np.arange(fock_max + 1, dtype=float)
    a = np.diag(np.sqrt(n[1:]), k=1)
    return np.diag(n), a + a.T


def _sector(omega0, spin_term, coupling, coupling_spin, fock_max):
    num, quad = _boson_ops(fock_max)
    eye_f = np.eye(fock_max + 1)
    h = omega0 * np.kron(EYE2, num) + np.kron(spin_term, eye_f)
    if coupling:
        h += coupling * np.kron(coupling_spin, quad)
    return h


def build_rotated_even(params: MediumParams, fock_max: int, max_dim: int = MAX_DIM) -> FockHamiltonian:
    """omega0 a^+a + gamma sigma_z + lambda (a^+ + a) sigma_x."""
    _check_size(fock_max, 2, max_dim)
    h = _sector(params.omega0, params.gamma * SIGMA_Z, params.lam, SIGMA_X, fock_max)
    return FockHamiltonian(fock_max, h, ROTATED_EVEN)


def build_even_sector(params: MediumParams, fock_max: int, max_dim: int = MAX_DIM) -> FockHamiltonian:
    """omega0 a^+a + gamma sigma_x + lambda (a^+ + a) sigma_z, on (dd, uu)."""
    _check_size(fock_max, 2, max_dim)
    h = _sector(params.omega0, params.gamma * SIGMA_X, params.lam, SIGMA_Z, fock_max)
    return FockHamiltonian(fock_max, h, EVEN_SECTOR)


def build_odd_sector(params: MediumParams, fock_max: int, max_dim: int = MAX_DIM) -> FockHamiltonian:
    """omega0 a^+a + epsilon sigma_z + gamma sigma_x, on (du, ud); no boson coupling."""
    _check_size(fock_max, 2, max_dim)
    spin = params.epsilon * SIGMA_Z + params.gamma * SIGMA_X
    h = _sector(params.omega0, spin, 0.0, None, fock_max)
    return FockHamiltonian(fock_max, h, ODD_SECTOR)


def build_rotated_odd(params: MediumParams, fock_max: int, max_dim: int = MAX_DIM) -> FockHamiltonian:
    _check_size(fock_max, 2, max_dim)
    spin = params.epsilon * SIGMA_X + params.gamma * SIGMA_Z
    h = _sector(params.omega0, spin, 0.0, None, fock_max)
    return FockHamiltonian(fock_max, h, ROTATED_ODD)


def build_full_two_qubit(params: MediumParams, fock_max: int, max_dim: int = MAX_DIM) -> FockHamiltonian:
    """Two counter-biased qubits: eps1 = -eps2 = epsilon/2, lambda1 = lambda2 = lambda/2."""
    _check_size(fock_max, 4, max_dim)
    num, quad = _boson_ops(fock_max)
    eye_f = np.eye(fock_max + 1)
    sz1, sz2 = np.kron(SIGMA_Z, EYE2), np.kron(EYE2, SIGMA_Z)
    sxsx = np.kron(SIGMA_X, SIGMA_X)
    eps, lam = params.epsilon, params.lam
    spin = 0.5 * eps * (sz1 - sz2) + params.gamma * sxsx
    h = (params.omega0 * np.kron(np.eye(4), num) + np.kron(spin, eye_f)
         + np.kron(0.5 * lam * (sz1 + sz2), quad))
    return FockHamiltonian(fock_max, h, FULL4)


def parity_permutation(fock_max: int) -> np.ndarray:
    """Index order that lists the even block (dd, uu) before the odd block (du, ud)."""
    nf = fock_max + 1
    return np.concatenate([np.arange(s * nf, (s + 1) * nf) for s in EVEN_SPINS + ODD_SPINS])


def parity_blocks(h: FockHamiltonian):
    """Split a Full4 Hamiltonian into (even block, odd block, largest cross-block element)."""
    if h.basis_label != FULL4:
        raise DomainError("parity_blocks needs a Full4 Hamiltonian")
    p = parity_permutation(h.fock_max)
    m = h.matrix[np.ix_(p, p)]
    half = m.shape[0] // 2
    cross = float(np.max(np.abs(m[:half, half:]))) if half else 0.0
    return m[:half, :half], m[half:, half:], cross


def spin_rotation(fock_max: int) -> np.ndarray:
    """Orthogonal map taking the even sector onto its rotated form.

    A pi/2 spin rotation about y sends sigma_x -> sigma_z and sigma_z -> -sigma_x;
    the boson parity (-1)^n then restores the sign of the coupling term.
    """
    c = math.sqrt(0.5)
    ry = np.array([[c, -c], [c, c]])
    parity = np.diag((-1.0) ** np.arange(fock_max + 1))
    return np.kron(ry, parity)


def _is_diagonal(m):
    return not np.any(m - np.diag(np.diagonal(m)))


def eigensolve_symmetric(h, vectors: bool = False):
    """All eigenvalues of a real-symmetric Hamiltonian, ascending.

    Accepts a :class:`FockHamiltonian` or a bare array.  With ``vectors=True``
    returns ``(values, vectors)`` with eigenvectors as columns.
    """
    m = h.matrix if isinstance(h, FockHamiltonian) else np.asarray(h, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("matrix must be square")
    if not vectors and _is_diagonal(m):
        return np.sort(np.diagonal(m).copy())
    try:
        if vectors:
            return np.linalg.eigh(m)
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def rotated_even_banded(params: MediumParams, fock_max: int) -> np.ndarray:
    """Upper banded storage of the rotated even Hamiltonian in interleaved (n, spin) order.

    In that ordering the coupling (n, s) <-> (n+1, not s) sits at offsets 1 and 3,
    so LAPACK's banded solver handles the cap-sized matrices cheaply.
    """
    nf = fock_max + 1
    dim = 2 * nf
    n = np.repeat(np.arange(nf, dtype=float), 2)
    spin = np.tile([-1.0, 1.0], nf)
    ab = np.zeros((4, dim))
    ab[3] = params.omega0 * n + params.gamma * spin
    amp = params.lam * np.sqrt(np.arange(1, nf, dtype=float))
    # offset 1: (n, up) -> (n+1, down); offset 3: (n, down) -> (n+1, up)
    ab[2, 2::2] = amp
    ab[0, 3::2] = amp
    return ab


def lowest_levels(params: MediumParams, fock_max: int, k: int, max_dim: int = MAX_DIM) -> np.ndarray:
    """Lowest ``k`` eigenvalues of the rotated even Hamiltonian at truncation ``fock_max``."""
    dim = _check_size(fock_max, 2, max_dim)
    k = min(k, dim)
    ab = rotated_even_banded(params, fock_max)
    if params.lam == 0:
        return np.sort(ab[3])[:k]
    try:
        return scipy.linalg.eig_banded(ab, eigvals_only=True, select="i",
                                       select_range=(0, k - 1), check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def converged_spectrum(params: MediumParams, k: int = 6, tol: float | None = None,
                       fock_start: int = 32, max_dim: int = MAX_DIM) -> ConvergedSpectrum:
    """Lowest ``k`` levels of the rotated even sector, converged in the Fock cutoff.

    The cutoff doubles until successive levels agree within ``tol``.  If the cap
    is hit first, one refinement at the midpoint below the cap is tried before
    giving up with :class:`SizeError` (best-effort levels on ``.spectrum``).
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    if tol is None:
        tol = 1e-8 * params.omega0
    n_cap = max_dim // 2 - 1
    fock = min(fock_start, n_cap)
    if fock < 1 or 2 * (fock + 1) < k:
        fock = min(max(fock, k), n_cap)
    levels = lowest_levels(params, fock, k, max_dim)
    if params.lam == 0:
        return ConvergedSpectrum(levels, fock, k, 0.0)
    change = math.inf
    while True:
        if fock >= n_cap:
            break
        nxt = min(2 * fock, n_cap)
        new = lowest_levels(params, nxt, k, max_dim)
        change = float(np.max(np.abs(new - levels)))
        fock, levels = nxt, new
        if change < tol:
            return ConvergedSpectrum(levels, fock, k, change)
    mid = (3 * n_cap) // 4
    if mid > fock_start:
        change = float(np.max(np.abs(lowest_levels(params, mid, k, max_dim) - levels)))
        if change < tol:
            return ConvergedSpectrum(levels, fock, k, change)
    best = ConvergedSpectrum(levels, fock, k, change, converged=False)
    raise SizeError(f"levels not converged to {tol:g} within dimension cap {max_dim}"
                    f" (last change {change:g})", spectrum=best)


def exact_gap(levels, degeneracy) -> float:
    """Excitation gap of an exact spectrum, skipping the quasi-degenerate ground partner."""
    return float(levels[degeneracy] - levels[0])


@dataclass(frozen=True)
class GapCheck:
    g: float
    zeta: float
    gap_exact: float
    gap_effective: float
    rel_error: float
    tolerance: float
    fock_max_used: int
    ground_splitting: float

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.tolerance


def default_gap_tolerance(g) -> float:
    return 0.02 if g <= 0.8 else 0.05


def validate_effective(g_values, zeta_values, omega0: float = 1.0, tolerance=default_gap_tolerance,
                       min_distance: float = 0.05, max_dim: int = MAX_DIM) -> list[GapCheck]:
    """Relative error of the closed-form gap against converged exact spectra.

    Rows are ordered by zeta, then g.
    """
    rows = []
    for zeta in zeta_values:
        gamma = zeta * omega0
        for g in g_values:
            if abs(g - 1.0) < min_distance:
                raise DomainError(f"g={g} is closer than {min_distance} to the critical point")
            eff = spectrum_for_g(g, omega0, gamma)
            params = MediumParams.from_coupling(g, omega0, gamma)
            spec = converged_spectrum(params, k=6, max_dim=max_dim)
            gap = exact_gap(spec.levels, eff.degeneracy)
            err = abs(gap - eff.gap) / eff.gap
            split = float(spec.levels[1] - spec.levels[0]) if eff.degeneracy == 2 else 0.0
            rows.append(GapCheck(g, zeta, gap, eff.gap, err, tolerance(g), spec.fock_max_used, split))
    return rows


def write_spectrum_csv(levels, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "energy"])
        for i, e in enumerate(levels):
            w.writerow([i, format(float(e), ".17g")])
