import math

import numpy as np
import pytest

from rabistirling import DomainError, MediumParams, SizeError
from rabistirling.fullmodel import (EVEN_SECTOR, FULL4, ROTATED_EVEN, build_even_sector,
                                    build_full_two_qubit, build_odd_sector, build_rotated_even,
                                    build_rotated_odd, converged_spectrum, eigensolve_symmetric,
                                    exact_gap, lowest_levels, parity_blocks, rotated_even_banded,
                                    spin_rotation, validate_effective, write_spectrum_csv)
from rabistirling.medium import gap_for_g


def params(omega0=1.0, gamma=0.3, lam=0.0, epsilon=None):
    return MediumParams(omega0, gamma, lam, epsilon)


def test_rotated_even_uncoupled_levels():
    h = build_rotated_even(params(gamma=0.3), 4)
    assert h.basis_label == ROTATED_EVEN and h.dim == 10
    np.testing.assert_allclose(eigensolve_symmetric(h)[:3], [-0.3, 0.3, 0.7], atol=1e-14)


def test_rotated_even_displaced_oscillators():
    # gamma = 0: each spin branch is an oscillator displaced by lambda/omega0,
    # shifted down by lambda^2/omega0
    h = build_rotated_even(MediumParams(1.0, 1e-300, 0.5), 60)
    np.testing.assert_allclose(eigensolve_symmetric(h)[:4], [-0.25, -0.25, 0.75, 0.75], atol=1e-10)


def test_matrix_elements_and_symmetry():
    p = params(omega0=1.3, gamma=0.7, lam=0.4)
    m = build_rotated_even(p, 5).matrix
    nf = 6
    assert np.array_equal(m, m.T)
    # (spin down, n=2) <-> (spin up, n=3)
    assert m[2, nf + 3] == pytest.approx(0.4 * math.sqrt(3))
    assert m[nf + 1, nf + 1] == pytest.approx(1.3 + 0.7)
    assert m[1, 1] == pytest.approx(1.3 - 0.7)
    assert m[2, 3] == 0.0


@pytest.mark.parametrize("builder,n_spin", [(build_rotated_even, 2), (build_even_sector, 2),
                                            (build_odd_sector, 2), (build_full_two_qubit, 4)])
def test_dimensions_and_symmetry(builder, n_spin):
    h = builder(params(gamma=0.6, lam=0.35, epsilon=0.8), 7)
    assert h.dim == n_spin * 8
    assert np.max(np.abs(h.matrix - h.matrix.T)) <= 1e-12


def test_size_cap_and_domain():
    with pytest.raises(SizeError):
        build_full_two_qubit(params(), 2048)
    with pytest.raises(SizeError):
        build_rotated_even(params(), 50, max_dim=64)
    with pytest.raises(DomainError):
        build_rotated_even(params(), 0)


def test_full_model_uncoupled_spectrum():
    # lambda = gamma = 0 leaves omega0 n + eps/2 (s1 - s2) with s = +-1
    p = MediumParams(1.0, 1e-300, 0.0, epsilon=0.3)
    got = eigensolve_symmetric(build_full_two_qubit(p, 6))
    ref = sorted(n + 0.15 * (s1 - s2) for n in range(7) for s1 in (-1, 1) for s2 in (-1, 1))
    np.testing.assert_allclose(got, ref, atol=1e-14)


def test_parity_blocks_are_the_sector_hamiltonians():
    p = params(omega0=0.9, gamma=0.7, lam=0.45, epsilon=0.35)
    N = 12
    full = build_full_two_qubit(p, N)
    assert full.basis_label == FULL4
    even, odd, cross = parity_blocks(full)
    assert cross <= 1e-12
    np.testing.assert_array_equal(even, build_even_sector(p, N).matrix)
    np.testing.assert_array_equal(odd, build_odd_sector(p, N).matrix)


def test_full_spectrum_is_union_of_sectors():
    p = params(omega0=1.0, gamma=2.5, lam=1.7, epsilon=0.6)
    N = 40
    full = eigensolve_symmetric(build_full_two_qubit(p, N))
    union = np.sort(np.concatenate([eigensolve_symmetric(build_even_sector(p, N)),
                                    eigensolve_symmetric(build_odd_sector(p, N))]))
    np.testing.assert_allclose(full, union, atol=1e-10)


def test_rotation_preserves_spectrum():
    p = params(omega0=1.0, gamma=3.0, lam=1.9, epsilon=0.4)
    N = 30
    even, rotated = build_even_sector(p, N), build_rotated_even(p, N)
    r = spin_rotation(N)
    np.testing.assert_allclose(r @ even.matrix @ r.T, rotated.matrix, atol=1e-12)
    np.testing.assert_allclose(eigensolve_symmetric(even), eigensolve_symmetric(rotated), atol=1e-10)
    np.testing.assert_allclose(eigensolve_symmetric(build_odd_sector(p, N)),
                               eigensolve_symmetric(build_rotated_odd(p, N)), atol=1e-10)


def test_odd_sector_ignores_lambda():
    ref = eigensolve_symmetric(build_odd_sector(params(gamma=1.2, epsilon=0.5), 20))
    for lam in (0.3, 4.0, 25.0):
        got = eigensolve_symmetric(build_odd_sector(params(gamma=1.2, lam=lam, epsilon=0.5), 20))
        np.testing.assert_allclose(got, ref, atol=1e-12, rtol=0)


def test_eigensolver_basics():
    np.testing.assert_array_equal(eigensolve_symmetric(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
    np.testing.assert_allclose(eigensolve_symmetric(np.array([[0.0, 0.7], [0.7, 0.0]])), [-0.7, 0.7])
    rng = np.random.default_rng(7)
    a = rng.normal(size=(50, 50))
    a = a + a.T
    vals = eigensolve_symmetric(a)
    assert np.all(np.diff(vals) >= 0)
    assert vals.sum() == pytest.approx(np.trace(a), rel=1e-9)


def test_eigenvector_residuals():
    h = build_rotated_even(params(gamma=4.0, lam=2.0), 40)
    vals, vecs = eigensolve_symmetric(h, vectors=True)
    norm = np.linalg.norm(h.matrix, 2)
    for i in (0, 1, 17, len(vals) - 1):
        res = np.linalg.norm(h.matrix @ vecs[:, i] - vals[i] * vecs[:, i])
        assert res <= 1e-9 * norm


def test_eigensolver_deterministic():
    h = build_rotated_even(params(gamma=4.0, lam=2.0), 60)
    assert np.array_equal(eigensolve_symmetric(h), eigensolve_symmetric(h))


def test_banded_form_matches_dense():
    p = params(omega0=1.1, gamma=5.0, lam=2.3)
    N = 30
    ab = rotated_even_banded(p, N)
    dim = 2 * (N + 1)
    dense = np.zeros((dim, dim))
    for off in range(4):
        idx = np.arange(off, dim)
        dense[idx - off, idx] = ab[3 - off, off:]
    dense = np.triu(dense) + np.triu(dense, 1).T
    perm = np.concatenate([np.arange(0, dim, 2), np.arange(1, dim, 2)])  # interleaved -> spin-major
    np.testing.assert_array_equal(dense[np.ix_(perm, perm)], build_rotated_even(p, N).matrix)
    np.testing.assert_allclose(lowest_levels(p, N, 8), eigensolve_symmetric(build_rotated_even(p, N))[:8],
                               atol=1e-10)


def test_converged_spectrum_trivial_coupling():
    spec = converged_spectrum(params(gamma=3.0), k=4)
    assert spec.fock_max_used == 32 and spec.tol_achieved == 0.0
    np.testing.assert_array_equal(spec.levels, [-3.0, -2.0, -1.0, 0.0])


def test_converged_spectrum_normal_phase():
    p = MediumParams.from_coupling(0.9, 1.0, 500.0)
    spec = converged_spectrum(p, k=4)
    assert spec.converged and spec.tol_achieved < 1e-8
    gap = exact_gap(spec.levels, 1)
    assert abs(gap - gap_for_g(0.9, 1.0)) / gap_for_g(0.9, 1.0) < 0.05
    # variational sanity bound
    assert spec.levels[0] <= -500.0 + 0.5


def test_converged_spectrum_superradiant_doublet():
    p = MediumParams.from_coupling(1.3, 1.0, 500.0)
    spec = converged_spectrum(p, k=6)
    tol = 1e-8
    assert spec.levels[1] - spec.levels[0] < tol
    gap = exact_gap(spec.levels, 2)
    assert abs(gap - gap_for_g(1.3, 1.0)) / gap_for_g(1.3, 1.0) < 0.05
    assert spec.fock_max_used >= 256


def test_converged_spectrum_reports_best_effort_at_cap():
    p = MediumParams.from_coupling(1.5, 1.0, 500.0)
    with pytest.raises(SizeError) as info:
        converged_spectrum(p, k=4, max_dim=256)
    best = info.value.spectrum
    assert best is not None and not best.converged
    assert best.fock_max_used == 127 and len(best.levels) == 4


def test_validate_effective_examples():
    rows = validate_effective([0.0, 0.1, 0.5, 0.95], [100.0, 500.0, 2000.0])
    table = {(r.zeta, r.g): r for r in rows}
    assert all(table[(z, 0.0)].rel_error == 0.0 for z in (100.0, 500.0, 2000.0))
    assert table[(500.0, 0.1)].rel_error < 0.01
    assert table[(2000.0, 0.5)].rel_error < table[(500.0, 0.5)].rel_error < table[(100.0, 0.5)].rel_error
    assert table[(500.0, 0.95)].rel_error > table[(500.0, 0.5)].rel_error
    with pytest.raises(DomainError):
        validate_effective([0.97], [500.0])


def test_spectrum_csv(tmp_path):
    path = tmp_path / "levels.csv"
    write_spectrum_csv([-1.5, 0.25], path)
    assert path.read_text().splitlines() == ["index,energy", "0,-1.5", "1,0.25"]
