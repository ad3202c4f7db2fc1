import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rabistirling import (CriticalPointError, DomainError, MediumParams, Phase, effective_coupling,
                          effective_spectrum, lambda_for_g)
from rabistirling.medium import gap_for_g

PI = math.pi


def test_coupling_at_reference_point():
    # hand evaluation via the ratio form sqrt(2) xi / sqrt(zeta) with xi=9, zeta=500
    p = MediumParams(0.4 * PI, 200 * PI, 3.6 * PI)
    assert effective_coupling(p) == pytest.approx(0.56920997883030828, rel=1e-14)
    assert p.xi == pytest.approx(9.0)
    assert p.zeta == pytest.approx(500.0)


def test_coupling_zero_and_critical():
    assert effective_coupling(MediumParams(1.0, 2.0, 0.0)) == 0.0
    assert effective_coupling(MediumParams(1.0, 2.0, 1.0)) == pytest.approx(1.0, rel=1e-15)


def test_lambda_for_g():
    assert lambda_for_g(0.0, 1.0, 3.0) == 0.0
    assert lambda_for_g(1.0, 1.0, 2.0) == pytest.approx(1.0, rel=1e-15)
    lam = lambda_for_g(0.57, 0.4 * PI, 200 * PI)
    assert effective_coupling(MediumParams(0.4 * PI, 200 * PI, lam)) == pytest.approx(0.57, rel=1e-12)


@given(g=st.floats(0, 50), omega0=st.floats(1e-3, 1e3), zeta=st.floats(1e-2, 1e4))
def test_lambda_round_trip(g, omega0, zeta):
    p = MediumParams.from_coupling(g, omega0, zeta * omega0)
    assert p.g == pytest.approx(g, rel=1e-12, abs=1e-300)
    assert p.g ** 2 * p.zeta == pytest.approx(2 * p.xi ** 2, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("kwargs", [
    dict(omega0=0.0, gamma=1.0, lam=0.0),
    dict(omega0=1.0, gamma=-1.0, lam=0.0),
    dict(omega0=1.0, gamma=1.0, lam=-0.1),
    dict(omega0=1.0, gamma=1.0, lam=0.1, epsilon=-1.0),
])
def test_invalid_params(kwargs):
    with pytest.raises(DomainError):
        MediumParams(**kwargs)


def test_epsilon_defaults_to_omega0():
    assert MediumParams(0.7, 1.0, 0.0).epsilon == 0.7


def test_spectrum_examples():
    sp = effective_spectrum(MediumParams.from_coupling(0.6, 1.0, 10.0))
    assert sp.phase is Phase.NORMAL
    assert sp.gap == pytest.approx(0.8, rel=1e-14)
    assert sp.degeneracy == 1
    assert sp.ground_energy == pytest.approx(0.4 - 10.0, rel=1e-14)

    sp = effective_spectrum(MediumParams.from_coupling(math.sqrt(2), 1.0, 10.0))
    assert sp.phase is Phase.SUPERRADIANT
    assert sp.gap == pytest.approx(math.sqrt(3) / 2, rel=1e-14)
    assert sp.degeneracy == 2
    assert sp.ground_energy == pytest.approx(math.sqrt(3) / 4 - 10.0 * (2 + 0.5) / 2, rel=1e-14)

    sp = effective_spectrum(MediumParams(1.3, 4.0, 0.0))
    assert sp.phase is Phase.NORMAL and sp.gap == 1.3


def test_critical_point_rejected():
    with pytest.raises(CriticalPointError):
        effective_spectrum(MediumParams(1.0, 2.0, 1.0))
    with pytest.raises(CriticalPointError):
        effective_spectrum(MediumParams.from_coupling(1 + 1e-10, 1.0, 2.0))
    effective_spectrum(MediumParams.from_coupling(1 + 1e-10, 1.0, 2.0), critical_tol=1e-11)


def test_gap_closes_at_critical_point():
    for d in (1e-6, 1e-8):
        assert gap_for_g(1 - d, 1.0) < 2e-3
        assert gap_for_g(1 + d, 1.0) < 2e-3
    assert gap_for_g(1 - 1e-12, 1.0) < gap_for_g(1 - 1e-6, 1.0)
    assert gap_for_g(1 + 1e-12, 1.0) < gap_for_g(1 + 1e-6, 1.0)


def test_gap_bounded_and_monotone():
    lo = np.linspace(1e-3, 1 - 1e-3, 400)
    hi = np.linspace(1 + 1e-3, 20, 400)
    gl = [gap_for_g(g, 1.0) for g in lo]
    gh = [gap_for_g(g, 1.0) for g in hi]
    assert np.all(np.diff(gl) < 0)
    assert np.all(np.diff(gh) > 0)
    assert all(0 <= v <= 1.0 for v in gl + gh)


@pytest.mark.parametrize("g", [0.05, 0.5, 0.95, 1.05, 2.0, 7.0])
@pytest.mark.parametrize("k", [0.1, 3.0, 1e3])
def test_scale_covariance(g, k):
    base = MediumParams.from_coupling(g, 0.4 * PI, 200 * PI)
    scaled = MediumParams(k * base.omega0, k * base.gamma, k * base.lam)
    a, b = effective_spectrum(base), effective_spectrum(scaled)
    assert b.g == pytest.approx(a.g, rel=1e-13)
    assert b.gap == pytest.approx(k * a.gap, rel=1e-12)
    assert b.ground_energy == pytest.approx(k * a.ground_energy, rel=1e-12)
