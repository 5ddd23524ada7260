"""Fixed-point strata: twisted kernel values, closed coefficient forms, the
quadrature oracle, and oscillatory corrections on top of the manifold table."""

import cmath
import math

import pytest

from rstorsion.errors import DomainError, ToleranceError
from rstorsion.heatmodel import GeometricData
from rstorsion.orbifold import (
    OrbifoldData,
    StratumData,
    c_j_closed,
    c_ju0,
    c_ju0_decay_bound,
    c_ju0_quadrature_oracle,
    gamma_j0,
    kappa_j0,
    kappa_j0_with_error,
    orbifold_expansion_eval,
    twisted_strace_kernel,
)
from rstorsion.torsion import build_expansion_table

SPHERE = GeometricData(n=1, rk_e=1, vol=1.0, int_c1tm=2.0, int_c1e=0.0)

TEARDROP = StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(math.pi,), volume=1.0)
CONE_THIRD = StratumData(n_j=0, m_j=3, theta_j=0.0, angles=(2.0 * math.pi / 3.0,), volume=1.0)
CODIM2 = StratumData(
    n_j=0, m_j=3, theta_j=0.0, angles=(2.0 * math.pi / 3.0, 2.0 * math.pi / 3.0), volume=1.0
)

# high-precision references for -volume * M'(0) of c_{j,u,0}
KAPPA_TEARDROP = -0.32560548973232696
KAPPA_CONE_THIRD = -0.37710121799490074
KAPPA_CODIM2 = 0.24087425138766984


def test_stratum_validation():
    with pytest.raises(DomainError):
        StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(0.0,), volume=1.0)
    with pytest.raises(DomainError):
        StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(2.0 * math.pi,), volume=1.0)
    with pytest.raises(DomainError):
        StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(math.pi,), volume=-1.0)
    with pytest.raises(DomainError):
        StratumData(n_j=0, m_j=2, theta_j=-0.5, angles=(math.pi,), volume=1.0)
    with pytest.raises(DomainError):
        StratumData(n_j=-1, m_j=2, theta_j=0.0, angles=(math.pi,), volume=1.0)
    assert TEARDROP.codim == 1
    assert CODIM2.codim == 2


def test_orbifold_data_checks_codimension():
    with pytest.raises(DomainError):
        # a codim-2 stratum cannot sit inside a curve
        OrbifoldData(geom=SPHERE, strata=(CODIM2,))
    with pytest.raises(DomainError):
        # n_j must be strictly below n
        OrbifoldData(
            geom=SPHERE,
            strata=(StratumData(n_j=1, m_j=2, theta_j=0.0, angles=(math.pi,), volume=1.0),),
        )


def test_kernel_at_origin_is_prefactor():
    for u in (0.3, 1.0, 2.0):
        q4 = math.exp(-4.0 * math.pi * u)
        want = -1.0 * q4 / (1.0 - q4)
        got = twisted_strace_kernel((math.pi,), 1, 0, 1, u, (0.0,))
        assert got == pytest.approx(want, rel=1e-13)


def test_c_j_closed_values():
    assert c_j_closed(TEARDROP, 1, 1) == pytest.approx(-0.5, rel=1e-15)
    assert c_j_closed(CONE_THIRD, 1, 1) == pytest.approx(-1.0 / math.sqrt(3.0), rel=1e-14)
    with pytest.raises(DomainError):
        c_j_closed(CODIM2, 2, 1)


@pytest.mark.parametrize("phi", [math.pi / 3.0, math.pi / 2.0, 2.0 * math.pi / 3.0, math.pi])
def test_u_to_zero_limit_is_half_of_closed_form(phi):
    stratum = StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(phi,), volume=1.0)
    assert c_ju0(stratum, 1, 2, 0.0) == pytest.approx(
        0.5 * c_j_closed(stratum, 1, 2), rel=1e-14
    )


def test_codim2_u_to_zero_limit_vanishes():
    assert abs(c_ju0(CODIM2, 2, 1, 0.0)) < 1e-300
    assert abs(c_ju0(CODIM2, 2, 1, 1e-12)) < 1e-10


@pytest.mark.parametrize(
    "stratum,n,u",
    [(TEARDROP, 1, 1.0), (TEARDROP, 1, 0.35), (CONE_THIRD, 1, 0.5), (CODIM2, 2, 2.0)],
)
def test_quadrature_oracle_matches_stable_form(stratum, n, u):
    closed = c_ju0(stratum, n, 1, u)
    quad = c_ju0_quadrature_oracle(stratum, n, 1, u)
    assert quad == pytest.approx(closed, abs=1e-6 * max(1.0, abs(closed)))


def test_quadrature_oracle_guards():
    with pytest.raises(DomainError):
        c_ju0_quadrature_oracle(TEARDROP, 1, 1, 9.0)
    deep = StratumData(
        n_j=0, m_j=2, theta_j=0.0, angles=(math.pi, math.pi, math.pi), volume=1.0
    )
    with pytest.raises(DomainError):
        c_ju0_quadrature_oracle(deep, 3, 1, 1.0)
    with pytest.raises(ToleranceError):
        c_ju0_quadrature_oracle(TEARDROP, 1, 1, 0.25, abs_tol=1e-17)


@pytest.mark.parametrize("u", [5.0, 10.0, 20.0, 40.0])
def test_c_ju0_decay_envelope(u):
    bound = c_ju0_decay_bound(CONE_THIRD, 1, 2)
    assert abs(c_ju0(CONE_THIRD, 1, 2, u)) <= bound.scale * math.exp(-bound.rate * u)


def test_gamma_j0_values():
    assert gamma_j0(TEARDROP, 1, 1) == pytest.approx(-0.25, rel=1e-14)
    assert gamma_j0(CONE_THIRD, 1, 1) == pytest.approx(-0.5 / math.sqrt(3.0), rel=1e-14)
    assert gamma_j0(CODIM2, 2, 1) == 0.0


@pytest.mark.parametrize(
    "stratum,n,ref",
    [(TEARDROP, 1, KAPPA_TEARDROP), (CONE_THIRD, 1, KAPPA_CONE_THIRD), (CODIM2, 2, KAPPA_CODIM2)],
)
def test_kappa_against_frozen_references(stratum, n, ref):
    kappa, err = kappa_j0_with_error(stratum, n, 1)
    assert kappa == pytest.approx(ref, abs=1e-7)
    assert abs(kappa - ref) <= 3.0 * max(err, 1e-12)
    assert kappa_j0(stratum, n, 1) == kappa


def test_kappa_scales_with_volume():
    fat = StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(math.pi,), volume=2.5)
    assert kappa_j0(fat, 1, 1) == pytest.approx(2.5 * KAPPA_TEARDROP, abs=3e-7)


def test_expansion_eval_combines_strata():
    table = build_expansion_table(SPHERE)
    theta = 0.7
    stratum = StratumData(n_j=0, m_j=2, theta_j=theta, angles=(math.pi,), volume=1.0)
    data = OrbifoldData(geom=SPHERE, strata=(stratum,))
    p = 9
    from rstorsion.torsion import expansion_eval

    want = expansion_eval(table, p, 1) + cmath.exp(1j * theta * p) / 2.0 * (
        gamma_j0(stratum, 1, 1) * math.log(p) + kappa_j0(stratum, 1, 1)
    )
    got = orbifold_expansion_eval(data, table, p, 1)
    assert got == pytest.approx(want, rel=1e-12)


def test_conjugate_pair_gives_real_correction():
    phi = 2.0 * math.pi / 3.0
    pair = (
        StratumData(n_j=0, m_j=3, theta_j=0.0, angles=(phi,), volume=1.0),
        StratumData(n_j=0, m_j=3, theta_j=0.0, angles=(2.0 * math.pi - phi,), volume=1.0),
    )
    data = OrbifoldData(geom=SPHERE, strata=pair)
    table = build_expansion_table(SPHERE)
    for p in (3, 11, 31):
        value = orbifold_expansion_eval(data, table, p, 1)
        assert abs(value.imag) < 1e-12
        assert value.real > 0.0


def test_expansion_eval_rejects_mismatched_table():
    table = build_expansion_table(
        GeometricData(n=2, rk_e=1, vol=1.0, int_c1tm=3.0, int_c1e=0.0)
    )
    data = OrbifoldData(geom=SPHERE, strata=(TEARDROP,))
    with pytest.raises(DomainError):
        orbifold_expansion_eval(data, table, 5, 1)
