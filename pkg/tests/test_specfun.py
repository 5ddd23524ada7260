"""Scalar special functions against exact values and cross-branch identities."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstorsion.errors import DomainError
from rstorsion.specfun import (
    LOG_FACTORIAL_EXACT_MAX,
    PrecisionPolicy,
    bernoulli,
    euler_gamma,
    harmonic_number,
    log_factorial,
    log_superfactorial,
    log_superfactorial_asymptotic,
    r_genus_coefficient,
    riemann_zeta,
    zeta_derivative,
)

EULER_GAMMA = 0.5772156649015329
ZETA_3 = 1.2020569031595943
ZETA_HALF = -1.4603545088095868
ZETA_PRIME_MINUS1 = -0.16542114370045092


def test_zeta_exact_points():
    assert riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90, rel=1e-14)
    assert riemann_zeta(3.0) == pytest.approx(ZETA_3, rel=1e-14)
    assert riemann_zeta(0.5) == pytest.approx(ZETA_HALF, rel=1e-13)
    assert riemann_zeta(0.0) == pytest.approx(-0.5, abs=1e-14)
    assert riemann_zeta(-1.0) == pytest.approx(-1.0 / 12.0, rel=1e-13)
    assert riemann_zeta(-3.0) == pytest.approx(1.0 / 120.0, rel=1e-12)
    # reflection branch
    assert riemann_zeta(-7.0) == pytest.approx(1.0 / 240.0, rel=1e-12)
    assert riemann_zeta(-11.0) == pytest.approx(691.0 / 32760.0, rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_zeta_trivial_zeros(k):
    # k = 2 sits deep in the Euler-Maclaurin branch where truncation is
    # largest; the accuracy contract there is 1e-9
    assert abs(riemann_zeta(-2.0 * k)) < 1e-9


def test_zeta_pole_and_bad_input():
    with pytest.raises(DomainError):
        riemann_zeta(1.0)
    with pytest.raises(DomainError):
        riemann_zeta(float("nan"))


def test_zeta_branch_continuity():
    # values straddling the alternating/Euler-Maclaurin switch at s = 0.5
    assert riemann_zeta(0.5 + 1e-7) == pytest.approx(riemann_zeta(0.5 - 1e-7), abs=1e-5)
    # and the Euler-Maclaurin/reflection switch at s = -5
    assert riemann_zeta(-5.0 + 1e-7) == pytest.approx(riemann_zeta(-5.0 - 1e-7), abs=1e-7)


def test_zeta_derivative_at_zero_is_half_log_2pi():
    assert zeta_derivative(0.0) == pytest.approx(-0.5 * math.log(2.0 * math.pi), rel=1e-12)


def test_zeta_derivative_at_minus_one_frozen():
    assert zeta_derivative(-1.0) == pytest.approx(ZETA_PRIME_MINUS1, abs=1e-12)


@pytest.mark.parametrize("k,s_pos", [(1, 3.0), (2, 5.0), (3, 7.0)])
def test_zeta_derivative_at_trivial_zeros(k, s_pos):
    # zeta'(-2k) = (-1)^k (2k)! zeta(2k+1) / (2 (2pi)^(2k)); the k = 3 case
    # exercises the reflection branch
    want = (-1.0) ** k * math.factorial(2 * k) * riemann_zeta(s_pos) / (
        2.0 * (2.0 * math.pi) ** (2 * k)
    )
    assert zeta_derivative(-2.0 * k) == pytest.approx(want, abs=1e-9)


def test_euler_gamma():
    assert euler_gamma() == pytest.approx(EULER_GAMMA, abs=1e-14)


def test_bernoulli_values():
    assert bernoulli(0) == 1.0
    assert bernoulli(2) == pytest.approx(1.0 / 6.0, rel=1e-15)
    assert bernoulli(4) == pytest.approx(-1.0 / 30.0, rel=1e-15)
    assert bernoulli(12) == pytest.approx(float(Fraction(-691, 2730)), rel=1e-15)
    assert bernoulli(3) == 0.0
    assert bernoulli(13) == 0.0


def test_harmonic_numbers():
    assert harmonic_number(0) == 0.0
    assert harmonic_number(1) == 1.0
    assert harmonic_number(4) == pytest.approx(25.0 / 12.0, rel=1e-15)
    assert harmonic_number(10) == pytest.approx(float(Fraction(7381, 2520)), rel=1e-15)
    with pytest.raises(DomainError):
        harmonic_number(-1)


def test_log_factorial_small_and_lgamma():
    assert log_factorial(0) == 0.0
    assert log_factorial(1) == 0.0
    assert log_factorial(5) == pytest.approx(math.log(120.0), rel=1e-15)
    for p in (10, 170, 4000):
        assert log_factorial(p) == pytest.approx(math.lgamma(p + 1.0), rel=1e-14)


def test_log_factorial_stirling_branch_continuous():
    p = LOG_FACTORIAL_EXACT_MAX + 1
    assert log_factorial(p) == pytest.approx(math.lgamma(p + 1.0), abs=1e-8)


def test_log_factorial_rejects_bad_input():
    with pytest.raises(DomainError):
        log_factorial(-1)
    with pytest.raises(DomainError):
        log_factorial(2.0)


def test_log_superfactorial_small():
    assert log_superfactorial(0) == 0.0
    assert log_superfactorial(1) == 0.0
    assert log_superfactorial(2) == pytest.approx(math.log(2.0), rel=1e-15)
    assert log_superfactorial(3) == pytest.approx(math.log(12.0), rel=1e-15)
    assert log_superfactorial(4) == pytest.approx(math.log(288.0), rel=1e-15)


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=1, max_value=2000))
def test_log_superfactorial_prefix_recurrence(p):
    lhs = log_superfactorial(p + 1) - log_superfactorial(p)
    assert lhs == pytest.approx(log_factorial(p + 1), abs=1e-10 * (1 + abs(lhs)))


def test_superfactorial_asymptotic_converges_quadratically():
    diffs = {
        p: abs(log_superfactorial(p) - log_superfactorial_asymptotic(p))
        for p in (100, 400, 1600)
    }
    assert diffs[400] < diffs[100] / 8.0
    assert diffs[1600] < diffs[400] / 8.0
    assert diffs[1600] < 1e-6


def test_r_genus_coefficient():
    assert r_genus_coefficient(0) == 0.0
    assert r_genus_coefficient(2) == 0.0
    want1 = 2.0 * zeta_derivative(-1.0) + harmonic_number(1) * riemann_zeta(-1.0)
    assert r_genus_coefficient(1) == pytest.approx(want1, rel=1e-14)
    assert r_genus_coefficient(1) == pytest.approx(-0.4141756207342352, abs=1e-12)
    want3 = 2.0 * zeta_derivative(-3.0) + harmonic_number(3) * riemann_zeta(-3.0)
    assert r_genus_coefficient(3) == pytest.approx(want3, rel=1e-14)
    with pytest.raises(DomainError):
        r_genus_coefficient(-1)


def test_precision_policy_validation():
    with pytest.raises(DomainError):
        PrecisionPolicy(abs_tol=-1.0)
    with pytest.raises(DomainError):
        PrecisionPolicy(max_terms=2)
    loose = PrecisionPolicy(abs_tol=1e-6, max_terms=64)
    assert riemann_zeta(2.0, loose) == pytest.approx(math.pi**2 / 6, abs=1e-6)
