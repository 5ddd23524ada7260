"""Regularized Mellin engine against functions with known transforms.

The normalization divides out Gamma(z), so M[f](0) equals the order-0
small-u coefficient and M[exp(-a u)]'(0) = -log a.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstorsion.errors import DomainError
from rstorsion.mellin import (
    DecayBound,
    SingularExpansion,
    extract_small_u_coefficients,
    mellin_at_zero,
    mellin_derivative_at_zero,
    regularized_det_from_zeta,
)
from rstorsion.specfun import euler_gamma, zeta_derivative

_UNIT = SingularExpansion(lowest_order=0, coefficients={0: 1.0})


def test_singular_expansion_validates_orders():
    with pytest.raises(DomainError):
        SingularExpansion(lowest_order=1, coefficients={0: 1.0})
    with pytest.raises(DomainError):
        SingularExpansion(lowest_order=0, coefficients={0: float("inf")})
    with pytest.raises(DomainError):
        SingularExpansion(lowest_order=-1, coefficients={})
    sing = SingularExpansion(lowest_order=2, coefficients={-2: 1.0, -1: 0.0, 0: -0.5})
    assert sing.coefficient(-2) == 1.0
    with pytest.raises(DomainError):
        sing.coefficient(-3)
    assert sing.evaluate(2.0) == pytest.approx(0.25 - 0.5, rel=1e-15)


def test_decay_bound():
    bound = DecayBound(rate=2.0, scale=3.0, onset=1.0)
    assert bound.tail_integral_bound(4.0) == pytest.approx(
        3.0 * math.exp(-8.0) / 8.0, rel=1e-15
    )
    with pytest.raises(DomainError):
        bound.tail_integral_bound(0.5)
    with pytest.raises(DomainError):
        DecayBound(rate=-1.0, scale=1.0)


def test_value_at_zero_is_constant_term():
    assert mellin_at_zero(
        lambda u: math.exp(-u), _UNIT
    ) == 1.0


def test_probe_rejects_wrong_constant():
    bad = SingularExpansion(lowest_order=0, coefficients={0: 2.0})
    with pytest.raises(DomainError):
        mellin_at_zero(lambda u: math.exp(-u), bad)


def test_probe_rejects_missing_pole():
    with pytest.raises(DomainError):
        mellin_at_zero(lambda u: math.exp(-u) / u, _UNIT)


def test_derivative_of_plain_exponential_is_zero():
    result = mellin_derivative_at_zero(
        lambda u: math.exp(-u), _UNIT, DecayBound(rate=1.0, scale=1.0)
    )
    assert result.value_at_zero == 1.0
    assert abs(result.derivative_at_zero) <= 1e-9
    assert abs(result.derivative_at_zero) <= 3.0 * max(result.error_estimate, 1e-12)


def test_derivative_with_simple_pole():
    # exp(-u)/u has normalized transform 1/(z-1): value -1, derivative -1
    sing = SingularExpansion(lowest_order=1, coefficients={-1: 1.0, 0: -1.0})
    result = mellin_derivative_at_zero(
        lambda u: math.exp(-u) / u, sing, DecayBound(rate=1.0, scale=1.0)
    )
    assert result.value_at_zero == -1.0
    assert result.derivative_at_zero == pytest.approx(-1.0, abs=1e-8)


def test_derivative_of_gaussian_is_half_euler_gamma():
    # Gamma(z/2) / (2 Gamma(z)) has logarithmic derivative gamma/2 at z = 0
    result = mellin_derivative_at_zero(
        lambda u: math.exp(-u * u), _UNIT, DecayBound(rate=1.0, scale=1.0)
    )
    assert result.derivative_at_zero == pytest.approx(0.5 * euler_gamma(), abs=1e-8)


@settings(deadline=None, max_examples=12)
@given(st.floats(min_value=0.5, max_value=4.0))
def test_derivative_of_scaled_exponential_is_minus_log(a):
    result = mellin_derivative_at_zero(
        lambda u: math.exp(-a * u), _UNIT, DecayBound(rate=a, scale=1.0)
    )
    assert result.derivative_at_zero == pytest.approx(-math.log(a), abs=1e-7)


def test_extraction_recovers_cos_over_u_squared():
    extraction = extract_small_u_coefficients(lambda u: math.cos(u) / (u * u), -2)
    exp = extraction.expansion
    assert exp.lowest_order == 2
    assert exp.coefficient(-2) == pytest.approx(1.0, abs=1e-9)
    assert exp.coefficient(-1) == pytest.approx(0.0, abs=1e-9)
    assert exp.coefficient(0) == pytest.approx(-0.5, abs=1e-9)
    for order in (-2, -1, 0):
        assert extraction.errors[order] < 1e-7
    assert extraction.condition < 1e10


def test_extraction_error_estimates_cover_actual_error():
    extraction = extract_small_u_coefficients(lambda u: math.exp(-3.0 * u), 0)
    actual = abs(extraction.expansion.coefficient(0) - 1.0)
    assert actual <= 10.0 * max(extraction.errors[0], 1e-12)


def test_engine_tolerance_failure_is_loud():
    # a decay bound this weak cannot certify the requested tail accuracy
    from rstorsion.errors import ToleranceError

    with pytest.raises(ToleranceError):
        mellin_derivative_at_zero(
            lambda u: math.exp(-u),
            _UNIT,
            DecayBound(rate=1e-30, scale=1.0),
            abs_tol=1e-12,
        )


def test_regularized_det():
    assert regularized_det_from_zeta(zeta_derivative(0.0)) == pytest.approx(
        math.sqrt(2.0 * math.pi), rel=1e-12
    )
    assert regularized_det_from_zeta(0.0) == 1.0
