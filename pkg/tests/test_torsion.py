"""Expansion coefficients: closed forms, the independent Mellin route, and
structural identities the two routes must share."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstorsion.errors import DomainError
from rstorsion.heatmodel import GeometricData
from rstorsion.specfun import zeta_derivative
from rstorsion.torsion import (
    MAX_CLOSED_ORDER,
    ExpansionTable,
    alpha0_beta0,
    alpha1_beta1,
    alpha1_beta1_via_mellin,
    build_expansion_table,
    expansion_eval,
)

CP1 = GeometricData(n=1, rk_e=1, vol=1.0, int_c1tm=2.0, int_c1e=0.0)
CP1_BETA1 = 0.5588038903339605


def _geom(n=2, rk_e=1, vol=1.0, ctm=3.0, ce=0.5, ldi=0.0):
    return GeometricData(
        n=n, rk_e=rk_e, vol=vol, int_c1tm=ctm, int_c1e=ce, log_det_integral=ldi
    )


def test_alpha0_beta0_closed_form():
    geom = _geom(n=3, rk_e=2, vol=1.4, ldi=0.6)
    alpha0, beta0 = alpha0_beta0(geom)
    assert alpha0 == pytest.approx(3 * 2 * 1.4 / 2.0, rel=1e-15)
    assert beta0 == pytest.approx(2 * 0.6 / 2.0, rel=1e-15)


def test_cp1_subleading_frozen():
    alpha1, beta1 = alpha1_beta1(CP1)
    assert alpha1 == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert beta1 == pytest.approx(CP1_BETA1, abs=1e-13)
    # same number assembled directly
    want = 2.0 * zeta_derivative(-1.0) + math.log(2.0 * math.pi) / 6.0 + 7.0 / 12.0
    assert beta1 == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize(
    "geom",
    [
        CP1,
        _geom(n=2, rk_e=2, vol=1.5, ctm=4.0, ce=-1.0, ldi=0.25),
        _geom(n=3, rk_e=1, vol=0.8, ctm=-2.5, ce=1.7, ldi=-0.4),
    ],
)
def test_mellin_route_agrees_with_closed_form(geom):
    closed_a1, closed_b1 = alpha1_beta1(geom)
    route = alpha1_beta1_via_mellin(geom)
    assert route.alpha1 == pytest.approx(closed_a1, abs=1e-7)
    assert route.beta1 == pytest.approx(closed_b1, abs=1e-7)
    # reported uncertainties must cover the actual deviations
    assert abs(route.alpha1 - closed_a1) <= 20.0 * max(route.alpha1_error, 1e-12)
    assert abs(route.beta1 - closed_b1) <= 20.0 * max(route.beta1_error, 1e-12)


@settings(deadline=None, max_examples=20)
@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=3),
    st.floats(min_value=0.2, max_value=3.0),
    st.floats(min_value=-5.0, max_value=5.0),
)
def test_twist_by_the_line_bundle_reindexes_the_expansion(n, rk_e, vol, ctm):
    """Replacing the auxiliary bundle E by E tensor L turns p into p + 1, so
    re-expanding in p forces alpha1 -> alpha1 + n alpha0 and
    beta1 -> beta1 + alpha0 + n beta0."""
    base = GeometricData(n=n, rk_e=rk_e, vol=vol, int_c1tm=ctm, int_c1e=0.0)
    # each of the rk_e line-bundle factors contributes n * vol to int_c1e
    shifted = GeometricData(
        n=n, rk_e=rk_e, vol=vol, int_c1tm=ctm, int_c1e=rk_e * n * vol
    )
    alpha0, beta0 = alpha0_beta0(base)
    a1, b1 = alpha1_beta1(base)
    a1s, b1s = alpha1_beta1(shifted)
    assert a1s == pytest.approx(a1 + n * alpha0, rel=1e-12, abs=1e-12)
    assert b1s == pytest.approx(b1 + alpha0 + n * beta0, rel=1e-12, abs=1e-12)


@settings(deadline=None, max_examples=20)
@given(
    st.floats(min_value=-4.0, max_value=4.0),
    st.floats(min_value=-4.0, max_value=4.0),
    st.floats(min_value=-2.0, max_value=2.0),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_subleading_coefficients_linear_in_chern_data(ca, cb, ea, eb):
    mid_a1, mid_b1 = alpha1_beta1(
        _geom(ctm=0.5 * (ca + cb), ce=0.5 * (ea + eb))
    )
    a1a, b1a = alpha1_beta1(_geom(ctm=ca, ce=ea))
    a1b, b1b = alpha1_beta1(_geom(ctm=cb, ce=eb))
    assert mid_a1 == pytest.approx(0.5 * (a1a + a1b), rel=1e-12, abs=1e-12)
    assert mid_b1 == pytest.approx(0.5 * (b1a + b1b), rel=1e-12, abs=1e-12)


def test_alpha0_positive_for_positive_data():
    # the leading log coefficient is a volume times positive constants
    alpha0, _ = alpha0_beta0(_geom(n=4, rk_e=3, vol=2.2))
    assert alpha0 > 0


def test_non_kahler_convention_is_rejected():
    with pytest.raises(DomainError):
        alpha1_beta1(CP1, kahler_normalized=False)
    with pytest.raises(DomainError):
        alpha1_beta1_via_mellin(CP1, kahler_normalized=False)


def test_build_expansion_table():
    table = build_expansion_table(CP1)
    assert table.n == 1
    assert table.max_order == MAX_CLOSED_ORDER == 1
    orders = [order for order, _, _ in table.terms]
    assert orders == [0, 1]
    assert table.terms[0][1] == pytest.approx(0.5, rel=1e-15)
    assert table.terms[1][2] == pytest.approx(CP1_BETA1, abs=1e-13)

    head = build_expansion_table(CP1, max_order=0)
    assert head.max_order == 0

    with pytest.raises(DomainError):
        build_expansion_table(CP1, max_order=2)
    with pytest.raises(DomainError):
        build_expansion_table(CP1, max_order=-1)


def test_expansion_table_requires_consecutive_orders():
    with pytest.raises(DomainError):
        ExpansionTable(n=1, terms=((0, 1.0, 0.0), (2, 1.0, 0.0)))
    with pytest.raises(DomainError):
        ExpansionTable(n=1, terms=((1, 1.0, 0.0),))


def test_expansion_eval_arithmetic():
    table = ExpansionTable(n=2, terms=((0, 1.5, -0.25), (1, 0.5, 2.0)))
    p = 7
    want = p**2 * (1.5 * math.log(p) - 0.25) + p * (0.5 * math.log(p) + 2.0)
    assert expansion_eval(table, p, 1) == pytest.approx(want, rel=1e-14)
    head = p**2 * (1.5 * math.log(p) - 0.25)
    assert expansion_eval(table, p, 0) == pytest.approx(head, rel=1e-14)


def test_expansion_eval_validation():
    table = build_expansion_table(CP1)
    with pytest.raises(DomainError):
        expansion_eval(table, 1, 1)
    with pytest.raises(DomainError):
        expansion_eval(table, 2.5, 1)
    with pytest.raises(DomainError):
        expansion_eval(table, 10, 2)
