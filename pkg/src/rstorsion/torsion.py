"""Expansion coefficients of -2 log T for high tensor powers.

-2 log T(p) = sum_{i=0}^{k} p^{n-i} (alpha_i log p + beta_i) + o(p^{n-k}).

The leading pair (alpha_0, beta_0) and the subleading pair (alpha_1, beta_1)
have closed forms in the global Chern integrals.  The subleading pair is also
recomputed along a second, numerically independent route: alpha_1 as the
constant term of the heat-coefficient integral A(u), beta_1 as -M[A]'(0)
through the Mellin engine.  Agreement of the two routes is a test gate, never
an assumption of either implementation.

Only orders i <= 1 are populated: no closed formulas exist beyond that, and
guessing is worse than refusing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .heatmodel import GeometricData, a_decay_bound, a_of_u, a_singular_expansion
from .mellin import extract_small_u_coefficients, mellin_derivative_at_zero
from .specfun import zeta_derivative

__all__ = [
    "ExpansionTable",
    "MellinRouteCoefficients",
    "alpha0_beta0",
    "alpha1_beta1",
    "alpha1_beta1_via_mellin",
    "build_expansion_table",
    "expansion_eval",
]

MAX_CLOSED_ORDER = 1


@dataclass(frozen=True)
class ExpansionTable:
    """Coefficient rows (order, alpha, beta), orders consecutive from 0."""

    n: int
    terms: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not self.terms:
            raise DomainError("expansion table needs at least the order-0 row")
        orders = [row[0] for row in self.terms]
        if orders != list(range(len(orders))):
            raise DomainError(f"orders must run 0, 1, ... without gaps, got {orders}")
        for _, a, b in self.terms:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise DomainError("coefficients must be finite")
        object.__setattr__(self, "terms", tuple(tuple(row) for row in self.terms))

    @property
    def max_order(self) -> int:
        return self.terms[-1][0]


@dataclass(frozen=True)
class MellinRouteCoefficients:
    """Second-route (A(u) + Mellin engine) values with propagated numeric
    error estimates."""

    alpha1: float
    beta1: float
    alpha1_error: float
    beta1_error: float


def alpha0_beta0(geom: GeometricData) -> tuple[float, float]:
    """Leading coefficients: alpha_0 = n rk_e vol / 2 and beta_0 =
    rk_e/2 times the log-determinant integral.  These hold for any positive
    line bundle, no Kahler normalization needed."""
    return (
        geom.n * geom.rk_e * geom.vol / 2,
        geom.rk_e * geom.log_det_integral / 2,
    )


def _require_kahler(kahler_normalized: bool) -> None:
    if not kahler_normalized:
        raise DomainError(
            "subleading coefficients are only known in closed form when the "
            "Kahler form equals the line-bundle curvature form"
        )


def alpha1_beta1(geom: GeometricData, *, kahler_normalized: bool = True) -> tuple[float, float]:
    """Closed subleading coefficients:

        alpha_1 = rk_e (3n+1)/12 * int_c1tm + n/2 * int_c1e
        beta_1  = rk_e/24 (24 zeta'(-1) + 2 log 2pi + 7) * int_c1tm
                  + 1/2 * int_c1e
    """
    _require_kahler(kahler_normalized)
    n, rk, ctm, ce = geom.n, geom.rk_e, geom.int_c1tm, geom.int_c1e
    alpha1 = rk * (3 * n + 1) / 12 * ctm + n / 2 * ce
    beta1 = rk / 24 * (24 * zeta_derivative(-1.0) + 2 * math.log(2 * math.pi) + 7) * ctm + ce / 2
    return alpha1, beta1


def alpha1_beta1_via_mellin(
    geom: GeometricData, *, kahler_normalized: bool = True
) -> MellinRouteCoefficients:
    """Subleading coefficients recomputed from A(u) alone: alpha_1 is the
    extracted u^0 coefficient, beta_1 = -M[A]'(0).  The engine is fed the
    analytic singular data (assembled from the g-function expansions), not
    the extracted one: a u^-2 extraction residue of size eps would be blown
    up by the u^-3 cutoff integrand to ~eps * 2^(2*depth)."""
    _require_kahler(kahler_normalized)
    f = lambda u: a_of_u(geom, u)
    extraction = extract_small_u_coefficients(f, -2)
    result = mellin_derivative_at_zero(f, a_singular_expansion(geom), a_decay_bound(geom))
    return MellinRouteCoefficients(
        alpha1=extraction.expansion.coefficient(0),
        beta1=-result.derivative_at_zero,
        alpha1_error=extraction.errors[0],
        beta1_error=result.error_estimate,
    )


def build_expansion_table(
    geom: GeometricData, max_order: int = MAX_CLOSED_ORDER, *, kahler_normalized: bool = True
) -> ExpansionTable:
    if not (isinstance(max_order, int) and 0 <= max_order <= MAX_CLOSED_ORDER):
        raise DomainError(
            f"closed formulas exist only for orders 0..{MAX_CLOSED_ORDER}, "
            f"requested max_order={max_order!r}"
        )
    rows = [(0, *alpha0_beta0(geom))]
    if max_order >= 1:
        rows.append((1, *alpha1_beta1(geom, kahler_normalized=kahler_normalized)))
    return ExpansionTable(n=geom.n, terms=tuple(rows))


def expansion_eval(table: ExpansionTable, p: int, k: int) -> float:
    """sum_{i=0}^{k} p^{n-i} (alpha_i log p + beta_i)."""
    if not (isinstance(p, int) and p >= 2):
        raise DomainError(f"p must be an integer >= 2, got {p!r}")
    if not (isinstance(k, int) and 0 <= k <= table.max_order):
        raise DomainError(f"truncation order {k!r} outside table range [0, {table.max_order}]")
    logp = math.log(p)
    return math.fsum(
        float(p) ** (table.n - i) * (a * logp + b) for i, a, b in table.terms[: k + 1]
    )
