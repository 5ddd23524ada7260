"""Oracle cross-checks bundled as named, timed checks.

Every closed form in the library has an independent numeric route; this
module runs each pair and reports the worst deviation.  The CLI selftest mode
prints the results, and the acceptance test asserts them with the shipped
tolerances.  Checks construct their own inputs (fixed seeds, fixed grids) so
a run is deterministic.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from . import cp1, heatmodel, orbifold, specfun, torsion
from .heatmodel import GFunctionId, GeometricData, MomentKind
from .mellin import extract_small_u_coefficients, mellin_at_zero, mellin_derivative_at_zero, regularized_det_from_zeta
from .orbifold import StratumData

__all__ = ["CheckResult", "run_all", "ALL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _result(name: str, t0: float, parts: list[tuple[str, float, float]]) -> CheckResult:
    """parts: (label, deviation, tolerance) triples."""
    passed = all(dev <= tol for _, dev, tol in parts)
    detail = "; ".join(f"{label} {dev:.2e} (tol {tol:.0e})" for label, dev, tol in parts)
    return CheckResult(name=name, passed=passed, detail=detail, elapsed=time.perf_counter() - t0)


def check_cp1_arithmetic() -> CheckResult:
    t0 = time.perf_counter()
    worst = max(abs(l - r) for l, r in map(cp1.arithmetic_degree_check, range(1, 2001)))
    return _result("cp1-arithmetic-identity", t0, [("max |lhs-rhs| p<=2000", worst, 1e-9)])


def check_cp1_asymptotics() -> CheckResult:
    t0 = time.perf_counter()
    resid = {p: cp1.cp1_exact_2logT(p) - cp1.cp1_asymptotic(p) for p in (500, 1000, 2000, 4000, 25000, 50000)}
    ratio_dev = max(abs(resid[2 * p] / resid[p] - 0.5) for p in (500, 1000, 2000, 25000))
    bound = max(abs(p * r) for p, r in resid.items())
    const_closed = -math.log(2 * math.pi) / 6 - 7.0 / 12 - 2 * specfun.zeta_derivative(-1.0)
    # Richardson in 1/p on the constant term: residual is c/p + O(1/p^2)
    extrapolated = const_closed + 2 * resid[4000] - resid[2000]
    return _result(
        "cp1-asymptotics",
        t0,
        [
            ("|ratio - 1/2|", ratio_dev, 0.1),
            ("sup |p residual| / 10", bound / 10, 0.1),
            ("extrapolated constant dev", abs(extrapolated - const_closed), 1e-6),
        ],
    )


def _route_check_geometries() -> list[GeometricData]:
    rng = random.Random(20260815)
    geoms = [
        cp1.CP1_GEOMETRY,
        GeometricData(n=3, rk_e=2, vol=1.7, int_c1tm=5.5, int_c1e=-1.25),
    ]
    for _ in range(4):
        geoms.append(
            GeometricData(
                n=rng.randint(1, 4),
                rk_e=rng.randint(1, 3),
                vol=rng.uniform(0.2, 3.0),
                int_c1tm=rng.uniform(-6.0, 6.0),
                int_c1e=rng.uniform(-3.0, 3.0),
                log_det_integral=rng.uniform(-1.0, 1.0),
            )
        )
    return geoms


def check_two_route_coefficients() -> CheckResult:
    t0 = time.perf_counter()
    worst_a = worst_b = 0.0
    for geom in _route_check_geometries():
        a_closed, b_closed = torsion.alpha1_beta1(geom)
        second = torsion.alpha1_beta1_via_mellin(geom)
        worst_a = max(worst_a, abs(second.alpha1 - a_closed))
        worst_b = max(worst_b, abs(second.beta1 - b_closed))
    return _result(
        "two-route-subleading",
        t0,
        [("alpha1 route dev", worst_a, 1e-7), ("beta1 route dev", worst_b, 1e-7)],
    )


def check_g_suite() -> CheckResult:
    t0 = time.perf_counter()
    worst_val = worst_der = worst_ext = 0.0
    for gid in GFunctionId:
        f = lambda u, gid=gid: heatmodel.g_eval(gid, u)
        sing = heatmodel.g_small_u_coeffs(gid)
        decay = heatmodel.g_decay_bound(gid)
        worst_val = max(worst_val, abs(mellin_at_zero(f, sing) - heatmodel.g_mellin_closed(gid, 0.0)))
        engine = mellin_derivative_at_zero(f, sing, decay)
        worst_der = max(
            worst_der,
            abs(engine.derivative_at_zero - heatmodel.g_mellin_derivative_at_zero(gid)),
        )
        extracted = extract_small_u_coefficients(f, -sing.lowest_order)
        worst_ext = max(
            worst_ext,
            max(abs(extracted.expansion.coefficient(i) - c) for i, c in sing.coefficients.items()),
        )
    return _result(
        "g-function-suite",
        t0,
        [
            ("M(0) dev", worst_val, 1e-8),
            ("M'(0) engine dev", worst_der, 1e-8),
            ("small-u extraction dev", worst_ext, 1e-6),
        ],
    )


def check_supertraces() -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 6):
        for a in (0.1, 0.7, 2.0):
            worst = max(
                worst,
                abs(heatmodel.strace_closed(n, 1, a) - heatmodel.strace_bruteforce(n, a)),
            )
            diag = [0.4 * i - 0.9 for i in range(n)]
            worst = max(
                worst,
                abs(
                    heatmodel.strace_endo_closed(n, a, math.fsum(diag))
                    - heatmodel.strace_bruteforce(n, a, diag)
                ),
            )
    return _result("supertrace-oracle", t0, [("max dev n<=5", worst, 1e-12)])


def check_moments() -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    for u in (0.25, 1.0, 4.0):
        for kind in MomentKind:
            closed = heatmodel.moment_integral_closed(1, u, kind)
            quad = heatmodel.moment_integral_quadrature(1, u, kind)
            worst = max(worst, abs(closed - quad))
    return _result("moment-oracle", t0, [("max dev", worst, 1e-6)])


def check_orbifold_suite() -> CheckResult:
    t0 = time.perf_counter()
    pi = math.pi
    oracle_cases = [
        (StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(pi,), volume=1.0), 1, 1, 1.0),
        (StratumData(n_j=0, m_j=2, theta_j=0.0, angles=(pi / 2,), volume=1.0), 1, 1, 0.5),
        (StratumData(n_j=0, m_j=3, theta_j=0.0, angles=(2 * pi / 3, 2 * pi / 3), volume=1.0), 2, 1, 2.0),
    ]
    worst_oracle = max(
        abs(orbifold.c_ju0(s, n, rk, u) - orbifold.c_ju0_quadrature_oracle(s, n, rk, u))
        for s, n, rk, u in oracle_cases
    )
    codim2 = oracle_cases[2][0]
    limit_dev = max(abs(orbifold.c_ju0(codim2, 2, 1, u)) for u in (0.0, 1e-12))
    ratios = []
    for phi in (pi / 3, pi / 2, 2 * pi / 3, pi):
        s = StratumData(n_j=1, m_j=2, theta_j=0.0, angles=(phi,), volume=1.0)
        ratios.append(orbifold.c_ju0(s, 2, 3, 0.0) / orbifold.c_j_closed(s, 2, 3))
    ratio_spread = (max(ratios) - min(ratios)) / abs(ratios[0])
    teardrop = oracle_cases[0][0]
    kappa = orbifold.kappa_j0(teardrop, 1, 1)
    kappa_fine = orbifold.kappa_j0(teardrop, 1, 1, gl_order=24, cutoff_depth=12)
    return _result(
        "orbifold-suite",
        t0,
        [
            ("c_ju0 vs oracle", worst_oracle, 1e-6),
            ("codim>=2 limit", limit_dev, 1e-10),
            ("ratio spread", ratio_spread, 1e-8),
            ("kappa refinement", abs(kappa - kappa_fine), 1e-6),
        ],
    )


def check_special_functions() -> CheckResult:
    t0 = time.perf_counter()
    # log-derivative of the functional equation at s = -1 turns zeta'(-1)
    # into Borwein-branch data; the direct value comes from the
    # Euler-Maclaurin branch, so the two share no code path
    via_fe = (-1.0 / 12) * (
        math.log(2 * math.pi)
        - 1
        + specfun.euler_gamma()
        - specfun.zeta_derivative(2.0) / specfun.riemann_zeta(2.0)
    )
    dual = abs(specfun.zeta_derivative(-1.0) - via_fe)
    worst_fe = 0.0
    for s in (-0.5, -2.5, -3.5):
        reflected = (
            2.0**s
            * math.pi ** (s - 1)
            * math.sin(math.pi * s / 2)
            * math.gamma(1 - s)
            * specfun.riemann_zeta(1 - s)
        )
        worst_fe = max(worst_fe, abs(specfun.riemann_zeta(s) - reflected))
    det_dev = abs(
        regularized_det_from_zeta(specfun.zeta_derivative(0.0)) - math.sqrt(2 * math.pi)
    )
    return _result(
        "special-function-gates",
        t0,
        [
            ("zeta'(-1) dual oracle", dual, 1e-9),
            ("functional-equation residual", worst_fe, 1e-9),
            ("det(k) vs sqrt(2pi)", det_dev, 1e-9),
        ],
    )


def check_covolume_asymptotics() -> CheckResult:
    t0 = time.perf_counter()
    scaled = {
        p: p * (cp1.cp1_covolume(p) - cp1.covolume_asymptotic(p))
        for p in (500, 1000, 2000, 5000, 10000, 20000)
    }
    values = list(scaled.values())
    spread = max(values) - min(values)
    bound = max(abs(v) for v in values)
    return _result(
        "covolume-asymptotics",
        t0,
        [("p*(diff) spread", spread, 1e-3), ("sup |p*(diff)| / 10", bound / 10, 0.1)],
    )


ALL_CHECKS = (
    check_cp1_arithmetic,
    check_cp1_asymptotics,
    check_two_route_coefficients,
    check_g_suite,
    check_supertraces,
    check_moments,
    check_orbifold_suite,
    check_special_functions,
    check_covolume_asymptotics,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
