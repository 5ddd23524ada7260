"""Asymptotic expansion of analytic torsion for powers of a positive line bundle.

The expansion -2 log T(p) = sum over i of p^(n-i) (alpha_i log p + beta_i)
is computed two independent ways: closed-form coefficient assembly, and a
regularized Mellin transform of a fiberwise heat supertrace.  Orbifold
quotients contribute oscillatory stratum terms on top of the manifold table.
Every closed form in the chain is covered by a numeric oracle; run
``rstorsion selftest`` to exercise all of them.
"""

from .errors import ConfigError, DomainError, ToleranceError
from .heatmodel import (
    CurvaturePoint,
    GeometricData,
    GFunctionId,
    MomentKind,
    curvature_from_chern,
    moment_integral_closed,
    strace_closed,
    strace_endo_closed,
    strace_n_a1,
)
from .mellin import (
    DecayBound,
    ExtractionResult,
    MellinResult,
    SingularExpansion,
    extract_small_u_coefficients,
    mellin_at_zero,
    mellin_derivative_at_zero,
    regularized_det_from_zeta,
)
from .orbifold import OrbifoldData, StratumData, gamma_j0, kappa_j0, orbifold_expansion_eval
from .torsion import (
    ExpansionTable,
    MellinRouteCoefficients,
    alpha0_beta0,
    alpha1_beta1,
    alpha1_beta1_via_mellin,
    build_expansion_table,
    expansion_eval,
)
from .cp1 import CP1_GEOMETRY, Cp1Report, cp1_exact_2logT, cp1_report

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "ToleranceError",
    "CurvaturePoint",
    "GeometricData",
    "GFunctionId",
    "MomentKind",
    "curvature_from_chern",
    "moment_integral_closed",
    "strace_closed",
    "strace_endo_closed",
    "strace_n_a1",
    "DecayBound",
    "ExtractionResult",
    "MellinResult",
    "SingularExpansion",
    "extract_small_u_coefficients",
    "mellin_at_zero",
    "mellin_derivative_at_zero",
    "regularized_det_from_zeta",
    "OrbifoldData",
    "StratumData",
    "gamma_j0",
    "kappa_j0",
    "orbifold_expansion_eval",
    "ExpansionTable",
    "MellinRouteCoefficients",
    "alpha0_beta0",
    "alpha1_beta1",
    "alpha1_beta1_via_mellin",
    "build_expansion_table",
    "expansion_eval",
    "CP1_GEOMETRY",
    "Cp1Report",
    "cp1_exact_2logT",
    "cp1_report",
    "__version__",
]
