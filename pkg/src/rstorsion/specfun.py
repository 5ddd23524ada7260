"""Zeta values, log-factorials and related special constants.

Everything downstream (expansion coefficients, reference identities, the
regularized Mellin engine) bottoms out in a handful of classical constants, so
this module computes them from scratch with two deliberately different
schemes:

* Re s >= 0.5: Borwein's accelerated alternating (eta) series

      zeta(s) = -1 / (d_n (1 - 2^(1-s))) * sum_{k=0}^{n-1} (-1)^k (d_k - d_n) (k+1)^(-s)

  with Chebyshev-derived weights d_k; the remainder decays like
  (3 + sqrt 8)^(-n) so n is chosen from the requested tolerance.

* -5 < s < 0.5: Euler-Maclaurin applied directly to sum k^(-s) with a small
  node count (N = 14).  The cancellation floor of the scheme grows like
  N^|s| eps, which is why N is kept small instead of large; the asymptotic
  tail is truncated by a first-omitted-term bound.  The series terminates
  exactly at s = 0, s = -1 and the trivial zeros.

* s <= -5: reflection through the functional equation onto Borwein's range.

The functional equation is intentionally *not* used on -5 < s < 0.5, so it
remains an independent cross-check there (see the test suite).  Derivatives
reuse the same splits on the log-weighted series; the Euler-Maclaurin stopping
rule bounds the derivative of the first omitted term too, because at integer s
the Pochhammer products vanish while their s-derivatives do not.

Log-factorials are exact double-double prefix sums up to p = 10^5 and switch
to Stirling / Barnes-type asymptotics beyond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .compensated import PrefixTable, dd_add_dd
from .errors import DomainError, ToleranceError

__all__ = [
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "bernoulli",
    "euler_gamma",
    "riemann_zeta",
    "zeta_derivative",
    "harmonic_number",
    "log_factorial",
    "log_superfactorial",
    "log_superfactorial_asymptotic",
    "r_genus_coefficient",
    "LOG_FACTORIAL_EXACT_MAX",
]

LOG_FACTORIAL_EXACT_MAX = 100_000

_LOG2 = math.log(2.0)
_ACCEL = 3.0 + math.sqrt(8.0)  # per-term decay base of the alternating scheme
_EM_NODES = 14
_REFLECT_BELOW = -5.0


@dataclass(frozen=True)
class PrecisionPolicy:
    """Accuracy contract for the scalar special-function routines.

    abs_tol is a target for the *truncation* error; the roundoff floor of
    float64 still applies on top of it.  max_terms caps series lengths; a
    routine that cannot meet abs_tol within the cap raises ToleranceError
    rather than returning a silently degraded value.
    """

    abs_tol: float = 1e-13
    max_terms: int = 400

    def __post_init__(self):
        if not (isinstance(self.abs_tol, float) and math.isfinite(self.abs_tol) and self.abs_tol > 0):
            raise DomainError(f"abs_tol must be a positive finite float, got {self.abs_tol!r}")
        if not (isinstance(self.max_terms, int) and self.max_terms >= 8):
            raise DomainError(f"max_terms must be an integer >= 8, got {self.max_terms!r}")


DEFAULT_POLICY = PrecisionPolicy()


@lru_cache(maxsize=None)
def _bernoulli_fractions(count: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, count + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += Fraction(math.comb(m + 1, j)) * b[j]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli(m: int) -> float:
    """Bernoulli number B_m (B_1 = -1/2 convention), as a float."""
    if not isinstance(m, int) or m < 0:
        raise DomainError(f"bernoulli index must be a nonnegative integer, got {m!r}")
    return float(_bernoulli_fractions(m)[m])


@lru_cache(maxsize=None)
def _bernoulli_over_factorial(j: int) -> float:
    # B_{2j} / (2j)! evaluated exactly in rationals before rounding once
    frac = _bernoulli_fractions(2 * j)[2 * j] / math.factorial(2 * j)
    return float(frac)


@lru_cache(maxsize=16)
def _euler_gamma_cached(abs_tol: float, max_terms: int) -> float:
    n = 64
    acc = math.fsum(1.0 / k for k in range(1, n + 1))
    acc -= math.log(n) + 0.5 / n
    j = 1
    while True:
        term = float(_bernoulli_fractions(2 * j)[2 * j]) / (2 * j) / n ** (2 * j)
        acc += term
        nxt = abs(float(_bernoulli_fractions(2 * j + 2)[2 * j + 2])) / (2 * j + 2) / n ** (2 * j + 2)
        if nxt < abs_tol / 4:
            return acc
        j += 1
        if j > max_terms:
            raise ToleranceError(f"euler_gamma did not reach abs_tol={abs_tol} within {max_terms} terms")


def euler_gamma(policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """The Euler-Mascheroni constant."""
    return _euler_gamma_cached(policy.abs_tol, policy.max_terms)


@lru_cache(maxsize=None)
def _borwein_weights(n: int) -> tuple[float, ...]:
    t = 1.0 / n
    s = t
    d = [0.0] * (n + 1)
    d[0] = n * t
    for i in range(1, n + 1):
        t *= 4.0 * (n + i - 1) * (n - i + 1) / ((2 * i - 1) * (2 * i))
        s += t
        d[i] = n * s
    return tuple(d)


def _one_minus_two_pow(s: float) -> float:
    # 1 - 2^(1-s) without cancellation near s = 1
    return -math.expm1((1.0 - s) * _LOG2)


def _zeta_alternating(s: float, tol: float, max_terms: int, want_derivative: bool):
    q = _one_minus_two_pow(s)
    n = int(math.ceil(math.log(3.0 / (tol * abs(q))) / math.log(_ACCEL))) + 3
    n = max(18, n)
    if n > max_terms:
        raise ToleranceError(
            f"alternating zeta series needs {n} terms for abs_tol={tol} at s={s}, cap is {max_terms}"
        )
    d = _borwein_weights(n)
    dn = d[n]
    s0 = 0.0
    s1 = 0.0
    sign = 1.0
    for k in range(n):
        w = sign * (d[k] - dn)
        pk = (k + 1.0) ** (-s)
        s0 += w * pk
        if want_derivative:
            s1 += w * pk * math.log(k + 1.0)
        sign = -sign
    z = -s0 / (dn * q)
    if not want_derivative:
        return z
    # eta'(s) accelerated by the same weights; 2^(1-s) == 1 - q
    return z, (s1 / dn - _LOG2 * (1.0 - q) * z) / q


def _zeta_euler_maclaurin(s: float, tol: float, max_terms: int, want_derivative: bool):
    n = _EM_NODES
    z = math.fsum((k + 1.0) ** (-s) for k in range(n - 1))
    z += 0.5 * n ** (-s) + n ** (1.0 - s) / (s - 1.0)
    dz = 0.0
    ln_n = math.log(n)
    if want_derivative:
        dz = math.fsum(-math.log(k + 1.0) * (k + 1.0) ** (-s) for k in range(1, n - 1))
        dz += -0.5 * ln_n * n ** (-s)
        dz += -ln_n * n ** (1.0 - s) / (s - 1.0) - n ** (1.0 - s) / (s - 1.0) ** 2
    j = 1
    while True:
        if 2 * j > max_terms or 2 * j > 140:
            raise ToleranceError(f"Euler-Maclaurin tail did not converge at s={s} (abs_tol={tol})")
        c = _bernoulli_over_factorial(j)
        p = 1.0
        dp = 0.0
        for i in range(2 * j - 1):
            dp = dp * (s + i) + p
            p *= s + i
        scale = n ** (-s - 2.0 * j + 1.0)
        z += c * p * scale
        if want_derivative:
            dz += c * scale * (dp - ln_n * p)
        c2 = _bernoulli_over_factorial(j + 1)
        p2 = 1.0
        dp2 = 0.0
        for i in range(2 * j + 1):
            dp2 = dp2 * (s + i) + p2
            p2 *= s + i
        scale2 = n ** (-s - 2.0 * j - 1.0)
        omitted = abs(c2 * p2 * scale2)
        if want_derivative:
            omitted += abs(c2 * scale2 * (dp2 - ln_n * p2))
        # first-omitted-term bound, valid once the exponent passes -s
        if s + 2 * j + 1 > 0 and 2.0 * omitted < tol / 2:
            break
        j += 1
    if want_derivative:
        return z, dz
    return z


def _sinpi_half(s: float) -> float:
    # sin(pi s / 2) with exact zeros at even integer s
    r = s / 2.0
    k = math.floor(r + 0.5)
    v = math.sin(math.pi * (r - k))
    return -v if (k % 2) else v


def _cospi_half(s: float) -> float:
    r = s / 2.0
    k = math.floor(r + 0.5)
    v = math.cos(math.pi * (r - k))
    return -v if (k % 2) else v


def _digamma_large(x: float) -> float:
    # asymptotic digamma; only called with x >= 6 by the reflection branch
    v = math.log(x) - 0.5 / x
    for j in range(1, 12):
        v -= float(_bernoulli_fractions(2 * j)[2 * j]) / (2 * j) / x ** (2 * j)
    return v


def _zeta_reflected(s: float, tol: float, max_terms: int, want_derivative: bool):
    zr = _zeta_alternating(1.0 - s, tol, max_terms, want_derivative)
    z1, dz1 = zr if want_derivative else (zr, 0.0)
    pref = math.exp(s * _LOG2 + (s - 1.0) * math.log(math.pi) + math.lgamma(1.0 - s))
    sn = _sinpi_half(s)
    z = pref * sn * z1
    if not want_derivative:
        return z
    cs = _cospi_half(s)
    dz = pref * (
        sn * z1 * (math.log(2.0 * math.pi) - _digamma_large(1.0 - s))
        + (math.pi / 2.0) * cs * z1
        - sn * dz1
    )
    return z, dz


def _validate_s(s) -> float:
    s = float(s)
    if not math.isfinite(s):
        raise DomainError(f"zeta argument must be finite, got {s!r}")
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    return s


def riemann_zeta(s: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Riemann zeta at real s != 1."""
    s = _validate_s(s)
    if s >= 0.5:
        return _zeta_alternating(s, policy.abs_tol, policy.max_terms, False)
    if s > _REFLECT_BELOW:
        return _zeta_euler_maclaurin(s, policy.abs_tol, policy.max_terms, False)
    return _zeta_reflected(s, policy.abs_tol, policy.max_terms, False)


def zeta_derivative(s: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """d/ds of Riemann zeta at real s != 1."""
    s = _validate_s(s)
    if s >= 0.5:
        return _zeta_alternating(s, policy.abs_tol, policy.max_terms, True)[1]
    if s > _REFLECT_BELOW:
        return _zeta_euler_maclaurin(s, policy.abs_tol, policy.max_terms, True)[1]
    return _zeta_reflected(s, policy.abs_tol, policy.max_terms, True)[1]


def harmonic_number(m: int) -> float:
    """H_m = sum_{k<=m} 1/k, H_0 = 0."""
    if not isinstance(m, int) or m < 0:
        raise DomainError(f"harmonic_number expects a nonnegative integer, got {m!r}")
    return math.fsum(1.0 / k for k in range(1, m + 1))


# --- log-factorials -------------------------------------------------------

_log_factorial_prefix = PrefixTable(lambda k: math.log(k))
# second-level prefix: sum of log-factorials needs dd + dd, so it keeps its
# own arrays instead of reusing PrefixTable
_lsf_hi = [0.0]
_lsf_lo = [0.0]


def _ensure_superfactorial(m: int) -> None:
    while len(_lsf_hi) <= m:
        k = len(_lsf_hi)
        fh, fl = _log_factorial_prefix.dd(k)
        h, l = dd_add_dd(_lsf_hi[-1], _lsf_lo[-1], fh, fl)
        _lsf_hi.append(h)
        _lsf_lo.append(l)


def _log_factorial_dd(p: int) -> tuple[float, float]:
    return _log_factorial_prefix.dd(p)


def _log_superfactorial_dd(p: int) -> tuple[float, float]:
    _ensure_superfactorial(p)
    return _lsf_hi[p], _lsf_lo[p]


def _validate_count(p, name: str) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 0:
        raise DomainError(f"{name} expects a nonnegative integer, got {p!r}")
    return p


def log_factorial(p: int) -> float:
    """log(p!), exact cumulative sum up to p = 10^5, Stirling beyond."""
    p = _validate_count(p, "log_factorial")
    if p <= LOG_FACTORIAL_EXACT_MAX:
        return _log_factorial_prefix.value(p)
    x = float(p)
    v = x * math.log(x) - x + 0.5 * math.log(2.0 * math.pi * x)
    for j in range(1, 9):
        v += float(_bernoulli_fractions(2 * j)[2 * j]) / ((2 * j) * (2 * j - 1) * x ** (2 * j - 1))
    return v


def log_superfactorial(p: int) -> float:
    """log(1! 2! ... p!), exact cumulative sum up to p = 10^5."""
    p = _validate_count(p, "log_superfactorial")
    if p <= LOG_FACTORIAL_EXACT_MAX:
        h, l = _log_superfactorial_dd(p)
        return h + l
    return log_superfactorial_asymptotic(p)


def log_superfactorial_asymptotic(p: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Barnes-type asymptotic for log(1! ... p!): with z = p + 1,

        z^2/2 log z - 3 z^2/4 + z/2 log(2 pi) - 1/12 log z + zeta'(-1).

    The truncation error is O(1/z^2); exposed separately so the exact
    cumulative sum can be cross-checked against it.
    """
    p = _validate_count(p, "log_superfactorial_asymptotic")
    if p == 0:
        raise DomainError("asymptotic form needs p >= 1")
    z = p + 1.0
    lz = math.log(z)
    return 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * math.log(2.0 * math.pi) - lz / 12.0 + zeta_derivative(-1.0, policy)


def r_genus_coefficient(m: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Degree-m coefficient of the additive genus built from zeta data:

        0                              for even m (including m = 0),
        2 zeta'(-m) + H_m zeta(-m)     for odd m.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise DomainError(f"r_genus_coefficient expects a nonnegative integer, got {m!r}")
    if m % 2 == 0:
        return 0.0
    return 2.0 * zeta_derivative(float(-m), policy) + harmonic_number(m) * riemann_zeta(float(-m), policy)
