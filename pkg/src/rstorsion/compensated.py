"""Compensated float64 accumulation (double-double arithmetic).

The torsion/covolume identities cancel log-factorial sums of size ~1e9 down
to O(1) remainders, so a plain running sum would spend the whole error budget
on roundoff.  Double-double partial sums carry ~32 significant digits through
the cancellation and keep the final float64 result accurate to its own ulp.

A double-double is a pair (hi, lo) with hi = fl(hi + lo) and the exact value
hi + lo.  Only the handful of operations needed here are provided.
"""
from __future__ import annotations

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free sum: returns (s, e) with s = fl(a+b) and a + b = s + e exactly."""
    s = a + b
    t = s - a
    e = (a - (s - t)) + (b - t)
    return s, e


def fast_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Error-free product (Dekker): a*b = p + e exactly for unexceptional doubles."""
    p = a * b
    ca = _SPLITTER * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLITTER * b
    bh = cb - (cb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(hi: float, lo: float, x: float) -> tuple[float, float]:
    """(hi, lo) + float, renormalized."""
    s, e = two_sum(hi, x)
    e += lo
    return fast_two_sum(s, e)


def dd_add_dd(ahi: float, alo: float, bhi: float, blo: float) -> tuple[float, float]:
    s, e = two_sum(ahi, bhi)
    e += alo + blo
    return fast_two_sum(s, e)


def dd_scale(hi: float, lo: float, c: float) -> tuple[float, float]:
    """(hi, lo) * float, renormalized."""
    p, e = two_prod(hi, c)
    e += lo * c
    return fast_two_sum(p, e)


def dd_neg(hi: float, lo: float) -> tuple[float, float]:
    return -hi, -lo


def dd_sum(values) -> tuple[float, float]:
    """Double-double sum of an iterable of floats."""
    hi = 0.0
    lo = 0.0
    for v in values:
        hi, lo = dd_add(hi, lo, v)
    return hi, lo


class PrefixTable:
    """Growable double-double prefix sums of term(1), term(2), ...

    ``value(m)`` returns sum_{k<=m} term(k) rounded once; ``dd(m)`` returns the
    unrounded pair for callers that keep combining in double-double.  With
    dd_terms=True the term callable must itself return an (hi, lo) pair, for
    sums whose terms are products that have to stay exact.
    """

    def __init__(self, term, dd_terms: bool = False):
        self._term = term
        self._dd_terms = dd_terms
        self._hi = [0.0]
        self._lo = [0.0]

    def ensure(self, m: int) -> None:
        hi = self._hi
        lo = self._lo
        while len(hi) <= m:
            if self._dd_terms:
                th, tl = self._term(len(hi))
                h, l = dd_add_dd(hi[-1], lo[-1], th, tl)
            else:
                h, l = dd_add(hi[-1], lo[-1], self._term(len(hi)))
            hi.append(h)
            lo.append(l)

    def dd(self, m: int) -> tuple[float, float]:
        self.ensure(m)
        return self._hi[m], self._lo[m]

    def value(self, m: int) -> float:
        h, l = self.dd(m)
        return h + l
