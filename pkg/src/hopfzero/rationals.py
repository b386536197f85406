"""Exact rational scalars and small number-theoretic helpers.

Every coefficient in this package is an exact rational.  We use gmpy2's mpq
when available (noticeably faster for the exact linear algebra), falling back
to the stdlib Fraction.  Both keep denominators positive and fractions
reduced, which is what the rest of the code relies on.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is normally present
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def rational(text):
    """Parse an exact rational from 'p', 'p/q' or a decimal literal.

    Decimal literals like '0.004' become 1/250 exactly; floats are never
    produced.
    """
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/")
        return Q(int(num), int(den))
    if "." in s or "e" in s or "E" in s:
        f = Fraction(s)
        return Q(f.numerator, f.denominator)
    return Q(int(s))


def as_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _int_nth_root(n: int, k: int):
    """Exact integer k-th root of n >= 0, or None if n is not a perfect power."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 1, 1
    while hi**k < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def nth_root_exact(x, k: int):
    """Rational k-th root of a nonnegative rational, or None if irrational."""
    num = _int_nth_root(int(x.numerator), k)
    if num is None:
        return None
    den = _int_nth_root(int(x.denominator), k)
    if den is None:
        return None
    return Q(num, den)


def poch(a, k: int, b):
    """Stepped Pochhammer product a (a+b) (a+2b) ... (a+(k-1)b).

    For k < 0 the Maple product-reflection convention is used,
    poch(a, -n, b) = 1 / ((a-b)(a-2b)...(a-nb)), so that
    poch(a, m+n, b) == poch(a, m, b) * poch(a+m*b, n, b) for all integers.
    """
    a = Q(a)
    b = Q(b)
    out = ONE
    if k >= 0:
        for j in range(k):
            out *= a + j * b
        return out
    for j in range(1, -k + 1):
        out *= a - j * b
    return ONE / out


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for j in range(k):
        out = out * (n - j) // (j + 1)
    return out


def factorial(n: int) -> int:
    out = 1
    for j in range(2, n + 1):
        out *= j
    return out
