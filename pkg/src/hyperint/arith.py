"""Exact rational arithmetic: valuations, bracket and Pochhammer symbols.

Valuations are returned as ``int``/``Fraction`` values, with ``math.inf``
standing for the valuation of zero.  Nothing here touches floating point
apart from that sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotPIntegral, UndefinedSymbol

INF = math.inf

Valuation = int | Fraction | float  # float only ever means +inf


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _int_ord(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p(x, p: int) -> Valuation:
    """Exponent of ``p`` in the rational ``x``; ``inf`` for zero."""
    x = as_fraction(x)
    if x == 0:
        return INF
    return _int_ord(x.numerator, p) - _int_ord(x.denominator, p)


def is_p_integral(x, p: int) -> bool:
    return as_fraction(x).denominator % p != 0


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-``p`` digits of the nonnegative integer ``n``."""
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def num_digits(n: int, p: int) -> int:
    """Number of base-``p`` digits of ``n >= 1``."""
    k = 0
    while n:
        n //= p
        k += 1
    return k


def factorial_ord(n: int, p: int) -> int:
    """Legendre: ord_p(n!) = (n - s_n)/(p - 1)."""
    return (n - digit_sum(n, p)) // (p - 1)


def _rising(a: int, b: int, length: int, step: int) -> tuple[int, int]:
    # numerator/denominator of prod_{k<length} (a + step*k*b)/b for z = a/b
    num = 1
    for k in range(length):
        num *= a + step * k * b
    return num, b ** length


def bracket(z, l: int) -> Fraction:
    """The symbol [z]_l.

    [z]_0 = 1, [z]_l = 1/((z+1)...(z+l)) for l > 0 and
    [z]_l = z(z-1)...(z+l+1) for l < 0.
    """
    z = as_fraction(z)
    if l == 0:
        return Fraction(1)
    a, b = z.numerator, z.denominator
    if l > 0:
        if b == 1 and -l <= a <= -1:
            raise UndefinedSymbol(f"[{z}]_{l} is undefined: z in {{-1,...,-{l}}}")
        num, den = _rising(a + b, b, l, 1)
        return Fraction(den, num)
    num, den = _rising(a, b, -l, -1)
    return Fraction(num, den)


def pochhammer(z, l: int) -> Fraction:
    """The Pochhammer symbol (z)_l = Gamma(z+l)/Gamma(z), extended to l < 0."""
    z = as_fraction(z)
    if l == 0:
        return Fraction(1)
    a, b = z.numerator, z.denominator
    if l > 0:
        num, den = _rising(a, b, l, 1)
        return Fraction(num, den)
    if b == 1 and 1 <= a <= -l:
        raise UndefinedSymbol(f"({z})_{l} is undefined: z in {{1,...,{-l}}}")
    num, den = _rising(a - b, b, -l, -1)
    return Fraction(den, num)


def bracket_vector(v: Sequence, l: Sequence[int]) -> Fraction:
    """Product of the coordinate brackets [v_j]_{l_j}."""
    if len(v) != len(l):
        raise ValueError("v and l must have the same length")
    out = Fraction(1)
    for j, (vj, lj) in enumerate(zip(v, l)):
        try:
            out *= bracket(vj, lj)
        except UndefinedSymbol as exc:
            raise UndefinedSymbol(f"factor {j}: {exc}", index=j) from None
    return out


def _rising_ord_digits(b: Fraction, length: int, p: int) -> Valuation:
    """ord_p (b)_length for length > 0 and p-integral b, from base-p digits.

    Writes b = -sum sigma_i p^i and compares the digit strings of ``length``
    and of -b.  Every position m with l_m > sigma_m contributes one plus the
    length of the run of agreeing digits that follows it (the "good
    collections" count).  An unbounded run means the product has a zero
    factor.
    """
    ldigits = []
    n = length
    while n:
        n, r = divmod(n, p)
        ldigits.append(r)
    k = len(ldigits)

    # -b = num/den with den prime to p; peel digits with integer arithmetic
    num, den = -b.numerator, b.denominator
    inv = pow(den, -1, p)
    sigma: list[int] = []

    def sigma_at(r: int) -> int | None:
        nonlocal num
        while len(sigma) <= r:
            if len(sigma) >= k and num == 0:
                return None  # -b is a nonnegative integer; all further digits vanish
            d = num * inv % p
            sigma.append(d)
            num = (num - d * den) // p
        return sigma[r]

    total = (length - sum(ldigits)) // (p - 1)
    for m in range(k):
        if ldigits[m] <= sigma_at(m):
            continue
        run = 0
        r = m + 1
        while True:
            lr = ldigits[r] if r < k else 0
            sr = sigma_at(r)
            if sr is None:
                return INF
            if lr != sr:
                break
            run += 1
            r += 1
        total += 1 + run
    return total


def bracket_valuation_digits(z, l: int, p: int) -> Valuation:
    """ord_p [z]_l computed from p-adic digits rather than from the product.

    For l > 0 this is -(l - s_l)/(p - 1) minus the number of digit positions
    lying in good collections; for l < 0 it is the same count applied to
    (-z)_{-l}.
    """
    z = as_fraction(z)
    if z.denominator % p == 0:
        raise NotPIntegral(f"{z} is not {p}-integral")
    if l == 0:
        return 0
    if l > 0:
        if z.denominator == 1 and -l <= z.numerator <= -1:
            raise UndefinedSymbol(f"[{z}]_{l} is undefined")
        return -_rising_ord_digits(z + 1, l, p)
    return _rising_ord_digits(-z, -l, p)


@dataclass(frozen=True)
class LogBound:
    """The real number -log_p(arg), compared against rationals exactly."""

    p: int
    arg: int

    def admits(self, x: Valuation) -> bool:
        """True iff x >= -log_p(arg), i.e. p^(-x) <= arg."""
        if x == INF:
            return True
        x = as_fraction(x)
        a, b = x.numerator, x.denominator
        if a >= 0:
            return self.arg ** b * self.p ** a >= 1
        return self.p ** (-a) <= self.arg ** b

    def __float__(self) -> float:
        return -math.log(self.arg, self.p)


def lower_bound_lemma52(l: int, p: int) -> LogBound:
    """The bound -log_p(p|l|) for ord(pi0^l [z]_l), z p-integral.

    It is a valid floor for l < 0.  For l > 0 it can fail (take z = -30/31,
    l = 2, p = 2): the digit run behind a good collection may continue past
    the top digit of l.  Scaling the argument by p^(max_j ord_p(z+j)),
    1 <= j <= l, restores a floor.
    """
    if l == 0:
        raise ValueError("bound is stated for l != 0")
    return LogBound(p, p * abs(l))


def pi_scaled_ord(z, l: int, p: int) -> Valuation:
    """ord(pi0^l [z]_l) = l/(p-1) + ord_p [z]_l."""
    o = bracket_valuation_digits(z, l, p)
    return o if o == INF else Fraction(l, p - 1) + o
