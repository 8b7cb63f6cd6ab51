"""Precision-tracked arithmetic in Q_p(pi) with pi^(p-1) = -p, and the root pi0.

An element is stored as p^(-E) * sum_{k<p-1} n_k pi^k together with an
absolute precision ``prec`` measured in pi-units: the element is known
modulo pi^prec.  ``prec`` may be ``inf`` for exact values; exact
coefficients may then be Fractions with denominators prime to p.

Valuations returned by :meth:`PadicElement.val` are in pi-units, so
``ord = val / (p - 1)`` in the normalization ord p = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import INF, as_fraction, is_prime, ord_p
from .errors import PrecisionExhausted

MIN_M = 4


@dataclass(frozen=True)
class PadicContext:
    p: int
    M: int = 12

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.M < MIN_M:
            raise PrecisionExhausted(f"coefficient precision M={self.M} is below {MIN_M}")

    @property
    def e(self) -> int:
        """Ramification index p - 1: pi-units per unit of ord."""
        return self.p - 1

    @property
    def cap(self) -> int:
        """Working precision (p - 1) * M in pi-units."""
        return (self.p - 1) * self.M

    def to_pi(self, x) -> int | float:
        """Smallest integer pi-valuation compatible with ord >= x."""
        if x == INF:
            return INF
        return math.ceil(as_fraction(x) * (self.p - 1))


def _ord_int(n, p: int) -> int | float:
    if n == 0:
        return INF
    if isinstance(n, Fraction):
        n = n.numerator
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _reduce(n, modulus: int) -> int:
    if isinstance(n, Fraction):
        if n.denominator == 1:
            return n.numerator % modulus
        return n.numerator * pow(n.denominator, -1, modulus) % modulus
    return n % modulus


class PadicElement:
    __slots__ = ("ctx", "E", "n", "prec")

    def __init__(self, ctx: PadicContext, E: int, n: Sequence, prec: int | float):
        self.ctx = ctx
        self.E = E
        self.n = list(n)
        self.prec = prec
        self._normalize()

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, ctx: PadicContext, prec: int | float = INF) -> "PadicElement":
        return cls(ctx, 0, [0] * (ctx.p - 1), prec)

    @classmethod
    def from_rational(cls, ctx: PadicContext, r, prec: int | float = INF) -> "PadicElement":
        r = as_fraction(r)
        p = ctx.p
        if r == 0:
            return cls.zero(ctx, prec)
        a = ord_p(r, p)
        E = max(0, -a)
        unit = r * Fraction(p) ** E
        return cls(ctx, E, [unit] + [0] * (p - 2), prec)

    @classmethod
    def pi(cls, ctx: PadicContext, prec: int | float = INF) -> "PadicElement":
        n = [0] * (ctx.p - 1)
        if ctx.p == 2:
            n[0] = -2
        else:
            n[1] = 1
        return cls(ctx, 0, n, prec)

    # normal form --------------------------------------------------------
    def _normalize(self) -> None:
        p, e = self.ctx.p, self.ctx.p - 1
        if self.E < 0:
            f = p ** (-self.E)
            self.n = [x * f for x in self.n]
            self.E = 0
        if self.prec != INF:
            out = []
            for k, x in enumerate(self.n):
                N = self.E + -((k - self.prec) // e)  # E + ceil((prec - k)/e)
                out.append(_reduce(x, p ** N) if N > 0 else 0)
            self.n = out
        while self.E > 0 and all(_ord_int(x, p) >= 1 for x in self.n):
            self.n = [x // p if isinstance(x, int) else x / p for x in self.n]
            self.E -= 1

    def copy(self) -> "PadicElement":
        return PadicElement(self.ctx, self.E, self.n, self.prec)

    # queries ------------------------------------------------------------
    def val(self) -> int | float:
        """pi-adic valuation, or the precision if the element is zero to precision."""
        p, e = self.ctx.p, self.ctx.p - 1
        best = INF
        for k, x in enumerate(self.n):
            o = _ord_int(x, p)
            if o != INF:
                best = min(best, k + e * (o - self.E))
        return min(best, self.prec)

    def is_zero(self) -> bool:
        return self.val() >= self.prec

    def ord(self):
        """p-adic ord (ord p = 1); a lower bound when zero to precision."""
        v = self.val()
        return v if v == INF else Fraction(v, self.ctx.p - 1)

    @property
    def rel_prec(self) -> int | float:
        return self.prec - self.val()

    def with_prec(self, prec: int | float) -> "PadicElement":
        return PadicElement(self.ctx, self.E, self.n, min(self.prec, prec))

    def residue(self) -> int:
        """Image in the residue field F_p of a unit or integral element."""
        if self.val() < 0:
            raise ValueError("element is not integral")
        x = self.n[0]
        return _reduce(x, self.ctx.p ** (self.E + 1)) // self.ctx.p ** self.E % self.ctx.p

    def __repr__(self) -> str:
        return f"PadicElement(p={self.ctx.p}, E={self.E}, n={self.n}, prec={self.prec})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.ctx.p != self.ctx.p:
                raise ValueError("elements from different primes")
            return other
        return PadicElement.from_rational(self.ctx, other)

    def __add__(self, other) -> "PadicElement":
        o = self._coerce(other)
        E = max(self.E, o.E)
        p = self.ctx.p
        fa, fb = p ** (E - self.E), p ** (E - o.E)
        n = [a * fa + b * fb for a, b in zip(self.n, o.n)]
        return PadicElement(self.ctx, E, n, min(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self) -> "PadicElement":
        return PadicElement(self.ctx, self.E, [-x for x in self.n], self.prec)

    def __sub__(self, other) -> "PadicElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PadicElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PadicElement":
        if not isinstance(other, PadicElement):
            return self.scale(other)
        o = self._coerce(other)
        p, e = self.ctx.p, self.ctx.p - 1
        c = [0] * e
        for i, a in enumerate(self.n):
            if not a:
                continue
            for j, b in enumerate(o.n):
                if not b:
                    continue
                k = i + j
                if k < e:
                    c[k] += a * b
                else:
                    c[k - e] -= p * a * b
        prec = min(self.prec + o.val(), o.prec + self.val())
        return PadicElement(self.ctx, self.E + o.E, c, prec)

    def __rmul__(self, other) -> "PadicElement":
        return self * other

    def scale(self, r) -> "PadicElement":
        """Multiply by an exact rational; precision shifts by its valuation."""
        r = as_fraction(r)
        if r == 0:
            return PadicElement.zero(self.ctx)
        p = self.ctx.p
        a = ord_p(r, p)
        unit = r / Fraction(p) ** a
        n = [x * unit for x in self.n]
        prec = self.prec + (p - 1) * a
        return PadicElement(self.ctx, self.E - a, n, prec)

    def mul_pi_pow(self, k: int) -> "PadicElement":
        p, e = self.ctx.p, self.ctx.p - 1
        n = list(self.n)
        E = self.E
        prec = self.prec
        if k < 0:
            # pi^-1 = -pi^(p-2)/p
            steps = (e - 1) * (-k)
            E += -k
            if k % 2:
                n = [-x for x in n]
            prec = prec - (-k) * e
        else:
            steps = k
        for _ in range(steps):
            n = [-p * n[-1]] + n[:-1]
        prec = prec + steps
        return PadicElement(self.ctx, E, n, prec)

    def inverse(self) -> "PadicElement":
        v = self.val()
        if v >= self.prec:
            raise PrecisionExhausted("cannot invert an element that is zero to precision")
        u = self.mul_pi_pow(-v)
        P = u.prec
        r = u.residue()
        target = P if P != INF else self.ctx.cap
        y = PadicElement.from_rational(self.ctx, Fraction(pow(r, -1, self.ctx.p)), target)
        two = PadicElement.from_rational(self.ctx, 2)
        uu = u.with_prec(target)
        done = 1
        while done < target:
            y = y * (two - uu * y)
            done *= 2
        y = y.with_prec(target)
        return y.mul_pi_pow(-v)

    def __truediv__(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            return self * other.inverse()
        return self.scale(1 / as_fraction(other))

    def __pow__(self, k: int) -> "PadicElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicElement.from_rational(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


# --------------------------------------------------------------------------
# pi0: the root of sum_i t^(p^i)/p^i with ord 1/(p-1)


@dataclass
class Pi0Certificate:
    value: PadicElement
    terms: int  # K: the defining series was truncated after t^(p^K)/p^K
    residual_val: int | float  # pi-valuation lower bound of the full series at value
    newton_steps: int


def _defining_terms(p: int, prec: int) -> int:
    """Smallest K with p^i - i(p-1) >= prec for all i > K (pi-units)."""
    K = 0
    while p ** (K + 1) - (K + 1) * (p - 1) < prec:
        K += 1
    return K


def _defining_series(t: PadicElement, K: int) -> tuple[PadicElement, PadicElement]:
    p = t.ctx.p
    f = t.copy()
    df = PadicElement.from_rational(t.ctx, 1)
    tinv = t.inverse()
    power = t
    for i in range(1, K + 1):
        power = power ** p  # t^(p^i)
        f = f + power.scale(Fraction(1, p ** i))
        df = df + power * tinv
    return f, df


_PI0_CACHE: dict[tuple[int, int], Pi0Certificate] = {}


def compute_pi0(ctx: PadicContext, prec: int | None = None) -> Pi0Certificate:
    """Newton iteration seeded at pi on the truncated defining series.

    Since the derivative is a unit at the root, ord(pi0 - t) >= ord f(t);
    the returned value is certified modulo pi^prec (pi-units).
    """
    prec = ctx.cap if prec is None else prec
    key = (ctx.p, prec)
    if key in _PI0_CACHE:
        return _PI0_CACHE[key]
    for (p, q), cert in _PI0_CACHE.items():
        if p == ctx.p and q >= prec:
            out = Pi0Certificate(cert.value.with_prec(prec), cert.terms, min(cert.residual_val, prec), cert.newton_steps)
            _PI0_CACHE[key] = out
            return out
    K = _defining_terms(ctx.p, prec)
    t = PadicElement.pi(ctx, prec)
    steps = 0
    while True:
        f, df = _defining_series(t, K)
        if f.val() >= prec:
            break
        if steps > 4 * prec.bit_length() + 8:
            raise PrecisionExhausted("Newton iteration for pi0 did not converge")
        t = (t - f * df.inverse()).with_prec(prec)
        steps += 1
    tail = ctx.p ** (K + 1) - (K + 1) * (ctx.p - 1)
    cert = Pi0Certificate(t.with_prec(prec), K, min(f.val(), tail), steps)
    _PI0_CACHE[key] = cert
    return cert


# --------------------------------------------------------------------------
# exact Laurent polynomials in pi0, evaluated on demand


class PiPoly:
    """sum_k c_k pi0^k with rational c_k, plus an error term of ord >= err.

    Everything built from the splitting tower is an exact polynomial in pi0
    with rational coefficients; only evaluation needs p-adic approximation.
    Truncated infinite sums carry their tail bound in ``err``.
    """

    __slots__ = ("p", "terms", "err")

    def __init__(self, p: int, terms: dict[int, Fraction] | None = None, err=INF):
        self.p = p
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        self.err = err

    @classmethod
    def const(cls, p: int, c) -> "PiPoly":
        return cls(p, {0: as_fraction(c)})

    @classmethod
    def monomial(cls, p: int, k: int, c=1) -> "PiPoly":
        return cls(p, {k: as_fraction(c)})

    def is_exact_zero(self) -> bool:
        return not self.terms and self.err == INF

    def __add__(self, other) -> "PiPoly":
        if not isinstance(other, PiPoly):
            other = PiPoly.const(self.p, other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return PiPoly(self.p, t, min(self.err, other.err))

    __radd__ = __add__

    def __neg__(self) -> "PiPoly":
        return PiPoly(self.p, {k: -c for k, c in self.terms.items()}, self.err)

    def __sub__(self, other) -> "PiPoly":
        if not isinstance(other, PiPoly):
            other = PiPoly.const(self.p, other)
        return self + (-other)

    def __mul__(self, other) -> "PiPoly":
        if not isinstance(other, PiPoly):
            r = as_fraction(other)
            if r == 0:
                return PiPoly(self.p)
            err = self.err if self.err == INF else self.err + ord_p(r, self.p)
            return PiPoly(self.p, {k: c * r for k, c in self.terms.items()}, err)
        t: dict[int, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                t[k1 + k2] = t.get(k1 + k2, 0) + c1 * c2
        err = min(
            self.err + other.term_floor(),
            other.err + self.term_floor(),
            self.err + other.err,
        )
        return PiPoly(self.p, t, err)

    __rmul__ = __mul__

    def shift(self, k: int) -> "PiPoly":
        """Multiply by pi0^k."""
        err = self.err if self.err == INF else self.err + Fraction(k, self.p - 1)
        return PiPoly(self.p, {j + k: c for j, c in self.terms.items()}, err)

    def with_err(self, err) -> "PiPoly":
        return PiPoly(self.p, self.terms, min(self.err, err))

    def term_floor(self):
        """min over terms of ord(c_k pi0^k); a lower bound for ord of the sum."""
        best = INF
        for k, c in self.terms.items():
            best = min(best, ord_p(c, self.p) + Fraction(k, self.p - 1))
        return best

    def floor(self):
        return min(self.term_floor(), self.err)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*pi0^{k}" for k, c in sorted(self.terms.items())) or "0"
        return f"PiPoly(p={self.p}, {body}, err={self.err})"

    def evaluate(self, ctx: PadicContext, target: int) -> PadicElement:
        """Value at pi0 known modulo pi^target (or to the error floor if lower)."""
        if ctx.p != self.p:
            raise ValueError("context prime does not match")
        err_pi = ctx.to_pi(self.err)
        want = min(target, err_pi)
        if not self.terms:
            return PadicElement.zero(ctx, want)
        low = min((ctx.p - 1) * ord_p(c, ctx.p) + k for k, c in self.terms.items())
        need = max(target - low + 1, 2)
        while True:
            P0 = -(-need // 16) * 16
            powers = _pi0_powers(ctx, P0)
            acc = PadicElement.zero(ctx)
            for k, c in sorted(self.terms.items()):
                acc = acc + powers.get(k).scale(c)
            if acc.prec >= want:
                return acc.with_prec(want)
            need += want - acc.prec + 4


class _PowerTable:
    def __init__(self, ctx: PadicContext, prec: int):
        self.ctx = ctx
        base = compute_pi0(ctx, prec).value
        self.pos = [PadicElement.from_rational(ctx, 1), base]
        self.neg = [PadicElement.from_rational(ctx, 1), base.inverse()]

    def get(self, k: int) -> PadicElement:
        table = self.pos if k >= 0 else self.neg
        k = abs(k)
        while len(table) <= k:
            table.append(table[-1] * table[1])
        return table[k]


_POWERS: dict[tuple[int, int], _PowerTable] = {}


def _pi0_powers(ctx: PadicContext, prec: int) -> _PowerTable:
    key = (ctx.p, prec)
    if key not in _POWERS:
        _POWERS[key] = _PowerTable(PadicContext(ctx.p, max(ctx.M, MIN_M)), prec)
    return _POWERS[key]
