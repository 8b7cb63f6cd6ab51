from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hyperint.arith import INF, ord_p
from hyperint.errors import PrecisionExhausted
from hyperint.padic import PadicContext, PadicElement, PiPoly, compute_pi0

X = sympy.Symbol("x")
PRIMES = (2, 3, 5, 7)


def coeff_lists(p):
    r = st.fractions(min_value=-50, max_value=50, max_denominator=3 * p)
    return st.lists(r, min_size=p - 1, max_size=p - 1)


def build(ctx, coeffs):
    acc = PadicElement.zero(ctx)
    for k, c in enumerate(coeffs):
        acc = acc + PadicElement.from_rational(ctx, c).mul_pi_pow(k)
    return acc


def as_sympy(x: PadicElement):
    return sum(sympy.Rational(c) / x.ctx.p**x.E * X**k for k, c in enumerate(x.n))


def reduce_poly(expr, p):
    """Remainder modulo the relation pi^(p-1) = -p."""
    return sympy.rem(sympy.expand(expr), X ** (p - 1) + p, X)


def poly_val(expr, p):
    """pi-valuation of sum c_k pi^k with k < p - 1, by the independent formula."""
    poly = sympy.Poly(expr, X)
    best = INF
    for (k,), c in poly.terms():
        c = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
        if c:
            best = min(best, k + (p - 1) * ord_p(c, p))
    return best


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_exact_ring_operations_match_polynomial_model(p, data):
    ctx = PadicContext(p)
    ca = data.draw(coeff_lists(p))
    cb = data.draw(coeff_lists(p))
    a, b = build(ctx, ca), build(ctx, cb)
    pa = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(ca))
    pb = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(cb))
    for got, want in ((a + b, pa + pb), (a - b, pa - pb), (a * b, pa * pb)):
        want = reduce_poly(want, p)
        assert sympy.expand(as_sympy(got) - want) == 0
        assert got.val() == (poly_val(want, p) if want != 0 else INF)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_ring_axioms(p, data):
    ctx = PadicContext(p)
    a, b, c = (build(ctx, data.draw(coeff_lists(p))) for _ in range(3))
    assert ((a + b) * c - (a * c + b * c)).is_zero()
    assert (a * b - b * a).is_zero()
    assert ((a * b) * c - a * (b * c)).is_zero()
    assert (a + (-a)).is_zero()


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_valuation_of_rationals(p, data):
    ctx = PadicContext(p)
    r = data.draw(st.fractions(max_denominator=10**4).filter(bool))
    assert PadicElement.from_rational(ctx, r).val() == (p - 1) * ord_p(r, p)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_inverse(p, data):
    ctx = PadicContext(p, 10)
    a = build(ctx, data.draw(coeff_lists(p)))
    if a.is_zero():
        return
    prod = a.with_prec(ctx.cap + a.val()) * a.with_prec(ctx.cap + a.val()).inverse()
    assert (prod - 1).is_zero()
    assert prod.prec >= ctx.cap - abs(a.val())


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_precision_truncation_is_consistent(p, data):
    ctx = PadicContext(p)
    r = data.draw(st.fractions(max_denominator=50))
    P = data.draw(st.integers(1, 40))
    x = PadicElement.from_rational(ctx, r, P)
    exact = PadicElement.from_rational(ctx, r)
    assert (x - exact).val() >= P


def test_pi_relation():
    for p in PRIMES:
        ctx = PadicContext(p)
        pi = PadicElement.pi(ctx)
        assert pi.val() == 1
        assert (pi ** (p - 1) + p).is_zero()
        assert (pi.mul_pi_pow(-1) - 1).is_zero()


def test_context_validation():
    with pytest.raises(PrecisionExhausted):
        PadicContext(3, 1)
    with pytest.raises(ValueError):
        PadicContext(4)
    with pytest.raises(PrecisionExhausted):
        PadicElement.zero(PadicContext(3), 10).inverse()


@pytest.mark.parametrize("p", PRIMES)
def test_pi0_certificate(p):
    ctx = PadicContext(p, 12)
    cert = compute_pi0(ctx)
    pi0 = cert.value
    assert pi0.ord() == Fraction(1, p - 1)
    assert (pi0 ** (p - 1) + p).ord() >= p
    assert cert.residual_val >= (p - 1) * (ctx.M - 1)


@pytest.mark.parametrize("p", PRIMES)
def test_pi0_residual_in_polynomial_model(p):
    """sum_i t^(p^i)/p^i at pi0, recomputed in Q[x]/(x^(p-1)+p) with sympy."""
    ctx = PadicContext(p, 8)
    pi0 = compute_pi0(ctx).value
    t = as_sympy(pi0)
    total = 0
    power = t
    for i in range(0, 4):
        if i:
            power = reduce_poly(power**p, p)
        total += power / p**i
    total = reduce_poly(total, p)
    # terms beyond i = 3 have pi-valuation p^i - i(p-1), far above cap
    assert poly_val(total, p) >= ctx.cap or total == 0


@pytest.mark.parametrize("p", [3, 5])
@given(data=st.data())
def test_pipoly_evaluation_is_a_homomorphism(p, data):
    ctx = PadicContext(p, 10)
    coeffs = st.dictionaries(st.integers(-4, 8), st.fractions(-20, 20, max_denominator=7), max_size=4)
    f = PiPoly(p, data.draw(coeffs))
    g = PiPoly(p, data.draw(coeffs))
    target = ctx.cap
    lhs = (f * g).evaluate(ctx, target)
    rhs = f.evaluate(ctx, target + 40) * g.evaluate(ctx, target + 40)
    assert (lhs - rhs).val() >= min(target, lhs.prec)
    s = (f + g).evaluate(ctx, target) - f.evaluate(ctx, target) - g.evaluate(ctx, target)
    assert s.is_zero()


def test_pipoly_floors_and_shift():
    p = 3
    f = PiPoly(p, {0: Fraction(3), 2: Fraction(1, 3)}, err=Fraction(5))
    assert f.term_floor() == 0
    assert f.shift(2).term_floor() == 1
    assert f.shift(2).err == 6
    assert (f * Fraction(1, 9)).err == 3
    assert PiPoly(p).is_exact_zero()
    low = f.with_err(Fraction(1, 2))
    x = low.evaluate(PadicContext(3), 40)
    assert x.prec == 1
