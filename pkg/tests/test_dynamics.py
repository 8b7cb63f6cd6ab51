from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperint.arith import is_prime
from hyperint.dynamics import (
    ParameterState,
    common_denominator,
    face_stability_check,
    frobenius_step,
    multiplicative_order,
    orbit,
    step_value,
)
from hyperint.errors import InvalidState
from hyperint.geometry import ASet
from fixtures import horn_aset


def dh_pairs():
    return st.integers(1, 30).flatmap(
        lambda D: st.tuples(st.just(D), st.integers(1, 4 * D).filter(lambda h: __import__("math").gcd(h, D) == 1))
    )


def test_multiplicative_order():
    assert multiplicative_order(2, 3) == 2
    assert multiplicative_order(1, 7) == 1
    assert multiplicative_order(3, 7) == 6
    assert multiplicative_order(5, 1) == 1
    with pytest.raises(InvalidState):
        multiplicative_order(2, 4)


def test_step_value_examples():
    assert step_value(Fraction(-1, 3), 3, 2) == Fraction(-2, 3)
    assert step_value(Fraction(-2, 3), 3, 2) == Fraction(-1, 3)
    assert step_value(Fraction(-1, 2), 2, 7) == Fraction(-1, 2)
    assert step_value(Fraction(-1), 5, 3) == -1
    assert step_value(Fraction(0), 5, 3) == 0


@given(dh_pairs(), st.data())
def test_step_value_window(dh, data):
    D, h = dh
    c = data.draw(st.integers(0, D))
    x = Fraction(-c, D)
    y = step_value(x, D, h)
    assert -1 <= y <= 0 and (D * y).denominator == 1
    diff = h * x - y
    assert diff.denominator == 1 and -(h - 1) <= diff <= 0


@given(dh_pairs(), st.data())
def test_step_value_is_a_permutation(dh, data):
    D, h = dh
    vals = [Fraction(-c, D) for c in range(1, D)]
    assert sorted(step_value(x, D, h) for x in vals) == sorted(vals)


@given(dh_pairs(), st.data())
def test_orbit_length_divides_order(dh, data):
    D, h = dh
    A = horn_aset()
    v = tuple(Fraction(-data.draw(st.integers(0, D)), D) for _ in range(3)) + (Fraction(0),) * 2
    orb = orbit(v, D, h, A)
    assert multiplicative_order(h, D) % orb.a == 0
    assert frobenius_step(orb[orb.a - 1]).v == orb[0].v
    assert len({s.v for s in orb}) == orb.a
    assert face_stability_check(orb, A)


@given(st.integers(2, 12), st.data())
def test_prime_step_is_frobenius_congruence(D, data):
    """For p = h mod D prime, p v - v' is an integer in {0, ..., -(p-1)}."""
    h = data.draw(st.integers(1, D).filter(lambda h: __import__("math").gcd(h, D) == 1))
    p = next(q for q in range(h, 10**4, D) if is_prime(q) and q > 1)
    c = data.draw(st.integers(1, D - 1))
    x = Fraction(-c, D)
    y = step_value(x, D, p)
    assert y == step_value(x, D, h)
    assert (p * x - y).denominator == 1 and -(p - 1) <= p * x - y <= 0


def test_orbit_examples():
    A = ASet.from_vectors([(1, 0), (1, 1)])
    orb = orbit([Fraction(-1, 3), Fraction(-2, 3)], 3, 2, A)
    assert orb.a == 2
    assert orb[1].v == (Fraction(-2, 3), Fraction(-1, 3))
    assert orbit([Fraction(-1, 3), Fraction(-2, 3)], 3, 1, A).a == 1
    assert orbit([-1, 0], 3, 2, A).a == 1


def test_state_validation():
    A = horn_aset()
    with pytest.raises(InvalidState):
        ParameterState((Fraction(1, 2),) + (Fraction(0),) * 4, 2, 1, A)
    with pytest.raises(InvalidState):
        ParameterState((Fraction(-1, 3),) + (Fraction(0),) * 4, 2, 1, A)
    with pytest.raises(InvalidState):
        ParameterState((Fraction(-1, 2),) * 5, 2, 2, A)
    with pytest.raises(InvalidState):
        ParameterState((Fraction(-1, 2),) * 4, 2, 1, A)
    s = ParameterState.make(["-1/2", "-1/3", 0, 0, 0], A)
    assert s.D == 6 and s.beta == (Fraction(-1, 2), Fraction(-1, 3), 0)
    assert common_denominator(["1/4", "1/6"]) == 12
