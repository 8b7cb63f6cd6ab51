import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hyperint.classical import (
    HORN_C,
    ClassicalInstance,
    classical_to_aset,
    cross_validate,
    horn_criterion,
    horn_instance,
    normalize_columns,
    random_instance,
    rho_eval,
    rho_min,
    shifted_horn_series,
    theta_orbit,
)
from hyperint.errors import InvalidInstance, NotInM, UnsupportedDimension
from hyperint.geometry import check_weight_maximality
from hyperint.series import expand_F

# theta_1 in (0, 1]; rows 2 and 3 have a negative entry, so theta_2, theta_3 < 1
thetas = st.integers(2, 12).flatmap(
    lambda D: st.tuples(
        st.integers(1, D).map(lambda c: Fraction(c, D)),
        *[st.integers(1, D - 1).map(lambda c: Fraction(c, D))] * 2,
    )
)


def test_rho_examples():
    half = [Fraction(1, 2)] * 3
    r = rho_min(half, HORN_C)
    assert r.min_value == 0 and r.method == "exact-cell" and not r.heuristic
    r = rho_min([Fraction(2, 3)] * 3, HORN_C)
    assert r.min_value == -1
    assert rho_eval([Fraction(2, 3)] * 3, HORN_C, r.witness) == -1
    assert rho_eval(half, HORN_C, (0, 0)) == 0
    g = rho_min([Fraction(2, 3)] * 3, HORN_C, "grid")
    assert g.heuristic and g.min_value == -1
    with pytest.raises(UnsupportedDimension):
        rho_min([Fraction(1, 2)] * 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    with pytest.raises(ValueError):
        rho_min(half, HORN_C, "other")


@given(thetas)
def test_horn_criterion_matches_step_function(theta):
    assert horn_criterion(theta) == (rho_min(theta, HORN_C).min_value >= 0)


@given(thetas)
def test_horn_criterion_matches_lattice_route(theta):
    A, s = classical_to_aset(horn_instance(theta))
    assert horn_criterion(theta) == check_weight_maximality(s, A).holds


@given(thetas)
def test_exact_minimum_not_above_grid(theta):
    exact = rho_min(theta, HORN_C)
    assert rho_eval(theta, HORN_C, exact.witness) == exact.min_value
    assert all(0 <= x < 1 for x in exact.witness)
    assert exact.min_value <= rho_min(theta, HORN_C, "grid").min_value


@given(
    st.lists(st.integers(-3, 3), min_size=2, max_size=4).filter(lambda c: any(c)),
    st.integers(1, 12),
    st.data(),
)
def test_one_dimensional_exact_equals_fine_grid(col, D, data):
    C = [(c,) for c in col]
    theta = [Fraction(data.draw(st.integers(0, D)), D) for _ in C]
    G = 2 * D * math.lcm(*[abs(c) for c in col if c])
    brute = min(rho_eval(theta, C, (Fraction(i, G),)) for i in range(G))
    assert rho_min(theta, C).min_value == brute


def test_validation():
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(1,), (1,)], ["1/2", "1/2"])  # column sum 2
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(1,), (0,)], ["1/2", "1/2"])  # zero row, one nonzero
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(2,), (-1,)], ["1/2", "1"])  # theta = 1 with negative entry
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(2,), (-1,)], ["0", "1/2"])  # theta = 0 with positive entry
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(2, 2), (-1, -1)], ["1/2", "1/2"])  # equal columns
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(2,), (-1,)], ["1/2", "3/2"])
    with pytest.raises(InvalidInstance):
        ClassicalInstance.make([(2,), (-1,)], ["1/2", "1/2"], D=4, h=2)


def test_normalization_trick():
    """1F0(theta; t) padded to a two-row column keeps |coefficients|."""
    inst = ClassicalInstance.make([(1,)], ["1/3"], normalize=True)
    assert inst.C == ((1,), (1,), (-1,)) and inst.theta == (Fraction(1, 3), 1, 0)
    A, s = classical_to_aset(inst)
    F = expand_F(s.beta, s, A, 6)
    by_s = {l[-1]: c for l, c in F.terms.items()}
    from hyperint.arith import pochhammer

    for n in range(0, 4):
        assert abs(by_s[n]) == abs(pochhammer(Fraction(1, 3), n) / math.factorial(n))
    assert normalize_columns(((1, 1), (-1, 1), (1, -1)), (1, 1, 1))[0] == ((1, 1), (-1, 1), (1, -1))


def test_aset_construction():
    A, s = classical_to_aset(horn_instance([Fraction(1, 2)] * 3))
    assert A.vectors == ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 1), (1, 1, -1))
    assert s.v == (Fraction(-1, 2),) * 3 + (0, 0)
    assert s.beta == (Fraction(-1, 2),) * 3


@pytest.mark.parametrize(
    "theta", [(Fraction(1, 2),) * 3, (Fraction(1, 3), Fraction(2, 3), Fraction(1, 3)), (1, Fraction(1, 4), Fraction(3, 4))]
)
def test_shifted_series_matches_expansion(theta):
    A, s = classical_to_aset(horn_instance(theta))
    checked = 0
    for shift in itertools.product(range(-2, 3), repeat=3):
        try:
            ser = shifted_horn_series(theta, shift, 6)
        except NotInM:
            continue
        assert ser.terms == expand_F(ser.u, s, A, 6).terms
        checked += 1
    assert checked > 5


def test_shifted_series_sign_example():
    ser = shifted_horn_series([Fraction(1, 2)] * 3, (0, 0, 0), 3)
    assert ser.terms[(-1, 1, -1, 1, 0)] == Fraction(1, 2)


def test_shifted_series_rejects_boundary():
    with pytest.raises(NotInM):
        shifted_horn_series([Fraction(1, 2)] * 3, (2, 2, 2), 3)


def test_theta_orbit():
    inst = horn_instance((Fraction(1, 3), Fraction(2, 3), Fraction(1, 3)), h=2)
    assert theta_orbit(inst) == [
        (Fraction(1, 3), Fraction(2, 3), Fraction(1, 3)),
        (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3)),
    ]


def test_cross_validation_small_sample():
    rng = random.Random(11)
    for _ in range(25):
        inst = random_instance(rng)
        for c in cross_validate(inst):
            assert c.agree, (inst, c)


def test_cross_validation_grid_mode():
    inst = horn_instance([Fraction(2, 3)] * 3)
    (c,) = cross_validate(inst, "grid")
    assert c.rho_min == -1 and not c.weight_condition and c.agree
