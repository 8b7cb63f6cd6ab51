from fractions import Fraction

import pytest

from hyperint import series as series_mod
from hyperint.arith import ord_p
from hyperint.dynamics import ParameterState
from hyperint.errors import NotPIntegral
from hyperint.geometry import ASet
from hyperint.series import (
    CERTIFIED,
    NOT_CERTIFIED,
    box_annihilation_check,
    certify,
    contiguity_check,
    euler_check,
    expand_F,
    verify_integrality,
)
from fixtures import HALF, TWO_THIRDS, horn_state

THIRDS = (Fraction(1, 3), Fraction(2, 3), Fraction(1, 3))


def test_expansion_examples():
    A, s = horn_state(HALF)
    F = expand_F(s.beta, s, A, 5)
    assert F.terms[(0, 0, 0, 0, 0)] == 1
    assert F.terms[(-1, 1, -1, 1, 0)] == Fraction(1, 2)
    assert euler_check(F)


def test_euler_check_detects_wrong_degree():
    A, s = horn_state(HALF)
    F = expand_F(s.beta, s, A, 3)
    F.terms[(0, 0, 0, 0, 1)] = Fraction(1)
    assert not euler_check(F)


def test_integrality_half():
    A, s = horn_state(HALF)
    F = expand_F(s.beta, s, A, 12)
    for p in (3, 5, 7, 11, 13):
        rep = verify_integrality(F, p)
        assert rep.passed and rep.min_ord == 0 and not rep.offenders
    with pytest.raises(NotPIntegral):
        verify_integrality(F, 2)


def test_integrality_two_thirds_fails_at_seven():
    A, s = horn_state(TWO_THIRDS)
    F = expand_F(s.beta, s, A, 10)
    rep = verify_integrality(F, 7)
    assert not rep.passed
    for l, o in rep.offenders:
        assert ord_p(F.terms[l], 7) == o < 0


@pytest.mark.parametrize("theta", [HALF, THIRDS])
def test_contiguity(theta):
    A, s = horn_state(theta)
    for k in range(A.N):
        res = contiguity_check(s, A, s.beta, k, 8)
        assert res.passed and res.compared > 0


def test_contiguity_off_face_is_zero():
    A = ASet.from_vectors([(1, 0), (1, 1), (1, 2)])
    s = ParameterState((Fraction(-1, 2), Fraction(0), Fraction(0)), 2, 1, A)
    assert 1 not in s.face and 2 not in s.face
    assert contiguity_check(s, A, s.beta, 2, 6).passed


@pytest.mark.parametrize("theta", [HALF, THIRDS])
def test_box_operators(theta):
    A, s = horn_state(theta)
    for rel in A.relation_basis:
        res = box_annihilation_check(s, A, s.beta, rel, 8)
        assert res.passed and res.compared > 0
    res = box_annihilation_check(s, A, s.beta, (1, 3, -3, 1, -2), 9)
    assert res.passed


def test_box_operator_rejects_non_relation():
    A, s = horn_state(HALF)
    with pytest.raises(ValueError):
        box_annihilation_check(s, A, s.beta, (1, 0, 0, 0, 0), 4)


def test_box_operator_catches_corrupted_coefficients(monkeypatch):
    A, s = horn_state(HALF)
    real = series_mod.bracket_vector

    def corrupted(v, l):
        c = real(v, l)
        return c * 2 if tuple(l) == (-2, 0, 0, 1, 1) else c

    monkeypatch.setattr(series_mod, "bracket_vector", corrupted)
    assert not box_annihilation_check(s, A, s.beta, A.relation_basis[0], 6).passed


def test_certify_bundles():
    A, s = horn_state(HALF)
    b = certify(A, s.v, 2, 1, (3, 5), 8)
    assert b.verdict == CERTIFIED and b.certified and b.empirical_pass
    assert set(b.integrality) == {(3, 0), (5, 0)}
    A, s = horn_state(TWO_THIRDS)
    b = certify(A, s.v, 3, 1, (7,), 8)
    assert b.verdict == NOT_CERTIFIED and not b.empirical_pass
    with pytest.raises(ValueError):
        certify(A, s.v, 3, 1, (5,), 4)


def test_certify_orbit_of_length_two():
    A, s = horn_state(THIRDS, h=2)
    b = certify(A, s.v, 3, 2, (5, 11), 8)
    assert b.orbit.a == 2
    assert b.certified == all(c.holds for c in b.conditions)
    if b.certified:
        assert b.empirical_pass
