from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given
from hypothesis import strategies as st

from hyperint import linalg

small = st.integers(-6, 6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


@given(matrices())
def test_rank_matches_sympy(m):
    assert linalg.rank(m) == sympy.Matrix(m).rank()


@given(matrices())
def test_nullspace_is_kernel(m):
    ns = linalg.nullspace(m)
    assert len(ns) == len(m[0]) - linalg.rank(m)
    for v in ns:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in m)


@given(matrices())
def test_hermite_form(m):
    h, u = linalg.hermite_rows(m)
    assert matmul(u, m) == h
    assert abs(sympy.Matrix(u).det()) == 1
    pcs = linalg.pivot_columns(h)
    assert pcs == sorted(pcs) and len(set(pcs)) == len(pcs)
    assert len(pcs) == sympy.Matrix(m).rank()
    for i, c in enumerate(pcs):
        assert h[i][c] > 0
        assert all(h[k][c] == 0 for k in range(i + 1, len(h)))
        assert all(0 <= h[k][c] < h[i][c] for k in range(i))
    assert all(not any(row) for row in h[len(pcs):])


@given(matrices())
def test_integer_left_kernel(m):
    ker = linalg.integer_left_kernel(m)
    assert len(ker) == len(m) - linalg.rank(m)
    for y in ker:
        assert linalg.matvec_left(y, m) == [0] * len(m[0])
    if ker:
        # saturated: the Smith invariants of the kernel basis are all 1
        snf = smith_normal_form(sympy.Matrix(ker), domain=sympy.ZZ)
        assert all(abs(snf[i, i]) == 1 for i in range(len(ker)))


@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_integer_left_solve(m, y0):
    y0 = y0[: len(m)] + [0] * (len(m) - len(y0))
    target = linalg.matvec_left(y0, m)
    y = linalg.integer_left_solve(m, target)
    assert y is not None and linalg.matvec_left(y, m) == target


def test_integer_left_solve_detects_non_integral():
    assert linalg.integer_left_solve([[2, 0], [0, 2]], [1, 0]) is None
    assert linalg.integer_left_solve([[1, 1]], [1, 2]) is None


@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_rational(m, x0):
    x0 = x0[: len(m[0])] + [0] * (len(m[0]) - len(x0))
    rhs = [sum(a * x for a, x in zip(row, x0)) for row in m]
    x = linalg.solve(m, rhs)
    assert x is not None
    assert [sum(a * xi for a, xi in zip(row, x)) for row in m] == rhs


def test_solve_inconsistent():
    assert linalg.solve([[1, 1], [1, 1]], [1, 2]) is None
    r, piv = linalg.rref([[2, 4], [1, 2]])
    assert piv == [0] and r[0] == [1, 2] and r[1] == [Fraction(0), Fraction(0)]
