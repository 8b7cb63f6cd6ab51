"""Small exact linear algebra over Q and Z.

Matrices are lists of rows.  Everything is sized for desk-scale inputs
(a dozen vectors in dimension <= 8), so clarity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0} over Q."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -r[i][f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Some rational x with rows . x = rhs, or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = r[i][ncols]
    return x


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite form: returns (H, U) with U unimodular and U @ mat == H.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    h = [list(map(int, r)) for r in mat]
    n = len(h)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return h, u
    ncols = len(h[0])
    r = 0
    for c in range(ncols):
        if r == n:
            break
        for i in range(r + 1, n):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            h[r], h[i] = (
                [x * s + y * t for s, t in zip(h[r], h[i])],
                [-q * s + p * t for s, t in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * s + y * t for s, t in zip(u[r], u[i])],
                [-q * s + p * t for s, t in zip(u[r], u[i])],
            )
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-s for s in h[r]]
            u[r] = [-s for s in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def pivot_columns(h: Sequence[Sequence[int]]) -> list[int]:
    cols = []
    for row in h:
        c = next((j for j, x in enumerate(row) if x != 0), None)
        if c is None:
            break
        cols.append(c)
    return cols


def integer_left_kernel(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis (in Hermite form) of {y in Z^rows : y @ mat = 0}."""
    h, u = hermite_rows(mat)
    rk = len(pivot_columns(h))
    kernel = u[rk:]
    if not kernel:
        return []
    kh, _ = hermite_rows(kernel)
    return [row for row in kh if any(row)]


def integer_left_solve(mat: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Some integer y with y @ mat == target, or None."""
    h, u = hermite_rows(mat)
    pcs = pivot_columns(h)
    resid = list(map(int, target))
    y = [0] * len(h)
    for i, c in enumerate(pcs):
        q, rem = divmod(resid[c], h[i][c])
        if rem:
            return None
        y[i] = q
        if q:
            resid = [s - q * t for s, t in zip(resid, h[i])]
    if any(resid):
        return None
    out = [0] * len(u[0]) if u else []
    for i, yi in enumerate(y):
        if yi:
            out = [s + yi * t for s, t in zip(out, u[i])]
    return out


def matvec_left(y: Sequence, mat: Sequence[Sequence]) -> list:
    """y @ mat for a row vector y."""
    ncols = len(mat[0]) if mat else 0
    out = [0] * ncols
    for yi, row in zip(y, mat):
        if yi:
            for j, x in enumerate(row):
                out[j] += yi * x
    return out
