"""Classical hypergeometric data: integer forms C_j(s) and parameters theta_j.

The series sum_s prod_j (theta_j)_{C_j(s)} t^s / s! is encoded as an A-set
(unit vectors plus the columns of C) with v = (-theta, 0, ..., 0).  The
step function rho(Theta; x) = sum_j floor(1 - theta_j + C_j(x)) gives an
independent route to the weight condition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import as_fraction, pochhammer
from .dynamics import ParameterState, orbit
from .errors import InvalidInstance, NotInM, UnsupportedDimension
from .geometry import ASet, check_weight_maximality, enumerate_E, in_relative_interior, rat_vec, smallest_face
from .series import SeriesTruncation

HORN_C = ((1, 1), (-1, 1), (1, -1))


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class ClassicalInstance:
    C: tuple[tuple[int, ...], ...]  # n rows, m columns
    theta: tuple[Fraction, ...]
    D: int
    h: int = 1

    @classmethod
    def make(cls, C: Sequence[Sequence[int]], theta: Sequence, D: int | None = None, h: int = 1,
             normalize: bool = False) -> "ClassicalInstance":
        C = tuple(tuple(int(x) for x in row) for row in C)
        theta = rat_vec(theta)
        if D is None:
            D = 1
            for t in theta:
                D = math.lcm(D, t.denominator)
        if normalize:
            C, theta = normalize_columns(C, theta)
        inst = cls(C, theta, D, h)
        inst.validate()
        return inst

    @property
    def n(self) -> int:
        return len(self.C)

    @property
    def m(self) -> int:
        return len(self.C[0]) if self.C else 0

    def form(self, j: int, x: Sequence) -> Fraction:
        return sum((c * xi for c, xi in zip(self.C[j], x)), Fraction(0))

    def validate(self) -> None:
        n, m = self.n, self.m
        if n == 0 or m == 0:
            raise InvalidInstance("need at least one row and one column")
        if any(len(row) != m for row in self.C):
            raise InvalidInstance("rows of C must have equal length")
        if len(self.theta) != n:
            raise InvalidInstance("theta must have one entry per row of C")
        if self.D < 1 or self.h < 1 or math.gcd(self.D, self.h) != 1:
            raise InvalidInstance("need D, h >= 1 with gcd(h, D) = 1")
        for k in range(m):
            col = [self.C[j][k] for j in range(n)]
            if sum(col) != 1:
                raise InvalidInstance(f"column {k} does not sum to 1")
            if sum(1 for x in col if x) < 2:
                raise InvalidInstance(f"column {k} has fewer than two nonzero entries")
        if len(set(zip(*self.C))) != m:
            raise InvalidInstance("columns of C must be distinct")
        for j, (row, t) in enumerate(zip(self.C, self.theta)):
            if not any(row):
                raise InvalidInstance(f"row {j} of C is zero")
            if not 0 <= t <= 1:
                raise InvalidInstance(f"theta_{j} = {t} is outside [0, 1]")
            if (self.D * t).denominator != 1:
                raise InvalidInstance(f"theta_{j} = {t} has denominator not dividing D = {self.D}")
            if t == 1 and any(c < 0 for c in row):
                raise InvalidInstance(f"row {j} has theta = 1 and a negative coefficient")
            if t == 0 and any(c > 0 for c in row):
                raise InvalidInstance(f"row {j} has theta = 0 and a positive coefficient")


def normalize_columns(C, theta):
    """Pad columns with fewer than two nonzero entries.

    For such a column k, append a row with theta = 1 and form s_k and a row
    with theta = 0 and form -s_k; this multiplies each coefficient by
    (-1)^{s_k} and leaves column sums unchanged.
    """
    C = [list(r) for r in C]
    theta = list(theta)
    m = len(C[0]) if C else 0
    for k in range(m):
        if sum(1 for r in C if r[k]) < 2:
            C.append([int(i == k) for i in range(m)])
            theta.append(Fraction(1))
            C.append([-int(i == k) for i in range(m)])
            theta.append(Fraction(0))
    return tuple(tuple(r) for r in C), tuple(theta)


def classical_to_aset(inst: ClassicalInstance) -> tuple[ASet, ParameterState]:
    n, m = inst.n, inst.m
    vectors = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    vectors += [tuple(inst.C[j][k] for j in range(n)) for k in range(m)]
    try:
        A = ASet.from_vectors(vectors, [1] * n)
    except ValueError as exc:
        raise InvalidInstance(str(exc)) from None
    v = tuple(-t for t in inst.theta) + (Fraction(0),) * m
    state = ParameterState(v, inst.D, inst.h, A)
    face = smallest_face(state.beta, A)
    if len(face.generators) != A.N:
        raise InvalidInstance("beta is not an interior point of -C(A)")
    return A, state


def theta_orbit(inst: ClassicalInstance) -> list[tuple[Fraction, ...]]:
    A, state = classical_to_aset(inst)
    return [tuple(-x for x in s.v[: inst.n]) for s in orbit(state.v, inst.D, inst.h, A)]


def rho_eval(theta: Sequence, C: Sequence[Sequence[int]], x: Sequence) -> int:
    x = rat_vec(x)
    total = 0
    for t, row in zip(theta, C):
        total += _floor(1 - as_fraction(t) + sum((c * xi for c, xi in zip(row, x)), Fraction(0)))
    return total


@dataclass
class StepFunctionReport:
    min_value: int
    witness: tuple[Fraction, ...]
    method: str  # "exact-cell" or "grid"

    @property
    def heuristic(self) -> bool:
        return self.method == "grid"


def _line_hits(theta, C, fixed: Fraction, k_fixed: int | None) -> list[Fraction]:
    """Jump points in [0,1) of rho restricted to a line (one free coordinate)."""
    pts = set()
    for t, row in zip(theta, C):
        if k_fixed is None:
            a, b = row[0], Fraction(0)
        else:
            a, b = row[1 - k_fixed], row[k_fixed] * fixed
        if a == 0:
            continue
        # a y + b = z + t - 1 for integer z
        lo = min(b, a + b)
        hi = max(b, a + b)
        for z in range(math.ceil(lo - t + 1), _floor(hi - t + 1) + 1):
            y = (z + t - 1 - b) / a
            if 0 <= y < 1:
                pts.add(y)
    return sorted(pts)


def _candidates_1d(points: list[Fraction]) -> list[Fraction]:
    """Every jump point plus one point inside each open interval of [0,1)."""
    knots = sorted(set([Fraction(0)] + points))
    out = list(knots)
    ends = knots + [Fraction(1)]
    for a, b in zip(ends, ends[1:]):
        out.append((a + b) / 2)
    return out


def _critical_x1(theta, C) -> list[Fraction]:
    """x1-coordinates of all vertices of the jump-line arrangement in [0,1]^2,
    and of vertical jump lines."""
    lines = []  # (a1, a2, c): a1 x1 + a2 x2 = c
    for t, row in zip(theta, C):
        a1, a2 = row
        corners = [a1 * x + a2 * y for x in (0, 1) for y in (0, 1)]
        for z in range(math.ceil(min(corners) - t + 1), _floor(max(corners) - t + 1) + 1):
            lines.append((a1, a2, Fraction(z) + t - 1))
    # boundary edges of the square
    lines += [(1, 0, Fraction(0)), (1, 0, Fraction(1)), (0, 1, Fraction(0)), (0, 1, Fraction(1))]
    xs = {Fraction(0), Fraction(1)}
    for (a1, a2, c1), (b1, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        x1 = (c1 * b2 - a2 * c2) / det
        x2 = (a1 * c2 - c1 * b1) / det
        if 0 <= x1 <= 1 and 0 <= x2 <= 1:
            xs.add(x1)
    for a1, a2, c in lines:
        if a2 == 0 and a1 != 0:
            x1 = c / a1
            if 0 <= x1 <= 1:
                xs.add(x1)
    return sorted(xs)


def rho_min(theta: Sequence, C: Sequence[Sequence[int]], mode: str = "exact", D: int | None = None) -> StepFunctionReport:
    """Minimum of rho over [0,1)^m.

    ``exact`` (m <= 2): rho is constant on each face of the arrangement of
    jump lines, and every face meets a vertical line through a critical
    x1-value or through the midpoint of a slab between two of them; on each
    such line the 1D candidates (jump points and interval midpoints) are
    exhaustive.  ``grid`` samples the lattice (1/G)Z^m with
    G = D (1 + max_j sum_k |c_jk|) and is only a heuristic.
    """
    theta = rat_vec(theta)
    C = [tuple(r) for r in C]
    m = len(C[0])
    best: tuple[int, tuple[Fraction, ...]] | None = None

    def consider(x):
        nonlocal best
        val = rho_eval(theta, C, x)
        if best is None or val < best[0] or (val == best[0] and x < best[1]):
            best = (val, tuple(x))

    if mode == "exact":
        if m == 1:
            for y in _candidates_1d(_line_hits(theta, C, Fraction(0), None)):
                consider((y,))
        elif m == 2:
            crit = _critical_x1(theta, C)
            xs = [x for x in crit if x < 1] + [(a + b) / 2 for a, b in zip(crit, crit[1:])]
            for x1 in sorted(set(xs)):
                for y in _candidates_1d(_line_hits(theta, C, x1, 0)):
                    consider((x1, y))
        else:
            raise UnsupportedDimension("exact minimization is implemented for m <= 2")
        method = "exact-cell"
    elif mode == "grid":
        if D is None:
            D = 1
            for t in theta:
                D = math.lcm(D, t.denominator)
        G = D * (1 + max(sum(abs(c) for c in row) for row in C))
        for idx in itertools.product(range(G), repeat=m):
            consider(tuple(Fraction(i, G) for i in idx))
        method = "grid"
    else:
        raise ValueError("mode must be 'exact' or 'grid'")
    return StepFunctionReport(best[0], best[1], method)


def horn_criterion(theta: Sequence) -> bool:
    t1, t2, t3 = rat_vec(theta)
    return t2 + t3 <= 1 or (t1 + t2 <= 1 and t1 + t3 <= 1)


@dataclass
class CrossCheck:
    index: int
    theta: tuple[Fraction, ...]
    rho_min: int
    weight_condition: bool

    @property
    def agree(self) -> bool:
        return (self.rho_min >= 0) == self.weight_condition


def cross_validate(inst: ClassicalInstance, mode: str = "exact") -> list[CrossCheck]:
    """Step-function route against the lattice route, per orbit index."""
    A, state = classical_to_aset(inst)
    out = []
    for i, s in enumerate(orbit(state.v, inst.D, inst.h, A)):
        th = tuple(-x for x in s.v[: inst.n])
        r = rho_min(th, inst.C, mode, inst.D)
        out.append(CrossCheck(i, th, r.min_value, check_weight_maximality(s, A).holds))
    return out


def horn_instance(theta: Sequence, h: int = 1, D: int | None = None) -> ClassicalInstance:
    return ClassicalInstance.make(HORN_C, theta, D, h)


def shifted_horn_series(theta: Sequence, u_shift: Sequence[int], B: int, h: int = 1) -> SeriesTruncation:
    """Coefficients of the Horn series attached to u = beta + u_shift, by the closed form.

    Term (s1, s2) sits at l = (-s1-s2+u1, s1-s2+u2, -s1+s2+u3, s1, s2) and
    equals (-1)^{l1+l2+l3} (t1)_{s1+s2-u1} (t2)_{s2-s1-u2} (t3)_{s1-s2-u3} / (s1! s2!).
    """
    inst = horn_instance(theta, h)
    A, state = classical_to_aset(inst)
    u1, u2, u3 = (int(x) for x in u_shift)
    u = tuple(b + x for b, x in zip(state.beta, (u1, u2, u3)))
    if not in_relative_interior(u, smallest_face(state.beta, A), A):
        raise NotInM(f"beta + {tuple(u_shift)} is not in the relative interior of the face of beta")
    t1, t2, t3 = inst.theta
    terms = {}
    for s1 in range(B + 1):
        for s2 in range(B + 1):
            l = (-s1 - s2 + u1, s1 - s2 + u2, -s1 + s2 + u3, s1, s2)
            if max(abs(x) for x in l) > B:
                continue
            if any(state.v[j] == -1 and l[j] > 0 for j in range(3)):
                continue
            if any(state.v[j] == 0 and l[j] < 0 for j in range(3)):
                continue
            c = (
                pochhammer(t1, s1 + s2 - u1)
                * pochhammer(t2, s2 - s1 - u2)
                * pochhammer(t3, s1 - s2 - u3)
                / (math.factorial(s1) * math.factorial(s2))
            )
            terms[l] = c * (-1) ** ((l[0] + l[1] + l[2]) % 2)
    return SeriesTruncation(u, state, B, terms)


def random_instance(rng, max_n: int = 4, max_m: int = 2, max_D: int = 12, coeff: int = 2) -> ClassicalInstance:
    """A random valid instance (rejection sampling)."""
    while True:
        n = rng.randint(2, max_n)
        m = rng.randint(1, max_m)
        cols = []
        for _ in range(m):
            col = [rng.randint(-coeff, coeff) for _ in range(n - 1)]
            col.append(1 - sum(col))
            cols.append(col)
        C = [tuple(cols[k][j] for k in range(m)) for j in range(n)]
        D = rng.randint(1, max_D)
        theta = []
        for row in C:
            r = rng.random()
            if r < 0.1 and all(c >= 0 for c in row):
                theta.append(Fraction(1))
            elif r < 0.2 and all(c <= 0 for c in row):
                theta.append(Fraction(0))
            else:
                theta.append(Fraction(rng.randint(1, D), D) if D > 1 else Fraction(1))
        h = rng.choice([x for x in range(1, max(D, 2) * 2) if math.gcd(x, D) == 1])
        try:
            inst = ClassicalInstance(tuple(C), tuple(theta), D, h)
            inst.validate()
            classical_to_aset(inst)
        except (InvalidInstance, ValueError):
            continue
        return inst
