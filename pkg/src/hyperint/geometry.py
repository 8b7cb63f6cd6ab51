"""A-sets, the cone -C(A), its faces, the coset beta + ZA, and the
weight-maximality test on a parameter.

Faces are found by brute force over generator subsets: a facet of C(A) is
cut out by a form vanishing on rank(A) - 1 independent generators and
nonnegative on all of them.  The smallest face containing a point is the
intersection of the facets on which the point is tight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Iterator, Sequence

from . import linalg
from .arith import as_fraction
from .errors import NoForm, NotInCone, NotMember

if TYPE_CHECKING:  # pragma: no cover
    from .dynamics import ParameterState

RatVec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rat_vec(xs: Sequence) -> RatVec:
    return tuple(as_fraction(x) for x in xs)


def solve_weight_form(vectors: Sequence[Sequence[int]]) -> RatVec:
    """A rational form w with w . a_j = 1 for every vector; NoForm if none."""
    w = linalg.solve(vectors, [1] * len(vectors))
    if w is None:
        raise NoForm("vectors do not lie on a common hyperplane w(u) = 1")
    return tuple(w)


@dataclass(frozen=True)
class Facet:
    form: RatVec  # nonnegative on C(A)
    zeros: frozenset[int]


@dataclass(frozen=True)
class Face:
    """Closed face of -C(A), named by the generators a_j with -a_j on it.

    ``form`` vanishes on the face and is positive on the rest of -C(A).
    """

    generators: frozenset[int]
    form: RatVec

    def __eq__(self, other) -> bool:
        return isinstance(other, Face) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __contains__(self, k: int) -> bool:
        return k in self.generators


@dataclass(frozen=True)
class ASet:
    vectors: tuple[IntVec, ...]
    w: RatVec

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], w: Sequence | None = None) -> "ASet":
        vecs = tuple(tuple(int(x) for x in a) for a in vectors)
        if not vecs:
            raise ValueError("an A-set needs at least one vector")
        n = len(vecs[0])
        if any(len(a) != n for a in vecs):
            raise ValueError("vectors must share one ambient dimension")
        if len(set(vecs)) != len(vecs):
            raise ValueError("vectors must be pairwise distinct")
        form = solve_weight_form(vecs) if w is None else rat_vec(w)
        if len(form) != n or any(_dot(form, a) != 1 for a in vecs):
            raise NoForm("weight form does not take the value 1 on every vector")
        return cls(vecs, form)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    @property
    def N(self) -> int:
        return len(self.vectors)

    def combine(self, coeffs: Sequence) -> tuple:
        """sum_j coeffs_j a_j."""
        out = [0] * self.n
        for c, a in zip(coeffs, self.vectors):
            if c:
                for i, x in enumerate(a):
                    out[i] += c * x
        return tuple(out)

    @cached_property
    def rank(self) -> int:
        return linalg.rank(self.vectors)

    @cached_property
    def span_basis(self) -> list[list[Fraction]]:
        r, piv = linalg.rref(self.vectors)
        return r[: len(piv)]

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        d = self.rank
        basis = self.span_basis
        gram = [[_dot(b, a) for b in basis] for a in self.vectors]
        found: dict[frozenset[int], Facet] = {}
        for subset in itertools.combinations(range(self.N), d - 1):
            rows = [gram[j] for j in subset]
            if rows and linalg.rank(rows) != d - 1:
                continue
            ns = linalg.nullspace(rows, d) if rows else linalg.nullspace([], d)
            if len(ns) != 1:
                continue
            h = [sum(c * b[i] for c, b in zip(ns[0], basis)) for i in range(self.n)]
            vals = [_dot(h, a) for a in self.vectors]
            if all(x >= 0 for x in vals):
                pass
            elif all(x <= 0 for x in vals):
                h = [-x for x in h]
                vals = [-x for x in vals]
            else:
                continue
            zeros = frozenset(j for j, x in enumerate(vals) if x == 0)
            if zeros not in found:
                # integer-scale the form for cheaper evaluation later
                den = 1
                for x in h:
                    den = den * x.denominator // _gcd(den, x.denominator)
                found[zeros] = Facet(tuple(Fraction(x * den) for x in h), zeros)
        return tuple(sorted(found.values(), key=lambda f: sorted(f.zeros)))

    @cached_property
    def relation_basis(self) -> list[IntVec]:
        return [tuple(r) for r in linalg.integer_left_kernel(self.vectors)]

    def in_span(self, u: Sequence) -> bool:
        return linalg.solve([list(col) for col in zip(*self.vectors)], list(u)) is not None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def weight(u: Sequence, A: ASet) -> Fraction:
    return _dot(A.w, rat_vec(u))


def relation_lattice(A: ASet) -> list[IntVec]:
    """Hermite-reduced integer basis of L = {l : sum l_j a_j = 0}."""
    return list(A.relation_basis)


def _tight_set(u: RatVec, A: ASet) -> frozenset[int] | None:
    """Indices of facets tight at u, or None if u is not in -C(A)."""
    if not A.in_span(u):
        return None
    tight = []
    for idx, f in enumerate(A.facets):
        val = -_dot(f.form, u)
        if val < 0:
            return None
        if val == 0:
            tight.append(idx)
    return frozenset(tight)


def smallest_face(u: Sequence, A: ASet) -> Face:
    """Smallest closed face of -C(A) containing u; NotInCone otherwise."""
    u = rat_vec(u)
    tight = _tight_set(u, A)
    if tight is None:
        raise NotInCone(f"{[str(x) for x in u]} is not in -C(A)")
    gens = set(range(A.N))
    form = [Fraction(0)] * A.n
    for idx in tight:
        f = A.facets[idx]
        gens &= f.zeros
        form = [x - y for x, y in zip(form, f.form)]
    return Face(frozenset(gens), tuple(form))


def in_relative_interior(u: Sequence, face: Face, A: ASet) -> bool:
    try:
        return smallest_face(u, A) == face
    except NotInCone:
        return False


@dataclass(frozen=True)
class ShiftedLatticePoint:
    u: RatVec
    witness: IntVec  # sum_j witness_j a_j == u - beta


def in_shifted_lattice(u: Sequence, beta: Sequence, A: ASet) -> ShiftedLatticePoint:
    u, beta = rat_vec(u), rat_vec(beta)
    d = [x - y for x, y in zip(u, beta)]
    if any(x.denominator != 1 for x in d):
        raise NotMember("u - beta is not an integer vector")
    m = linalg.integer_left_solve(A.vectors, [int(x) for x in d])
    if m is None:
        raise NotMember("u - beta is not in ZA")
    return ShiftedLatticePoint(u, tuple(m))


@dataclass
class CertificateReport:
    holds: bool
    face: Face
    beta_weight: Fraction
    levels: list[Fraction] = field(default_factory=list)
    counterexample: RatVec | None = None
    counterexample_weight: Fraction | None = None


def _box_points(lo: Sequence[int], hi: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def slice_points(beta: RatVec, face: Face, level: Fraction, A: ASet) -> Iterator[RatVec]:
    """Points of (beta + ZA) in the relative interior of ``face`` with weight ``level``.

    The slice of -C(A_S) at weight level < 0 is level * conv(A_S); its
    vertices bound an integer box of shifts u - beta.
    """
    gens = sorted(face.generators)
    if level == 0:
        zero = tuple(Fraction(0) for _ in beta)
        if not gens and _is_member(zero, beta, A):
            yield zero
        return
    if not gens:
        return
    n = A.n
    lo, hi = [], []
    for i in range(n):
        coords = [level * A.vectors[j][i] for j in gens]
        lo.append(_ceil(min(coords) - beta[i]))
        hi.append(_floor(max(coords) - beta[i]))
    if any(a > b for a, b in zip(lo, hi)):
        return
    target_tight = _tight_set(beta, A)
    # eliminate one coordinate with the weight equation
    star = max(range(n), key=lambda i: (A.w[i] != 0, -(hi[i] - lo[i])))
    others = [i for i in range(n) if i != star]
    base = level - _dot(A.w, beta)
    for zs in _box_points([lo[i] for i in others], [hi[i] for i in others]):
        rest = base - sum(A.w[i] * z for i, z in zip(others, zs))
        zstar = rest / A.w[star]
        if zstar.denominator != 1 or not lo[star] <= zstar <= hi[star]:
            continue
        z = [0] * n
        for i, zi in zip(others, zs):
            z[i] = zi
        z[star] = int(zstar)
        u = tuple(b + zi for b, zi in zip(beta, z))
        if not _same_tight(u, target_tight, A):
            continue
        if _is_member(u, beta, A):
            yield u


def _same_tight(u: RatVec, tight: frozenset[int], A: ASet) -> bool:
    for idx, f in enumerate(A.facets):
        val = -_dot(f.form, u)
        if val < 0 or (val == 0) != (idx in tight):
            return False
    return A.in_span(u)


def _is_member(u, beta, A) -> bool:
    try:
        in_shifted_lattice(u, beta, A)
    except NotMember:
        return False
    return True


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def check_weight_maximality(state: "ParameterState", A: ASet) -> CertificateReport:
    """Decide whether beta has maximal weight in (beta + ZA) cap sigma°.

    Weights on the coset differ from w(beta) by integers and are <= 0 on
    -C(A), so only finitely many bounded slices need to be searched.
    """
    beta = rat_vec(state.beta)
    face = smallest_face(beta, A)
    wb = weight(beta, A)
    report = CertificateReport(True, face, wb)
    k = 1
    while wb + k <= 0:
        level = wb + k
        report.levels.append(level)
        for u in slice_points(beta, face, level, A):
            report.holds = False
            report.counterexample = u
            report.counterexample_weight = level
            return report
        k += 1
    return report


def enumerate_E(
    u: Sequence,
    state: "ParameterState",
    A: ASet,
    bound: int,
    *,
    basis: Sequence[Sequence[int]] | None = None,
    signs: str = "E",
) -> list[IntVec]:
    """All l in E(u) with |l|_inf <= bound.

    ``signs="E+"`` drops the constraint l_j <= 0 for v_j = -1.  A custom
    relation-lattice ``basis`` may be supplied; it is Hermite-reduced first,
    so the output does not depend on it.
    """
    pt = in_shifted_lattice(u, state.beta, A)
    m0 = list(pt.witness)
    N = A.N
    lo = [-bound] * N
    hi = [bound] * N
    for j, vj in enumerate(state.v):
        if vj == 0:
            lo[j] = max(lo[j], 0)
        elif vj == -1 and signs == "E":
            hi[j] = min(hi[j], 0)
    if basis is None:
        rows = [list(r) for r in A.relation_basis]
    else:
        h, _ = linalg.hermite_rows(basis)
        rows = [r for r in h if any(r)]
    pivots = linalg.pivot_columns(rows)
    r = len(rows)
    # columns whose value is fixed once the first k coefficients are chosen
    groups: list[list[int]] = []
    for k in range(r + 1):
        start = pivots[k - 1] if k > 0 else 0
        stop = pivots[k] if k < r else N
        groups.append(list(range(start, stop)))

    out: list[IntVec] = []

    def fits(vec, cols) -> bool:
        return all(lo[c] <= vec[c] <= hi[c] for c in cols)

    def rec(k: int, vec: list[int]) -> None:
        if k == r:
            out.append(tuple(vec))
            return
        row = rows[k]
        pc = pivots[k]
        piv = row[pc]
        base = vec[pc]
        cmin = -((base - lo[pc]) // piv)  # ceil((lo - base)/piv)
        cmax = (hi[pc] - base) // piv
        for c in range(cmin, cmax + 1):
            nv = [x + c * y for x, y in zip(vec, row)] if c else list(vec)
            if fits(nv, groups[k + 1]):
                rec(k + 1, nv)

    if fits(m0, groups[0]):
        rec(0, m0)
    out.sort()
    return out
