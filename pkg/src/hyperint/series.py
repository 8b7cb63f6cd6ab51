"""Truncations of the series F_u and checks on them.

A truncation keeps every l in E(u) with |l|_inf <= B together with its exact
coefficient [v]_l.  Structural checks (contiguity, box operators) compare
formal derivatives only on inner windows where both sides are complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import INF, bracket_vector, is_p_integral, ord_p
from .dynamics import FrobeniusOrbit, ParameterState, orbit
from .errors import NotPIntegral
from .geometry import (
    ASet,
    CertificateReport,
    check_weight_maximality,
    enumerate_E,
    rat_vec,
    smallest_face,
)

CERTIFIED = "CERTIFIED"
NOT_CERTIFIED = "NOT-CERTIFIED"


@dataclass
class SeriesTruncation:
    u: tuple[Fraction, ...]
    state: ParameterState
    B: int
    terms: dict[tuple[int, ...], Fraction]

    @property
    def A(self) -> ASet:
        return self.state.A

    def exponent(self, l: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(vj + lj for vj, lj in zip(self.state.v, l))


def expand_F(u: Sequence, state: ParameterState, A: ASet, B: int) -> SeriesTruncation:
    u = rat_vec(u)
    support = enumerate_E(u, state, A, B)
    terms = {l: bracket_vector(state.v, l) for l in support}
    return SeriesTruncation(u, state, B, terms)


@dataclass
class IntegralityReport:
    p: int
    min_ord: int | float
    offenders: list[tuple[tuple[int, ...], int]]
    terms_checked: int

    @property
    def passed(self) -> bool:
        return self.min_ord >= 0


def verify_integrality(series: SeriesTruncation, p: int) -> IntegralityReport:
    for x in series.state.v:
        if not is_p_integral(x, p):
            raise NotPIntegral(f"parameter entry {x} is not {p}-integral")
    min_ord: int | float = INF
    offenders = []
    for l, c in sorted(series.terms.items()):
        o = ord_p(c, p)
        min_ord = min(min_ord, o)
        if o < 0:
            offenders.append((l, o))
    return IntegralityReport(p, min_ord, offenders, len(series.terms))


def _falling(x: Fraction, m: int) -> Fraction:
    out = Fraction(1)
    for i in range(m):
        out *= x - i
    return out


def _apply_partials(
    terms: dict[tuple[int, ...], Fraction], v: Sequence[Fraction], mult: Sequence[int]
) -> dict[tuple[int, ...], Fraction]:
    """prod_j (d/dLambda_j)^{mult_j} applied to sum c_l Lambda^{v+l}, keyed by shifted l."""
    out: dict[tuple[int, ...], Fraction] = {}
    for l, c in terms.items():
        coef = c
        for vj, lj, mj in zip(v, l, mult):
            if mj:
                coef *= _falling(vj + lj, mj)
                if not coef:
                    break
        if coef:
            key = tuple(lj - mj for lj, mj in zip(l, mult))
            out[key] = out.get(key, 0) + coef
    return out


def _inner(keys: Iterable[tuple[int, ...]], bound: int) -> set[tuple[int, ...]]:
    return {k for k in keys if max((abs(x) for x in k), default=0) <= bound}


@dataclass
class CheckResult:
    passed: bool
    compared: int
    mismatches: list[tuple[int, ...]] = field(default_factory=list)


def contiguity_check(state: ParameterState, A: ASet, u: Sequence, k: int, B: int) -> CheckResult:
    """d/dLambda_k F_u against F_{u - a_k} (or 0 when a_k is off the face)."""
    u = rat_vec(u)
    fu = expand_F(u, state, A, B)
    mult = [0] * A.N
    mult[k] = 1
    deriv = _apply_partials(fu.terms, state.v, mult)
    face = smallest_face(state.beta, A)
    if k in face:
        target = expand_F(tuple(x - a for x, a in zip(u, A.vectors[k])), state, A, B).terms
    else:
        target = {}
    keys = _inner(set(deriv) | set(target), B - 1)
    bad = [key for key in sorted(keys) if deriv.get(key, 0) != target.get(key, 0)]
    return CheckResult(not bad, len(keys), bad)


def box_annihilation_check(
    state: ParameterState, A: ASet, u: Sequence, l_rel: Sequence[int], B: int
) -> CheckResult:
    """The box operator of a relation l_rel kills the truncation on its inner window."""
    if any(A.combine(l_rel)):
        raise ValueError("l_rel is not a relation among the vectors of A")
    fu = expand_F(u, state, A, B)
    pos = [max(x, 0) for x in l_rel]
    neg = [max(-x, 0) for x in l_rel]
    left = _apply_partials(fu.terms, state.v, pos)
    right = _apply_partials(fu.terms, state.v, neg)
    width = max((abs(x) for x in l_rel), default=0)
    keys = _inner(set(left) | set(right), B - width)
    bad = [key for key in sorted(keys) if left.get(key, 0) != right.get(key, 0)]
    return CheckResult(not bad, len(keys), bad)


def euler_check(series: SeriesTruncation) -> bool:
    """Every monomial Lambda^{v+l} has A-degree u."""
    for l in series.terms:
        deg = series.A.combine(series.exponent(l))
        if tuple(deg) != series.u:
            return False
    return True


@dataclass
class CertificationBundle:
    verdict: str
    orbit: FrobeniusOrbit
    conditions: list[CertificateReport]
    integrality: dict[tuple[int, int], IntegralityReport]
    window: int

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def empirical_pass(self) -> bool:
        return all(r.passed for r in self.integrality.values())


def certify(
    A: ASet,
    v0: Sequence,
    D: int,
    h: int,
    primes: Sequence[int] = (),
    B: int = 10,
) -> CertificationBundle:
    """Check the weight condition along the orbit of v0, then expand F_{beta^(i)}
    at each orbit state and test p-integrality for each supplied prime."""
    orb = orbit(v0, D, h, A)
    conds = [check_weight_maximality(s, A) for s in orb]
    verdict = CERTIFIED if all(c.holds for c in conds) else NOT_CERTIFIED
    integ: dict[tuple[int, int], IntegralityReport] = {}
    if primes:
        series = [expand_F(s.beta, s, A, B) for s in orb]
        for p in primes:
            if p % D != h % D:
                raise ValueError(f"prime {p} is not congruent to {h} mod {D}")
            for i, ser in enumerate(series):
                integ[(p, i)] = verify_integrality(ser, p)
    return CertificationBundle(verdict, orb, conds, integ, B)
