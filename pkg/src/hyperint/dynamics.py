"""The parameter map v -> v' attached to a residue class h mod D, and its orbits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import as_fraction
from .errors import InvalidState, NonReturn
from .geometry import ASet, Face, rat_vec, smallest_face


def common_denominator(v: Sequence) -> int:
    d = 1
    for x in v:
        d = math.lcm(d, as_fraction(x).denominator)
    return d


def multiplicative_order(h: int, D: int) -> int:
    if D == 1:
        return 1
    if math.gcd(h, D) != 1:
        raise InvalidState(f"gcd({h}, {D}) != 1")
    k, x = 1, h % D
    while x != 1:
        x = x * h % D
        k += 1
    return k


@dataclass(frozen=True)
class ParameterState:
    v: tuple[Fraction, ...]
    D: int
    h: int
    A: ASet
    index: int = 0
    beta: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        v = rat_vec(self.v)
        object.__setattr__(self, "v", v)
        if len(v) != self.A.N:
            raise InvalidState("v must have one entry per vector of A")
        if self.D < 1 or self.h < 1 or math.gcd(self.h, self.D) != 1:
            raise InvalidState("need D >= 1, h >= 1 and gcd(h, D) = 1")
        for x in v:
            if not -1 <= x <= 0:
                raise InvalidState(f"entry {x} outside [-1, 0]")
            if (self.D * x).denominator != 1:
                raise InvalidState(f"entry {x} has denominator not dividing D={self.D}")
        beta = tuple(Fraction(0) for _ in range(self.A.n))
        for x, a in zip(v, self.A.vectors):
            if x:
                beta = tuple(b + x * ai for b, ai in zip(beta, a))
        object.__setattr__(self, "beta", beta)

    @classmethod
    def make(cls, v: Sequence, A: ASet, h: int = 1, D: int | None = None) -> "ParameterState":
        v = rat_vec(v)
        return cls(v, D if D is not None else common_denominator(v), h, A)

    @property
    def face(self) -> Face:
        return smallest_face(self.beta, self.A)


def step_value(x: Fraction, D: int, h: int) -> Fraction:
    """The unique v' in [-1, 0] with D v' integral and h x - v' in {0, ..., -(h-1)}."""
    if x == -1 or x == 0:
        return x
    c = -D * x
    out = Fraction(-((h * int(c)) % D), D)
    diff = h * x - out
    if diff.denominator != 1 or not -(h - 1) <= diff <= 0:
        raise InvalidState(f"step of {x} under h={h}, D={D} left its window")
    return out


def frobenius_step(state: ParameterState) -> ParameterState:
    v2 = tuple(step_value(x, state.D, state.h) for x in state.v)
    return ParameterState(v2, state.D, state.h, state.A, state.index + 1)


@dataclass(frozen=True)
class FrobeniusOrbit:
    states: tuple[ParameterState, ...]

    @property
    def a(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i: int) -> ParameterState:
        return self.states[i]


def orbit(v0: Sequence, D: int, h: int, A: ASet) -> FrobeniusOrbit:
    start = ParameterState(rat_vec(v0), D, h, A)
    cap = multiplicative_order(h, D)
    states = [start]
    cur = start
    while True:
        cur = frobenius_step(cur)
        if cur.v == start.v:
            return FrobeniusOrbit(tuple(states))
        if len(states) >= cap:
            raise NonReturn(f"no return to v0 within ord_D(h) = {cap} steps")
        states.append(cur)


def face_stability_check(orb: FrobeniusOrbit, A: ASet) -> bool:
    faces = {smallest_face(s.beta, A) for s in orb}
    return len(faces) == 1
