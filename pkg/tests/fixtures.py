from fractions import Fraction

from hyperint.classical import HORN_C, classical_to_aset, horn_instance
from hyperint.geometry import ASet

HORN_VECTORS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 1), (1, 1, -1))


def horn_aset() -> ASet:
    return ASet.from_vectors(HORN_VECTORS)


def horn_state(theta, h=1):
    return classical_to_aset(horn_instance([Fraction(t) for t in theta], h))


HALF = (Fraction(1, 2),) * 3
TWO_THIRDS = (Fraction(2, 3),) * 3
__all__ = ["HORN_C", "HORN_VECTORS", "horn_aset", "horn_state", "HALF", "TWO_THIRDS"]
