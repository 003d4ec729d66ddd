"""Exact computations for triangular alternation limit algebras ``T(r_k, s_k)``.

The outer automorphism group is ``Z^d`` with ``d`` the number of primes
dividing infinitely many terms of both multiplicity sequences.
"""

from .autgroup import ExponentVector, alpha_on_point, out_rank
from .cantor import CantorSpace, Point, Tail
from .matrixalg import DirectSystem, MatrixUnit, TriElement
from .supernat import SequenceProfile, Supernatural, from_profile

__all__ = [
    "CantorSpace",
    "DirectSystem",
    "ExponentVector",
    "MatrixUnit",
    "Point",
    "SequenceProfile",
    "Supernatural",
    "Tail",
    "TriElement",
    "alpha_on_point",
    "from_profile",
    "out_rank",
]
