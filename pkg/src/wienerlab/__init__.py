"""Cesaro limit functions, Wiener averages and extremality certificates
along arithmetic subsequences, at desk scale and in exact arithmetic where
it matters."""

__version__ = "0.1.0"

SCHEMA = "wiener-lab/1"

from .exact import ExactReal, UnitAngle, rational_bitstream  # noqa: F401
from .measures import Arc, CircleMeasure, LineMeasure, convex_mix, dirac  # noqa: F401
from .sequences import (  # noqa: F401
    IntSequence,
    PrimeSieve,
    RealSequence,
    insertion_perturbed_even_seq,
    lacunary_seq,
    poly_of_primes_seq,
    poly_seq,
    polynomial_return_times,
    primes_seq,
    real_poly_of_primes_seq,
    real_poly_seq,
    rotation_return_times,
)
