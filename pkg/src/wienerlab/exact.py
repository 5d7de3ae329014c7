"""Exact scalar forms: rationals extended by one declared formal irrational.

Every exact quantity in this package is written q1 + q2*xi where q1, q2 are
rationals and xi is a single formal irrational symbol (numerically sqrt(2)
unless a construction declares otherwise).  Keeping a single generator makes
rational-dependence questions decidable: q1 + q2*xi is rational iff q2 == 0,
and two such numbers differ by a rational iff their xi coefficients agree.
Products that would introduce xi^2 are rejected rather than guessed at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .numerics import e_frac, e_rational, frac, frac_mult

XI_DEFAULT = math.sqrt(2.0)

RationalLike = Union[int, Fraction, str]


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class ExactReal:
    """A real number of the exact form rat + xi_coeff * xi."""

    rat: Fraction = Fraction(0)
    xi: Fraction = Fraction(0)

    @classmethod
    def of(cls, rat: RationalLike = 0, xi: RationalLike = 0) -> "ExactReal":
        return cls(as_fraction(rat), as_fraction(xi))

    @property
    def is_rational(self) -> bool:
        return self.xi == 0

    @property
    def is_zero(self) -> bool:
        return self.rat == 0 and self.xi == 0

    def value(self, xi_value: float = XI_DEFAULT) -> float:
        return float(self.rat) + float(self.xi) * xi_value

    def __add__(self, other: "ExactReal") -> "ExactReal":
        return ExactReal(self.rat + other.rat, self.xi + other.xi)

    def __sub__(self, other: "ExactReal") -> "ExactReal":
        return ExactReal(self.rat - other.rat, self.xi - other.xi)

    def __neg__(self) -> "ExactReal":
        return ExactReal(-self.rat, -self.xi)

    def __mul__(self, other: "ExactReal") -> "ExactReal":
        if self.xi != 0 and other.xi != 0:
            raise ValueError("product leaves the rational + rational*xi form")
        if other.xi == 0:
            return ExactReal(self.rat * other.rat, self.xi * other.rat)
        return ExactReal(self.rat * other.rat, self.rat * other.xi)

    def scaled(self, r: RationalLike) -> "ExactReal":
        f = as_fraction(r)
        return ExactReal(self.rat * f, self.xi * f)

    def rational_quotient(self, other: "ExactReal") -> Optional[Fraction]:
        """self/other as an exact rational, or None if the quotient is irrational.

        Relies on 1 and xi being linearly independent over the rationals.
        """
        if other.is_zero:
            raise ZeroDivisionError("quotient by zero")
        if self.rat * other.xi != self.xi * other.rat:
            return None
        if other.rat != 0:
            r = self.rat / other.rat
        else:
            r = self.xi / other.xi
        if self.rat == r * other.rat and self.xi == r * other.xi:
            return r
        return None

    def __str__(self) -> str:
        if self.xi == 0:
            return str(self.rat)
        if self.rat == 0:
            return f"{self.xi}*xi"
        return f"{self.rat}+{self.xi}*xi"


Bitstream = Callable[[int], int]


def rational_bitstream(b: int, q: int) -> Bitstream:
    """Binary digit supplier for b/q in [0,1): digit(i) is the i-th bit after the point."""
    if q < 1 or not 0 <= b < q:
        raise ValueError("need 0 <= b < q")

    def bit(i: int) -> int:
        if i < 1:
            raise ValueError("bit index is 1-based")
        return (b * (1 << i) // q) % 2

    return bit


@dataclass(frozen=True)
class UnitAngle:
    """A point theta in [0,1) standing for the unimodular number e(theta).

    The angle is irrational by declaration exactly when no exact fields are
    present; no floating-point rationality sniffing happens anywhere.  When
    ``rat`` is set it is authoritative and theta is derived from it, possibly
    together with an xi component.
    """

    theta: float
    rat: Optional[Fraction] = None
    xi: Fraction = Fraction(0)
    bits: Optional[Bitstream] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 1.0:
            raise ValueError("theta must lie in [0,1)")
        if self.xi != 0 and self.rat is None:
            raise ValueError("xi component requires an explicit rational part")

    @classmethod
    def from_rational(cls, b: int, q: int, bits: Optional[Bitstream] = None) -> "UnitAngle":
        if q < 1:
            raise ValueError("denominator must be >= 1")
        r = Fraction(b, q) % 1
        return cls(theta=float(r), rat=r, bits=bits)

    @classmethod
    def from_float(cls, theta: float, bits: Optional[Bitstream] = None) -> "UnitAngle":
        return cls(theta=frac(theta), bits=bits)

    @classmethod
    def from_exact(
        cls,
        rat: RationalLike,
        xi: RationalLike = 0,
        xi_value: float = XI_DEFAULT,
    ) -> "UnitAngle":
        r, x = as_fraction(rat), as_fraction(xi)
        if x == 0:
            return cls.from_rational(r.numerator, r.denominator)
        theta = frac(float(r) + float(x) * xi_value)
        return cls(theta=theta, rat=r % 1, xi=x)

    @classmethod
    def zero(cls) -> "UnitAngle":
        return cls.from_rational(0, 1)

    @property
    def is_rational(self) -> bool:
        return self.rat is not None and self.xi == 0

    @property
    def is_exact(self) -> bool:
        return self.rat is not None

    @property
    def rational(self) -> tuple[int, int]:
        """(b, q) in lowest terms; only valid for rational angles."""
        if not self.is_rational:
            raise ValueError("angle is not declared rational")
        assert self.rat is not None
        return self.rat.numerator, self.rat.denominator

    def exact_key(self):
        """Hashable identity used for exact atom comparison."""
        if self.rat is not None:
            return ("exact", self.rat, self.xi)
        return ("float", self.theta)

    def sub(self, other: "UnitAngle", xi_value: float = XI_DEFAULT) -> "UnitAngle":
        """self - other mod 1; exact whenever both angles are exact."""
        if self.rat is not None and other.rat is not None:
            r = (self.rat - other.rat) % 1
            x = self.xi - other.xi
            if x == 0:
                return UnitAngle.from_rational(r.numerator, r.denominator)
            return UnitAngle.from_exact(r, x, xi_value=xi_value)
        return UnitAngle.from_float(self.theta - other.theta)

    def e_value(self) -> complex:
        if self.is_rational:
            b, q = self.rational
            return e_rational(b, q)
        return e_frac(self.theta)

    def e_at_multiple(self, k: int) -> complex:
        """e(k * theta); exact residue arithmetic for rational angles."""
        if self.is_rational:
            b, q = self.rational
            return e_rational((k % q) * b % q, q)
        return e_frac(frac_mult(k, self.theta))
