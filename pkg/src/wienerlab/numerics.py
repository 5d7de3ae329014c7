"""Deterministic scalar numerics: unit roots, exact fractional parts, compensated sums.

All reductions in this package are sequential with Kahan-Neumaier compensation
so repeated runs (and runs under any thread count) produce identical bits.
"""

from __future__ import annotations

import math
from typing import Iterable

TWO_PI = 2.0 * math.pi

# e(j/q) for the four quarter turns, exact in IEEE doubles.
_QUARTER_ROOTS = {0: 1.0 + 0.0j, 1: 0.0 + 1.0j, 2: -1.0 + 0.0j, 3: 0.0 - 1.0j}


def e_rational(j: int, q: int) -> complex:
    """e(j/q) = exp(2*pi*i*j/q), exact at quarter turns, q >= 1."""
    if q < 1:
        raise ValueError("denominator must be >= 1")
    j %= q
    if (4 * j) % q == 0:
        return _QUARTER_ROOTS[4 * j // q]
    x = TWO_PI * (j / q)
    return complex(math.cos(x), math.sin(x))


def e_frac(x: float) -> complex:
    """e(x) for x in [0,1), exact at quarter turns."""
    if x == 0.0:
        return _QUARTER_ROOTS[0]
    if x == 0.25:
        return _QUARTER_ROOTS[1]
    if x == 0.5:
        return _QUARTER_ROOTS[2]
    if x == 0.75:
        return _QUARTER_ROOTS[3]
    t = TWO_PI * x
    return complex(math.cos(t), math.sin(t))


def frac(x: float) -> float:
    """Fractional part in [0,1)."""
    y = x - math.floor(x)
    return y if y < 1.0 else 0.0


def frac_mult(k: int, theta: float) -> float:
    """Exact fractional part of k*theta for integer k.

    theta is a binary rational num/den; (k*num) mod den is computed in
    integer arithmetic, so no precision is lost for large k.
    """
    if theta == 0.0:
        return 0.0
    num, den = theta.as_integer_ratio()
    return ((k * num) % den) / den


def roots_of_unity(q: int) -> list[complex]:
    """[e(j/q) for j in 0..q-1]."""
    return [e_rational(j, q) for j in range(q)]


class KahanSum:
    """Neumaier-compensated running sum of floats."""

    __slots__ = ("_s", "_c")

    def __init__(self) -> None:
        self._s = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


class KahanComplexSum:
    """Componentwise compensated sum of complex values."""

    __slots__ = ("_re", "_im")

    def __init__(self) -> None:
        self._re = KahanSum()
        self._im = KahanSum()

    def add(self, z: complex) -> None:
        self._re.add(z.real)
        self._im.add(z.imag)

    @property
    def value(self) -> complex:
        return complex(self._re.value, self._im.value)


def mean_abs_sq(values: Iterable[complex], n: int) -> float:
    """(1/n) * sum |v|^2 with compensated summation."""
    acc = KahanSum()
    for v in values:
        acc.add(v.real * v.real + v.imag * v.imag)
    return acc.value / n
