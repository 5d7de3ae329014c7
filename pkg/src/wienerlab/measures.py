"""Finite complex measures on the circle and atomic measures on the line.

A circle measure is a finite list of atoms (exact angles, complex weights)
plus a continuous part made of uniform arcs, which keeps every Fourier
coefficient in closed form.  Angle arithmetic is exact over rationals plus a
single formal irrational, so rational-(in)dependence of atoms is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import XI_DEFAULT, UnitAngle, as_fraction
from .numerics import TWO_PI, KahanComplexSum, e_frac, e_rational, frac, frac_mult

MASS_TOL = 1e-12


@dataclass(frozen=True)
class Arc:
    """Uniform mass w spread over the angle interval [lo, hi) in [0,1)."""

    lo: float
    hi: float
    weight: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo < self.hi <= 1.0):
            raise ValueError("arc needs 0 <= lo < hi <= 1")
        if self.weight < 0:
            raise ValueError("arc weight must be nonnegative")


class CircleMeasure:
    """Atoms + uniform arcs; immutable after construction."""

    def __init__(
        self,
        atoms: Sequence[tuple[UnitAngle, complex]] = (),
        arcs: Sequence[Arc] = (),
        probability: bool = True,
        xi_value: float = XI_DEFAULT,
    ):
        merged: dict = {}
        order: list = []
        for angle, w in atoms:
            key = angle.exact_key()
            if key in merged:
                a, prev = merged[key]
                merged[key] = (a, prev + complex(w))
            else:
                merged[key] = (angle, complex(w))
                order.append(key)
        self.atoms: list[tuple[UnitAngle, complex]] = [merged[k] for k in order]
        self.arcs: list[Arc] = list(arcs)
        self.probability = probability
        self.xi_value = xi_value
        if probability:
            for _, w in self.atoms:
                if abs(w.imag) > MASS_TOL or w.real < -MASS_TOL:
                    raise ValueError("probability measure needs real nonnegative weights")
            mass = sum(w.real for _, w in self.atoms) + sum(a.weight for a in self.arcs)
            if abs(mass - 1.0) > MASS_TOL:
                raise ValueError(f"probability mass is {mass}, not 1")

    def total_variation(self) -> float:
        return sum(abs(w) for _, w in self.atoms) + sum(a.weight for a in self.arcs)

    def fourier(self, k: int) -> complex:
        """The k-th Fourier coefficient: sum of w*e(k*theta) plus arc terms."""
        acc = KahanComplexSum()
        for angle, w in self.atoms:
            acc.add(w * angle.e_at_multiple(k))
        for arc in self.arcs:
            acc.add(_arc_fourier(arc, k))
        return acc.value

    def fourier_along(self, seq, n: int) -> complex:
        """mu_hat(k_n) with exact residue phases for rational atoms.

        Only needs k_n itself when an atom angle is irrational or an arc is
        present, so discrete rational measures work past the native width.
        """
        acc = KahanComplexSum()
        term_cache: Optional[int] = None
        for angle, w in self.atoms:
            if angle.is_rational:
                b, q = angle.rational
                acc.add(w * e_rational(seq.term_mod(n, q) * b % q, q))
            else:
                if term_cache is None:
                    term_cache = seq.term(n)
                acc.add(w * e_frac(frac_mult(term_cache, angle.theta)))
        for arc in self.arcs:
            if term_cache is None:
                term_cache = seq.term(n)
            acc.add(_arc_fourier(arc, term_cache))
        return acc.value

    def conjugate(self) -> "CircleMeasure":
        return CircleMeasure(
            [(a, w.conjugate()) for a, w in self.atoms],
            self.arcs,
            probability=self.probability,
            xi_value=self.xi_value,
        )

    def atom_masses(self) -> list[float]:
        return [w.real for _, w in self.atoms]

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        atoms = []
        for angle, w in self.atoms:
            entry: dict = {"w_re": w.real, "w_im": w.imag}
            if angle.is_exact:
                entry["b"] = angle.rat.numerator
                entry["q"] = angle.rat.denominator
                if angle.xi != 0:
                    entry["xi_coeff"] = str(angle.xi)
            else:
                entry["theta"] = angle.theta
            atoms.append(entry)
        return {
            "atoms": atoms,
            "arcs": [{"a": a.lo, "b": a.hi, "w": a.weight} for a in self.arcs],
            "probability": self.probability,
        }

    @classmethod
    def from_json(cls, obj: dict, xi_value: float = XI_DEFAULT) -> "CircleMeasure":
        atoms = []
        for entry in obj.get("atoms", []):
            w = complex(entry.get("w_re", 0.0), entry.get("w_im", 0.0))
            if "theta" in entry:
                angle = UnitAngle.from_float(entry["theta"])
            else:
                rat = Fraction(entry.get("b", 0), entry.get("q", 1))
                xi = as_fraction(entry.get("xi_coeff", 0))
                angle = UnitAngle.from_exact(rat, xi, xi_value=xi_value)
            atoms.append((angle, w))
        arcs = [Arc(a["a"], a["b"], a["w"]) for a in obj.get("arcs", [])]
        return cls(
            atoms, arcs, probability=obj.get("probability", True), xi_value=xi_value
        )


def _arc_fourier(arc: Arc, k: int) -> complex:
    if k == 0:
        return complex(arc.weight, 0.0)
    span = arc.hi - arc.lo
    num = e_frac(frac_mult(k, arc.hi)) - e_frac(frac_mult(k, arc.lo))
    return arc.weight * num / (TWO_PI * 1j * k * span)


def dirac(angle: UnitAngle) -> CircleMeasure:
    """The unit point mass at e(theta)."""
    return CircleMeasure([(angle, 1.0 + 0.0j)])


def uniform_measure() -> CircleMeasure:
    """Normalized arc length on the whole circle."""
    return CircleMeasure([], [Arc(0.0, 1.0, 1.0)])


def convex_mix(
    parts: Sequence[tuple[CircleMeasure, complex]], probability: bool = True
) -> CircleMeasure:
    """Weighted combination; colliding atoms merge by exact angle."""
    if probability:
        total = sum(complex(w) for _, w in parts)
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"mix weights sum to {total}, need 1 for a probability")
    atoms: list[tuple[UnitAngle, complex]] = []
    arcs: list[Arc] = []
    xi_value = XI_DEFAULT
    for mu, w in parts:
        w = complex(w)
        xi_value = mu.xi_value
        atoms.extend((a, w * wa) for a, wa in mu.atoms)
        if mu.arcs:
            if w.imag != 0 or w.real < 0:
                raise ValueError("arcs only mix with nonnegative real weights")
            arcs.extend(Arc(a.lo, a.hi, w.real * a.weight) for a in mu.arcs)
    return CircleMeasure(atoms, arcs, probability=probability, xi_value=xi_value)


def atom_quotient_pairs(mu: CircleMeasure) -> list[tuple[UnitAngle, complex]]:
    """All ordered atom pairs (a, b) as (angle(a) - angle(b) mod 1, w_a * conj(w_b)).

    Differences are exact when both angles are exact; a pair of bare float
    angles is tagged irrational unless it is the same atom twice.
    """
    out = []
    for a, wa in mu.atoms:
        for b, wb in mu.atoms:
            if a is b:
                diff = UnitAngle.zero()
            else:
                diff = a.sub(b, xi_value=mu.xi_value)
            out.append((diff, wa * wb.conjugate()))
    return out


def rational_independence_classes(mu: CircleMeasure) -> list[list[int]]:
    """Partition atom indices into cosets of the rationals e(Q).

    Two atoms are equivalent iff their angle difference is rational, which in
    the exact form means equal xi coefficients.  Atoms outside the exact form
    are rejected.
    """
    classes: dict[Fraction, list[int]] = {}
    for i, (angle, _) in enumerate(mu.atoms):
        if not angle.is_exact:
            raise ValueError(f"atom {i} has no exact angle form")
        classes.setdefault(angle.xi, []).append(i)
    return list(classes.values())


class LineMeasure:
    """A purely atomic finite measure on the real line."""

    def __init__(
        self, atoms: Sequence[tuple[float, complex]], probability: bool = True
    ):
        seen = set()
        self.atoms: list[tuple[float, complex]] = []
        for pos, w in atoms:
            pos = float(pos)
            if pos in seen:
                raise ValueError(f"duplicate atom position {pos}")
            seen.add(pos)
            self.atoms.append((pos, complex(w)))
        self.probability = probability
        if probability:
            for _, w in self.atoms:
                if abs(w.imag) > MASS_TOL or w.real < -MASS_TOL:
                    raise ValueError("probability measure needs real nonnegative weights")
            mass = sum(w.real for _, w in self.atoms)
            if abs(mass - 1.0) > MASS_TOL:
                raise ValueError(f"probability mass is {mass}, not 1")

    def fourier(self, t: float) -> complex:
        """mu_hat(t) = sum of w * e(pos * t)."""
        acc = KahanComplexSum()
        for pos, w in self.atoms:
            acc.add(w * e_frac(frac(pos * t)))
        return acc.value

    def to_json(self) -> dict:
        return {
            "atoms": [
                {"pos": pos, "w_re": w.real, "w_im": w.imag} for pos, w in self.atoms
            ],
            "probability": self.probability,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LineMeasure":
        atoms = [
            (a["pos"], complex(a.get("w_re", 0.0), a.get("w_im", 0.0)))
            for a in obj.get("atoms", [])
        ]
        return cls(atoms, probability=obj.get("probability", True))
