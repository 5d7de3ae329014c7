"""The limit function c of a subsequence: Cesaro estimates, closed forms, scans.

For a subsequence (k_n) and a unimodular point e(theta) the quantity of
interest is c(e(theta)) = lim_N (1/N) sum_{n<=N} e(k_n * theta).  Polynomial
sequences, primes and polynomials of primes admit exact closed forms over the
rationals (finite character-style sums over residues, respectively units,
mod q) and vanish at every angle that is not a root of unity; everything else
is estimated by deterministic Cesaro averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact import Bitstream, UnitAngle
from .numerics import KahanComplexSum, e_frac, e_rational, frac, frac_mult, roots_of_unity
from .sequences import IntSequence, RealSequence, SequenceRangeError, _poly_eval_mod

CLOSED_FORM_KINDS = ("poly", "primes", "poly-of-primes")

THRESHOLD_CLOSED = 1e-9
THRESHOLD_EMPIRICAL = 0.02


@dataclass
class CesaroEstimate:
    """A finite Cesaro average with trend checkpoints along the way."""

    value: complex
    N: int
    checkpoints: list[tuple[int, complex]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if abs(self.value) > 1.0 + 1e-9:
            raise ValueError("Cesaro average of unimodular terms exceeds modulus 1")


def _checkpoint_marks(N: int, k: int = 8) -> list[int]:
    marks = sorted({max(1, (N * i) // k) for i in range(1, k)} | {N})
    return marks


def empirical_c(seq: IntSequence, angle: UnitAngle, N: int) -> CesaroEstimate:
    """(1/N) sum_{n<=N} e(k_n * theta), deterministic left-to-right order.

    Rational angles go through exact residue counting (the phase only takes q
    values), so the result is bit-reproducible and exact up to one final
    rounding.  Irrational angles use integer-exact fractional parts of
    k_n * theta, which needs the terms themselves to be representable.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    marks = _checkpoint_marks(N)
    checkpoints: list[tuple[int, complex]] = []
    if angle.is_rational:
        b, q = angle.rational
        counts = [0] * q
        mark_i = 0
        for n in range(1, N + 1):
            counts[(seq.term_mod(n, q) * b) % q] += 1
            if n == marks[mark_i]:
                checkpoints.append((n, _counts_value(counts, n, q)))
                mark_i += 1
        value = checkpoints[-1][1]
        return CesaroEstimate(value=value, N=N, checkpoints=checkpoints)
    acc = KahanComplexSum()
    mark_i = 0
    try:
        for n in range(1, N + 1):
            acc.add(e_frac(frac_mult(seq.term(n), angle.theta)))
            if n == marks[mark_i]:
                checkpoints.append((n, acc.value / n))
                mark_i += 1
    except SequenceRangeError as exc:
        raise SequenceRangeError(
            f"irrational angle requires representable terms: {exc}"
            " (for lacunary sequences use lacunary_cesaro with a bitstream)"
        ) from exc
    return CesaroEstimate(value=checkpoints[-1][1], N=N, checkpoints=checkpoints)


def _counts_value(counts: Sequence[int], n: int, q: int) -> complex:
    roots = roots_of_unity(q)
    acc = KahanComplexSum()
    for j in range(q):
        if counts[j]:
            acc.add(counts[j] * roots[j])
    return acc.value / n


def totient(q: int) -> int:
    """Euler's phi."""
    if q < 1:
        raise ValueError("q must be >= 1")
    result = q
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def closed_form_c_poly(coeffs: Sequence[int], b: int, q: int) -> complex:
    """c(e(b/q)) for k_n = P(n): the residue average (1/q) sum_r e(P(r) b / q)."""
    b, q = _reduced(b, q)
    roots = roots_of_unity(q)
    acc = KahanComplexSum()
    for r in range(1, q + 1):
        acc.add(roots[(_poly_eval_mod(coeffs, r, q) * b) % q])
    return acc.value / q


def closed_form_c_poly_primes(coeffs: Sequence[int], b: int, q: int) -> complex:
    """c(e(b/q)) for k_n = P(p_n): the unit average (1/phi(q)) sum_{(r,q)=1} e(P(r) b / q)."""
    b, q = _reduced(b, q)
    roots = roots_of_unity(q)
    acc = KahanComplexSum()
    units = 0
    for r in range(1, q + 1):
        if math.gcd(r, q) == 1:
            units += 1
            acc.add(roots[(_poly_eval_mod(coeffs, r, q) * b) % q])
    return acc.value / units


def _reduced(b: int, q: int) -> tuple[int, int]:
    if q < 1:
        raise ValueError("q must be >= 1")
    b %= q
    if b == 0:
        return 0, 1
    if math.gcd(b, q) != 1:
        raise ValueError(f"{b}/{q} is not in lowest terms")
    return b, q


def closed_form_c_for(seq: IntSequence) -> Callable[[UnitAngle], complex]:
    """The exact limit function of an arithmetic sequence as a callable on angles.

    Angles without a rational declaration evaluate to 0 (the dichotomy is
    exact, not numeric).
    """
    kind = seq.kind
    if kind == "poly":
        coeffs = seq.params["coeffs"]
        fn = lambda b, q: closed_form_c_poly(coeffs, b, q)
    elif kind == "primes":
        fn = lambda b, q: closed_form_c_poly_primes([0, 1], b, q)
    elif kind == "poly-of-primes":
        coeffs = seq.params["coeffs"]
        fn = lambda b, q: closed_form_c_poly_primes(coeffs, b, q)
    else:
        raise ValueError(f"no closed form for sequence kind {kind!r}")

    def c(angle: UnitAngle) -> complex:
        if not angle.is_rational:
            return 0.0 + 0.0j
        b, q = angle.rational
        return fn(b, q)

    return c


@dataclass
class SpectrumEntry:
    b: int
    q: int
    value: complex
    provenance: str  # "closed-form" | "empirical"

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "q": self.q,
            "re": self.value.real,
            "im": self.value.imag,
            "provenance": self.provenance,
        }


@dataclass
class SpectrumTable:
    """Values of c on the rational grid {b/q : q <= q_max} above a threshold."""

    entries: list[SpectrumEntry]
    q_max: int
    threshold: float

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]

    def to_csv(self) -> str:
        lines = ["b,q,re,im,abs,provenance"]
        for e in self.entries:
            lines.append(
                f"{e.b},{e.q},{e.value.real!r},{e.value.imag!r},{abs(e.value)!r},{e.provenance}"
            )
        return "\n".join(lines) + "\n"


def spectrum_scan(
    seq: IntSequence,
    q_max: int,
    threshold: Optional[float] = None,
    empirical_N: int = 20000,
) -> SpectrumTable:
    """All reduced b/q with q <= q_max where |c(e(b/q))| clears the threshold.

    Arithmetic kinds are scanned in closed form (threshold separates exact
    zeros from roundoff); other kinds fall back to Cesaro estimates with a
    looser threshold and provenance "empirical".
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    closed = seq.kind in CLOSED_FORM_KINDS
    if threshold is None:
        threshold = THRESHOLD_CLOSED if closed else THRESHOLD_EMPIRICAL
    if closed:
        c = closed_form_c_for(seq)
        evaluate = lambda b, q: c(UnitAngle.from_rational(b, q))
        provenance = "closed-form"
    else:
        evaluate = lambda b, q: empirical_c(
            seq, UnitAngle.from_rational(b, q), empirical_N
        ).value
        provenance = "empirical"
    entries = []
    for q in range(1, q_max + 1):
        numerators = [0] if q == 1 else [b for b in range(1, q) if math.gcd(b, q) == 1]
        for b in numerators:
            v = evaluate(b, q)
            if abs(v) > threshold:
                entries.append(SpectrumEntry(b=b, q=q, value=v, provenance=provenance))
    entries.sort(key=lambda e: (e.q, e.b))
    return SpectrumTable(entries=entries, q_max=q_max, threshold=threshold)


class InconsistentSpectrumError(Exception):
    """The scanned unimodular set is not a group of roots of unity."""


def unimodular_group_detect(table: SpectrumTable, tol: float = 1e-9) -> int:
    """The d with {|c| = 1} = d-th roots of unity within the scanned range."""
    unimodular = {
        Fraction(e.b, e.q) for e in table.entries if abs(abs(e.value) - 1.0) <= tol
    }
    if Fraction(0, 1) not in unimodular:
        raise InconsistentSpectrumError("angle 0 is missing from the unimodular set")
    d = 1
    for r in unimodular:
        d = d * r.denominator // math.gcd(d, r.denominator)
    if d > table.q_max:
        raise InconsistentSpectrumError("detected group exceeds the scan range")
    expected = {Fraction(j, d) for j in range(d)}
    if unimodular != expected:
        raise InconsistentSpectrumError(
            f"unimodular set {sorted(unimodular)} is not the full group of order {d}"
        )
    return d


def lacunary_cesaro(base: int, theta_bits: Bitstream, N: int, precision_bits: int = 64) -> CesaroEstimate:
    """Cesaro average of e(base^n * theta) from the binary expansion of theta.

    Only base 2 has clean shift semantics: frac(2^n * theta) is the tail of
    the bitstream starting at position n+1, so there is no precision decay no
    matter how large n gets.  Requires at least N + precision_bits bits.
    """
    if base != 2:
        raise ValueError("bitstream shifting is only defined for base 2")
    if N < 1:
        raise ValueError("N must be >= 1")
    bits = [theta_bits(i) for i in range(1, N + precision_bits + 1)]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bitstream must yield binary digits")
    scale = 1 << precision_bits
    window = 0
    for b in bits[:precision_bits]:
        window = (window << 1) | b
    acc = KahanComplexSum()
    marks = _checkpoint_marks(N)
    checkpoints: list[tuple[int, complex]] = []
    mark_i = 0
    for n in range(1, N + 1):
        # window now holds bits n+1 .. n+precision_bits
        window = ((window << 1) & (scale - 1)) | bits[precision_bits + n - 1]
        acc.add(e_frac(window / scale))
        if n == marks[mark_i]:
            checkpoints.append((n, acc.value / n))
            mark_i += 1
    return CesaroEstimate(value=checkpoints[-1][1], N=N, checkpoints=checkpoints)


def real_empirical_c(rseq: RealSequence, t: float, N: int) -> CesaroEstimate:
    """(1/N) sum_{n<=N} e(k_n * t) for a real subsequence."""
    if N < 1:
        raise ValueError("N must be >= 1")
    acc = KahanComplexSum()
    marks = _checkpoint_marks(N)
    checkpoints: list[tuple[int, complex]] = []
    mark_i = 0
    for n in range(1, N + 1):
        acc.add(e_frac(frac(rseq.term_value(n) * t)))
        if n == marks[mark_i]:
            checkpoints.append((n, acc.value / n))
            mark_i += 1
    return CesaroEstimate(value=checkpoints[-1][1], N=N, checkpoints=checkpoints)


def closed_form_c_real_affine_shift(
    a, b, q_coeffs: Sequence[int], theta, xi_value: Optional[float] = None
) -> complex:
    """Exact c(theta) for k_n = a*Q(n) + b with Q an integer polynomial.

    Writing a*theta = d/q in lowest terms, the limit is
    e(b*theta) * (1/q) sum_{r=1..q} e(Q(r) d / q); when a*theta is irrational
    the limit is 0.  All rationality decisions are exact in the
    rational + rational*xi form; inputs outside that form raise.
    """
    from .exact import XI_DEFAULT, ExactReal

    if not isinstance(a, ExactReal) or not isinstance(b, ExactReal) or not isinstance(theta, ExactReal):
        raise TypeError("a, b and theta must be ExactReal")
    p = a * theta  # raises if the product leaves the exact form
    if not p.is_rational:
        return 0.0 + 0.0j
    d = p.rat.numerator
    q = p.rat.denominator
    bt = b * theta
    if bt.is_rational:
        r = bt.rat % 1
        phase = e_rational(r.numerator, r.denominator)
    else:
        phase = e_frac(frac(bt.value(XI_DEFAULT if xi_value is None else xi_value)))
    acc = KahanComplexSum()
    roots = roots_of_unity(q)
    for s in range(1, q + 1):
        acc.add(roots[(_poly_eval_mod(q_coeffs, s, q) * d) % q])
    return phase * acc.value / q
