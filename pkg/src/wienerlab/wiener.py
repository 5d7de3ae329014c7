"""Wiener averages (1/N) sum |mu_hat(k_n)|^2, their limits, and density tools.

The empirical side is a deterministic compensated average of squared Fourier
moduli along a sequence.  The theoretical side evaluates the limit by formula:
the atomic sum for ergodic sequences, or the finite double sum over atom
quotients weighted by the closed-form limit function for arithmetic sequences.
The two sides are never conflated; a report records which formula produced
its theoretical value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .exact import UnitAngle
from .measures import CircleMeasure, LineMeasure, atom_quotient_pairs, rational_independence_classes
from .numerics import KahanSum
from .sequences import IntSequence, RealSequence


@dataclass
class WienerReport:
    """One empirical Wiener average with an optional formula-backed limit."""

    empirical: float
    N: int
    theoretical: Optional[float] = None
    formula_used: str = "none"  # "ergodic" | "countable-spectrum" | "upper-bound" | "none"
    discrepancy: Optional[float] = None

    def __post_init__(self) -> None:
        if self.theoretical is not None and self.discrepancy is None:
            self.discrepancy = abs(self.empirical - self.theoretical)

    def to_json(self) -> dict:
        return {
            "empirical": self.empirical,
            "N": self.N,
            "theoretical": self.theoretical,
            "formula_used": self.formula_used,
            "discrepancy": self.discrepancy,
        }


def empirical_wiener_avg(mu: CircleMeasure, seq: IntSequence, N: int) -> float:
    """(1/N) sum_{n<=N} |mu_hat(k_n)|^2, sequential compensated summation."""
    if N < 1:
        raise ValueError("N must be >= 1")
    acc = KahanSum()
    for n in range(1, N + 1):
        f = mu.fourier_along(seq, n)
        acc.add(f.real * f.real + f.imag * f.imag)
    return acc.value / N


def empirical_wiener_avg_real(mu: LineMeasure, rseq: RealSequence, N: int) -> float:
    """Same average for an atomic line measure along a real subsequence."""
    if N < 1:
        raise ValueError("N must be >= 1")
    acc = KahanSum()
    for n in range(1, N + 1):
        f = mu.fourier(rseq.term_value(n))
        acc.add(f.real * f.real + f.imag * f.imag)
    return acc.value / N


def ergodic_limit(mu: CircleMeasure) -> float:
    """Limit along any ergodic sequence: the sum of squared atom masses."""
    return math.fsum(abs(w) ** 2 for _, w in mu.atoms)


def countable_spectrum_limit(
    mu: CircleMeasure, closed_form_c: Callable[[UnitAngle], complex]
) -> float:
    """Limit along a sequence with countable spectrum and exact limit function.

    Sums c(angle(a) - angle(b)) * mu({a}) * conj(mu({b})) over ordered atom
    pairs; irrational quotients contribute exactly zero by the declarative
    rationality rule inside the closed form.
    """
    re = KahanSum()
    im = KahanSum()
    for diff, w in atom_quotient_pairs(mu):
        c = closed_form_c(diff)
        if c == 0:
            continue
        z = c * w
        re.add(z.real)
        im.add(z.imag)
    value, imag = re.value, im.value
    if abs(imag) > 1e-9:
        raise ArithmeticError(f"Wiener limit came out non-real ({imag!r})")
    return value


GeneratorSet = Union[str, Sequence[tuple[int, int]]]


def wiener_upper_bound(mu: CircleMeasure, spectrum_generators: GeneratorSet) -> float:
    """Sum of squared coset masses for the subgroup generated by the spectrum.

    ``spectrum_generators`` is either the string "rationals" (the spectrum
    generates all of e(Q), as for polynomials and primes) or a list of (b, q)
    rational angles generating a finite group of roots of unity.
    """
    if not mu.probability:
        raise ValueError("upper bound is defined for probability measures")
    if isinstance(spectrum_generators, str):
        if spectrum_generators != "rationals":
            raise ValueError(f"unknown generator set {spectrum_generators!r}")
        classes = rational_independence_classes(mu)
        masses = [
            sum(mu.atoms[i][1].real for i in cls) for cls in classes
        ]
    else:
        d = 1
        for b, q in spectrum_generators:
            r = Fraction(b, q)
            d = d * r.denominator // math.gcd(d, r.denominator)
        cosets: dict = {}
        for angle, w in mu.atoms:
            if not angle.is_exact:
                raise ValueError("atoms must be in the exact angle form")
            key = (angle.xi, (angle.rat * d) % 1)
            cosets.setdefault(key, []).append(w.real)
        masses = [sum(ws) for ws in cosets.values()]
    return math.fsum(m * m for m in masses)


@dataclass
class DensityEstimate:
    """Finite-horizon Koopman-von-Neumann extraction for a bounded sequence."""

    limit_candidate: float
    density_value: float  # density of the kept index set
    horizon: int
    cesaro_mean: float
    cesaro_mean_sq: float
    kept_count: int
    dropped_per_block: list[int] = field(default_factory=list)


def dlim_estimate(values: Sequence[float]) -> DensityEstimate:
    """Cesaro means plus a greedy density-one subset on which values converge.

    The candidate limit is the median of the tail half (robust against a
    sparse exceptional set).  Over the dyadic block [2^m, 2^(m+1)) indices
    with |a_n - candidate| > 2^-m are dropped; when a density limit exists
    the kept set has density approaching one.
    """
    n = len(values)
    if n == 0:
        raise ValueError("need at least one value")
    mean_acc, sq_acc = KahanSum(), KahanSum()
    for v in values:
        mean_acc.add(v)
        sq_acc.add(v * v)
    mean = mean_acc.value / n
    mean_sq = sq_acc.value / n
    tail = sorted(values[n // 2 :])
    candidate = tail[len(tail) // 2]
    kept = 0
    dropped_per_block: list[int] = []
    m = 0
    start = 1
    while start <= n:
        stop = min(2 * start, n + 1)
        eps = 2.0 ** (-m)
        dropped = 0
        for idx in range(start, stop):
            if abs(values[idx - 1] - candidate) <= eps:
                kept += 1
            else:
                dropped += 1
        dropped_per_block.append(dropped)
        m += 1
        start = stop if stop > start else start * 2
    return DensityEstimate(
        limit_candidate=candidate,
        density_value=kept / n,
        horizon=n,
        cesaro_mean=mean,
        cesaro_mean_sq=mean_sq,
        kept_count=kept,
        dropped_per_block=dropped_per_block,
    )


@dataclass
class KvnDiagnostic:
    mean: float
    mean_sq: float
    dlim_candidate: float
    dlim_density: float
    consistent: bool
    note: str


def kvn_equivalence_check(
    values: Sequence[float], horizon: Optional[int] = None, tol: float = 0.05
) -> KvnDiagnostic:
    """Compare Cesaro mean, mean of squares and the density-limit candidate.

    For values in [0,1] the three agree whenever a density limit exists; a
    kept-set density far below one means there is no density limit and the
    record is flagged inconsistent.
    """
    vals = list(values if horizon is None else values[:horizon])
    if any(v < -1e-12 or v > 1 + 1e-12 for v in vals):
        raise ValueError("values must lie in [0, 1]")
    est = dlim_estimate(vals)
    if est.density_value < 1.0 - tol:
        return KvnDiagnostic(
            mean=est.cesaro_mean,
            mean_sq=est.cesaro_mean_sq,
            dlim_candidate=est.limit_candidate,
            dlim_density=est.density_value,
            consistent=False,
            note="no density limit at this horizon",
        )
    ok = (
        abs(est.cesaro_mean - est.limit_candidate) <= tol
        and abs(est.cesaro_mean_sq - est.limit_candidate**2) <= tol
    )
    return KvnDiagnostic(
        mean=est.cesaro_mean,
        mean_sq=est.cesaro_mean_sq,
        dlim_candidate=est.limit_candidate,
        dlim_density=est.density_value,
        consistent=ok,
        note="" if ok else "Cesaro means disagree with the density-limit candidate",
    )
