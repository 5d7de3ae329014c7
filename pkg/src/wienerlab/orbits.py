"""Finite-dimensional orbit laboratory for diagonal contractions and semigroups.

A contraction is a list of eigenvalues r*e(theta) with r <= 1: the modulus-1
entries play the unitary part, the rest the completely non-unitary part
(whose powers drain to zero weakly, so they drop out of every Cesaro limit).
Orbit averages (1/N) sum |<T^{k_n} x, y>|^2 are computed with exact residue
phases for rational eigenangles, and compared against the finite double sum
over unimodular eigenvalue groups weighted by the sequence's limit function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .exact import UnitAngle
from .extremality import classify_real_sequence, sequence_extremality_verdict
from .numerics import KahanComplexSum, KahanSum, e_frac, e_rational, frac, frac_mult
from .sequences import IntSequence, RealSequence

UNDERFLOW_LOG = math.log(1e-300)


class DiagonalContraction:
    """diag(r_j * e(theta_j)) with every r_j in [0, 1]."""

    def __init__(self, entries: Sequence[tuple[float, UnitAngle]]):
        self.entries: list[tuple[float, UnitAngle]] = []
        for r, angle in entries:
            r = float(r)
            if not 0.0 <= r <= 1.0:
                raise ValueError("moduli must lie in [0, 1] for a contraction")
            self.entries.append((r, angle))
        if not self.entries:
            raise ValueError("need at least one diagonal entry")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def unimodular_indices(self) -> list[int]:
        return [j for j, (r, _) in enumerate(self.entries) if r == 1.0]

    def eigenvalue_groups(self) -> dict:
        """Unimodular entries grouped by exact angle equality."""
        groups: dict = {}
        for j in self.unimodular_indices():
            groups.setdefault(self.entries[j][1].exact_key(), []).append(j)
        return groups

    def power_entry(self, j: int, k: int, seq: Optional[IntSequence] = None, n: Optional[int] = None) -> complex:
        """(r_j e(theta_j))^k; residue-exact phase when the angle is rational."""
        r, angle = self.entries[j]
        if angle.is_rational and seq is not None and n is not None:
            b, q = angle.rational
            phase_val = e_rational(seq.term_mod(n, q) * b % q, q)
        else:
            phase_val = e_frac(frac_mult(k, angle.theta))
        if r == 1.0:
            return phase_val
        if r == 0.0:
            return 0.0 + 0.0j
        log_mag = k * math.log(r)
        if log_mag < UNDERFLOW_LOG:
            return 0.0 + 0.0j
        return math.exp(log_mag) * phase_val

    def to_json(self) -> dict:
        entries = []
        for r, angle in self.entries:
            if angle.is_rational:
                b, q = angle.rational
                entries.append({"r": r, "b": b, "q": q})
            else:
                entries.append({"r": r, "theta": angle.theta})
        return {"entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "DiagonalContraction":
        entries = []
        for e in obj["entries"]:
            if "theta" in e:
                angle = UnitAngle.from_float(e["theta"])
            else:
                angle = UnitAngle.from_rational(e.get("b", 0), e.get("q", 1))
            entries.append((e.get("r", 1.0), angle))
        return cls(entries)


def _check_vectors(T: DiagonalContraction, *vectors: Sequence[complex]) -> list[list[complex]]:
    out = []
    for v in vectors:
        v = [complex(z) for z in v]
        if len(v) != T.dimension:
            raise ValueError("vector dimension does not match the operator")
        out.append(v)
    return out


def _inner_at(T: DiagonalContraction, x, y, seq: IntSequence, n: int) -> complex:
    """<T^{k_n} x, y> without materializing k_n unless an entry needs it."""
    needs_term = any(
        not angle.is_rational or (r not in (0.0, 1.0))
        for r, angle in T.entries
    )
    k = seq.term(n) if needs_term else 0
    acc = KahanComplexSum()
    for j in range(T.dimension):
        w = x[j] * y[j].conjugate()
        if w == 0:
            continue
        acc.add(w * T.power_entry(j, k, seq=seq, n=n))
    return acc.value


def orbit_inner_avg(
    T: DiagonalContraction,
    x: Sequence[complex],
    y: Sequence[complex],
    seq: IntSequence,
    N: int,
) -> float:
    """(1/N) sum_{n<=N} |<T^{k_n} x, y>|^2, deterministic summation order."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x, y = _check_vectors(T, x, y)
    acc = KahanSum()
    for n in range(1, N + 1):
        v = _inner_at(T, x, y, seq, n)
        acc.add(v.real * v.real + v.imag * v.imag)
    return acc.value / N


def theoretical_orbit_limit(
    T: DiagonalContraction,
    x: Sequence[complex],
    y: Sequence[complex],
    closed_form_c: Callable[[UnitAngle], complex],
) -> float:
    """The limit as a finite double sum over unimodular eigenvalue groups.

    Contributions are c(angle(g1) - angle(g2)) * <P_{g1} x, y> * <P_{g2} y, x>;
    completely non-unitary coordinates contribute nothing.
    """
    x, y = _check_vectors(T, x, y)
    groups = list(T.eigenvalue_groups().items())
    re, im = KahanSum(), KahanSum()
    for key1, idx1 in groups:
        p1 = sum(x[j] * y[j].conjugate() for j in idx1)
        a1 = T.entries[idx1[0]][1]
        for key2, idx2 in groups:
            p2 = sum(y[j] * x[j].conjugate() for j in idx2)
            a2 = T.entries[idx2[0]][1]
            c = closed_form_c(a1.sub(a2))
            if c == 0:
                continue
            z = c * p1 * p2
            re.add(z.real)
            im.add(z.imag)
    if abs(im.value) > 1e-9:
        raise ArithmeticError(f"orbit limit came out non-real ({im.value!r})")
    return re.value


@dataclass
class EigenvectorTestReport:
    average: float
    norm4: float
    attains: bool
    is_eigenvector: bool
    eigen_support: list[dict]
    sequence_verdict: Optional[str]
    consistent: bool
    note: str = ""


def eigenvector_extremality_test(
    T: DiagonalContraction,
    x: Sequence[complex],
    seq: IntSequence,
    N: int,
    tol: float = 1e-9,
) -> EigenvectorTestReport:
    """Does (1/N) sum |<T^{k_n}x, x>|^2 attain ||x||^4, and is that honest?

    Along a Wiener-extremal sequence only eigenvectors to unimodular
    eigenvalues may attain the bound, so attainment by a non-eigenvector
    contradicts (and thereby witnesses the failure of) extremality.
    """
    (x,) = _check_vectors(T, x)
    norm_sq = math.fsum(abs(z) ** 2 for z in x)
    if norm_sq == 0:
        raise ValueError("need a nonzero vector")
    avg = orbit_inner_avg(T, x, x, seq, N)
    norm4 = norm_sq * norm_sq
    attains = abs(avg - norm4) <= tol * norm4
    groups = T.eigenvalue_groups()
    support = []
    carried = 0.0
    for key, idx in groups.items():
        mass = math.fsum(abs(x[j]) ** 2 for j in idx)
        if mass > 0:
            angle = T.entries[idx[0]][1]
            support.append({"angle_theta": angle.theta, "mass": mass})
            carried += mass
    cnu_mass = norm_sq - carried
    is_eigenvector = len(support) == 1 and abs(cnu_mass) <= 1e-12 * norm_sq
    verdict = sequence_extremality_verdict(seq)
    wiener_extremal = verdict.verdict == "extremal"
    if verdict.verdict == "inconclusive":
        consistent = True
        note = "sequence extremality unknown; no cross-check"
        seq_verdict = None
    else:
        seq_verdict = verdict.verdict
        if wiener_extremal and attains and not is_eigenvector:
            consistent = False
            note = "bound attained by a non-eigenvector along a Wiener-extremal sequence"
        else:
            consistent = True
            note = ""
    return EigenvectorTestReport(
        average=avg,
        norm4=norm4,
        attains=attains,
        is_eigenvector=is_eigenvector,
        eigen_support=support,
        sequence_verdict=seq_verdict,
        consistent=consistent,
        note=note,
    )


@dataclass
class ClassicalLimitReport:
    passes: bool
    norm_sq: float
    tail_max_deviation: float
    phase_residual: Optional[float]
    residual_bound: Optional[float]
    note: str = ""


def classical_limit_test(
    T: DiagonalContraction,
    x: Sequence[complex],
    seq: IntSequence,
    N: int,
    tol: float = 1e-6,
    tail_fraction: float = 0.25,
) -> ClassicalLimitReport:
    """Tail check of |<T^{k_n}x, x>| -> ||x||^2 with phase recovery.

    When the tail passes, the normalizing phases lambda_n are recovered and
    ||lambda_n T^{k_n} x - x|| is verified against the algebraic bound
    sqrt(2 * tol) * ||x|| that follows from the contraction inequality
    ||lambda T^k x - x||^2 <= 2||x||^2 - 2|<T^k x, x>|.
    """
    (x,) = _check_vectors(T, x)
    norm_sq = math.fsum(abs(z) ** 2 for z in x)
    if norm_sq == 0:
        raise ValueError("need a nonzero vector")
    start = max(1, int(N * (1 - tail_fraction)) + 1)
    max_dev = 0.0
    inners = []
    for n in range(start, N + 1):
        u = _inner_at(T, x, x, seq, n)
        inners.append((n, u))
        max_dev = max(max_dev, abs(abs(u) - norm_sq) / norm_sq)
    passes = max_dev <= tol
    if not passes:
        return ClassicalLimitReport(
            passes=False,
            norm_sq=norm_sq,
            tail_max_deviation=max_dev,
            phase_residual=None,
            residual_bound=None,
            note="tail of |<T^k x, x>| stays away from ||x||^2",
        )
    worst = 0.0
    for n, u in inners:
        lam = u.conjugate() / abs(u)
        k = seq.term(n)
        acc = KahanSum()
        for j in range(T.dimension):
            z = lam * T.power_entry(j, k, seq=seq, n=n) * x[j] - x[j]
            acc.add(z.real * z.real + z.imag * z.imag)
        worst = max(worst, math.sqrt(acc.value))
    bound = math.sqrt(2.0 * tol) * math.sqrt(norm_sq)
    return ClassicalLimitReport(
        passes=True,
        norm_sq=norm_sq,
        tail_max_deviation=max_dev,
        phase_residual=worst,
        residual_bound=bound,
        note="" if worst <= bound + 1e-12 else "residual exceeded the algebraic bound",
    )


@dataclass
class GelfandReport:
    verdict: str  # "identity" | "not-identity" | "inconclusive"
    orbit_condition: bool
    tail_max_distance: float
    explanation: str


def gelfand_probe(
    T: DiagonalContraction,
    seq: IntSequence,
    N: int,
    tol: float = 1e-9,
    tail_fraction: float = 0.25,
) -> GelfandReport:
    """Does T^{k_n} -> Id force T = Id along this sequence?

    The orbit condition checks max_j |lambda_j^{k_n} - 1| over the index
    tail.  Even a passing orbit only certifies T = Id when the sequence is
    extremal (no root of unity other than 1 converges along it); otherwise
    the probe names the obstruction.
    """
    start = max(1, int(N * (1 - tail_fraction)) + 1)
    worst = 0.0
    for n in range(start, N + 1):
        needs_term = any(
            not angle.is_rational or r not in (0.0, 1.0) for r, angle in T.entries
        )
        k = seq.term(n) if needs_term else 0
        for j in range(T.dimension):
            worst = max(worst, abs(T.power_entry(j, k, seq=seq, n=n) - 1.0))
    orbit_ok = worst <= tol
    if not orbit_ok:
        return GelfandReport(
            verdict="not-identity",
            orbit_condition=False,
            tail_max_distance=worst,
            explanation="some eigenvalue orbit stays away from 1",
        )
    verdict = sequence_extremality_verdict(seq)
    if verdict.verdict == "extremal":
        return GelfandReport(
            verdict="identity",
            orbit_condition=True,
            tail_max_distance=worst,
            explanation="orbits settle at 1 and the sequence is extremal",
        )
    if verdict.verdict == "inconclusive":
        return GelfandReport(
            verdict="inconclusive",
            orbit_condition=True,
            tail_max_distance=worst,
            explanation="orbits settle at 1 but sequence extremality is unknown",
        )
    return GelfandReport(
        verdict="not-identity",
        orbit_condition=True,
        tail_max_distance=worst,
        explanation="sequence not extremal",
    )


# -- diagonal contraction semigroups -------------------------------------------------


class DiagonalSemigroup:
    """T(t) = diag(exp((-rho_j + 2*pi*i*a_j) t)) with decay rates rho_j >= 0."""

    def __init__(self, entries: Sequence[tuple[float, float]]):
        self.entries = [(float(rho), float(a)) for rho, a in entries]
        if not self.entries:
            raise ValueError("need at least one diagonal entry")
        if any(rho < 0 for rho, _ in self.entries):
            raise ValueError("decay rates must be nonnegative for a contraction semigroup")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def value_at(self, j: int, t: float) -> complex:
        rho, a = self.entries[j]
        phase = e_frac(frac(a * t))
        if rho == 0.0:
            return phase
        exponent = -rho * t
        if exponent < UNDERFLOW_LOG:
            return 0.0 + 0.0j
        return math.exp(exponent) * phase

    def frequency_groups(self) -> dict[float, list[int]]:
        groups: dict[float, list[int]] = {}
        for j, (rho, a) in enumerate(self.entries):
            if rho == 0.0:
                groups.setdefault(a, []).append(j)
        return groups

    def to_json(self) -> dict:
        return {"entries": [{"rho": rho, "a": a} for rho, a in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "DiagonalSemigroup":
        return cls([(e.get("rho", 0.0), e.get("a", 0.0)) for e in obj["entries"]])


@dataclass
class OrbitReport:
    empirical: float
    theoretical: Optional[float]
    diagonal_reference: float
    eigen_support: list[dict]
    verdicts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "empirical": self.empirical,
            "theoretical": self.theoretical,
            "diagonal_reference": self.diagonal_reference,
            "eigen_support": self.eigen_support,
            "verdicts": self.verdicts,
        }


def semigroup_orbit_avg(
    S: DiagonalSemigroup,
    x: Sequence[complex],
    y: Sequence[complex],
    rseq: RealSequence,
    N: int,
    tol: float = 0.05,
) -> OrbitReport:
    """(1/N) sum |<T(k_n) x, y>|^2 against the diagonal eigen-projection sum.

    The diagonal reference sum over imaginary-axis eigenspaces is always
    reported; it is promoted to a theoretical limit only when the sequence
    belongs to the R-Wiener-extremal affine family, and the verdicts record
    whether the identity held empirically either way.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    x = [complex(z) for z in x]
    y = [complex(z) for z in y]
    if len(x) != S.dimension or len(y) != S.dimension:
        raise ValueError("vector dimension does not match the semigroup")
    acc = KahanSum()
    for n in range(1, N + 1):
        t = rseq.term_value(n)
        inner = KahanComplexSum()
        for j in range(S.dimension):
            w = x[j] * y[j].conjugate()
            if w == 0:
                continue
            inner.add(w * S.value_at(j, t))
        v = inner.value
        acc.add(v.real * v.real + v.imag * v.imag)
    empirical = acc.value / N
    support = []
    diag = KahanSum()
    for a, idx in S.frequency_groups().items():
        p = sum(x[j] * y[j].conjugate() for j in idx)
        mass = abs(p) ** 2
        support.append({"frequency": a, "mass": mass})
        diag.add(mass)
    diagonal_reference = diag.value
    verdict = classify_real_sequence(rseq)
    in_family = verdict is not None and verdict.verdict == "R-Wiener-extremal"
    holds = abs(empirical - diagonal_reference) <= tol
    if in_family:
        flag = "confirmed" if holds else "unexpected-deviation"
    else:
        flag = "coincidental-agreement" if holds else "expected-failure"
    return OrbitReport(
        empirical=empirical,
        theoretical=diagonal_reference if in_family else None,
        diagonal_reference=diagonal_reference,
        eigen_support=support,
        verdicts={
            "identity_expected": in_family,
            "identity_holds": holds,
            "flag": flag,
            "sequence_verdict": None if verdict is None else verdict.verdict,
        },
    )
