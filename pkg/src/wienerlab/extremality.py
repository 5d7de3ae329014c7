"""Extremality deciders and probes with replayable certificates.

A polynomial sequence (P(n)) keeps every root of unity moving exactly when no
modulus q >= 2 kills all residues P(r) mod q; for (P(p_n)) the residues range
over units only.  Both infinite criteria reduce to finite ones guarded here
by brute-force oracles:

* all-residues: some q has P(r) = 0 mod q for all r  iff  the fixed divisor
  gcd{P(n)} is > 1 (composite q reduce to prime divisors, and a prime q with
  a nonzero reduction of P mod q has at most deg(P) < q roots);
* unit-residues: a bad q exists iff a bad prime exists, and a bad prime
  either divides every coefficient or is at most deg(P) + 1.

Verdicts carry either a bad modulus with the vanishing residues, or an
explicit witness per decisive prime; every witness replays by direct
recomputation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exact import ExactReal
from .measures import CircleMeasure, LineMeasure
from .sequences import IntSequence, RealSequence, _poly_eval, _poly_eval_mod
from .wiener import empirical_wiener_avg


@dataclass
class FixedDivisor:
    """gcd of all polynomial values, computed from deg+1 consecutive samples."""

    value: int
    sample_values: list[int]


def fixed_divisor(coeffs: Sequence[int]) -> FixedDivisor:
    """gcd{P(n) : n in Z} via P(0), ..., P(deg)."""
    coeffs = list(coeffs)
    if not any(coeffs):
        raise ValueError("zero polynomial has no fixed divisor")
    deg = len(coeffs) - 1
    samples = [_poly_eval(coeffs, n) for n in range(deg + 1)]
    g = 0
    for v in samples:
        g = math.gcd(g, abs(v))
    return FixedDivisor(value=g, sample_values=samples)


@dataclass
class ExtremalityVerdict:
    """A decision with its certificate.

    For "not-extremal": ``bad_q`` plus the residue list showing every decisive
    residue vanishes mod bad_q.  For "extremal": ``witnesses`` maps each
    decisive prime q to an r with P(r) != 0 mod q (coprime to q in the unit
    variant).  Probe verdicts use "extremal-evidence" and fill ``detail``.
    """

    verdict: str  # "extremal" | "not-extremal" | "extremal-evidence" | "inconclusive"
    method: str
    bad_q: Optional[int] = None
    bad_q_residues: list[int] = field(default_factory=list)
    witnesses: dict[int, int] = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "bad_q": self.bad_q,
            "bad_q_residues": self.bad_q_residues,
            "witnesses": {str(q): r for q, r in self.witnesses.items()},
            "detail": self.detail,
        }


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(math.isqrt(p)) + 1))]


def _prime_factors(n: int) -> list[int]:
    out = []
    m = abs(n)
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _check_decider_input(coeffs: Sequence[int]) -> list[int]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        raise ValueError("polynomial degree must be >= 1")
    if coeffs[-1] <= 0:
        raise ValueError("leading coefficient must be positive")
    return coeffs


def is_extremal_poly(coeffs: Sequence[int]) -> ExtremalityVerdict:
    """Decide extremality of (P(n)): extremal iff the fixed divisor is 1."""
    coeffs = _check_decider_input(coeffs)
    deg = len(coeffs) - 1
    d = fixed_divisor(coeffs)
    if d.value != 1:
        q = _prime_factors(d.value)[0]
        residues = [_poly_eval_mod(coeffs, r, q) for r in range(q)]
        return ExtremalityVerdict(
            verdict="not-extremal",
            method="fixed-divisor",
            bad_q=q,
            bad_q_residues=residues,
            detail={"fixed_divisor": d.value},
        )
    witnesses = {}
    for q in _primes_upto(deg + 1):
        witnesses[q] = next(
            r for r in range(q) if _poly_eval_mod(coeffs, r, q) != 0
        )
    return ExtremalityVerdict(
        verdict="extremal",
        method="fixed-divisor",
        witnesses=witnesses,
        detail={"fixed_divisor": 1},
    )


def _unit_residues_vanish(coeffs: Sequence[int], q: int) -> bool:
    return all(
        _poly_eval_mod(coeffs, r, q) == 0
        for r in range(1, q + 1)
        if math.gcd(r, q) == 1
    )


def is_extremal_poly_primes(coeffs: Sequence[int]) -> ExtremalityVerdict:
    """Decide extremality of (P(p_n)) by the finite bad-prime reduction."""
    coeffs = _check_decider_input(coeffs)
    deg = len(coeffs) - 1
    content = 0
    for c in coeffs:
        content = math.gcd(content, abs(c))
    candidates = sorted(set(_prime_factors(content)) | set(_primes_upto(deg + 1)))
    bad = [q for q in candidates if _unit_residues_vanish(coeffs, q)]
    if bad:
        q = bad[0]
        residues = [
            _poly_eval_mod(coeffs, r, q) for r in range(1, q + 1) if math.gcd(r, q) == 1
        ]
        return ExtremalityVerdict(
            verdict="not-extremal",
            method="unit-bad-prime",
            bad_q=q,
            bad_q_residues=residues,
            detail={"bad_primes": bad, "content": content},
        )
    witnesses = {}
    for q in candidates:
        witnesses[q] = next(
            r
            for r in range(1, q + 1)
            if math.gcd(r, q) == 1 and _poly_eval_mod(coeffs, r, q) != 0
        )
    return ExtremalityVerdict(
        verdict="extremal",
        method="unit-bad-prime",
        witnesses=witnesses,
        detail={"content": content},
    )


def wiener_extremal_verdict_poly(coeffs: Sequence[int]) -> ExtremalityVerdict:
    """Wiener extremality of (P(n)); coincides with extremality for this family."""
    v = is_extremal_poly(coeffs)
    v.method = "fixed-divisor+wiener-equivalence"
    return v


def wiener_extremal_verdict_poly_primes(coeffs: Sequence[int]) -> ExtremalityVerdict:
    """Wiener extremality of (P(p_n)); coincides with extremality for this family."""
    v = is_extremal_poly_primes(coeffs)
    v.method = "unit-bad-prime+wiener-equivalence"
    return v


def sequence_extremality_verdict(seq: IntSequence) -> ExtremalityVerdict:
    """Closed-form verdict for arithmetic kinds, inconclusive otherwise."""
    if seq.kind == "poly":
        return is_extremal_poly(seq.params["coeffs"])
    if seq.kind == "primes":
        return is_extremal_poly_primes([0, 1])
    if seq.kind == "poly-of-primes":
        return is_extremal_poly_primes(seq.params["coeffs"])
    return ExtremalityVerdict(
        verdict="inconclusive",
        method="no-closed-form",
        detail={"kind": seq.kind},
    )


# -- brute-force oracles (used directly by the verification suite) ----------------


def brute_force_extremal(coeffs: Sequence[int], q_max: int = 200) -> Optional[int]:
    """Smallest q <= q_max with P(r) = 0 mod q for every r, or None."""
    for q in range(2, q_max + 1):
        if all(_poly_eval_mod(coeffs, r, q) == 0 for r in range(q)):
            return q
    return None


def brute_force_extremal_units(coeffs: Sequence[int], q_max: int = 200) -> Optional[int]:
    """Smallest q <= q_max killing all unit residues, or None."""
    for q in range(2, q_max + 1):
        if _unit_residues_vanish(coeffs, q):
            return q
    return None


# -- probes over generic sequences -------------------------------------------------


def roots_of_unity_convergence_probe(
    seq: IntSequence, q_max: int, N: int, tail_fraction: float = 0.25
) -> list[dict]:
    """Classify e(k_n b/q) over the index tail: does it settle at 1 or keep moving.

    Residues are exact via term_mod, so "converges-to-1" means every tail
    term has k_n * b = 0 mod q.
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail fraction must be in (0, 1]")
    start = max(1, int(N * (1 - tail_fraction)) + 1)
    out = []
    for q in range(1, q_max + 1):
        numerators = [0] if q == 1 else [b for b in range(1, q) if math.gcd(b, q) == 1]
        for b in numerators:
            settled = all(
                (seq.term_mod(n, q) * b) % q == 0 for n in range(start, N + 1)
            )
            out.append(
                {"b": b, "q": q, "verdict": "converges-to-1" if settled else "oscillates"}
            )
    return out


def bounded_gaps_extremality_check(
    seq: IntSequence, q_max: int, horizon: int, count_floor: int = 10
) -> ExtremalityVerdict:
    """Count indices with k_n outside qN per modulus; evidence, not proof.

    A modulus whose count stays under the floor is named as failing; the
    check presumes (and records) that a small-gap probe motivated it.
    """
    counts = {}
    for q in range(2, q_max + 1):
        counts[q] = sum(1 for n in range(1, horizon + 1) if seq.term_mod(n, q) != 0)
    failing = [q for q, c in counts.items() if c < count_floor]
    if failing:
        return ExtremalityVerdict(
            verdict="not-extremal",
            method="bounded-gaps-probe",
            bad_q=failing[0],
            detail={"counts": counts, "failing": failing, "horizon": horizon},
        )
    return ExtremalityVerdict(
        verdict="extremal-evidence",
        method="bounded-gaps-probe",
        detail={"counts": counts, "horizon": horizon, "count_floor": count_floor},
    )


def pos_density_wiener_check(
    seq: IntSequence, q_max: int, horizon: int, density_floor: float = 0.01
) -> ExtremalityVerdict:
    """Estimate the index density of {n : k_n not in qN} per modulus q."""
    densities = {}
    for q in range(2, q_max + 1):
        hits = sum(1 for n in range(1, horizon + 1) if seq.term_mod(n, q) != 0)
        densities[q] = hits / horizon
    failing = [q for q, d in densities.items() if d <= density_floor]
    if failing:
        return ExtremalityVerdict(
            verdict="not-extremal",
            method="positive-density-probe",
            bad_q=failing[0],
            detail={"densities": densities, "failing": failing, "horizon": horizon},
        )
    return ExtremalityVerdict(
        verdict="extremal-evidence",
        method="positive-density-probe",
        detail={"densities": densities, "horizon": horizon, "density_floor": density_floor},
    )


@dataclass
class MeasureProbe:
    wiener_avg: float
    tail_min_abs_fourier: float
    classification: str  # "dirac-consistent" | "not-dirac-like"


def measure_extremality_probe(
    mu: CircleMeasure,
    seq: IntSequence,
    N: int,
    tail_fraction: float = 0.1,
    tol: float = 1e-6,
) -> MeasureProbe:
    """Wiener average plus the tail minimum of |mu_hat(k_n)|.

    Both near one is exactly how a Dirac measure behaves; a non-Dirac measure
    scoring "dirac-consistent" therefore witnesses non-extremality of the
    sequence.
    """
    if not mu.probability:
        raise ValueError("probe expects a probability measure")
    avg = empirical_wiener_avg(mu, seq, N)
    start = max(1, int(N * (1 - tail_fraction)) + 1)
    tail_min = min(abs(mu.fourier_along(seq, n)) for n in range(start, N + 1))
    dirac_like = avg >= 1.0 - tol and tail_min >= 1.0 - tol
    return MeasureProbe(
        wiener_avg=avg,
        tail_min_abs_fourier=tail_min,
        classification="dirac-consistent" if dirac_like else "not-dirac-like",
    )


# -- the real-line affine family ----------------------------------------------------


@dataclass
class RExtremalityVerdict:
    verdict: str  # "not-R-extremal" | "R-Wiener-extremal"
    method: str
    reason: str
    counterexample: Optional[LineMeasure] = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "reason": self.reason,
            "counterexample": None
            if self.counterexample is None
            else self.counterexample.to_json(),
        }


def is_R_extremal_affine(
    a: ExactReal, b: ExactReal, q_coeffs: Sequence[int], xi_value: Optional[float] = None
) -> RExtremalityVerdict:
    """Extremality over the reals for k_n = a*Q(n) + b, Q an integer polynomial.

    If b/a is rational the whole sequence sits inside a scaled copy of the
    integers g*Z, and the two-atom measure (delta_{1/g} + delta_{-1/g})/2 has
    |mu_hat(k_n)| = 1 for every n: not R-extremal.  Otherwise the constant
    offset is rationally independent of the scale and the sequence is
    R-Wiener extremal (hence R-extremal).
    """
    from .exact import XI_DEFAULT

    if a.is_zero:
        raise ValueError("scale a must be nonzero")
    if not any(q_coeffs[1:] if len(q_coeffs) > 1 else []):
        raise ValueError("polynomial part must be nonconstant")
    xi_val = XI_DEFAULT if xi_value is None else xi_value
    quotient = b.rational_quotient(a)
    if quotient is not None:
        m = quotient.denominator
        g = ExactReal(a.rat / m, a.xi / m)
        g_value = g.value(xi_val)
        pos = 1.0 / g_value
        counterexample = LineMeasure([(pos, 0.5), (-pos, 0.5)])
        return RExtremalityVerdict(
            verdict="not-R-extremal",
            method="copy-of-Z",
            reason=f"terms lie in g*Z for g = {g}; "
            "the two-atom measure at +-1/g has unit Fourier modulus along the sequence",
            counterexample=counterexample,
        )
    return RExtremalityVerdict(
        verdict="R-Wiener-extremal",
        method="affine-shift-criterion",
        reason="constant offset is rationally independent of the coefficient scale",
    )


def classify_real_sequence(rseq: RealSequence) -> Optional[RExtremalityVerdict]:
    """Apply the affine decision to a real sequence when it has the affine form."""
    form = rseq.affine_form()
    if form is None:
        return None
    a, b, q_coeffs = form
    return is_R_extremal_affine(a, b, q_coeffs, xi_value=rseq.xi_value)
