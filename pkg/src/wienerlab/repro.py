"""End-to-end reproduction checks behind the `repro` subcommand and endpoint.

Each check recomputes one headline identity or verdict table from scratch at
its stated tolerance and returns (passed, detail).  The registry order is the
reporting order.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import extremality, measures, orbits, spectra, wiener
from .exact import ExactReal, UnitAngle
from .sequences import (
    poly_seq,
    primes_seq,
    real_poly_seq,
    rotation_return_times,
    upper_density_estimate,
)

SIEVE_LIMIT = 130_000

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def check_primes_spectrum() -> tuple[bool, str]:
    """Exact finite-N average at angle 1/2 along the primes, plus the closed form."""
    n_avg = 10_000
    seq = primes_seq(SIEVE_LIMIT)
    est = spectra.empirical_c(seq, UnitAngle.from_rational(1, 2), n_avg)
    expected = -1 + 2 / n_avg
    closed = spectra.closed_form_c_poly_primes([0, 1], 1, 2)
    ok = est.value == expected and closed == -1
    return ok, f"empirical={est.value!r} expected={expected!r} closed={closed!r}"


def check_poly_closed_vs_empirical() -> tuple[bool, str]:
    """P(x)=x^2 at 1/4 over one residue period times 1000."""
    est = spectra.empirical_c(poly_seq([0, 0, 1]), UnitAngle.from_rational(1, 4), 4000)
    err = abs(est.value - (0.5 + 0.5j))
    return err <= 1e-12, f"empirical={est.value!r} err={err:.3e}"


def check_wiener_primes_two_atoms() -> tuple[bool, str]:
    """mu = (delta_1 + delta_-1)/2 along the primes: average 1/N, limit 0."""
    n_avg = 10_000
    mu = measures.CircleMeasure(
        [(UnitAngle.from_rational(0, 1), 0.5), (UnitAngle.from_rational(1, 2), 0.5)]
    )
    seq = primes_seq(SIEVE_LIMIT)
    emp = wiener.empirical_wiener_avg(mu, seq, n_avg)
    theo = wiener.countable_spectrum_limit(mu, spectra.closed_form_c_for(seq))
    ok = emp == 1.0 / n_avg and theo == 0.0
    return ok, f"empirical={emp!r} theoretical={theo!r}"


def check_classical_wiener_randomized() -> tuple[bool, str]:
    """100 random rational-atom probability measures along (n) at exact periods."""
    rng = random.Random(20260810)
    seq = poly_seq([0, 1])
    worst = 0.0
    for _ in range(100):
        q = rng.randint(1, 32)
        m = rng.randint(1, min(5, q))
        numerators = rng.sample(range(q), m)
        raw = [rng.uniform(0.1, 1.0) for _ in range(m)]
        total = math.fsum(raw)
        weights = [w / total for w in raw]
        weights[-1] = 1.0 - math.fsum(weights[:-1])
        mu = measures.CircleMeasure(
            [
                (UnitAngle.from_rational(b, q), w)
                for b, w in zip(numerators, weights)
            ]
        )
        period = 1
        for i in range(m):
            for j in range(m):
                if i != j:
                    d = Fraction(numerators[i] - numerators[j], q).denominator
                    period = period * d // math.gcd(period, d)
        n_avg = period * 100
        emp = wiener.empirical_wiener_avg(mu, seq, n_avg)
        target = wiener.ergodic_limit(mu)
        worst = max(worst, abs(emp - target))
    return worst <= 1e-10, f"worst |empirical - sum w^2| = {worst:.3e} over 100 measures"


def _build_extremality_table() -> list[tuple[str, bool, bool]]:
    """(label, got_extremal, expected_extremal) over the headline families."""
    rows: list[tuple[str, bool, bool]] = []

    def poly_extremal(coeffs) -> bool:
        return extremality.is_extremal_poly(coeffs).verdict == "extremal"

    def primes_extremal(coeffs) -> bool:
        return extremality.is_extremal_poly_primes(coeffs).verdict == "extremal"

    for a in range(21):
        rows.append((f"n^2+{a}", poly_extremal([a, 0, 1]), True))
    rows.append(("p^2+4", primes_extremal([4, 0, 1]), True))
    rows.append(("p^2+2", primes_extremal([2, 0, 1]), False))
    rows.append(("p^2+5", primes_extremal([5, 0, 1]), False))
    for k in range(1, 10):
        coeffs = [2] + [0] * (k - 1) + [1]
        rows.append((f"p^{k}+2", primes_extremal(coeffs), k % 2 == 1))
    for a in range(1, 13):
        for b in range(13):
            rows.append((f"{a}n+{b}", poly_extremal([b, a]), math.gcd(a, b) == 1))
            rows.append(
                (
                    f"{a}p+{b}",
                    primes_extremal([b, a]),
                    math.gcd(a, b) == 1 and (a + b) % 2 == 1,
                )
            )
    for a in range(51):
        expected = all(p > 3 for p in extremality._prime_factors(a + 1))
        rows.append((f"p^2+{a}", primes_extremal([a, 0, 1]), expected))
    return rows


def check_extremality_table() -> tuple[bool, str]:
    rows = _build_extremality_table()
    bad = [label for label, got, want in rows if got != want]
    return not bad, f"{len(rows)} verdicts checked" + (f"; mismatches: {bad}" if bad else "")


def check_brute_force_agreement() -> tuple[bool, str]:
    """Both deciders against the direct q <= 200 residue search on ~10^4 polynomials."""
    polys: list[list[int]] = []
    for lead in range(1, 6):
        for a0 in range(-5, 6):
            polys.append([a0, lead])
    for lead in range(1, 6):
        for a1 in range(-5, 6):
            for a0 in range(-5, 6):
                polys.append([a0, a1, lead])
    for lead in range(1, 6):
        for a2 in range(-5, 6):
            for a1 in range(-5, 6):
                for a0 in range(-5, 6):
                    polys.append([a0, a1, a2, lead])
    rng = random.Random(97)
    for _ in range(3000):
        coeffs = [rng.randint(-5, 5) for _ in range(4)] + [rng.randint(1, 5)]
        polys.append(coeffs)
    mismatches = []
    for coeffs in polys:
        plain = extremality.is_extremal_poly(coeffs).verdict == "extremal"
        brute = extremality.brute_force_extremal(coeffs) is None
        if plain != brute:
            mismatches.append(("plain", coeffs))
        units = extremality.is_extremal_poly_primes(coeffs).verdict == "extremal"
        brute_u = extremality.brute_force_extremal_units(coeffs) is None
        if units != brute_u:
            mismatches.append(("units", coeffs))
    return not mismatches, f"{len(polys)} polynomials" + (
        f"; mismatches: {mismatches[:5]}" if mismatches else ""
    )


def check_operator_identities() -> tuple[bool, str]:
    T = orbits.DiagonalContraction(
        [(1.0, UnitAngle.from_rational(0, 1)), (1.0, UnitAngle.from_rational(1, 2))]
    )
    x = [_INV_SQRT2, _INV_SQRT2]
    seq_n = poly_seq([0, 1])
    seq_p = primes_seq(SIEVE_LIMIT)
    avg_n = orbits.orbit_inner_avg(T, x, x, seq_n, 1000)
    avg_p = orbits.orbit_inner_avg(T, x, x, seq_p, 10_000)
    theo_n = orbits.theoretical_orbit_limit(T, x, x, spectra.closed_form_c_for(seq_n))
    theo_p = orbits.theoretical_orbit_limit(T, x, x, spectra.closed_form_c_for(seq_p))
    s2 = _INV_SQRT2 * _INV_SQRT2
    expected_n = s2 * s2 + s2 * s2
    ok = (
        abs(avg_n - 0.5) <= 1e-10
        and avg_p <= 1e-3
        and theo_n == expected_n
        and theo_p == 0.0
    )
    return ok, f"avg(n)={avg_n!r} avg(p)={avg_p!r} theo(n)={theo_n!r} theo(p)={theo_p!r}"


def check_gelfand_probe() -> tuple[bool, str]:
    seq_p = primes_seq(SIEVE_LIMIT)
    third = orbits.DiagonalContraction(
        [(1.0, UnitAngle.from_rational(0, 1)), (1.0, UnitAngle.from_rational(1, 3))]
    )
    ident = orbits.DiagonalContraction([(1.0, UnitAngle.from_rational(0, 1))])
    flip = orbits.DiagonalContraction(
        [(1.0, UnitAngle.from_rational(0, 1)), (1.0, UnitAngle.from_rational(1, 2))]
    )
    r1 = orbits.gelfand_probe(third, seq_p, 2000)
    r2 = orbits.gelfand_probe(ident, seq_p, 2000)
    r3 = orbits.gelfand_probe(flip, poly_seq([0, 2]), 2000)
    ok = (
        r1.verdict == "not-identity"
        and r2.verdict == "identity"
        and r3.verdict == "not-identity"
        and r3.explanation == "sequence not extremal"
    )
    return ok, f"{r1.verdict} / {r2.verdict} / {r3.verdict} ({r3.explanation})"


def check_return_times() -> tuple[bool, str]:
    """Rotation return times: density, off-spectrum decay, eigenvalue magnitudes."""
    alpha = math.sqrt(2.0) - 1.0
    span = 0.3
    n_terms = 100_000
    seq = rotation_return_times(alpha, (0.0, span), 0.0, n_terms)
    last = seq.term(n_terms)
    density = upper_density_estimate(seq, last)
    problems = []
    if abs(density - span) > 0.01:
        problems.append(f"density {density}")
    excluded = {(k * alpha) % 1.0 for k in range(-10, 11)}
    excluded |= {j / q for q in range(1, 7) for j in range(q)}
    rng = random.Random(414213)
    angles = []
    while len(angles) < 20:
        t = rng.random()
        if all(min(abs(t - e), 1 - abs(t - e)) > 0.02 for e in excluded):
            angles.append(t)
    for t in angles:
        est = spectra.empirical_c(seq, UnitAngle.from_float(t), n_terms)
        if abs(est.value) > 0.05:
            problems.append(f"|c({t:.4f})|={abs(est.value):.3f}")
    for k in range(-5, 6):
        if k == 0:
            angle = UnitAngle.from_rational(0, 1)
            analytic = 1.0
        else:
            angle = UnitAngle.from_float((-k * alpha) % 1.0)
            analytic = abs(1 - cmath.exp(-2j * math.pi * span * k)) / (
                2 * math.pi * abs(k) * span
            )
        est = spectra.empirical_c(seq, angle, n_terms)
        if abs(abs(est.value) - analytic) > 0.05:
            problems.append(f"k={k}: |c|={abs(est.value):.4f} vs {analytic:.4f}")
    return not problems, "density + 20 generic angles + 11 eigenvalue angles" + (
        f"; failures: {problems}" if problems else ""
    )


def check_copy_of_z_counterexample() -> tuple[bool, str]:
    """(2n) as a real sequence is not R-extremal; the two-atom witness averages to 1."""
    rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(2)])
    mu = measures.LineMeasure([(0.5, 0.5), (-0.5, 0.5)])
    exact_one = all(
        wiener.empirical_wiener_avg_real(mu, rseq, n) == 1.0 for n in (10, 100, 1000)
    )
    verdict = extremality.classify_real_sequence(rseq)
    ok = (
        exact_one
        and verdict is not None
        and verdict.verdict == "not-R-extremal"
        and verdict.counterexample is not None
        and sorted(pos for pos, _ in verdict.counterexample.atoms) == [-0.5, 0.5]
    )
    detail = f"average==1: {exact_one}; verdict={None if verdict is None else verdict.verdict}"
    return ok, detail


@dataclass
class CheckResult:
    item: int
    name: str
    passed: bool
    seconds: float
    budget_seconds: Optional[float]
    detail: str

    def to_json(self) -> dict:
        return {
            "item": self.item,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "budget_seconds": self.budget_seconds,
            "detail": self.detail,
        }


# (item, name, callable, runtime budget in seconds or None)
CHECKS: list[tuple[int, str, Callable[[], tuple[bool, str]], Optional[float]]] = [
    (1, "primes-spectrum", check_primes_spectrum, 1.0),
    (2, "poly-closed-vs-empirical", check_poly_closed_vs_empirical, 0.1),
    (3, "wiener-average-primes", check_wiener_primes_two_atoms, None),
    (4, "classical-wiener-randomized", check_classical_wiener_randomized, 5.0),
    (5, "extremality-table", check_extremality_table, 1.0),
    (6, "brute-force-oracle-agreement", check_brute_force_agreement, 60.0),
    (7, "operator-identities", check_operator_identities, None),
    (8, "gelfand-probe", check_gelfand_probe, 1.0),
    (9, "return-time-ergodicity", check_return_times, 10.0),
    (10, "copy-of-z-counterexample", check_copy_of_z_counterexample, None),
]


def run(items: Optional[list[int]] = None) -> list[CheckResult]:
    """Run the numbered checks (all by default) and collect results."""
    results = []
    for item, name, fn, budget in CHECKS:
        if items is not None and item not in items:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"exception: {exc!r}"
        elapsed = time.perf_counter() - t0
        if budget is not None and elapsed > budget:
            passed = False
            detail += f"; runtime {elapsed:.2f}s exceeded budget {budget}s"
        results.append(
            CheckResult(
                item=item,
                name=name,
                passed=passed,
                seconds=elapsed,
                budget_seconds=budget,
                detail=detail,
            )
        )
    return results


def format_matrix(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.item:>2} {r.name:<32} {r.seconds:7.2f}s  {r.detail}")
    total = sum(r.seconds for r in results)
    ok = all(r.passed for r in results)
    lines.append(f"{'ALL PASS' if ok else 'FAILURES PRESENT'} in {total:.1f}s")
    return "\n".join(lines)
