import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerlab.exact import ExactReal, UnitAngle
from wienerlab.orbits import (
    DiagonalContraction,
    DiagonalSemigroup,
    classical_limit_test,
    eigenvector_extremality_test,
    gelfand_probe,
    orbit_inner_avg,
    semigroup_orbit_avg,
    theoretical_orbit_limit,
)
from wienerlab.sequences import (
    insertion_perturbed_even_seq,
    poly_seq,
    primes_seq,
    real_poly_seq,
)
from wienerlab.spectra import closed_form_c_for

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def flip_operator():
    return DiagonalContraction(
        [(1.0, UnitAngle.from_rational(0, 1)), (1.0, UnitAngle.from_rational(1, 2))]
    )


def brute_orbit_avg(eigs, x, y, terms):
    total = 0.0
    for k in terms:
        v = sum(lam**k * xi * yi.conjugate() for lam, xi, yi in zip(eigs, x, y))
        total += abs(v) ** 2
    return total / len(terms)


class TestOrbitInnerAvg:
    def test_identity_operator(self):
        T = DiagonalContraction([(1.0, UnitAngle.from_rational(0, 1))])
        assert orbit_inner_avg(T, [1.0], [1.0], poly_seq([0, 1]), 100) == 1.0

    def test_flip_along_identity_matches_brute_force(self):
        T = flip_operator()
        x = [INV_SQRT2, INV_SQRT2]
        got = orbit_inner_avg(T, x, x, poly_seq([0, 1]), 1000)
        brute = brute_orbit_avg([1.0, -1.0], [complex(v) for v in x], [complex(v) for v in x], range(1, 1001))
        assert abs(got - brute) <= 1e-12
        assert abs(got - 0.5) <= 1e-10

    def test_flip_along_primes_decays(self):
        got = orbit_inner_avg(
            flip_operator(),
            [INV_SQRT2, INV_SQRT2],
            [INV_SQRT2, INV_SQRT2],
            primes_seq(130_000),
            10_000,
        )
        assert got <= 1e-3

    def test_cnu_coordinate_drains(self):
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(0, 1)), (0.5, UnitAngle.from_rational(0, 1))]
        )
        x = [0.0, 1.0]
        got = orbit_inner_avg(T, x, x, poly_seq([0, 1]), 2000)
        # sum of 0.25^n / N
        assert got < 1e-3

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            orbit_inner_avg(flip_operator(), [1.0], [1.0], poly_seq([0, 1]), 10)


class TestTheoreticalLimit:
    def test_identity_sequence_reduces_to_projection_sum(self):
        T = flip_operator()
        x = [INV_SQRT2, INV_SQRT2]
        got = theoretical_orbit_limit(T, x, x, closed_form_c_for(poly_seq([0, 1])))
        s2 = INV_SQRT2 * INV_SQRT2
        assert got == s2 * s2 + s2 * s2

    def test_primes_cancellation(self):
        T = flip_operator()
        x = [INV_SQRT2, INV_SQRT2]
        got = theoretical_orbit_limit(T, x, x, closed_form_c_for(primes_seq(1000)))
        assert got == 0.0

    def test_vector_off_unimodular_block(self):
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(0, 1)), (0.5, UnitAngle.from_rational(0, 1))]
        )
        got = theoretical_orbit_limit(
            T, [1.0, 1.0], [0.0, 1.0], closed_form_c_for(poly_seq([0, 1]))
        )
        assert got == 0.0

    @settings(max_examples=25, deadline=None)
    @given(
        angles=st.lists(
            st.tuples(st.integers(0, 5), st.integers(1, 6)), min_size=1, max_size=3
        ),
        moduli=st.lists(st.sampled_from([1.0, 1.0, 0.5, 0.3]), min_size=1, max_size=3),
        xs=st.lists(st.floats(-1, 1), min_size=6, max_size=6),
        mult=st.integers(1, 3),
    )
    def test_identity_sequence_invariant(self, angles, moduli, xs, mult):
        """orbit average at full periods = theoretical + a bounded cnu remainder"""
        dim = min(len(angles), len(moduli))
        entries = [
            (moduli[i], UnitAngle.from_rational(angles[i][0], angles[i][1]))
            for i in range(dim)
        ]
        T = DiagonalContraction(entries)
        x = [complex(xs[2 * i], xs[2 * i + 1]) for i in range(dim)]
        period = 1
        for i in range(dim):
            for j in range(dim):
                if moduli[i] == 1.0 == moduli[j]:
                    q = entries[i][1].rat.denominator * entries[j][1].rat.denominator
                    period = period * q // math.gcd(period, q)
        n_avg = period * mult * 20
        avg = orbit_inner_avg(T, x, x, poly_seq([0, 1]), n_avg)
        theo = theoretical_orbit_limit(T, x, x, closed_form_c_for(poly_seq([0, 1])))
        r = max((m for m in moduli[:dim] if m < 1.0), default=0.0)
        u = sum(abs(z) ** 2 for z in x)
        c = sum(abs(x[i]) ** 2 for i in range(dim) if moduli[i] < 1.0)
        slack = 0.0
        if r > 0:
            slack = (2 * u * c * r / (1 - r) + c * c * r * r / (1 - r * r)) / n_avg
        assert abs(avg - theo) <= 1e-10 + slack


class TestEigenvectorExtremality:
    def test_eigenvector_attains_exactly(self):
        T = DiagonalContraction([(1.0, UnitAngle.from_rational(1, 3))])
        rep = eigenvector_extremality_test(T, [2.0], poly_seq([0, 1]), 200)
        assert rep.attains and rep.is_eigenvector and rep.consistent

    def test_even_sequence_attained_by_non_eigenvector(self):
        rep = eigenvector_extremality_test(
            flip_operator(), [INV_SQRT2, INV_SQRT2], poly_seq([0, 2]), 500
        )
        assert rep.attains and not rep.is_eigenvector
        assert rep.sequence_verdict == "not-extremal"
        assert rep.consistent  # non-extremal sequence makes no promise

    def test_squares_keep_the_bound_strict(self):
        rep = eigenvector_extremality_test(
            flip_operator(), [INV_SQRT2, INV_SQRT2], poly_seq([0, 0, 1]), 1000
        )
        assert not rep.attains
        assert abs(rep.average - 0.5) < 1e-9
        assert rep.sequence_verdict == "extremal"
        assert rep.consistent

    def test_scaling_invariance(self):
        for scale in (1.0, 3.0, 0.25):
            x = [scale * INV_SQRT2, scale * INV_SQRT2]
            rep = eigenvector_extremality_test(flip_operator(), x, poly_seq([0, 2]), 300)
            assert rep.attains


class TestClassicalLimit:
    def test_eigenvector_passes_with_zero_residual(self):
        T = DiagonalContraction([(1.0, UnitAngle.from_rational(1, 3))])
        rep = classical_limit_test(T, [1.5], poly_seq([0, 1]), 400)
        assert rep.passes
        assert rep.phase_residual <= rep.residual_bound + 1e-12

    def test_flip_along_primes_fails(self):
        rep = classical_limit_test(
            flip_operator(), [INV_SQRT2, INV_SQRT2], primes_seq(130_000), 2000
        )
        assert not rep.passes

    def test_cnu_decay_fails(self):
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(0, 1)), (0.5, UnitAngle.from_rational(0, 1))]
        )
        rep = classical_limit_test(T, [INV_SQRT2, INV_SQRT2], poly_seq([0, 1]), 400)
        assert not rep.passes

    def test_residual_bound_is_the_contraction_inequality(self):
        # pass with a loose tolerance and check the recovered phases verify
        # the lemma-style bound sqrt(2 tol) ||x||
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(1, 7)), (1.0, UnitAngle.from_rational(1, 7))]
        )
        rep = classical_limit_test(T, [1.0, 2.0], poly_seq([0, 1]), 300, tol=1e-3)
        assert rep.passes
        assert rep.phase_residual <= rep.residual_bound + 1e-12


class TestGelfand:
    def test_identity_along_primes(self):
        T = DiagonalContraction([(1.0, UnitAngle.from_rational(0, 1))])
        assert gelfand_probe(T, primes_seq(130_000), 2000).verdict == "identity"

    def test_third_root_along_primes(self):
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(0, 1)), (1.0, UnitAngle.from_rational(1, 3))]
        )
        rep = gelfand_probe(T, primes_seq(130_000), 2000)
        assert rep.verdict == "not-identity" and not rep.orbit_condition

    def test_flip_along_even_is_blocked_by_non_extremality(self):
        rep = gelfand_probe(flip_operator(), poly_seq([0, 2]), 2000)
        assert rep.verdict == "not-identity"
        assert rep.orbit_condition
        assert rep.explanation == "sequence not extremal"

    def test_unknown_extremality_is_inconclusive(self):
        T = DiagonalContraction([(1.0, UnitAngle.from_rational(0, 1))])
        seq = insertion_perturbed_even_seq("none", 4000)
        assert gelfand_probe(T, seq, 2000).verdict == "inconclusive"


class TestSemigroup:
    def test_single_imaginary_eigenvalue(self):
        S = DiagonalSemigroup([(0.0, 0.7)])
        rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(1)])
        rep = semigroup_orbit_avg(S, [1.0], [1.0], rseq, 50)
        assert rep.empirical == 1.0

    def test_weyl_equidistributed_family_confirms_identity(self):
        # k_n = sqrt2 * n + 1: offset rationally independent of the scale
        S = DiagonalSemigroup([(0.0, 0.0), (0.0, 1.0)])
        rseq = real_poly_seq([ExactReal.of(1), ExactReal.of(0, 1)])
        x = [INV_SQRT2, INV_SQRT2]
        rep = semigroup_orbit_avg(S, x, x, rseq, 2000)
        assert rep.theoretical is not None
        assert abs(rep.theoretical - 0.5) < 1e-12
        assert abs(rep.empirical - 0.5) < 0.05
        assert rep.verdicts["flag"] == "confirmed"

    def test_copy_of_z_expected_failure(self):
        S = DiagonalSemigroup([(0.0, 0.0), (0.0, 1.0)])
        rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(1)])
        x = [INV_SQRT2, INV_SQRT2]
        rep = semigroup_orbit_avg(S, x, x, rseq, 500)
        assert abs(rep.empirical - 1.0) < 1e-12
        assert rep.theoretical is None
        assert abs(rep.diagonal_reference - 0.5) < 1e-12
        assert rep.verdicts["flag"] == "expected-failure"

    def test_decaying_entry_disappears(self):
        S = DiagonalSemigroup([(0.0, 0.0), (2.5, 0.0)])
        rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(1)])
        rep = semigroup_orbit_avg(S, [0.0, 1.0], [0.0, 1.0], rseq, 400)
        assert rep.empirical < 1e-2
        assert rep.diagonal_reference == 0.0

    def test_negative_decay_rejected(self):
        with pytest.raises(ValueError):
            DiagonalSemigroup([(-0.1, 0.0)])


class TestSerialization:
    def test_contraction_round_trip(self):
        T = DiagonalContraction(
            [(1.0, UnitAngle.from_rational(1, 2)), (0.5, UnitAngle.from_float(0.1234))]
        )
        clone = DiagonalContraction.from_json(T.to_json())
        assert clone.to_json() == T.to_json()

    def test_semigroup_round_trip(self):
        S = DiagonalSemigroup([(0.0, 1.5), (2.0, -0.25)])
        assert DiagonalSemigroup.from_json(S.to_json()).to_json() == S.to_json()
