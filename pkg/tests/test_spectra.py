import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerlab.exact import ExactReal, UnitAngle, rational_bitstream
from wienerlab.sequences import (
    SequenceRangeError,
    lacunary_seq,
    poly_of_primes_seq,
    poly_seq,
    primes_seq,
    real_poly_seq,
)
from wienerlab.spectra import (
    CesaroEstimate,
    InconsistentSpectrumError,
    closed_form_c_for,
    closed_form_c_poly,
    closed_form_c_poly_primes,
    closed_form_c_real_affine_shift,
    empirical_c,
    lacunary_cesaro,
    real_empirical_c,
    spectrum_scan,
    totient,
    unimodular_group_detect,
)


def brute_cesaro(terms, theta):
    return sum(cmath.exp(2j * math.pi * ((k * theta) % 1.0)) for k in terms) / len(terms)


class TestEmpiricalC:
    def test_identity_sequence_at_angle_zero(self):
        est = empirical_c(poly_seq([0, 1]), UnitAngle.from_rational(0, 1), 100)
        assert est.value == 1.0 + 0.0j

    def test_primes_at_half_exact_count(self):
        n_avg = 10_000
        est = empirical_c(primes_seq(130_000), UnitAngle.from_rational(1, 2), n_avg)
        assert est.value == -1 + 2 / n_avg

    def test_squares_at_quarter(self):
        est = empirical_c(poly_seq([0, 0, 1]), UnitAngle.from_rational(1, 4), 4000)
        assert abs(est.value - (0.5 + 0.5j)) <= 1e-12

    def test_matches_brute_force_float_angle(self):
        seq = poly_seq([1, 3])
        theta = 0.1234567
        est = empirical_c(seq, UnitAngle.from_float(theta), 300)
        assert abs(est.value - brute_cesaro(seq.terms(300), theta)) < 1e-9

    def test_checkpoint_error_bound(self):
        # q-periodic summand: every checkpoint is within q/N_i of the limit
        coeffs, b, q = [0, 0, 1], 1, 8
        limit = closed_form_c_poly(coeffs, b, q)
        est = empirical_c(poly_seq(coeffs), UnitAngle.from_rational(b, q), 4096)
        for n_i, partial in est.checkpoints:
            assert abs(partial - limit) <= q / n_i + 1e-12

    def test_lacunary_float_angle_needs_bitstream(self):
        with pytest.raises(SequenceRangeError):
            empirical_c(lacunary_seq(2), UnitAngle.from_float(0.3217), 200)

    def test_modulus_bounded_by_one(self):
        with pytest.raises(ValueError):
            CesaroEstimate(value=1.5 + 0j, N=10)


class TestClosedForms:
    def test_poly_square_quarter(self):
        # brute force over one period: e(1/4)+e(0)+e(1/4)+e(0) over 4
        brute = sum(cmath.exp(2j * math.pi * ((r * r) % 4) / 4) for r in range(1, 5)) / 4
        got = closed_form_c_poly([0, 0, 1], 1, 4)
        assert got == 0.5 + 0.5j
        assert abs(got - brute) < 1e-15

    def test_angle_zero_is_one(self):
        assert closed_form_c_poly([7, 5, 3, 2], 0, 1) == 1.0 + 0.0j

    def test_linear_full_geometric_sum(self):
        assert abs(closed_form_c_poly([0, 1], 1, 3)) < 1e-15

    def test_primes_linear_at_half(self):
        assert closed_form_c_poly_primes([0, 1], 1, 2) == -1

    def test_primes_linear_at_third(self):
        got = closed_form_c_poly_primes([0, 1], 1, 3)
        brute = (cmath.exp(2j * math.pi / 3) + cmath.exp(4j * math.pi / 3)) / 2
        assert abs(got - brute) < 1e-15
        assert abs(got - (-0.5)) < 1e-15

    def test_primes_square_at_quarter(self):
        assert abs(closed_form_c_poly_primes([0, 0, 1], 1, 4) - 1j) < 1e-15

    def test_reduced_fraction_required(self):
        with pytest.raises(ValueError):
            closed_form_c_poly([0, 1], 2, 4)

    def test_conjugation_symmetry(self):
        for coeffs in ([0, 1], [0, 0, 1], [3, 1, 2]):
            for q in (5, 7, 12):
                for b in range(1, q):
                    if math.gcd(b, q) != 1:
                        continue
                    plus = closed_form_c_poly(coeffs, b, q)
                    minus = closed_form_c_poly(coeffs, q - b, q)
                    assert abs(minus - plus.conjugate()) < 1e-12

    def test_modulus_never_exceeds_one(self):
        for q in range(1, 30):
            for b in range(q):
                if math.gcd(b, q) == 1 or b == 0:
                    assert abs(closed_form_c_poly([1, 2, 1], b, max(q, 1))) <= 1 + 1e-12

    def test_irrational_angle_evaluates_to_zero(self):
        c = closed_form_c_for(poly_seq([0, 0, 1]))
        assert c(UnitAngle.from_float(0.987654)) == 0
        assert c(UnitAngle.from_rational(1, 4)) == 0.5 + 0.5j


def test_totient_against_unit_count():
    for q in (1, 12, 97, 360):
        assert totient(q) == sum(1 for r in range(1, q + 1) if math.gcd(r, q) == 1)


class TestPeriodicityInvariant:
    @settings(max_examples=40, deadline=None)
    @given(
        coeffs=st.lists(st.integers(-4, 4), min_size=1, max_size=3),
        lead=st.integers(1, 4),
        q=st.integers(1, 12),
        mult=st.integers(1, 5),
    )
    def test_empirical_equals_closed_form_at_periods(self, coeffs, lead, q, mult):
        bs = [b for b in range(q) if math.gcd(b, q) == 1 or (b == 0 and q == 1)]
        b = bs[mult % len(bs)]
        r = Fraction(b, q)
        seq = poly_seq(coeffs + [lead])
        est = empirical_c(seq, UnitAngle.from_rational(r.numerator, r.denominator), q * mult * 20)
        closed = closed_form_c_poly(coeffs + [lead], r.numerator, r.denominator)
        assert abs(est.value - closed) <= 1e-12


class TestSpectrumScan:
    def test_identity_sequence_is_ergodic(self):
        table = spectrum_scan(poly_seq([0, 1]), 10)
        assert [(e.b, e.q) for e in table.entries] == [(0, 1)]
        assert table.entries[0].value == 1.0 + 0.0j

    def test_primes_spectrum_to_two(self):
        table = spectrum_scan(primes_seq(130_000), 2)
        assert [(e.b, e.q) for e in table.entries] == [(0, 1), (1, 2)]
        assert table.entries[1].value == -1

    def test_squares_scan_omits_structural_zero_at_half(self):
        table = spectrum_scan(poly_seq([0, 0, 1]), 4)
        pairs = {(e.b, e.q): e.value for e in table.entries}
        assert (1, 2) not in pairs
        assert pairs[(1, 4)] == 0.5 + 0.5j

    def test_empirical_fallback_for_return_times(self):
        from wienerlab.sequences import rotation_return_times

        seq = rotation_return_times(math.sqrt(2) - 1, (0.0, 0.5), 0.0, 2000)
        table = spectrum_scan(seq, 2, empirical_N=2000)
        assert all(e.provenance == "empirical" for e in table.entries)
        assert (0, 1) in {(e.b, e.q) for e in table.entries}

    def test_csv_round_trip_headers(self):
        table = spectrum_scan(poly_seq([0, 2]), 4)
        lines = table.to_csv().strip().splitlines()
        assert lines[0] == "b,q,re,im,abs,provenance"
        assert len(lines) == len(table.entries) + 1


class TestUnimodularGroupDetect:
    def test_identity_sequence(self):
        assert unimodular_group_detect(spectrum_scan(poly_seq([0, 1]), 10)) == 1

    def test_even_numbers(self):
        assert unimodular_group_detect(spectrum_scan(poly_seq([0, 2]), 10)) == 2

    def test_squares(self):
        assert unimodular_group_detect(spectrum_scan(poly_seq([0, 0, 1]), 10)) == 1

    def test_multiples_of_six_within_range(self):
        assert unimodular_group_detect(spectrum_scan(poly_seq([0, 6]), 10)) == 6

    def test_non_group_table_rejected(self):
        table = spectrum_scan(poly_seq([0, 6]), 4)  # 1/6 outside the scan range
        with pytest.raises(InconsistentSpectrumError):
            unimodular_group_detect(table)


class TestLacunaryCesaro:
    def test_binary_expansion_of_zero(self):
        est = lacunary_cesaro(2, lambda i: 0, 500)
        assert est.value == 1.0 + 0.0j

    def test_one_third_alternates(self):
        est = lacunary_cesaro(2, rational_bitstream(1, 3), 2000)
        assert abs(est.value - (-0.5)) < 1e-9

    def test_one_seventh_three_cycle(self):
        target = (
            cmath.exp(2j * math.pi / 7)
            + cmath.exp(4j * math.pi / 7)
            + cmath.exp(8j * math.pi / 7)
        ) / 3
        est = lacunary_cesaro(2, rational_bitstream(1, 7), 3 * 700)
        assert abs(est.value - target) < 1e-9

    def test_no_precision_decay_at_large_n(self):
        # frac(2^n / 3) alternates forever; a float phase would have died long ago
        est = lacunary_cesaro(2, rational_bitstream(1, 3), 5000)
        assert abs(abs(est.value) - 0.5) < 1e-9

    def test_only_base_two(self):
        with pytest.raises(ValueError):
            lacunary_cesaro(3, rational_bitstream(1, 3), 10)


class TestRealEmpiricalC:
    def test_angle_zero(self):
        rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(2)])
        assert real_empirical_c(rseq, 0.0, 50).value == 1.0 + 0.0j

    def test_pi_multiples_equidistribute(self):
        rseq = real_poly_seq([ExactReal.of(0), ExactReal.of(0, 1)], xi_value=math.pi)
        est = real_empirical_c(rseq, 2.0, 4000)
        assert abs(est.value) < 0.05

    def test_integer_shift_by_xi_is_constant_phase(self):
        rseq = real_poly_seq([ExactReal.of(0, 1), ExactReal.of(1)])  # n + sqrt2
        est = real_empirical_c(rseq, 1.0, 2000)
        target = cmath.exp(2j * math.pi * math.sqrt(2))
        assert abs(est.value - target) < 1e-9


class TestClosedFormRealAffine:
    def test_theta_zero(self):
        one = closed_form_c_real_affine_shift(
            ExactReal.of(1), ExactReal.of(0, 1), [0, 1], ExactReal.of(0)
        )
        assert one == 1.0 + 0.0j

    def test_irrational_scaled_angle_vanishes(self):
        got = closed_form_c_real_affine_shift(
            ExactReal.of(1), ExactReal.of(0, 1), [0, 1], ExactReal.of(0, 1)
        )
        assert got == 0

    def test_full_root_of_unity_sum_vanishes(self):
        got = closed_form_c_real_affine_shift(
            ExactReal.of(1), ExactReal.of(0, 1), [0, 1], ExactReal.of("1/3")
        )
        assert abs(got) < 1e-15

    def test_integer_angle_gives_constant_phase(self):
        got = closed_form_c_real_affine_shift(
            ExactReal.of(1), ExactReal.of(0, 1), [0, 1], ExactReal.of(1)
        )
        assert abs(got - cmath.exp(2j * math.pi * math.sqrt(2))) < 1e-12

    def test_matches_empirical_average(self):
        rseq = real_poly_seq([ExactReal.of(0, 1), ExactReal.of(1)])
        est = real_empirical_c(rseq, 1.0, 3000)
        closed = closed_form_c_real_affine_shift(
            ExactReal.of(1), ExactReal.of(0, 1), [0, 1], ExactReal.of(1)
        )
        assert abs(est.value - closed) < 1e-9

    def test_rejects_inexact_inputs(self):
        with pytest.raises(TypeError):
            closed_form_c_real_affine_shift(1.0, ExactReal.of(0, 1), [0, 1], ExactReal.of(1))

    def test_rejects_xi_squared(self):
        with pytest.raises(ValueError):
            closed_form_c_real_affine_shift(
                ExactReal.of(0, 1), ExactReal.of(0), [0, 1], ExactReal.of(0, 1)
            )
