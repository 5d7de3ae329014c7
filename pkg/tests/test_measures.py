import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerlab.exact import UnitAngle
from wienerlab.measures import (
    Arc,
    CircleMeasure,
    LineMeasure,
    atom_quotient_pairs,
    convex_mix,
    dirac,
    rational_independence_classes,
    uniform_measure,
)
from wienerlab.sequences import poly_seq


def angle(b, q):
    return UnitAngle.from_rational(b, q)


class TestFourier:
    def test_total_mass_at_zero(self):
        mu = CircleMeasure([(angle(0, 1), 0.25), (angle(1, 3), 0.25)], [Arc(0.0, 0.5, 0.5)])
        assert mu.fourier(0) == 1.0 + 0.0j

    def test_dirac_powers(self):
        mu = dirac(angle(1, 2))
        assert mu.fourier(3) == -1.0 + 0.0j

    def test_uniform_measure_vanishes_off_zero(self):
        mu = uniform_measure()
        assert mu.fourier(5) == 0.0 + 0.0j
        assert mu.fourier(0) == 1.0 + 0.0j

    def test_arc_coefficient_against_quadrature(self):
        arc = Arc(0.1, 0.35, 1.0)
        mu = CircleMeasure([], [arc])
        for k in (1, 2, 7, -3):
            steps = 200_000
            width = (arc.hi - arc.lo) / steps
            riemann = sum(
                cmath.exp(2j * math.pi * k * (arc.lo + (i + 0.5) * width)) * width
                for i in range(steps)
            ) / (arc.hi - arc.lo)
            assert abs(mu.fourier(k) - riemann) < 1e-8

    def test_modulus_bounded_by_total_variation(self):
        mu = CircleMeasure(
            [(angle(0, 1), 0.5), (angle(2, 5), -0.25 + 0.1j)],
            [Arc(0.2, 0.4, 0.25)],
            probability=False,
        )
        tv = mu.total_variation()
        for k in range(-20, 21):
            assert abs(mu.fourier(k)) <= tv + 1e-12

    def test_conjugation_symmetry(self):
        mu = CircleMeasure(
            [(angle(1, 3), 0.5 + 0.25j), (angle(1, 7), -0.5j)], probability=False
        )
        for k in range(-8, 9):
            assert abs(mu.fourier(-k) - mu.conjugate().fourier(k).conjugate()) < 1e-12

    def test_fourier_along_matches_direct(self):
        mu = CircleMeasure(
            [(angle(1, 3), 0.5), (UnitAngle.from_float(0.2412), 0.5)]
        )
        seq = poly_seq([1, 0, 2])
        for n in (1, 5, 11):
            assert abs(mu.fourier_along(seq, n) - mu.fourier(seq.term(n))) < 1e-12


class TestConstructors:
    def test_dirac_is_probability(self):
        assert dirac(angle(0, 1)).probability

    def test_two_point_mix(self):
        mu = convex_mix([(dirac(angle(0, 1)), 0.5), (dirac(angle(1, 2)), 0.5)])
        for k in range(6):
            assert mu.fourier(k) == (1 + (-1) ** k) / 2

    def test_complex_weights_need_probability_false(self):
        mu = convex_mix(
            [(dirac(angle(0, 1)), 0.5), (dirac(angle(1, 3)), 0.5j)], probability=False
        )
        assert mu.atoms[1][1] == 0.5j
        with pytest.raises(ValueError):
            convex_mix([(dirac(angle(0, 1)), 0.5), (dirac(angle(1, 3)), 0.5j)])

    def test_atom_collision_merges(self):
        mu = convex_mix([(dirac(angle(0, 1)), 0.5), (dirac(angle(0, 1)), 0.5)])
        assert len(mu.atoms) == 1
        assert mu.atoms[0][1] == 1.0 + 0.0j

    def test_probability_mass_enforced(self):
        with pytest.raises(ValueError):
            CircleMeasure([(angle(0, 1), 0.7)])
        with pytest.raises(ValueError):
            convex_mix([(dirac(angle(0, 1)), 0.7)])


class TestAtomQuotientPairs:
    def test_single_atom(self):
        pairs = atom_quotient_pairs(dirac(angle(1, 3)))
        assert len(pairs) == 1
        diff, w = pairs[0]
        assert diff.rational == (0, 1)
        assert w == 1.0 + 0.0j

    def test_two_equal_atoms(self):
        mu = CircleMeasure([(angle(0, 1), 0.5), (angle(1, 2), 0.5)])
        pairs = atom_quotient_pairs(mu)
        diffs = sorted(d.rat for d, _ in pairs)
        assert diffs == [0, 0, 0.5, 0.5]
        assert all(w == 0.25 for _, w in pairs)

    def test_irrational_difference_tagged(self):
        mu = CircleMeasure(
            [(angle(0, 1), 0.5), (UnitAngle.from_exact(0, 1), 0.5)]
        )
        offdiag = [d for d, _ in atom_quotient_pairs(mu) if d.theta != 0.0]
        assert offdiag and all(not d.is_rational for d in offdiag)


class TestRationalIndependence:
    def test_all_rational_is_one_class(self):
        mu = CircleMeasure([(angle(0, 1), 0.4), (angle(1, 3), 0.3), (angle(2, 3), 0.3)])
        assert len(rational_independence_classes(mu)) == 1

    def test_xi_splits_off(self):
        mu = CircleMeasure([(angle(0, 1), 0.5), (UnitAngle.from_exact(0, 1), 0.5)])
        assert len(rational_independence_classes(mu)) == 2

    def test_shifted_xi_class(self):
        mu = CircleMeasure(
            [
                (UnitAngle.from_exact(0, 1), 0.4),
                (UnitAngle.from_exact("1/2", 1), 0.4),
                (angle(1, 4), 0.2),
            ]
        )
        classes = rational_independence_classes(mu)
        sizes = sorted(len(c) for c in classes)
        assert sizes == [1, 2]

    def test_float_atoms_rejected(self):
        mu = CircleMeasure([(UnitAngle.from_float(0.123), 1.0)])
        with pytest.raises(ValueError):
            rational_independence_classes(mu)


class TestJson:
    def test_round_trip(self):
        mu = CircleMeasure(
            [(angle(0, 1), 0.25), (UnitAngle.from_exact("1/4", "1/2"), 0.25)],
            [Arc(0.0, 0.25, 0.5)],
        )
        clone = CircleMeasure.from_json(mu.to_json())
        for k in range(-5, 6):
            assert abs(clone.fourier(k) - mu.fourier(k)) < 1e-12

    def test_spec_format(self):
        obj = {
            "atoms": [{"b": 0, "q": 1, "w_re": 0.5, "w_im": 0}],
            "arcs": [{"a": 0.0, "b": 0.25, "w": 0.5}],
            "probability": True,
        }
        mu = CircleMeasure.from_json(obj)
        assert mu.fourier(0) == 1.0 + 0.0j


class TestLineMeasure:
    def test_fourier_two_atoms(self):
        mu = LineMeasure([(0.5, 0.5), (-0.5, 0.5)])
        assert mu.fourier(2.0) == 1.0 + 0.0j  # e(1) = e(-1) = 1
        assert abs(mu.fourier(1.0) - (-1.0)) < 1e-12  # cos(pi)

    def test_duplicate_positions_rejected(self):
        with pytest.raises(ValueError):
            LineMeasure([(0.5, 0.5), (0.5, 0.5)])

    def test_round_trip(self):
        mu = LineMeasure([(1.25, 0.5), (-0.75, 0.5)])
        clone = LineMeasure.from_json(mu.to_json())
        assert clone.atoms == mu.atoms


@settings(max_examples=50)
@given(
    st.lists(
        st.tuples(st.integers(0, 11), st.floats(0.05, 1.0)), min_size=1, max_size=4
    )
)
def test_probability_normalization_and_k0(pairs):
    # distinct angles b/12, weights normalized to mass one
    seen = {}
    for b, w in pairs:
        seen[b] = w
    total = sum(seen.values())
    atoms = [(angle(b, 12), w / total) for b, w in seen.items()]
    mu = CircleMeasure(atoms)
    assert abs(mu.fourier(0) - 1.0) < 1e-9
    for k in (1, 5):
        assert abs(mu.fourier(k)) <= 1.0 + 1e-9
