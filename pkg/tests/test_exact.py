import math
from fractions import Fraction

import pytest

from wienerlab.exact import ExactReal, UnitAngle, rational_bitstream


class TestExactReal:
    def test_rationality_is_declarative(self):
        assert ExactReal.of("1/2").is_rational
        assert not ExactReal.of("1/2", "1/3").is_rational

    def test_arithmetic(self):
        a = ExactReal.of("1/2", 1)
        b = ExactReal.of("1/3", -1)
        s = a + b
        assert s.rat == Fraction(5, 6) and s.xi == 0
        d = a - b
        assert d.xi == 2

    def test_product_with_two_irrational_parts_rejected(self):
        a = ExactReal.of(0, 1)
        with pytest.raises(ValueError):
            _ = a * a

    def test_rational_times_irrational_ok(self):
        a = ExactReal.of(3)
        b = ExactReal.of("1/2", "1/4")
        p = a * b
        assert (p.rat, p.xi) == (Fraction(3, 2), Fraction(3, 4))

    def test_value_uses_declared_irrational(self):
        x = ExactReal.of(1, 2)
        assert x.value(math.pi) == 1 + 2 * math.pi

    def test_rational_quotient(self):
        a = ExactReal.of(2, 4)
        b = ExactReal.of(1, 2)
        assert a.rational_quotient(b) == 2
        assert ExactReal.of(0).rational_quotient(b) == 0
        assert ExactReal.of(1).rational_quotient(ExactReal.of(0, 1)) is None
        assert ExactReal.of(0, 3).rational_quotient(ExactReal.of(0, 2)) == Fraction(3, 2)


class TestUnitAngle:
    def test_rational_is_authoritative(self):
        a = UnitAngle.from_rational(3, 12)
        assert a.rational == (1, 4)
        assert a.theta == 0.25

    def test_negative_numerator_normalizes(self):
        a = UnitAngle.from_rational(-1, 3)
        assert a.rational == (2, 3)

    def test_float_angle_is_irrational_by_declaration(self):
        a = UnitAngle.from_float(0.25)  # numerically rational, still "irrational"
        assert not a.is_rational
        with pytest.raises(ValueError):
            a.rational

    def test_exact_xi_angle(self):
        a = UnitAngle.from_exact("1/4", 1, xi_value=math.sqrt(2))
        assert a.is_exact and not a.is_rational
        assert abs(a.theta - ((0.25 + math.sqrt(2)) % 1)) < 1e-15

    def test_sub_exact_difference(self):
        a = UnitAngle.from_exact(0, 1)
        b = UnitAngle.from_exact("1/2", 1)
        d = a.sub(b)
        assert d.is_rational and d.rational == (1, 2)

    def test_sub_float_angles_tagged_irrational(self):
        d = UnitAngle.from_float(0.7).sub(UnitAngle.from_float(0.2))
        assert not d.is_exact
        assert abs(d.theta - 0.5) < 1e-15

    def test_e_at_multiple_rational_exact(self):
        a = UnitAngle.from_rational(1, 2)
        assert a.e_at_multiple(3) == -1.0 + 0.0j
        assert a.e_at_multiple(10**18) == 1.0 + 0.0j

    def test_theta_bounds_enforced(self):
        with pytest.raises(ValueError):
            UnitAngle(theta=1.5)


def test_rational_bitstream_digits_of_one_third():
    bits = rational_bitstream(1, 3)
    assert [bits(i) for i in range(1, 9)] == [0, 1, 0, 1, 0, 1, 0, 1]


def test_rational_bitstream_dyadic_terminates():
    bits = rational_bitstream(3, 8)  # 0.011000...
    assert [bits(i) for i in range(1, 7)] == [0, 1, 1, 0, 0, 0]
