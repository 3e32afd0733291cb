import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from micz_su11.special_functions import (
    DegreeCapExceeded,
    JacobiParams,
    KummerParams,
    ParamOutOfRange,
    jacobi,
    jacobi_deriv,
    kummer_terminating,
)
from oracles import jacobi_series, kummer_rational


class TestJacobi:
    @pytest.mark.parametrize("a, b, z", [(0.0, 0.0, 0.3), (1.7, 0.3, -0.9), (4.0, 2.5, 1.0)])
    def test_degree_zero_is_one(self, a, b, z):
        assert jacobi(JacobiParams(0, a, b), z) == 1.0

    def test_legendre_degree_two(self):
        # series oracle gives (3 z^2 - 1)/2 = -0.125 at z = 0.5
        assert jacobi(JacobiParams(2, 0.0, 0.0), 0.5) == pytest.approx(-0.125, abs=1e-15)

    def test_against_series_oracle_frozen(self):
        # frozen from the series oracle: P_3^(1.7, 0.3)(0.2)
        val = jacobi(JacobiParams(3, 1.7, 0.3), 0.2)
        assert val == pytest.approx(-0.8345, rel=1e-12)
        assert val == pytest.approx(jacobi_series(3, 1.7, 0.3, 0.2), rel=1e-12)

    @pytest.mark.parametrize("degree", range(21))
    def test_recurrence_matches_series(self, degree):
        for a, b, z in [(0.0, 0.0, 0.37), (1.7, 0.3, -0.42), (3.2, 0.9, 0.88), (-0.5, 4.1, -0.97)]:
            lhs = jacobi(JacobiParams(degree, a, b), z)
            rhs = jacobi_series(degree, a, b, z)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs), abs(rhs))

    @settings(max_examples=200, deadline=None)
    @given(
        st.integers(0, 20),
        st.floats(-0.9, 5.0, allow_nan=False),
        st.floats(-0.9, 5.0, allow_nan=False),
        st.floats(-1.0, 1.0, allow_nan=False),
    )
    def test_symmetry_property(self, k, a, b, z):
        lhs = jacobi(JacobiParams(k, a, b), -z)
        rhs = (-1.0) ** k * jacobi(JacobiParams(k, b, a), z)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))

    def test_vectorized_evaluation(self):
        z = np.linspace(-1.0, 1.0, 11)
        vals = jacobi(JacobiParams(4, 0.5, 1.5), z)
        assert vals.shape == z.shape
        assert vals[3] == jacobi(JacobiParams(4, 0.5, 1.5), float(z[3]))

    def test_param_out_of_range(self):
        with pytest.raises(ParamOutOfRange):
            JacobiParams(2, -1.0, 0.0)
        with pytest.raises(ParamOutOfRange):
            JacobiParams(-1, 0.0, 0.0)

    def test_degree_cap(self):
        with pytest.raises(DegreeCapExceeded):
            jacobi(JacobiParams(201, 0.0, 0.0), 0.1)
        with pytest.raises(DegreeCapExceeded):
            jacobi(JacobiParams(30, 0.0, 0.0), 0.1, degree_cap=20)


class TestJacobiDeriv:
    def test_degree_zero(self):
        assert jacobi_deriv(JacobiParams(0, 1.2, 0.4), 0.77) == 0.0

    def test_degree_one_legendre(self):
        for z in (-0.8, 0.0, 0.9):
            assert jacobi_deriv(JacobiParams(1, 0.0, 0.0), z) == pytest.approx(1.0, abs=1e-15)

    def test_degree_two_legendre(self):
        assert jacobi_deriv(JacobiParams(2, 0.0, 0.0), 0.3) == pytest.approx(0.9, abs=1e-14)

    @pytest.mark.parametrize("degree", [1, 2, 5, 9])
    def test_against_central_difference(self, degree):
        p = JacobiParams(degree, 1.3, 0.2)
        h = 1e-6
        for z in (-0.5, 0.1, 0.7):
            fd = (jacobi(p, z + h) - jacobi(p, z - h)) / (2.0 * h)
            assert jacobi_deriv(p, z) == pytest.approx(fd, rel=1e-8, abs=1e-8)


class TestKummer:
    def test_order_zero_is_one(self):
        for z in (-3.0, 0.0, 7.5):
            assert kummer_terminating(KummerParams(0, 1.7), z) == 1.0

    def test_two_term_zero(self):
        # 1 - z/b vanishes at z = b
        assert kummer_terminating(KummerParams(1, 2.0), 2.0) == 0.0

    def test_three_term_rational_oracle(self):
        # frozen: F(-2, 3; 1) = 1 - 2/3 + 1/12 = 5/12
        expected = kummer_rational(2, Fraction(3), Fraction(1))
        assert expected == Fraction(5, 12)
        assert kummer_terminating(KummerParams(2, 3.0), 1.0) == pytest.approx(float(expected), rel=1e-15)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 12), st.integers(1, 9), st.fractions(min_value=-4, max_value=4, max_denominator=8))
    def test_matches_rational_oracle(self, k, bnum, z):
        # b restricted to exactly representable halves so the comparison is fair
        b = Fraction(bnum, 2)
        lhs = kummer_terminating(KummerParams(k, float(b)), float(z))
        rhs = float(kummer_rational(k, b, z))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_param_validation(self):
        with pytest.raises(ParamOutOfRange):
            KummerParams(2, 0.0)
        with pytest.raises(ParamOutOfRange):
            KummerParams(-1, 1.0)

    def test_vectorized_evaluation(self):
        z = np.linspace(0.0, 4.0, 9)
        vals = kummer_terminating(KummerParams(3, 2.5), z)
        assert vals.shape == z.shape
        assert vals[2] == kummer_terminating(KummerParams(3, 2.5), float(z[2]))
