"""Exact scalar backend: Gaussian rationals, the evaluation point, and
the q-Pochhammer / q-integer / binomial family."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qybe.scalars import (GaussRat, QPoint, as_gauss, bracket_binomial,
                          mp_ctx, poch, poch_binomial, q_factorial, q_int,
                          q_pochhammer, q_pochhammer_float, to_mpc)

QPT = QPoint(Fraction(1, 2))  # q = 1/4

rationals = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=12)
roots = st.fractions(
    min_value=Fraction(1, 7), max_value=Fraction(6, 7), max_denominator=11)


class TestGaussRat:
    def test_field_ops(self):
        a = GaussRat(Fraction(1, 2), Fraction(-2, 3))
        b = GaussRat(Fraction(3), Fraction(1, 5))
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * (1 / a) == GaussRat(1)

    def test_imaginary_unit_squares_to_minus_one(self):
        i = GaussRat(0, 1)
        assert i * i == GaussRat(-1)

    def test_zero_division_raises(self):
        with pytest.raises(ZeroDivisionError):
            GaussRat(1) / GaussRat(0)

    def test_negative_power(self):
        a = GaussRat(Fraction(2, 3), Fraction(1, 4))
        assert a ** -2 == 1 / (a * a)

    @given(re=rationals, im=rationals)
    def test_conjugate_product_is_real(self, re, im):
        a = GaussRat(re, im)
        prod = a * a.conjugate()
        assert prod.im == 0
        assert prod.re == re * re + im * im


class TestQPoint:
    def test_root_bounds(self):
        with pytest.raises(ValueError):
            QPoint(Fraction(3, 2))
        with pytest.raises(ValueError):
            QPoint(Fraction(0))

    def test_q_is_root_squared(self):
        assert QPT.q == Fraction(1, 4)
        assert QPT.hpow(3) == Fraction(1, 8)

    def test_phase_constant_squares_to_minus_inverse_q(self):
        # p**2 * q == -1 exactly
        p2 = QPT.p * QPT.p
        assert p2 * as_gauss(QPT.q) == GaussRat(-1)

    @given(root=roots, k=st.integers(min_value=-8, max_value=8))
    def test_p_pow_matches_repeated_product(self, root, k):
        qpt = QPoint(root)
        assert qpt.p_pow(k) == qpt.p ** k


class TestPochhammer:
    def test_empty_product(self):
        assert poch(QPT, 1, 0) == 1

    def test_q2_at_one(self):
        # (q^2; q^2)_1 at q = 1/4
        assert poch(QPT, 2, 1) == Fraction(15, 16)

    def test_q4_at_two(self):
        # (q^4; q^4)_2 at q = 1/4: factors 1 - q^4 and 1 - q^8
        assert poch(QPT, 4, 2) == (1 - Fraction(1, 256)) * (1 - Fraction(1, 65536))

    def test_negative_m_raises(self):
        with pytest.raises(ValueError):
            poch(QPT, 1, -1)

    @given(z=rationals, m=st.integers(min_value=1, max_value=8))
    def test_recursion(self, z, m):
        q = QPT.q
        assert q_pochhammer(z, q, m) == (1 - z) * q_pochhammer(z * q, q, m - 1)

    def test_float_backend_matches_exact(self):
        ctx = mp_ctx(128)
        for m in range(8):
            exact = q_pochhammer(Fraction(3, 7), QPT.q, m)
            approx = q_pochhammer_float(Fraction(3, 7), QPT.q, m, ctx)
            assert abs(approx - to_mpc(exact, ctx)) < ctx.mpf(2) ** -120


class TestBrackets:
    def test_unit(self):
        assert q_int(QPT, 1) == 1

    def test_two(self):
        # (q^2 - q^-2)/(q - q^-1) at q = 1/4
        assert q_int(QPT, 2) == Fraction(17, 4)

    @given(root=roots, m=st.integers(min_value=-20, max_value=20))
    @settings(max_examples=60)
    def test_defining_identity(self, root, m):
        qpt = QPoint(root)
        q = qpt.q
        assert q_int(qpt, m) * (q - 1 / q) == q ** m - q ** -m

    def test_out_of_range_binomials_vanish(self):
        assert bracket_binomial(QPT, 1, 2) == 0
        assert poch_binomial(QPT, 1, 2) == 0
        assert bracket_binomial(QPT, 3, -1) == 0

    def test_factorial_consistency(self):
        assert q_factorial(QPT, 3) == q_int(QPT, 1) * q_int(QPT, 2) * q_int(QPT, 3)

    @given(m=st.integers(min_value=0, max_value=8),
           k=st.integers(min_value=0, max_value=8))
    def test_bracket_binomial_pascal(self, m, k):
        # [m k] = q^k [m-1 k] + q^(k-m) [m-1 k-1]
        if not 0 <= k <= m or m == 0:
            return
        q = QPT.q
        lhs = bracket_binomial(QPT, m, k)
        rhs = (q ** k * bracket_binomial(QPT, m - 1, k)
               + q ** (k - m) * bracket_binomial(QPT, m - 1, k - 1))
        assert lhs == rhs
