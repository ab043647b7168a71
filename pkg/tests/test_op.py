from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angelesco.core import DomainError, Interval, PrecisionConfig, WeightSpec, conformal_frame
from angelesco.hp import PrecisionError, working_precision
from angelesco.op import (
    MonicPoly,
    VaryingWeight,
    classical_asymptotics_check,
    interlace,
    monic_orthogonal,
    norm_squared,
    poly_zeros,
)

UNIT = Interval(-1.0, 1.0)
CHEB = WeightSpec.chebyshev(UNIT)
LEG = WeightSpec.uniform(UNIT)


def _floats(p: MonicPoly) -> list[float]:
    return [float(c) for c in p.coeffs]


class TestMonicOrthogonal:
    def test_chebyshev_cubic(self):
        assert _floats(monic_orthogonal(CHEB, 3)) == pytest.approx([0, -0.75, 0, 1], abs=1e-30)

    def test_legendre_quadratic(self):
        assert _floats(monic_orthogonal(LEG, 2)) == pytest.approx([-1 / 3, 0, 1], abs=1e-30)

    def test_degree_zero(self):
        p = monic_orthogonal(LEG, 0)
        assert p.degree == 0 and p(0.7) == 1.0

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            monic_orthogonal(LEG, -1)

    def test_varying_weight_against_moment_oracle(self):
        # exact moments of e^x dx on [-1,1] and a 60-digit Gram solve
        n = 4
        p = monic_orthogonal(
            VaryingWeight(LEG, lambda x: x, n, theta_mp=lambda x: x), n, PrecisionConfig()
        )
        with mp.workdps(60):
            mom = [mp.quad(lambda x, k=k: x**k * mp.exp(x), [-1, 1]) for k in range(2 * n)]
            gram = mp.matrix([[mom[i + j] for j in range(n)] for i in range(n)])
            rhs = mp.matrix([-mom[i + n] for i in range(n)])
            oracle = mp.lu_solve(gram, rhs)
            for k in range(n):
                assert abs(mp.mpf(str(p.coeffs[k])) - oracle[k]) < mp.mpf("1e-40")

    def test_float_theta_relaxes_tolerance(self):
        p = monic_orthogonal(VaryingWeight(LEG, np.sin, 6), 6)
        assert p.solve_residual < 1e-12

    @pytest.mark.parametrize(
        "weight",
        [LEG, CHEB, WeightSpec.jacobi(Interval(0.5, 2.0), Fraction(1, 2), Fraction(-1, 3), (0.1, -0.2))],
        ids=["legendre", "chebyshev", "jacobi"],
    )
    def test_residuals_high_degree(self, weight):
        for n in (10, 25, 40):
            assert monic_orthogonal(weight, n).solve_residual < 1e-20

    def test_precision_error_at_low_bits(self):
        with pytest.raises(PrecisionError):
            monic_orthogonal(LEG, 40, PrecisionConfig(mantissa_bits=64))

    def test_norm_minimality(self):
        n = 5
        p = monic_orthogonal(LEG, n)
        base = float(norm_squared(p))
        for k in range(n):
            for eps in (1e-3, -1e-3):
                q = lambda x, k=k, eps=eps: p(x) + eps * x**k  # noqa: E731
                val = mp.quad(lambda x: q(float(x)) ** 2, [-1, 1])
                assert base <= float(val)

    def test_norm_chebyshev_closed_form(self):
        # ‖2^{1-n} T_n‖² = π 2^{1-2n} for the unnormalised Chebyshev weight 1/sqrt(1-x²)
        n = 6
        p = monic_orthogonal(CHEB, n)
        assert float(norm_squared(p)) == pytest.approx(2 ** (1 - 2 * n), rel=1e-14)


class TestZeros:
    def test_chebyshev(self):
        zs = poly_zeros(monic_orthogonal(CHEB, 3), UNIT)
        with working_precision(256):
            r = gmpy2.sqrt(gmpy2.mpfr(3)) / 2
            assert abs(zs[0] + r) < 2.0**-126 and abs(zs[1]) < 2.0**-126 and abs(zs[2] - r) < 2.0**-126

    def test_legendre(self):
        zs = poly_zeros(monic_orthogonal(LEG, 2), UNIT)
        with working_precision(256):
            r = 1 / gmpy2.sqrt(gmpy2.mpfr(3))
            assert abs(zs[0] + r) < 2.0**-126 and abs(zs[1] - r) < 2.0**-126

    def test_accuracy(self):
        p = monic_orthogonal(LEG, 9)
        for z in poly_zeros(p, UNIT):
            assert abs(p.eval_mp(z)) < gmpy2.mpfr(2) ** -100

    def test_jacobi_interlacing(self):
        w = WeightSpec.jacobi(UNIT, Fraction(1, 2), Fraction(-1, 2), (0.3,))
        z12 = poly_zeros(monic_orthogonal(w, 12), UNIT)
        z11 = poly_zeros(monic_orthogonal(w, 11), UNIT)
        assert len(z12) == 12
        assert interlace(z11, z12)
        grid = np.linspace(-1, 1, 4001)
        vals = np.sign(monic_orthogonal(w, 12)(grid))
        assert int(np.sum(vals[1:] != vals[:-1])) == 12


class TestClassicalCheck:
    def test_chebyshev_closed_form(self):
        for n in (4, 8, 12):
            chk = classical_asymptotics_check(CHEB, n, 2.0)
            exact = abs(conformal_frame(UNIT, 2.0).phi) ** (2 * n)
            assert chk.rel_err == pytest.approx(exact, rel=1e-10)

    def test_legendre_decreasing(self):
        errs = [classical_asymptotics_check(LEG, n, 1.5).rel_err for n in (4, 8, 16)]
        assert errs[0] > errs[1] > errs[2]

    def test_degree_zero(self):
        chk = classical_asymptotics_check(LEG, 0, 2 + 1j)
        assert chk.lhs == 1

    def test_rejects_interval_point(self):
        with pytest.raises(DomainError):
            classical_asymptotics_check(LEG, 3, 0.2)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 14), st.floats(-0.9, 0.9))
def test_reflection_symmetry(n, a):
    w = WeightSpec.jacobi(UNIT, Fraction(1, 3), Fraction(1, 3), (0.0, 0.0, a))
    p = monic_orthogonal(w, n)
    assert p(0.37) == pytest.approx((-1) ** n * p(-0.37), rel=1e-12, abs=1e-30)
