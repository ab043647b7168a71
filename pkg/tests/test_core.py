from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angelesco.core import (
    ArcsineSeries,
    DomainError,
    Interval,
    PrecisionConfig,
    WeightSpec,
    arcsine_density,
    conformal_frame,
    conformal_frame_mp,
    dirichlet_extend,
    inverse_frame,
    log_potential,
    outer_omega,
    szego_G,
)
from angelesco.hp import to_mpc, working_precision

UNIT = Interval(-1.0, 1.0)

intervals = st.tuples(
    st.floats(-5, 5, allow_nan=False), st.floats(0.05, 5, allow_nan=False)
).map(lambda t: Interval(t[0], t[0] + t[1]))
disk = st.tuples(st.floats(0.05, 0.95), st.floats(-3.1, 3.1)).map(lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


class TestInterval:
    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)

    def test_local_roundtrip(self):
        iv = Interval(-0.5, 2.0)
        x = np.linspace(-0.5, 2.0, 7)
        assert np.allclose(iv.to_global(iv.to_local(x)), x)


class TestWeightSpec:
    def test_exponent_bounds(self):
        with pytest.raises(DomainError):
            WeightSpec.jacobi(UNIT, Fraction(-1), Fraction(0))

    def test_density(self):
        w = WeightSpec.jacobi(UNIT, Fraction(1, 2), Fraction(0), (0.0, 1.0))
        assert w.density(0.0) == pytest.approx(math.sqrt(1.0))

    def test_reflection(self):
        w = WeightSpec.jacobi(Interval(0.0, 1.0), Fraction(1, 2), Fraction(-1, 3), (0.1, 0.2))
        r = w.reflected()
        assert r.interval == Interval(-1.0, 0.0)
        assert r.density(-0.3) == pytest.approx(w.density(0.3))


class TestPrecisionConfig:
    def test_minimum_bits(self):
        with pytest.raises(DomainError):
            PrecisionConfig(mantissa_bits=32)

    def test_default_order(self):
        assert PrecisionConfig().order_for(20) == 80


class TestConformalFrame:
    def test_infinity(self):
        assert conformal_frame(UNIT, np.inf).phi == 0

    def test_closed_form(self):
        fr = conformal_frame(UNIT, 1.25)
        assert fr.w == pytest.approx(0.75)
        assert fr.phi == pytest.approx(0.5)

    def test_boundary_limit(self):
        assert conformal_frame(UNIT, 1.0 + 1e-12).phi == pytest.approx(1.0, abs=1e-5)

    def test_on_interval(self):
        with pytest.raises(DomainError):
            conformal_frame(UNIT, 0.3)

    @given(intervals, disk)
    def test_inside_disk_and_roundtrip(self, iv, p):
        z = inverse_frame(iv, p)
        phi = conformal_frame(iv, z).phi
        assert abs(phi) < 1
        assert phi == pytest.approx(p, abs=1e-9)

    @given(intervals, disk)
    def test_conjugate_symmetry(self, iv, p):
        z = inverse_frame(iv, p)
        a = conformal_frame(iv, z).phi
        b = conformal_frame(iv, np.conj(z)).phi
        assert b == np.conj(a)

    def test_extended_roundtrip(self):
        iv = Interval(-0.3, 1.7)
        z = 0.4 + 0.9j
        with working_precision(256):
            fr = conformal_frame_mp(iv, z)
            phi = fr.phi
            back = to_mpc(iv.center) + to_mpc(iv.radius) * (phi + 1 / phi) / 2
            assert abs(back - to_mpc(z)) < 1e-20


class TestLogPotential:
    def test_robin_constant(self):
        assert log_potential(arcsine_density(UNIT), 0.0) == pytest.approx(math.log(2), abs=1e-14)

    def test_frame_relation(self):
        # V = log|φ| + log(4/(β-α)); the opposite sign of the constant fails
        iv = Interval(-1.0, 1.0)
        z = 10.0
        v = log_potential(arcsine_density(iv), z)
        phi = conformal_frame(iv, z).phi
        assert v == pytest.approx(math.log(abs(phi)) + math.log(4 / iv.length), abs=1e-14)
        assert abs(v - (math.log(abs(phi)) - math.log(4 / iv.length))) > 0.5

    def test_quadrature_oracle(self):
        import mpmath as mp

        oracle = -mp.quad(lambda t: mp.log(10 - mp.cos(t)), [0, mp.pi]) / mp.pi
        assert log_potential(arcsine_density(UNIT), 10.0) == pytest.approx(float(oracle), abs=1e-14)

    @pytest.mark.parametrize("r", [1e3, 1e6])
    def test_far_field(self, r):
        d = ArcsineSeries(Interval(-0.5, 2.0), np.array([1.0, 0.3, -0.1])).grid()
        assert log_potential(d, r) + math.log(r) == pytest.approx(0.0, abs=10 / r)

    def test_panel_rule_matches_series(self):
        ser = ArcsineSeries(UNIT, np.array([1.0, 0.0, 0.4]))
        g = ser.grid(2000)
        plain = type(g)(g.interval, g.nodes, g.values, g.quad_weights, g.mass)
        assert log_potential(plain, 2.5) == pytest.approx(ser.potential(2.5), abs=1e-5)


class TestOuter:
    def test_identity(self):
        assert outer_omega(lambda x: 0 * x, Interval(0.0, 2.0), 3 + 1j) == pytest.approx(1.0)

    def test_constant(self):
        assert outer_omega(lambda x: 0 * x + 0.7, UNIT, 0.2 + 0.5j) == pytest.approx(math.exp(0.7))

    def test_geometric_mean(self):
        val = outer_omega(lambda x: 0.5 * np.log1p(-x * x), UNIT, np.inf, endpoint_exponents=(0.5, 0.5))
        assert val == pytest.approx(0.5, abs=1e-12)

    def test_reciprocal(self):
        f = lambda x: np.sin(2 * x) + 0.3 * x * x  # noqa: E731
        g = lambda x: -f(x)  # noqa: E731
        iv = Interval(-1.0, 0.5)
        for z in (2.0, 0.1 + 0.4j, -3 - 1j):
            assert outer_omega(f, iv, z) * outer_omega(g, iv, z) == pytest.approx(1.0, abs=1e-12)

    def test_conjugate_symmetry(self):
        f = lambda x: np.cos(3 * x)  # noqa: E731
        a = outer_omega(f, UNIT, 0.3 + 0.8j)
        b = outer_omega(f, UNIT, 0.3 - 0.8j)
        assert b == pytest.approx(np.conj(a), abs=1e-14)

    def test_geometric_mean_against_quadrature(self):
        import mpmath as mp

        f = lambda x: np.exp(x) / (2 + x)  # noqa: E731
        oracle = mp.quad(lambda t: mp.cos(t) - mp.log(2 + mp.cos(t)), [0, mp.pi]) / mp.pi
        val = outer_omega(lambda x: np.log(f(x)), UNIT, np.inf)
        assert math.log(val.real) == pytest.approx(float(oracle), abs=1e-10)


class TestSzegoG:
    def test_chebyshev(self):
        w = WeightSpec.chebyshev(UNIT)
        assert szego_G(w, None, 2 + 1j) == pytest.approx(1.0, abs=1e-14)

    def test_legendre_infinity(self):
        assert szego_G(WeightSpec.uniform(UNIT)).real == pytest.approx(math.sqrt(math.pi / 2), abs=1e-13)

    def test_jacobi_against_quadrature(self):
        # mpmath tanh-sinh of the defining integral in the angle variable
        w = WeightSpec.jacobi(UNIT, Fraction(0), Fraction(1, 2))
        assert szego_G(w, None, 2.0) == pytest.approx(0.8687495434730810, abs=1e-13)

    def test_boundary_modulus(self):
        from angelesco.core import szego_log_trace

        w = WeightSpec.jacobi(UNIT, Fraction(1, 2), Fraction(-1, 3), (0.2,))
        tr = szego_log_trace(w)
        x = np.array([-0.6, 0.1, 0.7])
        lhs = 2 * np.real(tr.boundary_log_outer(x, +1))
        v = math.pi * w.density(x) * np.sqrt(1 - x * x)
        assert np.allclose(lhs, np.log(v), atol=1e-10)


class TestDirichlet:
    def test_constant(self):
        assert dirichlet_extend(lambda x: 0 * x + 1.5, UNIT, 0.4 + 2j) == pytest.approx(1.5)

    def test_linear(self):
        assert dirichlet_extend(lambda x: x, UNIT, 2.0) == pytest.approx(2 - math.sqrt(3), abs=1e-14)

    def test_infinity_mean(self):
        assert dirichlet_extend(lambda x: x * x, UNIT, np.inf) == pytest.approx(0.5, abs=1e-14)

    def test_boundary_recovery(self):
        u = lambda x: np.cos(2 * x) + x  # noqa: E731
        x0 = 0.3
        errs = [abs(dirichlet_extend(u, UNIT, x0 + 1j * e) - u(x0)) for e in (1e-2, 1e-3, 1e-4)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[1] / errs[2] == pytest.approx(10, rel=0.2)


@settings(max_examples=30)
@given(st.floats(0.1, 0.9), st.floats(-0.9, 0.9))
def test_cdf_monotone(a1, a2):
    ser = ArcsineSeries(UNIT, np.array([1.0, a1 * 0.5, a2 * 0.2]))
    x = np.linspace(-1, 1, 50)
    c = ser.cdf(x)
    assert c[0] == pytest.approx(0.0, abs=1e-14)
    assert c[-1] == pytest.approx(1.0, abs=1e-14)
