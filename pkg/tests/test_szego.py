from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angelesco.core import DomainError, Interval, WeightSpec, outer_omega
from angelesco.mop import solve_mop, split_factors
from angelesco.szego import (
    TraceVector,
    apply_D,
    apply_H,
    boundary_product_residual,
    eval_S,
    iterate_D,
    q_from_factors,
    solve_szego_system,
    szego_data,
    y_start,
)

TWO = (Interval(-1.0, 0.0), Interval(1.0, 2.0))
THREE = (Interval(-3.0, -2.0), Interval(-0.5, 0.5), Interval(1.0, 2.5))
LEGENDRE_TWO = tuple(WeightSpec.uniform(iv) for iv in TWO)


def _values(v: TraceVector, x_local: float = 0.3) -> list[float]:
    return [float(v(i, iv.to_global(x_local))) for i, iv in enumerate(v.intervals)]


class TestApplyH:
    def test_constants(self):
        u = TraceVector.constants(TWO, (1.0, 1.0))
        assert _values(apply_H(u)) == pytest.approx([-0.5, -0.5], abs=1e-14)

    def test_one_sided(self):
        u = TraceVector.constants(TWO, (1.0, 0.0))
        assert _values(apply_H(u)) == pytest.approx([0.0, -0.5], abs=1e-14)

    def test_three(self):
        u = TraceVector.constants(THREE, (1.0, 1.0, 1.0))
        assert _values(apply_H(u)) == pytest.approx([-1.0, -1.0, -1.0], abs=1e-14)

    def test_overlap_rejected(self):
        with pytest.raises(DomainError):
            TraceVector.constants((Interval(0, 2), Interval(1, 3)), (1.0, 1.0))

    def test_restriction_consistency(self):
        u = TraceVector.from_functions(TWO, (np.cos, lambda x: x * x))
        a = apply_H(u)
        b = apply_H(u, source_intervals=TWO)
        for i, x in enumerate(u.probe(20)):
            assert np.array_equal(a(i, x), b(i, x))

    def test_restricted_operator(self):
        u = TraceVector.constants(TWO, (1.0, 1.0))
        inner = (Interval(-0.8, -0.1), Interval(1.2, 2.0))
        assert _values(apply_H(u, source_intervals=inner)) == pytest.approx([-0.5, -0.5], abs=1e-14)


class TestSolve:
    def test_unit_constants(self):
        sol = solve_szego_system(TraceVector.constants(TWO, (1.0, 1.0)))
        assert _values(sol.s) == pytest.approx([2 / 3, 2 / 3], abs=1e-14)

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=20, deadline=None)
    def test_constant_closed_form(self, a1, a2):
        sol = solve_szego_system(TraceVector.constants(TWO, (a1, a2)))
        expect = [(4 * a1 - 2 * a2) / 3, (4 * a2 - 2 * a1) / 3]
        assert _values(sol.s) == pytest.approx(expect, abs=1e-13)

    def test_zero_input(self):
        sol = solve_szego_system(TraceVector.constants(THREE, (0.0, 0.0, 0.0)))
        assert max(abs(v) for v in _values(sol.s)) < 1e-12

    def test_touching_rejected(self):
        with pytest.raises(DomainError):
            solve_szego_system(TraceVector.constants((Interval(-1, 0), Interval(0, 1)), (0.0, 0.0)))

    def test_singular_values(self):
        a = szego_data(LEGENDRE_TWO)
        svals = [solve_szego_system(a, n).min_singular_value for n in (16, 32, 64)]
        # bounded below; the unnormalised value rows make it grow like sqrt(n)
        assert min(svals) > 1.0
        assert all(b >= a for a, b in zip(svals, svals[1:]))

    def test_legendre_boundary_relation(self):
        a = szego_data(LEGENDRE_TWO)
        sol = solve_szego_system(a)
        assert sol.residual < 1e-10
        assert boundary_product_residual(sol.s, a) < 1e-8


class TestEvalS:
    def test_unit_weights(self):
        w = tuple(WeightSpec.chebyshev(iv) for iv in TWO)
        s = solve_szego_system(szego_data(w)).s
        for i in range(2):
            assert eval_S(s, i, 0.5 + 0.7j) == pytest.approx(1.0, abs=1e-12)

    def test_constant_weights(self):
        a1, a2 = 0.3, -0.2
        s = solve_szego_system(TraceVector.constants(TWO, (a1, a2))).s
        assert eval_S(s, 0, 3 + 1j) == pytest.approx(math.exp((4 * a1 - 2 * a2) / 3), abs=1e-13)
        assert eval_S(s, 1, np.inf) == pytest.approx(math.exp((4 * a2 - 2 * a1) / 3), abs=1e-13)

    def test_conjugate_symmetry(self):
        s = solve_szego_system(szego_data(LEGENDRE_TWO)).s
        z = 0.4 + 0.6j
        assert eval_S(s, 0, np.conj(z)) == pytest.approx(np.conj(eval_S(s, 0, z)), abs=1e-14)
        assert eval_S(s, 0, np.inf).real > 0

    def test_on_interval(self):
        s = solve_szego_system(szego_data(LEGENDRE_TWO)).s
        with pytest.raises(DomainError):
            eval_S(s, 0, -0.5)

    def test_factor_identity(self):
        a = szego_data(LEGENDRE_TWO)
        s = solve_szego_system(a).s
        hs = apply_H(s)
        for i, iv in enumerate(TWO):
            for z in (0.5 + 0.5j, 3.0, -2 - 1j):
                lhs = outer_omega(lambda x, i=i: hs(i, x), iv, z) * np.exp(a[i].log_outer(z))
                assert lhs == pytest.approx(eval_S(s, i, z), rel=1e-8)

    def test_continuity_under_shrinking(self):
        z = 0.5 + 1.0j
        base = solve_szego_system(szego_data(LEGENDRE_TWO)).s
        gaps = []
        for d in (1e-2, 1e-3):
            sup = tuple(Interval(iv.alpha + d, iv.beta - d) for iv in TWO)
            s = solve_szego_system(szego_data(LEGENDRE_TWO, sup)).s
            gaps.append(max(abs(eval_S(s, i, z) - eval_S(base, i, z)) for i in range(2)))
        assert gaps[0] > gaps[1]


@pytest.fixture(scope="module")
def d_setup(gapped_system, gapped_eq):
    n = (10, 10)
    p = solve_mop(gapped_system, n)
    fac = split_factors(p, gapped_system, n)
    return gapped_system, n, gapped_eq, q_from_factors(gapped_system, n, gapped_eq, fac.factors)


class TestD:
    def test_true_factors_fixed_point(self, d_setup):
        system, n, eq, q = d_setup
        dq, _ = apply_D(system, n, eq, q)
        assert dq.sup_distance(q) < 1e-10

    def test_from_y(self, d_setup):
        system, n, eq, q = d_setup
        res = iterate_D(system, n, eq, y_start(system, eq))
        assert res.q.sup_distance(q) < 1e-6
        assert res.history[-1] < 1e-10

    def test_symmetry_preserved(self, d_setup):
        system, n, eq, _ = d_setup
        y = y_start(system, eq)
        du, _ = apply_D(system, n, eq, y)
        x = np.linspace(-0.95, -0.25, 7)
        assert du(0, x) == pytest.approx(du(1, -x), abs=1e-10)
        assert y(0, x) == pytest.approx(y(1, -x), abs=1e-10)
