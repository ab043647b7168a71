from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from angelesco.core import DomainError, Interval, WeightSpec
from angelesco.hp import working_precision
from angelesco.mop import (
    AngelescoError,
    AngelescoSystem,
    DiscreteMeasure,
    MultiIndex,
    counting_measure,
    solve_mop,
    split_factors,
    zero_counts,
)
from angelesco.op import MonicPoly

SEPARATED = AngelescoSystem(
    (WeightSpec.uniform(Interval(-1.0, 0.0)), WeightSpec.uniform(Interval(1.0, 2.0)))
)
_W = WeightSpec.jacobi(Interval(-1.0, 0.0), Fraction(1, 2), Fraction(-1, 3), (0.0, 0.4))
MIRROR = AngelescoSystem((_W, _W.reflected()))


def _floats(p: MonicPoly) -> list[float]:
    return [float(c) for c in p.coeffs]


def _rational_mop(n1: int, n2: int) -> list[Fraction]:
    """Exact MOP coefficients for uniform weights on [-1,0] and [1,2]."""

    def mom(a, b, k):
        return Fraction(b ** (k + 1) - a ** (k + 1), k + 1) / (b - a)

    total = n1 + n2
    rows, rhs = [], []
    for (a, b), ni in (((-1, 0), n1), ((1, 2), n2)):
        for k in range(ni):
            rows.append([mom(a, b, k + j) for j in range(total)])
            rhs.append(-mom(a, b, k + total))
    # Gaussian elimination in exact arithmetic
    m = [r + [v] for r, v in zip(rows, rhs)]
    for c in range(total):
        piv = next(r for r in range(c, total) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        for r in range(total):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][total] / m[i][i] for i in range(total)] + [Fraction(1)]


class TestSystem:
    def test_rejects_overlap(self):
        with pytest.raises(DomainError):
            AngelescoSystem((WeightSpec.uniform(Interval(0, 2)), WeightSpec.uniform(Interval(1, 3))))

    def test_multi_index(self):
        n = MultiIndex((3, 1))
        assert n.total == 4 and n.c == (0.75, 0.25)
        with pytest.raises(DomainError):
            MultiIndex((1, -1))


class TestSolveMop:
    def test_single_condition_forces_mean(self):
        assert _floats(solve_mop(SEPARATED, (1, 0))) == pytest.approx([0.5, 1.0], abs=1e-30)

    @pytest.mark.parametrize("n", [(1, 1), (2, 1), (3, 2)])
    def test_rational_oracle(self, n):
        exact = _rational_mop(*n)
        got = solve_mop(SEPARATED, n).coeffs
        with working_precision(256):
            for g, e in zip(got, exact):
                assert abs(g - mpq(e.numerator, e.denominator)) < 1e-60

    def test_mirror_even(self):
        p = solve_mop(MIRROR, (3, 3))
        c = _floats(p)
        assert max(abs(v) for v in c[1::2]) < 1e-30

    def test_reflection_equivariance(self, asymmetric_system):
        n = (4, 2)
        p = solve_mop(asymmetric_system, n)
        q = solve_mop(asymmetric_system.reflected(), n[::-1])
        for x in (-3.0, 0.25, 2.7):
            assert q(-x) == pytest.approx((-1) ** sum(n) * p(x), rel=1e-20)

    def test_empty_index(self):
        p = solve_mop(SEPARATED, (0, 0))
        assert p.degree == 0

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            solve_mop(SEPARATED, (1, 1, 1))

    @pytest.mark.parametrize("n", [(20, 20), (30, 10), (0, 40)])
    def test_residual_and_normality(self, gapped_system, n):
        p = solve_mop(gapped_system, n)
        assert p.degree == sum(n)
        assert p.solve_residual < 1e-20


class TestSplit:
    def test_forced(self):
        f = split_factors(solve_mop(SEPARATED, (1, 0)), SEPARATED, (1, 0))
        assert _floats(f.factors[0]) == pytest.approx([0.5, 1.0], abs=1e-30)
        assert f.factors[1].degree == 0

    def test_symmetric_zeros(self):
        f = split_factors(solve_mop(MIRROR, (2, 2)), MIRROR, (2, 2))
        a = sorted(float(z) for z in f.zeros[0])
        b = sorted(-float(z) for z in f.zeros[1])
        assert a == pytest.approx(b, abs=1e-30)

    def test_jacobi_counts(self):
        s = AngelescoSystem(
            (
                WeightSpec.jacobi(Interval(-1, 0), Fraction(1, 2), Fraction(-1, 2)),
                WeightSpec.jacobi(Interval(1, 2), Fraction(-1, 3), Fraction(2)),
            )
        )
        p = solve_mop(s, (5, 3))
        f = split_factors(p, s, (5, 3))
        assert tuple(len(z) for z in f.zeros) == (5, 3)
        assert f.reconstruction_error < 1e-40
        grid = np.linspace(-1, 0, 3001)
        sg = np.sign(p(grid))
        assert int(np.sum(sg[1:] != sg[:-1])) == 5

    def test_count_mismatch(self):
        p = solve_mop(SEPARATED, (2, 1))
        with pytest.raises(AngelescoError):
            split_factors(p, SEPARATED, (1, 2))

    def test_zero_counts(self, asymmetric_system):
        assert zero_counts(solve_mop(asymmetric_system, (7, 4)), asymmetric_system) == (7, 4)


class TestCountingMeasure:
    def test_single_zero(self):
        mu = counting_measure(MonicPoly.from_roots([-0.5]))
        assert list(mu.points) == [-0.5]
        assert mu.masses.tolist() == [1.0]

    def test_cubic(self):
        mu = counting_measure(MonicPoly.from_roots([-(3**0.5) / 2, 0.0, 3**0.5 / 2]))
        assert mu.masses == pytest.approx([1 / 3] * 3)
        assert mu.cdf(0.0) == pytest.approx(2 / 3)

    def test_needs_zeros(self):
        with pytest.raises(DomainError):
            counting_measure(solve_mop(SEPARATED, (1, 0)))

    def test_kolmogorov_uniform(self):
        m = 50
        mu = DiscreteMeasure((np.arange(m) + 0.5) / m)
        assert mu.kolmogorov_distance(lambda x: x) == pytest.approx(0.5 / m)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12))
def test_split_property(n1, n2):
    p = solve_mop(MIRROR, (n1, n2))
    assert zero_counts(p, MIRROR) == (n1, n2)
