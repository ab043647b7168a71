"""Type II multiple orthogonal polynomials for Angelesco systems."""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpfr

from .core import DomainError, Interval, PrecisionConfig, WeightSpec
from .hp import PrecisionError, lu_solve, relative_residual, to_mpfr, working_precision
from .op import MonicPoly, _moments, _orthogonality_residual, _weighted_rule, zeros_in


class AngelescoError(ArithmeticError):
    """Zero counts per interval contradict the Angelesco property."""


@dataclass(frozen=True)
class AngelescoSystem:
    """Weights on pairwise disjoint intervals, ordered left to right."""

    weights: tuple[WeightSpec, ...]

    def __post_init__(self) -> None:
        ws = tuple(self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) < 1:
            raise DomainError("a system needs at least one weight")
        for a, b in zip(ws, ws[1:]):
            if not a.interval.beta <= b.interval.alpha:
                raise DomainError("intervals must be disjoint and ordered left to right")

    @property
    def d(self) -> int:
        return len(self.weights)

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return tuple(w.interval for w in self.weights)

    @property
    def hull(self) -> Interval:
        return Interval(self.intervals[0].alpha, self.intervals[-1].beta)

    def reflected(self) -> AngelescoSystem:
        """Mirror image under ``x ↦ -x`` (interval order reversed)."""
        return AngelescoSystem(tuple(w.reflected() for w in reversed(self.weights)))

    def permuted(self, perm: Sequence[int]) -> tuple[WeightSpec, ...]:
        return tuple(self.weights[p] for p in perm)


@dataclass(frozen=True)
class MultiIndex:
    n: tuple[int, ...]

    def __post_init__(self) -> None:
        n = tuple(int(k) for k in self.n)
        if any(k < 0 for k in n):
            raise DomainError("multi-index entries must be nonnegative")
        object.__setattr__(self, "n", n)

    @property
    def total(self) -> int:
        return sum(self.n)

    @property
    def c(self) -> tuple[float, ...]:
        return tuple(k / self.total for k in self.n)

    def __iter__(self):
        return iter(self.n)

    def __len__(self) -> int:
        return len(self.n)

    def __getitem__(self, i: int) -> int:
        return self.n[i]


@dataclass(frozen=True, eq=False)
class MopFactorization:
    full: MonicPoly
    factors: tuple[MonicPoly, ...]
    zeros: tuple[tuple, ...]
    reconstruction_error: float = 0.0


@dataclass(frozen=True, eq=False)
class _MomentTable:
    mom: tuple[list, ...]
    check: tuple[list, ...]
    shift: float
    scale: float
    order: int
    bits: int = field(default=256)


@functools.lru_cache(maxsize=32)
def _moment_table(system: AngelescoSystem, top: int, order: int, bits: int) -> _MomentTable:
    hull = system.hull
    c, h = hull.center, hull.radius
    moms, checks = [], []
    for w in system.weights:
        out = []
        for k in (order, order + order // 2 + 1):
            nodes, wts = _weighted_rule(w, None, None, k, bits)
            with working_precision(bits):
                loc = w.interval
                # rescale local nodes of this interval to the global variable
                a = (to_mpfr(loc.center) - to_mpfr(c)) / to_mpfr(h)
                b = to_mpfr(loc.radius) / to_mpfr(h)
                t = [a + b * s for s in nodes]
                out.append(_moments(t, wts, top))
        moms.append(out[0])
        checks.append(out[1])
    return _MomentTable(tuple(moms), tuple(checks), c, h, order, bits)


def solve_mop(
    system: AngelescoSystem,
    n: MultiIndex | Sequence[int],
    precision: PrecisionConfig | None = None,
    max_total: int | None = None,
) -> MonicPoly:
    """Monic ``P`` of degree ``|n|`` with ``∫ x^k P dμ_i = 0`` for ``k < n_i``.

    Mixed moments are taken in the variable ``t`` of the convex hull of the
    system.  ``max_total`` fixes the moment table size so that the table can
    be shared along a ray sequence.
    """
    precision = precision or PrecisionConfig()
    n = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    if len(n) != system.d:
        raise DomainError("multi-index length differs from the number of weights")
    total = n.total
    cap = max(max_total or total, total)
    bits = precision.mantissa_bits
    order = precision.order_for(cap)
    for _ in range(3):
        tab = _moment_table(system, 2 * cap, order, bits)
        with working_precision(bits):
            rows, rhs = [], []
            for i, ni in enumerate(n):
                m = tab.mom[i]
                for k in range(ni):
                    row = [m[k + j] for j in range(total)]
                    scale = max(abs(v) for v in row + [m[k + total]])
                    rows.append([v / scale for v in row])
                    rhs.append(-m[k + total] / scale)
            coeffs = lu_solve(rows, rhs) if total else []
            solve_res = relative_residual(rows, coeffs, rhs) if total else 0.0
            full = coeffs + [mpfr(1)]
            resid = max(
                (_orthogonality_residual(full, tab.check[i], ni) for i, ni in enumerate(n) if ni),
                default=0.0,
            )
        if max(resid, solve_res) < precision.solve_residual_tol:
            break
        order *= 2
    else:
        raise PrecisionError(
            f"MOP residual {resid:.3e} above tolerance for n={n.n}; increase mantissa_bits"
        )
    return MonicPoly(
        tuple(full),
        tab.shift,
        tab.scale,
        bits,
        solve_residual=max(resid, solve_res),
        diagnostics={"order": order, "multi_index": n.n},
    )


def split_factors(
    p: MonicPoly, system: AngelescoSystem, n: MultiIndex | Sequence[int]
) -> MopFactorization:
    """Partition the zeros of ``p`` by interval and rebuild the monic factors."""
    n = n if isinstance(n, MultiIndex) else MultiIndex(tuple(n))
    collar = 2.0 ** (-(p.bits // 4))
    groups = []
    for iv, ni in zip(system.intervals, n):
        zs = []
        for factor in (8, 32, 128):
            zs = zeros_in(p, Interval(iv.alpha - collar, iv.beta + collar), factor)
            if len(zs) >= ni:
                break
        if len(zs) != ni:
            raise AngelescoError(
                f"found {len(zs)} zeros in {iv}, expected {ni} (multi-index {n.n})"
            )
        groups.append(tuple(zs))
    if sum(len(g) for g in groups) != p.degree:
        raise AngelescoError("zeros outside the intervals of the system")
    factors = tuple(
        MonicPoly.from_roots(g, p.bits, iv.center, iv.radius)
        for g, iv in zip(groups, system.intervals)
    )
    probe = system.hull.center + system.hull.radius * np.array([1.3, -1.4, 2.1])
    err = 0.0
    for x in probe:
        full = p.eval_mp(float(x))
        prod = mpfr(1)
        for f in factors:
            prod *= f.eval_mp(float(x))
        err = max(err, float(abs(prod / full - 1)))
    return MopFactorization(p, factors, tuple(groups), err)


def zero_counts(p: MonicPoly, system: AngelescoSystem) -> tuple[int, ...]:
    """Number of sign changes of ``p`` inside each interval of the system."""
    collar = 2.0 ** (-(p.bits // 4))
    return tuple(
        len(zeros_in(p, Interval(iv.alpha - collar, iv.beta + collar)))
        for iv in system.intervals
    )


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Equal point masses; the normalised zero counting measure of a polynomial."""

    points: np.ndarray

    @property
    def masses(self) -> np.ndarray:
        return np.full(len(self.points), 1.0 / max(len(self.points), 1))

    def cdf(self, x):
        return np.searchsorted(self.points, np.asarray(x, dtype=float), side="right") / max(
            len(self.points), 1
        )

    def kolmogorov_distance(self, cdf) -> float:
        """``sup_x |F_discrete(x) - F(x)|`` against a continuous CDF."""
        pts = self.points
        if len(pts) == 0:
            return 1.0
        f = np.asarray(cdf(pts), dtype=float)
        k = np.arange(len(pts))
        m = len(pts)
        return float(max(np.max(np.abs(f - k / m)), np.max(np.abs(f - (k + 1) / m))))


def counting_measure(factor: MonicPoly, zeros: Sequence | None = None) -> DiscreteMeasure:
    rts = zeros if zeros is not None else factor.roots
    if rts is None:
        raise DomainError("zeros are required for the counting measure")
    return DiscreteMeasure(np.sort(np.array([float(r) for r in rts])))
