"""Coupled Szegő functions of an Angelesco system and the operator ``𝒟``.

``ℋ`` acts on vectors of functions on disjoint intervals by

    (ℋu)_i = -½ Σ_{j≠i} (H_{Δ_j} u_j)|_{Δ_i},

where ``H_Δ`` is the bounded harmonic extension off ``Δ``.  The vector ``s``
solving ``s = ℋs + a`` with ``a_i = ½ log v_{Δ_i}`` gives the Szegő functions
``S_i = Ω_{Δ_i}(e^{s_i}, ·)``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, Interval, LogTrace, PrecisionConfig, conformal_frame, szego_log_trace
from .hp import PrecisionError
from .op import VaryingWeight, monic_orthogonal
from .quadrature import cheb_points


class FixedPointError(ArithmeticError):
    """The ``𝒟`` iteration failed to converge within its budget."""

    def __init__(self, message: str, history: Sequence[float]):
        super().__init__(message)
        self.history = list(history)


@dataclass(frozen=True, eq=False)
class FunctionTrace:
    """A real function on an interval given by a callable.

    Used for restrictions of harmonic functions whose Chebyshev series would
    converge slowly, for instance near a touching endpoint.
    """

    interval: Interval
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.fn(x)


@dataclass(frozen=True, eq=False)
class TraceVector:
    """One real function per interval (``LogTrace`` or :class:`FunctionTrace`)."""

    intervals: tuple[Interval, ...]
    traces: tuple

    def __post_init__(self) -> None:
        ivs = tuple(self.intervals)
        trs = tuple(self.traces)
        if len(ivs) != len(trs):
            raise DomainError("need one trace per interval")
        for a, b in zip(ivs, ivs[1:]):
            if a.beta > b.alpha:
                raise DomainError("intervals must be disjoint and ordered left to right")
        for iv, tr in zip(ivs, trs):
            if tr.interval != iv:
                raise DomainError("trace interval does not match")
            if isinstance(tr, LogTrace) and tr.n < 16:
                raise DomainError("a Chebyshev trace needs at least 16 samples")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "traces", trs)

    @classmethod
    def constants(cls, intervals: Sequence[Interval], values: Sequence[float], n: int = 16):
        return cls(tuple(intervals), tuple(LogTrace.constant(iv, v, n) for iv, v in zip(intervals, values)))

    @classmethod
    def from_functions(cls, intervals: Sequence[Interval], fns: Sequence[Callable], n: int = 64):
        return cls(tuple(intervals), tuple(LogTrace.fit(iv, f, n) for iv, f in zip(intervals, fns)))

    @property
    def d(self) -> int:
        return len(self.intervals)

    def __getitem__(self, i: int):
        return self.traces[i]

    def __call__(self, i: int, x):
        return self.traces[i](x)

    @property
    def tails(self) -> tuple[float, ...]:
        return tuple(t.tail if isinstance(t, LogTrace) else float("nan") for t in self.traces)

    def means(self) -> tuple[float, ...]:
        """``(H_{Δ_i} u_i)(∞) = ∫ u_i dω_{Δ_i}`` for every component."""
        return tuple(_as_logtrace(t).mean() for t in self.traces)

    def probe(self, n: int = 200) -> tuple[np.ndarray, ...]:
        """Interior probe points per interval (second-kind Chebyshev, no endpoints)."""
        s = np.cos(np.pi * np.arange(1, n + 1) / (n + 1))[::-1]
        return tuple(iv.to_global(s) for iv in self.intervals)

    def sup_distance(self, other: TraceVector, n: int = 200) -> float:
        out = 0.0
        for i, x in enumerate(self.probe(n)):
            out = max(out, float(np.max(np.abs(self(i, x) - other(i, x)))))
        return out

    def __add__(self, other: TraceVector) -> TraceVector:
        return TraceVector(self.intervals, tuple(a + b for a, b in zip(self.traces, other.traces)))

    def __sub__(self, other: TraceVector) -> TraceVector:
        return TraceVector(self.intervals, tuple(a - b for a, b in zip(self.traces, other.traces)))


def _as_logtrace(tr, n: int = 128) -> LogTrace:
    if isinstance(tr, LogTrace):
        return tr
    return LogTrace.fit(tr.interval, tr, n)


def _restrict(tr, iv: Interval) -> LogTrace:
    tr = _as_logtrace(tr)
    return tr if tr.interval == iv else tr.resample(iv)


def apply_H(
    u: TraceVector,
    source_intervals: Sequence[Interval] | None = None,
    target_intervals: Sequence[Interval] | None = None,
) -> TraceVector:
    """``(ℋu)_i = -½ Σ_{j≠i} H_{Δ*_j}(u_j|Δ*_j)`` restricted to the targets.

    ``source_intervals`` (``Δ*``) restrict the components first, which gives
    the restricted operator ``ℋ_{Δ*,Δ}``; the targets default to
    ``u.intervals``.  Components are returned as :class:`FunctionTrace`
    evaluating the harmonic extensions exactly.
    """
    targets = tuple(target_intervals or u.intervals)
    sources = tuple(source_intervals or u.intervals)
    if len(sources) != u.d or len(targets) != u.d:
        raise DomainError("interval counts do not match")
    for a, b in zip(sources, sources[1:]):
        if a.overlaps(b):
            raise DomainError("source intervals overlap")
    for src, tgt in zip(sources, u.intervals):
        if not (tgt.alpha <= src.alpha and src.beta <= tgt.beta):
            raise DomainError(f"source {src} is not inside {tgt}")
    pieces = [_restrict(tr, src) for tr, src in zip(u.traces, sources)]

    def component(i):
        others = [p for j, p in enumerate(pieces) if j != i]

        def fn(x):
            x = np.asarray(x, dtype=float)
            return -0.5 * sum((p.harmonic(x + 0j) for p in others), np.zeros(x.shape))

        return FunctionTrace(targets[i], fn)

    return TraceVector(targets, tuple(component(i) for i in range(u.d)))


def _harmonic_matrix(src: Interval, x: np.ndarray, n: int) -> np.ndarray:
    """``E[m, k] = Re φ_src(x_m)^k``, the harmonic extension of ``T_k``."""
    phi = conformal_frame(src, x + 0j).phi
    return np.real(phi[:, None] ** np.arange(n)[None, :])


@dataclass(frozen=True, eq=False)
class SzegoSolution:
    s: TraceVector
    a: TraceVector
    residual: float
    min_singular_value: float
    diagnostics: dict = field(default_factory=dict)

    def S(self, i: int, z):
        return eval_S(self.s, i, z)


def solve_szego_system(a: TraceVector, n: int | None = None) -> SzegoSolution:
    """Solve ``s = ℋs + a`` by Chebyshev collocation.

    Logarithmic endpoint terms of ``a_i`` are carried over to ``s_i``
    unchanged, and their harmonic extensions enter the right-hand side in
    closed form, so the unknowns are smooth on every interval.
    """
    ivs = a.intervals
    d = a.d
    for x, y in zip(ivs, ivs[1:]):
        if not x.beta < y.alpha:
            raise DomainError("the Szegő system needs intervals separated by gaps")
    traces = [_as_logtrace(t) for t in a.traces]
    n = n or max(64, max(t.n for t in traces))
    sing = [LogTrace(t.interval, np.zeros(1), t.p_left, t.p_right) for t in traces]
    sc = cheb_points(n)
    kk = np.arange(n)
    tk = np.cos(np.outer(np.arccos(sc), kk))
    mat = np.zeros((d * n, d * n))
    rhs = np.zeros(d * n)
    for i, iv in enumerate(ivs):
        rows = slice(i * n, (i + 1) * n)
        x = iv.to_global(sc)
        mat[rows, rows] = tk
        rhs[rows] = traces[i].smooth(x)
        for j, jv in enumerate(ivs):
            if j == i:
                continue
            mat[rows, j * n : (j + 1) * n] = 0.5 * _harmonic_matrix(jv, x, n)
            if sing[j].p_left or sing[j].p_right:
                rhs[rows] -= 0.5 * sing[j].harmonic(x + 0j)
    sol = np.linalg.solve(mat, rhs)
    svals = np.linalg.svd(mat, compute_uv=False)
    out = []
    for i, iv in enumerate(ivs):
        coeffs = sol[i * n : (i + 1) * n]
        out.append(LogTrace(iv, coeffs, traces[i].p_left, traces[i].p_right))
    s = TraceVector(ivs, tuple(out))
    res = fixed_point_residual(s, a)
    return SzegoSolution(s, a, res, float(svals[-1]), {"n": n, "cond": float(svals[0] / svals[-1])})


def fixed_point_residual(s: TraceVector, a: TraceVector, n: int = 97) -> float:
    """``max |s - ℋs - a|`` on interior probes; endpoint log terms cancel exactly."""
    hs = apply_H(s)
    out = 0.0
    for i, x in enumerate(s.probe(n)):
        si, ai = _as_logtrace(s.traces[i]), _as_logtrace(a.traces[i])
        diff = si.smooth(x) - ai.smooth(x) - hs(i, x)
        out = max(out, float(np.max(np.abs(diff))))
    return out


def szego_data(weights, supports: Sequence[Interval] | None = None, n: int = 64) -> TraceVector:
    """``a_i = ½ log v_{Δ_i}`` for generalized Jacobi weights on the given supports."""
    supports = tuple(supports or (w.interval for w in weights))
    return TraceVector(supports, tuple(szego_log_trace(w, sup, n) for w, sup in zip(weights, supports)))


def eval_S(s: TraceVector, i: int, z):
    """``S_i(z) = Ω_{Δ_i}(e^{s_i}, z)``; pass ``np.inf`` for ``S_i(∞)``."""
    return np.exp(_as_logtrace(s.traces[i]).log_outer(z))


def boundary_product_residual(s: TraceVector, a: TraceVector, n: int = 97) -> float:
    """``max |log(|S_{i+}|² Π_{j≠i} S_j / v_{Δ_i})|`` over interior probes.

    ``a_i = ½ log v_{Δ_i}``.  Boundary values of ``S_i`` come from the
    boundary values of the conformal map, not from evaluating the trace.
    """
    out = 0.0
    for i, x in enumerate(s.probe(n)):
        si = _as_logtrace(s.traces[i])
        lhs = 2 * np.real(si.boundary_log_outer(x, +1))
        for j in range(s.d):
            if j != i:
                lhs = lhs + np.real(_as_logtrace(s.traces[j]).log_outer(x + 0j))
        out = max(out, float(np.max(np.abs(lhs - 2 * a(i, x)))))
    return out


# {{{ the operator D


def _potential_sum(eq, skip: int):
    def fn(x):
        return sum((eq.series[k].potential(x) for k in range(eq.d) if k != skip), np.zeros(np.shape(x)))

    return fn


def apply_D(system, n, eq, u: TraceVector, precision: PrecisionConfig | None = None):
    """One application of ``𝒟_n``; also returns the polynomials ``T_{n_j}``.

    The components of ``u`` live on the hulls of the system.
    """
    precision = precision or PrecisionConfig()
    nn = tuple(int(k) for k in n)
    total = sum(nn)
    hulls = system.intervals
    polys = []
    for j, w in enumerate(system.weights):
        others = _potential_sum(eq, j)
        uj = u.traces[j]

        def theta(x, uj=uj, others=others):
            return 2 * uj(x) - total * others(x)

        polys.append(monic_orthogonal(VaryingWeight(w, theta, nn[j]), nn[j], precision))

    def component(i):
        def fn(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros(x.shape)
            for j in range(len(nn)):
                if j != i:
                    out = out + polys[j].log_abs(x) + total * eq.series[j].potential(x)
            return 0.5 * out

        return FunctionTrace(hulls[i], fn)

    return TraceVector(hulls, tuple(component(i) for i in range(len(nn)))), tuple(polys)


def _freeze(v: TraceVector, n: int = 48) -> TraceVector:
    """Sample a vector of callables on Chebyshev grids (exact data at the nodes)."""
    out = []
    for iv, tr in zip(v.intervals, v.traces):
        x = iv.cheb_nodes(n)
        vals = np.asarray(tr(x), dtype=float)
        out.append(_NodalTrace(iv, x, vals))
    return TraceVector(v.intervals, tuple(out))


@dataclass(frozen=True, eq=False)
class _NodalTrace:
    """Barycentric interpolant through first-kind Chebyshev nodes."""

    interval: Interval
    nodes: np.ndarray
    values: np.ndarray

    def __call__(self, x):
        from scipy.interpolate import BarycentricInterpolator

        return BarycentricInterpolator(self.nodes, self.values)(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class DResult:
    q: TraceVector
    residual: float
    history: list
    polys: tuple
    damped: bool


def iterate_D(
    system,
    n,
    eq,
    start: TraceVector,
    max_iter: int = 60,
    tol: float = 1e-10,
    precision: PrecisionConfig | None = None,
    probe_n: int = 64,
) -> DResult:
    """Iterate ``u ↦ 𝒟_n u`` from ``start`` until the sup-norm step is below ``tol``.

    Plain iteration is used first; once the step size stops decreasing the
    update switches to the average of consecutive iterates.
    """
    u = start
    history: list[float] = []
    damped = False
    polys = ()
    for _ in range(max_iter):
        du, polys = apply_D(system, n, eq, u, precision)
        step = du.sup_distance(u, probe_n)
        history.append(step)
        if step < tol:
            return DResult(du, step, history, polys, damped)
        if len(history) >= 3 and history[-1] > 0.9 * history[-2]:
            damped = True
        u = _freeze(_average(u, du), 96) if damped else du
    raise FixedPointError(
        f"𝒟 iteration did not reach {tol:.1e} in {max_iter} steps (last step {history[-1]:.3e})",
        history,
    )


def _average(u: TraceVector, v: TraceVector) -> TraceVector:
    tr = tuple(
        FunctionTrace(a.interval, lambda x, a=a, b=b: 0.5 * (a(x) + b(x)))
        for a, b in zip(u.traces, v.traces)
    )
    return TraceVector(u.intervals, tr)


def q_from_factors(system, n, eq, factors) -> TraceVector:
    """``q_i = ½ Σ_{j≠i}(log|P_{n,j}| + |n| V^{ω_j})`` on the hulls."""
    total = sum(int(k) for k in n)

    def component(i):
        def fn(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros(x.shape)
            for j in range(system.d):
                if j != i:
                    out = out + factors[j].log_abs(x) + total * eq.series[j].potential(x)
            return 0.5 * out

        return FunctionTrace(system.intervals[i], fn)

    return TraceVector(system.intervals, tuple(component(i) for i in range(system.d)))


def y_start(system, eq, n: int = 64) -> TraceVector:
    """``y = ℋ_{Δ_c,Δ}(s_c - s_{c,∞})`` on the hulls."""
    a = szego_data(system.weights, eq.supports, n)
    s = solve_szego_system(a).s
    means = s.means()
    centred = TraceVector(s.intervals, tuple(_as_logtrace(t) - m for t, m in zip(s.traces, means)))
    return apply_H(centred, target_intervals=system.intervals)


# }}}
