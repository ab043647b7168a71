"""Riemann-Liouville half integrals and the uniform Szegő test."""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import mpmath

from .core import DomainError, Interval, WeightSpec

_DPS = 30
_LADDER = 6
_RATIO = 0.95


class DivergenceError(ArithmeticError):
    """An integral failed the cutoff-ladder convergence test."""


class DivergenceWarning(RuntimeWarning):
    """Issued when a sentinel ``inf`` replaces a divergent integral."""


@dataclass(frozen=True, eq=False)
class LogWeightFn:
    """A real function on an interval, usually ``log μ'``.

    ``fn`` must accept mpmath numbers.  ``singular_points`` lists the interior
    points where ``fn`` may blow up (integrably or not); the interval
    endpoints are always treated as potentially singular.
    """

    fn: Callable
    interval: Interval
    singular_points: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        iv = self.interval
        pts = tuple(sorted(float(p) for p in self.singular_points))
        if any(not iv.alpha <= p <= iv.beta for p in pts):
            raise DomainError("singular points must lie in the interval")
        object.__setattr__(self, "singular_points", pts)

    def __call__(self, t):
        return self.fn(t)

    def abs(self) -> LogWeightFn:
        f = self.fn
        return LogWeightFn(lambda t: abs(f(t)), self.interval, self.singular_points)

    @classmethod
    def from_weight(cls, weight: WeightSpec) -> LogWeightFn:
        """``log μ'`` of a generalised Jacobi weight."""
        iv = weight.interval
        ga, gb = float(weight.exponent_left), float(weight.exponent_right)
        coeffs = weight.analytic_log

        def fn(t):
            out = mpmath.mpf(0)
            for c in reversed(coeffs):
                out = out * t + c
            if ga:
                out += ga * mpmath.log(t - iv.alpha)
            if gb:
                out += gb * mpmath.log(iv.beta - t)
            return out

        return cls(fn, iv)


def make_example_weight(epsilon: float) -> LogWeightFn:
    """``log μ'_ε = -θ_ε`` with ``θ_ε = x^{-1/2}(1 - log x)^{-ε}`` on ``(0, 1]``."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError("epsilon must lie in [0, 1]")
    eps = mpmath.mpf(epsilon)

    def fn(t):
        if t <= 0:
            return mpmath.mpf(0)
        return -(t ** mpmath.mpf(-0.5)) * (1 - mpmath.log(t)) ** (-eps)

    return LogWeightFn(fn, Interval(-1.0, 1.0), (0.0,))


@dataclass(frozen=True)
class _Integral:
    value: float
    divergent: bool
    increments: tuple[float, ...] = field(default=())


def _breakpoints(weight: LogWeightFn, a, b) -> list:
    pts = {a, b}
    pts.update(mpmath.mpf(p) for p in weight.singular_points if a < p < b)
    return sorted(pts)


def _singular(weight: LogWeightFn, *kernel) -> set:
    iv = weight.interval
    pts = {mpmath.mpf(p) for p in weight.singular_points}
    pts.update((mpmath.mpf(iv.alpha), mpmath.mpf(iv.beta)), kernel)
    return pts


def _ladder(f, lo, hi, at_lo: bool) -> tuple[float, ...]:
    """Integrals of ``f`` over the shells ``η_{k+1} < dist < η_k`` at one end.

    Shells thinner than the working precision can resolve are dropped.
    """
    length = hi - lo
    end = lo if at_lo else hi
    floor = mpmath.mpf(10) ** (-(mpmath.mp.dps - 3)) * max(abs(end), 1)
    eta = [length * mpmath.exp(-(2**k)) for k in range(_LADDER + 1)]
    out = []
    for k in range(_LADDER):
        if end != 0 and eta[k + 1] < floor:
            break
        if at_lo:
            out.append(mpmath.quad(f, [lo + eta[k + 1], lo + eta[k]]))
        else:
            out.append(mpmath.quad(f, [hi - eta[k], hi - eta[k + 1]]))
    return tuple(abs(float(v)) for v in out)


def _diverges(inc: Sequence[float]) -> bool:
    # shells shrink doubly exponentially, so a convergent integral has
    # rapidly decaying shell contributions
    tail = list(inc[-3:])
    if len(tail) < 3 or tail[-1] == 0.0:
        return False
    return all(b >= _RATIO * a and b > 0 for a, b in zip(tail, tail[1:]))


def _guard(f):
    # tanh-sinh nodes may round onto a singular endpoint; their weights are
    # far below the working precision, so such nodes are dropped
    def g(t):
        try:
            v = f(t)
        except ZeroDivisionError:
            return mpmath.mpf(0)
        return v if mpmath.isfinite(v) else mpmath.mpf(0)

    return g


def _integrate(f, pts: Sequence, singular: Sequence) -> _Integral:
    """Piecewise tanh-sinh quadrature with ladder checks at ``singular`` points."""
    f = _guard(f)
    total = mpmath.mpf(0)
    diverged = False
    record = ()
    for lo, hi in zip(pts, pts[1:]):
        if hi <= lo:
            continue
        for at_lo in (True, False):
            if (lo if at_lo else hi) not in singular:
                continue
            inc = _ladder(f, lo, hi, at_lo)
            if _diverges(inc):
                diverged, record = True, inc
        if not diverged:
            total += mpmath.quad(f, [lo, hi])
    return _Integral(math.inf if diverged else float(total), diverged, record)


def frac_integral(theta: LogWeightFn, gamma: float, x: float) -> float:
    """``(I_γ θ)(x) = π^{-1/2} ∫_γ^x θ(t) |x - t|^{-1/2} dt``."""
    iv = theta.interval
    if not (iv.contains(gamma) and iv.contains(x)):
        raise DomainError("gamma and x must lie in the interval")
    if gamma == x:
        return 0.0
    with mpmath.workdps(_DPS):
        g, xm = mpmath.mpf(gamma), mpmath.mpf(x)
        lo, hi = min(g, xm), max(g, xm)
        res = _integrate(
            lambda t: theta(t) / mpmath.sqrt(abs(xm - t)),
            _breakpoints(theta, lo, hi),
            _singular(theta, xm),
        )
        if res.divergent:
            raise DivergenceError(f"half integral diverges near the path [{gamma}, {x}]")
        sign = 1.0 if x > gamma else -1.0
        return sign * res.value / math.sqrt(math.pi)


def usz_endpoint_integral(weight: LogWeightFn, a: float, b: float, side: str) -> float:
    """``∫_a^b |log μ'(t)| (t-a)^{-1/2} dt`` (left) or with ``(b-t)^{-1/2}`` (right).

    Returns ``inf`` with a :class:`DivergenceWarning` when the integral fails
    the convergence test.
    """
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    iv = weight.interval
    if not (iv.alpha <= a <= b <= iv.beta):
        raise DomainError("window must lie inside the weight's interval")
    if a == b:
        return 0.0
    with mpmath.workdps(_DPS):
        am, bm = mpmath.mpf(a), mpmath.mpf(b)
        if side == "left":
            f, k = (lambda t: abs(weight(t)) / mpmath.sqrt(t - am)), am  # noqa: E731
        else:
            f, k = (lambda t: abs(weight(t)) / mpmath.sqrt(bm - t)), bm  # noqa: E731
        res = _integrate(f, _breakpoints(weight, am, bm), _singular(weight, k))
    if res.divergent:
        warnings.warn(
            f"endpoint integral on [{a}, {b}] diverges; shell increments {res.increments}",
            DivergenceWarning,
            stacklevel=2,
        )
    return res.value


@dataclass(frozen=True)
class SzegoIntegral:
    value: float
    divergent: bool
    increments: tuple[float, ...]


def szego_integral(weight: LogWeightFn, interval: Interval | None = None) -> SzegoIntegral:
    """``(1/π) ∫_Δ |log μ'| / sqrt((x-α)(β-x)) dx``; finite iff ``μ ∈ Sz(Δ)``."""
    iv = interval or weight.interval
    if not (weight.interval.alpha <= iv.alpha < iv.beta <= weight.interval.beta):
        raise DomainError("interval must lie inside the weight's interval")
    with mpmath.workdps(_DPS):
        a, b = mpmath.mpf(iv.alpha), mpmath.mpf(iv.beta)
        f = lambda t: abs(weight(t)) / mpmath.sqrt((t - a) * (b - t))  # noqa: E731
        res = _integrate(f, _breakpoints(weight, a, b), _singular(weight, a, b))
    return SzegoIntegral(res.value / math.pi, res.divergent, res.increments)


@dataclass(frozen=True)
class UszVerdict:
    """Outcome of the shrinking-window test at one endpoint.

    ``worst[j]`` is the largest scaled window integral at radius
    ``exp(-2^{m_j})`` with ``m_j = levels[j]``; ``passed`` holds iff each
    threshold ``2^{-k}`` is beaten at some radius.
    """

    passed: bool
    endpoint: float
    side: str
    levels: tuple[int, ...]
    worst: tuple[float, ...]
    thresholds: tuple[float, ...]


_B_OFFSETS = (-0.5, 0.0, 2.0**-8, 2.0**-4, 0.25, 1.0)


def usz_verdict(
    weight: LogWeightFn,
    endpoint: float,
    side: str,
    max_m: int = 12,
    max_k: int = 3,
) -> UszVerdict:
    """Numerical test of the endpoint window criterion at one endpoint.

    ``side='right'`` tests a right endpoint ``β`` with the ``(b-t)^{-1/2}``
    form and ``side='left'`` a left endpoint ``α`` with ``(t-a)^{-1/2}``.
    Windows lie in ``[e - d_m, e + d_m]`` clipped to the weight's interval,
    with ``d_m = exp(-2^m)``.  Radii below the resolution of the working
    precision at ``e`` are skipped.
    """
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    iv = weight.interval
    resolution = 10.0 ** (-(_DPS - 5)) * max(1.0, abs(endpoint))
    levels, worst = [], []
    for m in range(1, max_m + 1):
        d = mpmath.exp(-(2**m))
        if endpoint != 0.0 and d < resolution:
            break
        lo = max(mpmath.mpf(endpoint) - d, mpmath.mpf(iv.alpha))
        hi = min(mpmath.mpf(endpoint) + d, mpmath.mpf(iv.beta))
        vals = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DivergenceWarning)
            for off in _B_OFFSETS:
                if side == "right":
                    t = mpmath.mpf(endpoint) + off * d
                    if lo < t <= hi:
                        vals.append(_endpoint_mp(weight, lo, t, "right"))
                else:
                    u = mpmath.mpf(endpoint) - off * d
                    if lo <= u < hi:
                        vals.append(_endpoint_mp(weight, u, hi, "left"))
        levels.append(m)
        worst.append(max(vals, default=0.0) / math.pi)
    thresholds = tuple(2.0**-k for k in range(1, max_k + 1))
    passed = bool(worst) and all(any(w < eps for w in worst) for eps in thresholds)
    return UszVerdict(passed, float(endpoint), side, tuple(levels), tuple(worst), thresholds)


def _endpoint_mp(weight: LogWeightFn, a, b, side: str) -> float:
    with mpmath.workdps(_DPS):
        if side == "left":
            f, k = (lambda t: abs(weight(t)) / mpmath.sqrt(t - a)), a  # noqa: E731
        else:
            f, k = (lambda t: abs(weight(t)) / mpmath.sqrt(b - t)), b  # noqa: E731
        res = _integrate(f, _breakpoints(weight, a, b), _singular(weight, k))
    return res.value


def continuity_gap(
    weight: LogWeightFn, gamma: float, x0: float, deltas: Sequence[float]
) -> tuple[float, ...]:
    """``|(I_γ|log μ'|)(x0 ± δ) - (I_γ|log μ'|)(x0)|`` for each ``δ``.

    A cross-check of the continuity form of the uniform Szegő condition.
    """
    th = weight.abs()
    iv = weight.interval
    base = frac_integral(th, gamma, x0)
    out = []
    for dlt in deltas:
        gaps = [
            abs(frac_integral(th, gamma, x) - base)
            for x in (x0 - dlt, x0 + dlt)
            if iv.contains(x)
        ]
        out.append(max(gaps, default=0.0))
    return tuple(out)
