"""Analytic objects attached to a single interval.

The conventions follow the usual potential-theory normalisation: the
logarithmic potential of a measure ``ω`` is ``V(z) = -∫ log|z - x| dω(x)``,
``w(z) = sqrt((z - α)(z - β))`` is the branch with ``w(z) ~ z`` at infinity, and
``φ(z) = (2/(β - α)) (z - (β + α)/2 - w(z))`` maps the complement of the
interval onto the unit disk with ``φ(∞) = 0`` and ``φ(β) = 1``.

Smooth functions on an interval are stored through their Chebyshev
coefficients in the local variable ``s = (x - center)/radius``.  With
``s = cos t`` the arcsine measure becomes ``dt/π``, which turns potentials,
harmonic extensions and outer functions into explicit series in ``φ``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import gmpy2
import numpy as np

from .hp import to_mpc, to_mpfr, working_precision
from .quadrature import cheb_coeffs, cheb_eval, cheb_points

LOG2 = math.log(2.0)


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


def _as_fraction(x: object) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


# {{{ interval and weights


@dataclass(frozen=True)
class Interval:
    """A compact real interval ``[alpha, beta]``."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("interval endpoints must be finite")
        if not self.alpha < self.beta:
            raise DomainError(f"need alpha < beta, got [{self.alpha}, {self.beta}]")

    @property
    def center(self) -> float:
        return 0.5 * (self.alpha + self.beta)

    @property
    def radius(self) -> float:
        return 0.5 * (self.beta - self.alpha)

    @property
    def length(self) -> float:
        return self.beta - self.alpha

    def to_local(self, x):
        return (np.asarray(x) - self.center) / self.radius

    def to_global(self, s):
        return self.center + self.radius * np.asarray(s)

    def cheb_nodes(self, n: int) -> np.ndarray:
        return self.to_global(cheb_points(n))

    def contains(self, x: float, collar: float = 0.0) -> bool:
        return self.alpha - collar <= x <= self.beta + collar

    def overlaps(self, other: Interval) -> bool:
        """True when the interiors intersect."""
        return self.alpha < other.beta and other.alpha < self.beta

    def __str__(self) -> str:
        return f"[{self.alpha:g}, {self.beta:g}]"


@dataclass(frozen=True)
class WeightSpec:
    r"""Generalised Jacobi weight
    :math:`\mu'(x) = (x-\alpha)^{\gamma_a} (\beta-x)^{\gamma_b} e^{A(x)}`.

    ``analytic_log`` holds the monomial coefficients of ``A`` in ascending order.
    """

    interval: Interval
    exponent_left: Fraction = Fraction(0)
    exponent_right: Fraction = Fraction(0)
    analytic_log: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        ga = _as_fraction(self.exponent_left)
        gb = _as_fraction(self.exponent_right)
        if ga <= -1 or gb <= -1:
            raise DomainError("endpoint exponents must exceed -1")
        object.__setattr__(self, "exponent_left", ga)
        object.__setattr__(self, "exponent_right", gb)
        object.__setattr__(
            self, "analytic_log", tuple(float(a) for a in self.analytic_log)
        )

    @classmethod
    def uniform(cls, interval: Interval) -> WeightSpec:
        return cls(interval)

    @classmethod
    def chebyshev(cls, interval: Interval) -> WeightSpec:
        """``1/(π sqrt((x-α)(β-x)))``, the arcsine density."""
        h = Fraction(-1, 2)
        return cls(interval, h, h, (-math.log(math.pi),))

    @classmethod
    def jacobi(cls, interval: Interval, ga, gb, analytic_log=()) -> WeightSpec:
        return cls(interval, ga, gb, tuple(analytic_log))

    def reflected(self) -> WeightSpec:
        """The weight ``x ↦ μ'(-x)`` on the mirrored interval."""
        iv = Interval(-self.interval.beta, -self.interval.alpha)
        a = tuple(c * (-1) ** k for k, c in enumerate(self.analytic_log))
        return WeightSpec(iv, self.exponent_right, self.exponent_left, a)

    def A(self, x):
        x = np.asarray(x, dtype=float)
        if not self.analytic_log:
            return np.zeros_like(x)
        return np.polynomial.polynomial.polyval(x, self.analytic_log)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        iv = self.interval
        out = self.A(x)
        with np.errstate(divide="ignore"):
            if self.exponent_left:
                out = out + float(self.exponent_left) * np.log(x - iv.alpha)
            if self.exponent_right:
                out = out + float(self.exponent_right) * np.log(iv.beta - x)
        return out

    def density(self, x):
        return np.exp(self.log_density(x))

    def A_mp(self, x):
        """``A(x)`` in the ambient gmpy2 precision."""
        acc = gmpy2.mpfr(0)
        for c in reversed(self.analytic_log):
            acc = acc * x + gmpy2.mpfr(c)
        return acc


@dataclass(frozen=True)
class PrecisionConfig:
    """Extended-precision settings shared by the polynomial solvers."""

    mantissa_bits: int = 256
    quadrature_order: int = 0
    """Gauss-Jacobi order; ``0`` selects ``max(4n, 32)`` automatically."""
    solve_residual_tol: float = 1e-20

    def __post_init__(self) -> None:
        if self.mantissa_bits < 64:
            raise DomainError("mantissa_bits must be at least 64")
        if self.solve_residual_tol <= 0:
            raise DomainError("solve_residual_tol must be positive")

    def order_for(self, n: int) -> int:
        return self.quadrature_order or max(4 * n, 32)


# }}}


# {{{ conformal frame


class Frame(NamedTuple):
    phi: complex
    w: complex


def _is_infinite(z) -> bool:
    return np.isscalar(z) and not np.isfinite(complex(z))


def conformal_frame(interval: Interval, z):
    """Return ``(phi, w)`` at ``z`` (scalar or array) off the interval.

    Evaluation goes through the closed upper half-plane and conjugates for
    ``Im z < 0``, so conjugate symmetry holds exactly.
    """
    if _is_infinite(z):
        return Frame(0j, complex("inf"))
    zz = np.asarray(z, dtype=complex)
    xi = (zz - interval.center) / interval.radius
    on = (xi.imag == 0) & (np.abs(xi.real) <= 1)
    if np.any(on):
        raise DomainError("conformal_frame is undefined on the interval itself")
    lower = xi.imag < 0
    xu = np.where(lower, np.conj(xi), xi)
    root = np.sqrt(xu - 1) * np.sqrt(xu + 1)
    phi = 1.0 / (xu + root)
    phi = np.where(lower, np.conj(phi), phi)
    root = np.where(lower, np.conj(root), root)
    w = interval.radius * root
    if np.ndim(z) == 0:
        return Frame(complex(phi), complex(w))
    return Frame(phi, w)


def conformal_frame_mp(interval: Interval, z, bits: int = 256) -> Frame:
    """Extended-precision variant of :func:`conformal_frame` (gmpy2 ``mpc``)."""
    with working_precision(bits):
        zz = to_mpc(z)
        c = to_mpfr(interval.center)
        r = to_mpfr(interval.radius)
        xi = (zz - c) / r
        if xi.imag == 0 and abs(xi.real) <= 1:
            raise DomainError("conformal_frame is undefined on the interval itself")
        lower = xi.imag < 0
        xu = xi.conjugate() if lower else xi
        root = gmpy2.sqrt(xu - 1) * gmpy2.sqrt(xu + 1)
        phi = 1 / (xu + root)
        if lower:
            phi, root = phi.conjugate(), root.conjugate()
        return Frame(phi, r * root)


def inverse_frame(interval: Interval, phi):
    """Joukowski-type inverse: the point ``z`` with ``conformal_frame(z).phi == phi``."""
    return interval.center + interval.radius * (phi + 1 / phi) / 2


def boundary_phi(interval: Interval, x, side: int = 1):
    """Boundary values ``φ_±(x)`` for ``x`` inside the interval (``side=±1``)."""
    s = np.clip(interval.to_local(x), -1.0, 1.0)
    return s - 1j * side * np.sqrt(1 - s * s)


# }}}


# {{{ functions with logarithmic endpoint behaviour


@dataclass(frozen=True, eq=False)
class LogTrace:
    r"""A real function on an interval of the form

    .. math::

        u(x) = p \log(x - \alpha) + q \log(\beta - x) + \sum_k b_k T_k(s),

    with ``s`` the local variable.  It carries exact formulas for the mean
    against the arcsine measure, the harmonic extension ``H_Δ u`` and the outer
    function ``Ω_Δ(e^u, ·)``.
    """

    interval: Interval
    coeffs: np.ndarray
    p_left: float = 0.0
    p_right: float = 0.0

    @classmethod
    def fit(
        cls,
        interval: Interval,
        fn: Callable[[np.ndarray], np.ndarray],
        n: int = 64,
        p_left: float = 0.0,
        p_right: float = 0.0,
    ) -> LogTrace:
        """Interpolate ``fn`` at ``n`` Chebyshev points after removing the log terms."""
        x = interval.cheb_nodes(n)
        vals = np.asarray(fn(x), dtype=float) * np.ones(n)
        if not np.all(np.isfinite(vals)):
            raise DomainError("function is not finite on the interval interior")
        vals = vals - p_left * np.log(x - interval.alpha) - p_right * np.log(
            interval.beta - x
        )
        return cls(interval, cheb_coeffs(vals), float(p_left), float(p_right))

    @classmethod
    def constant(cls, interval: Interval, value: float, n: int = 16) -> LogTrace:
        coeffs = np.zeros(n)
        coeffs[0] = value
        return cls(interval, coeffs)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def tail(self) -> float:
        """Size of the last three coefficients, a proxy for truncation error."""
        return float(np.max(np.abs(self.coeffs[-3:])))

    @property
    def is_smooth(self) -> bool:
        return self.p_left == 0.0 and self.p_right == 0.0

    def smooth(self, x):
        return cheb_eval(self.coeffs, self.interval.to_local(x))

    def __call__(self, x):
        iv = self.interval
        out = self.smooth(x)
        if self.p_left:
            out = out + self.p_left * np.log(np.asarray(x) - iv.alpha)
        if self.p_right:
            out = out + self.p_right * np.log(iv.beta - np.asarray(x))
        return out

    def nodes(self) -> np.ndarray:
        return self.interval.cheb_nodes(self.n)

    def mean(self) -> float:
        """``∫ u dω_Δ`` (uses ``∫ log(1 ± s) dω = -log 2``)."""
        logr = math.log(self.interval.radius)
        return float(self.coeffs[0] + (self.p_left + self.p_right) * (logr - LOG2))

    def _log_outer_from_phi(self, phi):
        logr = math.log(self.interval.radius)
        out = np.polynomial.polynomial.polyval(phi, self.coeffs.astype(complex))
        out = out + (self.p_left + self.p_right) * logr
        if self.p_left:
            out = out + self.p_left * (2 * np.log(1 + phi) - LOG2)
        if self.p_right:
            out = out + self.p_right * (2 * np.log(1 - phi) - LOG2)
        return out

    def log_outer(self, z):
        """``log Ω_Δ(e^u, z)``; holomorphic off the interval, real at real points."""
        if _is_infinite(z):
            return complex(self.mean())
        return self._log_outer_from_phi(conformal_frame(self.interval, z).phi)

    def outer(self, z):
        return np.exp(self.log_outer(z))

    def boundary_log_outer(self, x, side: int = 1):
        """Boundary values of ``log Ω`` from the upper (``+1``) or lower side."""
        return self._log_outer_from_phi(boundary_phi(self.interval, x, side))

    def harmonic(self, z):
        """``(H_Δ u)(z)``; returns ``u(x)`` for real points of the interval."""
        if _is_infinite(z):
            return self.mean()
        zz = np.asarray(z, dtype=complex)
        xi = (zz - self.interval.center) / self.interval.radius
        on = (xi.imag == 0) & (np.abs(xi.real) <= 1)
        if not np.any(on):
            return np.real(self.log_outer(z))
        out = np.empty(zz.shape, dtype=float)
        out[on] = self(zz.real[on])
        if np.any(~on):
            out[~on] = np.real(self.log_outer(zz[~on]))
        return out if np.ndim(z) else float(out)

    def resample(self, interval: Interval, n: int | None = None) -> LogTrace:
        """Restrict (or re-interpolate) onto ``interval ⊆ self.interval``.

        Logarithmic terms whose endpoint survives the restriction are kept
        exactly; the others become smooth and are absorbed by interpolation.
        """
        n = n or self.n
        own = self.interval
        p = self.p_left if interval.alpha == own.alpha else 0.0
        q = self.p_right if interval.beta == own.beta else 0.0
        return LogTrace.fit(interval, self, n, p, q)

    def __add__(self, other: LogTrace | float) -> LogTrace:
        if not isinstance(other, LogTrace):
            coeffs = self.coeffs.copy()
            coeffs[0] += float(other)
            return LogTrace(self.interval, coeffs, self.p_left, self.p_right)
        if other.interval != self.interval:
            raise DomainError("cannot add traces on different intervals")
        n = max(self.n, other.n)
        coeffs = np.zeros(n)
        coeffs[: self.n] += self.coeffs
        coeffs[: other.n] += other.coeffs
        return LogTrace(
            self.interval,
            coeffs,
            self.p_left + other.p_left,
            self.p_right + other.p_right,
        )

    def __sub__(self, other: LogTrace | float) -> LogTrace:
        return self + (-1.0) * other if isinstance(other, LogTrace) else self + (-other)

    def __rmul__(self, k: float) -> LogTrace:
        return LogTrace(
            self.interval, k * self.coeffs, k * self.p_left, k * self.p_right
        )


# }}}


# {{{ densities


@dataclass(frozen=True, eq=False)
class ArcsineSeries:
    r"""Density ``f(s) / (π r sqrt(1 - s^2))`` with ``f = Σ a_k T_k``.

    Hard edges correspond to ``f(±1) ≠ 0``; a soft (square-root) edge is a
    zero of ``f`` at that endpoint.  Potentials, Cauchy transforms and the
    distribution function are evaluated by exact series formulas.
    """

    interval: Interval
    coeffs: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.coeffs[0])

    def f(self, x):
        return cheb_eval(self.coeffs, self.interval.to_local(x))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        s = self.interval.to_local(x)
        inside = np.abs(s) < 1
        out = np.zeros_like(s)
        si = s[inside] if out.ndim else s
        val = cheb_eval(self.coeffs, si) / (
            math.pi * self.interval.radius * np.sqrt(1 - si * si)
        )
        if out.ndim:
            out[inside] = val
            return out
        return float(val) if inside else 0.0

    def endpoint_value(self, side: int) -> float:
        """``f(+1)`` for ``side=+1`` and ``f(-1)`` for ``side=-1``."""
        k = np.arange(self.coeffs.size)
        return float(np.sum(self.coeffs * float(side) ** k))

    def _series_weights(self) -> np.ndarray:
        k = np.arange(1, self.coeffs.size)
        return self.coeffs[1:] / k

    def potential(self, z):
        """``V(z) = -∫ log|z - x| dω(x)`` for real or complex ``z``."""
        zz = np.asarray(z, dtype=complex)
        iv = self.interval
        xi = (zz - iv.center) / iv.radius
        on = (xi.imag == 0) & (np.abs(xi.real) <= 1)
        out = np.empty(zz.shape, dtype=float)
        a0 = self.coeffs[0]
        logr = math.log(iv.radius)
        ak = self._series_weights()
        if np.any(on):
            s = xi.real[on]
            tk = np.polynomial.chebyshev.chebval(s, np.concatenate([[0.0], ak]))
            out[on] = a0 * (LOG2 - logr) + tk
        if np.any(~on):
            phi = conformal_frame(iv, zz[~on]).phi
            ser = np.polynomial.polynomial.polyval(
                phi, np.concatenate([[0.0], ak]).astype(complex)
            )
            out[~on] = a0 * (LOG2 + np.log(np.abs(phi)) - logr) + ser.real
        return out if np.ndim(z) else float(out)

    def complex_log_potential(self, z):
        """``∫ log(z - x) dω(x)`` with the principal branch, ``z`` off the support."""
        iv = self.interval
        phi = np.asarray(conformal_frame(iv, z).phi)
        ak = self._series_weights()
        ser = np.polynomial.polynomial.polyval(
            phi, np.concatenate([[0.0], ak]).astype(complex)
        )
        a0 = self.coeffs[0]
        u = 1 / phi
        # principal branch with the cut approached from above (signed zeros aside)
        arg = np.where((u.imag == 0) & (u.real < 0), math.pi, np.angle(u))
        logu = np.log(np.abs(u)) + 1j * arg
        out = a0 * (math.log(iv.radius) - LOG2 + logu) - ser
        return out if np.ndim(z) else complex(out)

    def cauchy(self, z):
        """``h(z) = ∫ dω(t)/(t - z)`` off the support (finite at soft edges)."""
        iv = self.interval
        fr = conformal_frame(iv, z)
        phi = np.asarray(fr.phi)
        root = np.asarray(fr.w) / iv.radius
        ser = np.polynomial.polynomial.polyval(phi, self.coeffs.astype(complex))
        out = -ser / (iv.radius * root)
        return out if np.ndim(z) else complex(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        iv = self.interval
        # θ = arccos(s) from the distance to β, exact at the right endpoint
        u = np.clip((iv.beta - x) / iv.radius, 0.0, 2.0)
        theta = 2 * np.arcsin(np.sqrt(u / 2))
        k = np.arange(1, self.coeffs.size)
        sines = np.sin(np.multiply.outer(theta, k)) @ (self.coeffs[1:] / k)
        return (self.coeffs[0] * (math.pi - theta) - sines) / math.pi

    def grid(self, n: int = 64) -> GridDensity:
        iv = self.interval
        s = cheb_points(n)
        x = iv.to_global(s)
        vals = self.density(x)
        weights = math.pi * iv.radius * np.sqrt(1 - s * s) / n
        return GridDensity(iv, x, vals, weights, self.mass, series=self)


@dataclass(frozen=True, eq=False)
class GridDensity:
    """A density sampled on a quadrature grid over an interval."""

    interval: Interval
    nodes: np.ndarray
    values: np.ndarray
    quad_weights: np.ndarray
    mass: float
    series: ArcsineSeries | None = field(default=None, repr=False)
    tol: float = 1e-10

    def __post_init__(self) -> None:
        n = len(self.nodes)
        if not (len(self.values) == len(self.quad_weights) == n):
            raise DomainError("nodes, values and weights must have equal length")
        if np.any(np.diff(self.nodes) <= 0):
            raise DomainError("nodes must be strictly ascending")
        if np.any(self.quad_weights <= 0):
            raise DomainError("quadrature weights must be positive")
        scale = max(1.0, float(np.max(np.abs(self.values))))
        if np.any(self.values < -self.tol * scale):
            raise DomainError("density values must be nonnegative")
        total = float(np.dot(self.values, self.quad_weights))
        if abs(total - self.mass) > max(self.tol, 1e-8 * abs(self.mass)):
            raise DomainError(f"quadrature mass {total} disagrees with {self.mass}")


def arcsine_density(interval: Interval, n: int = 64, mass: float = 1.0) -> GridDensity:
    """Equilibrium (arcsine) measure of ``interval`` scaled to ``mass``."""
    return ArcsineSeries(interval, np.array([float(mass)])).grid(n)


def _panel_log_integrals(a, b, z):
    """``∫_a^b log(z - x) dx`` and ``∫_a^b x log(z - x) dx`` (complex, elementwise)."""

    def xlogx(u):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u == 0, 0.0, u * np.log(u))

    def u2logu(u):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u == 0, 0.0, u * u * np.log(u))

    ua, ub = z - a, z - b
    i0 = (xlogx(ua) - ua) - (xlogx(ub) - ub)
    # ∫ x log(z-x) dx with x = z - u:  z*I0 - ∫ u log u (-du)
    j = (u2logu(ua) / 2 - ua * ua / 4) - (u2logu(ub) / 2 - ub * ub / 4)
    return i0, z * i0 - j


def log_potential(density: GridDensity, z):
    """``-∫ log|z - x| dω(x)`` for a grid density.

    Densities built from an :class:`ArcsineSeries` are integrated exactly.
    Otherwise the density is treated as piecewise linear between nodes and the
    logarithmic kernel is integrated analytically on every panel, which stays
    accurate for ``z`` on the support.
    """
    if density.series is not None:
        return density.series.potential(z)
    zz = np.asarray(z, dtype=complex)
    x = density.nodes
    v = density.values
    slope = np.diff(v) / np.diff(x)
    icpt = v[:-1] - slope * x[:-1]
    i0, i1 = _panel_log_integrals(x[:-1], x[1:], zz[..., None] + 0j)
    out = -np.real(np.sum(icpt * i0 + slope * i1, axis=-1))
    return out if np.ndim(z) else float(out)


# }}}


# {{{ outer and Szegő functions


def outer_omega(
    f_log: Callable[[np.ndarray], np.ndarray],
    interval: Interval,
    z,
    n: int = 256,
    endpoint_exponents: tuple[float, float] = (0.0, 0.0),
):
    """``Ω_Δ(f, z) = exp(w(z) ∫ log f(x) dω_Δ(x)/(z - x))``.

    ``f_log`` returns ``log f``.  Known endpoint behaviour
    ``log f ~ p log(x-α) + q log(β-x)`` may be declared through
    ``endpoint_exponents = (p, q)``; it is then handled in closed form.
    Pass ``z = np.inf`` for the value at infinity.
    """
    p, q = endpoint_exponents
    trace = LogTrace.fit(interval, f_log, n, p, q)
    return np.exp(trace.log_outer(z))


def szego_log_trace(
    weight: WeightSpec,
    support: Interval | None = None,
    n: int = 64,
    h: Callable[[np.ndarray], np.ndarray] | None = None,
    tol: float = 1e-14,
) -> LogTrace:
    """``½ log(v_Δ e^h)`` on ``support`` with ``v_Δ = π μ' sqrt((x-a)(b-x))``."""
    iv = weight.interval
    sup = support or iv
    if not (iv.alpha <= sup.alpha and sup.beta <= iv.beta):
        raise DomainError(f"support {sup} is not inside the weight interval {iv}")
    ga, gb = float(weight.exponent_left), float(weight.exponent_right)
    left_merged = sup.alpha == iv.alpha
    right_merged = sup.beta == iv.beta
    p = 0.5 * (0.5 + (ga if left_merged else 0.0))
    q = 0.5 * (0.5 + (gb if right_merged else 0.0))

    def smooth(x):
        out = math.log(math.pi) + weight.A(x)
        if not left_merged and ga:
            out = out + ga * np.log(x - iv.alpha)
        if not right_merged and gb:
            out = out + gb * np.log(iv.beta - x)
        if h is not None:
            out = out + h(x)
        return 0.5 * out

    m = n
    while True:
        trace = LogTrace.fit(sup, smooth, m)
        if trace.tail <= tol * max(1.0, float(np.max(np.abs(trace.coeffs)))) or m >= 2048:
            break
        m *= 2
    return LogTrace(sup, trace.coeffs, p, q)


def szego_G(
    weight: WeightSpec,
    interval: Interval | None = None,
    z=np.inf,
    h: Callable[[np.ndarray], np.ndarray] | None = None,
    n: int = 64,
):
    """Szegő function ``G(e^h μ_{|Δ}, z) = Ω_Δ(sqrt(v_Δ e^h), z)``."""
    return np.exp(szego_log_trace(weight, interval, n, h).log_outer(z))


def dirichlet_extend(
    u: Callable[[np.ndarray], np.ndarray], interval: Interval, z, n: int = 128
):
    """Bounded harmonic extension ``(H_Δ u)(z) = log|Ω_Δ(e^u, z)|``."""
    return LogTrace.fit(interval, u, n).harmonic(z)


# }}}
