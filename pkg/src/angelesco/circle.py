"""Orthogonality on the unit circle and the Joukowski bridge to an interval."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import mpmath
import numpy as np

from .core import DomainError, Interval, WeightSpec, conformal_frame, szego_G
from .hp import PrecisionError
from .op import MonicPoly, VaryingWeight, monic_orthogonal, norm_squared

_DPS = 40


def _angles(m: int) -> np.ndarray:
    """Midpoint grid; avoids ``ξ = ±1`` where interval weights may vanish."""
    return 2 * np.pi * (np.arange(m) + 0.5) / m


# {{{ measures and disk functions


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """``dσ = υ dm`` on the unit circle, described by ``log υ`` as a function of angle.

    ``log_coeffs[k]`` holds ``∫ ξ^{-k} log υ dm`` for ``k = 0..fourier_order``;
    it is computed by FFT unless supplied.
    """

    density_log: Callable[[np.ndarray], np.ndarray]
    fourier_order: int = 256
    log_coeffs: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.fourier_order < 1:
            raise DomainError("fourier_order must be positive")
        if self.log_coeffs is None:
            object.__setattr__(self, "log_coeffs", _fourier(self.density_log, self.fourier_order))
        else:
            c = np.asarray(self.log_coeffs, dtype=complex)
            object.__setattr__(self, "log_coeffs", c[: self.fourier_order + 1])

    @classmethod
    def lebesgue(cls) -> CircleMeasure:
        return cls(lambda t: np.zeros_like(np.asarray(t, dtype=float)), 8)

    @classmethod
    def from_fourier(cls, coeffs: Sequence[complex]) -> CircleMeasure:
        """``log υ = Σ_k ĉ_k ξ^k`` with ``ĉ_{-k} = conj(ĉ_k)``."""
        c = np.asarray(coeffs, dtype=complex)
        k = np.arange(len(c))

        def density_log(t):
            t = np.asarray(t, dtype=float)
            e = np.exp(1j * np.multiply.outer(t, k[1:]))
            return c[0].real + 2 * np.real(e @ c[1:])

        return cls(density_log, max(len(c) - 1, 1), c)

    @classmethod
    def from_interval_weight(
        cls,
        weight: WeightSpec,
        h: Callable[[np.ndarray], np.ndarray] | None = None,
        order: int = 512,
    ) -> CircleMeasure:
        """Image of ``e^h μ`` under the Joukowski map of the weight's interval.

        The density is ``υ(ξ) = v(J(ξ)) e^{h(J(ξ))}`` where ``v`` is the
        derivative of ``μ`` with respect to the arcsine distribution.  The
        logarithmic endpoint singularities are expanded in closed form.
        """
        iv = weight.interval
        c, r = iv.center, iv.radius
        p = float(weight.exponent_left) + 0.5
        q = float(weight.exponent_right) + 0.5

        def smooth(t):
            x = c + r * np.cos(t)
            out = math.log(math.pi) + weight.A(x)
            return out + (h(x) if h is not None else 0.0)

        def density_log(t):
            t = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore"):
                return (
                    smooth(t)
                    + p * np.log(r * (1 + np.cos(t)))
                    + q * np.log(r * (1 - np.cos(t)))
                )

        coeffs = _fourier(smooth, order)
        k = np.arange(1, order + 1)
        # log(1 - cos t) = log|1 - ξ|² - log 2 and log|1 - ξ|² = -Σ_{k≠0} ξ^k/|k|
        coeffs[0] += (p + q) * (math.log(r) - math.log(2.0))
        coeffs[1:] += -q / k - p * (-1.0) ** k / k
        return cls(density_log, order, coeffs)

    def tilted(self, g: Callable[[np.ndarray], np.ndarray] | None) -> CircleMeasure:
        """The measure ``e^g σ``."""
        if g is None:
            return self
        base = self.density_log
        return CircleMeasure(
            lambda t: base(t) + g(t),
            self.fourier_order,
            self.log_coeffs + _fourier(g, self.fourier_order),
        )

    def density(self, t) -> np.ndarray:
        return np.exp(self.density_log(t))

    def mass(self, m: int = 4096) -> float:
        return float(np.mean(self.density(_angles(m))))


def _fourier(f: Callable, order: int) -> np.ndarray:
    m = 4 * order
    t = _angles(m)
    vals = np.asarray(f(t), dtype=float) * np.ones(m)
    k = np.arange(order + 1)
    return (np.exp(-1j * np.outer(k, t)) @ vals) / m


@dataclass(frozen=True)
class DiskValues:
    D: complex
    F: complex


def _log_D(sigma: CircleMeasure, z: complex) -> complex:
    c = sigma.log_coeffs
    if abs(z) < 1:
        return 0.5 * c[0] + np.polynomial.polynomial.polyval(z, np.r_[0, c[1:]])
    w = 1 / z
    return -(0.5 * c[0] + np.polynomial.polynomial.polyval(w, np.r_[0, np.conj(c[1:])]))


def disk_functions(sigma: CircleMeasure, z: complex, nodes: int = 4096) -> DiskValues:
    """Szegő function ``D(σ, z)`` and Caratheodory function ``F(σ, z)``."""
    z = complex(z)
    if abs(abs(z) - 1) < 1e-14:
        raise DomainError("disk functions are not defined on the unit circle")
    t = _angles(nodes)
    xi = np.exp(1j * t)
    F = complex(np.mean((xi + z) / (xi - z) * sigma.density(t)))
    return DiskValues(complex(np.exp(_log_D(sigma, z))), F)


# }}}


# {{{ Blaschke data


def _conjugate_closed(points: Sequence[complex], tol: float = 1e-12) -> bool:
    """Whether the multiset is invariant under conjugation, matched greedily."""
    pool = [complex(p) for p in points]
    for p in list(pool):
        if p not in pool:
            continue
        pool.remove(p)
        if abs(p.imag) <= tol * max(1.0, abs(p)):
            continue
        dist = [abs(q - p.conjugate()) for q in pool]
        if not dist or min(dist) > tol * max(1.0, abs(p)):
            return False
        pool.pop(int(np.argmin(dist)))
    return True


@dataclass(frozen=True)
class BlaschkeData:
    """Zeros ``b_j`` of ``W_n``, all in the open unit disk."""

    zeros: tuple[complex, ...]

    def __post_init__(self) -> None:
        zs = tuple(complex(b) for b in self.zeros)
        if any(abs(b) >= 1 for b in zs):
            raise DomainError("zeros of W_n must lie in the open unit disk")
        object.__setattr__(self, "zeros", zs)

    @classmethod
    def trivial(cls, n: int) -> BlaschkeData:
        return cls((0j,) * n)

    @property
    def n(self) -> int:
        return len(self.zeros)

    @property
    def deficiency(self) -> float:
        """``Σ (1 - |b_j|)``."""
        return float(sum(1 - abs(b) for b in self.zeros))

    @property
    def conjugate_closed(self) -> bool:
        return _conjugate_closed(self.zeros)

    def W(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for b in self.zeros:
            out = out * (z - b)
        return out

    def W_star(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for b in self.zeros:
            out = out * (1 - np.conj(b) * z)
        return out

    def blaschke_ratio(self, z):
        """``|W_n(z) / W_n^*(z)|``."""
        return np.abs(self.W(z) / self.W_star(z))


def dt_family(n: int, radius: float = 0.6) -> BlaschkeData:
    """A conjugate-closed configuration with ``Σ(1-|b_j|)`` growing like ``n``.

    At least half of the zeros lie in ``{|Re b| < 0.9, |Im b| > √n / n}``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    pairs = n // 2
    ang = np.pi / 4 + (np.pi / 2) * (np.arange(pairs) + 0.5) / max(pairs, 1)
    zs = []
    for a in ang:
        b = radius * np.exp(1j * a)
        zs += [b, np.conj(b)]
    if n % 2:
        zs.append(complex(radius / 2))
    return BlaschkeData(tuple(zs))


# }}}


# {{{ orthonormal polynomials


@dataclass(frozen=True, eq=False)
class CircleONP:
    """``φ_n`` orthonormal for ``e^g dσ / |W_n|²``, leading coefficient ``α_n > 0``."""

    n: int
    coeffs: tuple
    alpha: float
    residual: float
    sigma: CircleMeasure
    W: BlaschkeData
    nodes: int

    def phi(self, z) -> complex:
        with mpmath.workdps(_DPS):
            return complex(mpmath.polyval(list(reversed(self.coeffs)), z))

    def phi_star(self, z) -> complex:
        """``z^n conj(φ_n(1/conj z))``."""
        with mpmath.workdps(_DPS):
            return complex(mpmath.polyval([mpmath.conj(c) for c in self.coeffs], z))

    def star_coeffs(self) -> list:
        """Ascending coefficients of ``φ_n^*``."""
        return [mpmath.conj(c) for c in reversed(self.coeffs)]


def _circle_weight(sigma: CircleMeasure, W: BlaschkeData, m: int):
    t = _angles(m)
    xi = np.exp(1j * t)
    return xi, sigma.density(t) / np.abs(W.W(xi)) ** 2


def _node_count(n: int, W: BlaschkeData, base: int) -> int:
    gap = min((1 - abs(b) for b in W.zeros), default=1.0)
    need = max(16 * n, base, int(64 / gap))
    return 1 << (need - 1).bit_length()


def circle_onp(
    sigma: CircleMeasure,
    g: Callable[[np.ndarray], np.ndarray] | None,
    W: BlaschkeData,
    n: int | None = None,
    tol: float = 1e-12,
) -> CircleONP:
    """Orthonormal ``φ_n`` by a Toeplitz Gram solve in the monomial basis.

    Moments come from the trapezoidal rule; the node count doubles when the
    orthogonality residual on a grid twice as fine exceeds ``tol``.
    """
    n = W.n if n is None else n
    if n != W.n:
        raise DomainError("deg W_n must equal n")
    tsig = sigma.tilted(g)
    m = _node_count(n, W, 512)
    for _ in range(4):
        xi, rho = _circle_weight(tsig, W, m)
        mom = {k: complex(np.mean(rho * xi**k)) for k in range(-n, n + 1)}
        with mpmath.workdps(_DPS):
            if n:
                A = mpmath.matrix(n, n)
                rhs = mpmath.matrix(n, 1)
                for i in range(n):
                    for k in range(n):
                        A[i, k] = mpmath.mpc(mom[k - i])
                    rhs[i] = -mpmath.mpc(mom[n - i])
                a = list(mpmath.lu_solve(A, rhs))
            else:
                a = []
            full = a + [mpmath.mpc(1)]
            norm_sq = mpmath.re(sum(c * mpmath.mpc(mom[k - n]) for k, c in enumerate(full)))
            if norm_sq <= 0:
                raise PrecisionError("Gram matrix is not positive definite")
            coeffs = tuple(c / mpmath.sqrt(norm_sq) for c in full)
        resid = _circle_residual(coeffs, tsig, W, 2 * m)
        if resid < tol:
            break
        m *= 2
    else:
        raise PrecisionError(f"circle orthogonality residual {resid:.2e} above {tol:.0e}")
    alpha = float(mpmath.re(coeffs[-1]))
    return CircleONP(n, coeffs, alpha, resid, tsig, W, m)


def _circle_residual(coeffs, tsig: CircleMeasure, W: BlaschkeData, m: int) -> float:
    xi, rho = _circle_weight(tsig, W, m)
    phi = np.polynomial.polynomial.polyval(xi, np.array([complex(c) for c in coeffs]))
    n = len(coeffs) - 1
    out = abs(np.mean(np.abs(phi) ** 2 * rho) - 1)
    m0 = np.mean(rho)
    for k in range(n):
        out = max(out, abs(np.mean(phi * np.conj(xi**k) * rho)) / math.sqrt(m0))
    return float(out)


# }}}


# {{{ companion polynomials


def caratheodory_taylor(sigma: CircleMeasure, x: complex, order: int, nodes: int = 4096) -> list:
    """Taylor coefficients ``F^{(k)}(x)/k!`` of ``F(σ, ·)`` for ``k < order``."""
    t = _angles(nodes)
    xi = np.exp(1j * t)
    w = sigma.density(t)
    out = [complex(np.mean((xi + x) / (xi - x) * w))]
    for k in range(1, order):
        out.append(complex(np.mean(2 * xi / (xi - x) ** (k + 1) * w)))
    return out


def _taylor_poly(coeffs: list, x, order: int) -> list:
    """Taylor coefficients at ``x`` of the polynomial with ascending ``coeffs``."""
    c = list(coeffs)
    out = []
    for _ in range(order):
        # synthetic division by (z - x)
        acc = mpmath.mpc(0)
        q = []
        for a in reversed(c):
            acc = acc * x + a
            q.append(acc)
        out.append(q[-1])
        c = list(reversed(q[:-1]))
        if not c:
            c = [mpmath.mpc(0)]
    return out


@dataclass(frozen=True, eq=False)
class Companion:
    """``ψ_n`` through its reversed polynomial ``ψ_n^*`` (ascending coefficients)."""

    onp: CircleONP
    star: tuple

    def psi_star(self, z) -> complex:
        with mpmath.workdps(_DPS):
            return complex(mpmath.polyval(list(reversed(self.star)), z))

    def ratio(self, z) -> complex:
        """``ψ_n^*(z) / φ_n^*(z)``."""
        return self.psi_star(z) / self.onp.phi_star(z)

    def lambda_n(self, z) -> float:
        return self.ratio(z).real


def companion_psi(
    onp: CircleONP,
    F: Callable[[complex, int], list] | None = None,
    W: BlaschkeData | None = None,
    nodes: int = 8192,
) -> Companion:
    """Hermite interpolant ``ψ_n^*`` of ``φ_n^* F(e^g σ_n, ·)`` at the zeros of ``z W_n``.

    ``F(x, m)`` must return the first ``m`` Taylor coefficients of the
    Caratheodory function at ``x``; by default they are computed from the
    measure stored in ``onp``.
    """
    W = W or onp.W
    if F is None:
        sig = onp.sigma

        def F(x, m):
            return caratheodory_taylor(sig, x, m, nodes)

    groups: list[list] = []
    for b in (0j, *W.zeros):
        for grp in groups:
            if abs(grp[0] - b) < 1e-13:
                grp.append(b)
                break
        else:
            groups.append([b])
    star = onp.star_coeffs()
    with mpmath.workdps(_DPS):
        pts, taylor = [], []
        for grp in groups:
            x = mpmath.mpc(grp[0])
            m = len(grp)
            ps = _taylor_poly(star, x, m)
            if abs(ps[0]) < mpmath.mpf(10) ** (-20):
                raise DomainError("an interpolation node is a zero of φ_n^*")
            fs = [mpmath.mpc(v) for v in F(complex(x), m)]
            prod = [sum(ps[j] * fs[k - j] for j in range(k + 1)) for k in range(m)]
            pts += [x] * m
            taylor += [prod] * m
        newton = _hermite_newton(pts, taylor)
        coeffs = [mpmath.mpc(0)] * len(pts)
        # expand Σ c_j Π_{k<j}(z - z_k) by Horner from the top
        for j in range(len(pts) - 1, -1, -1):
            shifted = [mpmath.mpc(0)] + coeffs[:-1]
            coeffs = [s - pts[j] * c for s, c in zip(shifted, coeffs)]
            coeffs[0] += newton[j]
    return Companion(onp, tuple(coeffs[: onp.n + 1]))


def _hermite_newton(pts: list, taylor: list) -> list:
    """Newton coefficients from confluent divided differences."""
    n = len(pts)
    table = [[taylor[i][0]] for i in range(n)]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            if pts[i] == pts[i - j]:
                val = taylor[i][j]
            else:
                val = (table[i][j - 1] - table[i - 1][j - 1]) / (pts[i] - pts[i - j])
            table[i].append(val)
    return [table[j][j] for j in range(n)]


def lambda_mass(comp: Companion, nodes: int = 4096) -> float:
    """``|λ_n m| = ∫ λ_n dm`` by the trapezoidal rule."""
    t = _angles(nodes)
    xi = np.exp(1j * t)
    vals = [comp.lambda_n(complex(x)) for x in xi]
    return float(np.mean(vals))


def lambda_boundary_gap(comp: Companion, points: int = 64) -> float:
    """``max |λ_n(ξ) - |W_n(ξ)/φ_n(ξ)|²|`` over equispaced circle points."""
    xi = np.exp(1j * _angles(points))
    out = 0.0
    for x in xi:
        x = complex(x)
        direct = abs(complex(comp.onp.W.W(x)) / comp.onp.phi(x)) ** 2
        out = max(out, abs(comp.lambda_n(x) - direct))
    return out


def moment_gap(comp: Companion, order: int = 6, nodes: int = 4096) -> float:
    """``max_k |∫ ξ^k e^g dσ_n - ∫ ξ^k λ_n dm|`` for ``0 ≤ k ≤ order``."""
    t = _angles(nodes)
    xi = np.exp(1j * t)
    lam = np.array([comp.lambda_n(complex(x)) for x in xi])
    rho = comp.onp.sigma.density(t)
    return float(max(abs(np.mean(xi**k * (rho - lam))) for k in range(order + 1)))


@dataclass(frozen=True)
class CircleAsymptotics:
    alpha_D0: float
    """``α_n D_n(0)``; tends to 1 and never exceeds it."""
    strong: complex
    """``φ_n^*(z) D_n(z) / W_n^*(z)`` at the probe point."""


def circle_asymptotics(onp: CircleONP, z: complex = 0.3 + 0.2j) -> CircleAsymptotics:
    D0 = disk_functions(onp.sigma, 0).D.real
    Dz = disk_functions(onp.sigma, z).D
    strong = onp.phi_star(z) * Dz / complex(onp.W.W_star(z))
    return CircleAsymptotics(onp.alpha * D0, strong)


# }}}


# {{{ Joukowski bridge


@dataclass(frozen=True)
class JoukowskiCheck:
    lhs: complex
    rel_err: float
    leading: float
    leading_err: float
    gamma: float


def _tau(tau_zeros: Sequence[complex]):
    finite = [complex(a) for a in tau_zeros if np.isfinite(complex(a))]

    def tau(x):
        x = np.asarray(x, dtype=complex)
        out = np.ones_like(x)
        for a in finite:
            out = out * (1 - x / a)
        return out

    return tau, finite


def _check_tau(interval: Interval, tau_zeros: Sequence[complex]) -> None:
    zs = [complex(a) for a in tau_zeros]
    for a in zs:
        if np.isfinite(a) and a.imag == 0 and interval.alpha <= a.real <= interval.beta:
            raise DomainError("zeros of tau must avoid the interval")
    if not _conjugate_closed([a for a in zs if np.isfinite(a)]):
        raise DomainError("zeros of tau must form a conjugate-symmetric multiset")


def joukowski_check(
    weight: WeightSpec,
    h: Callable[[np.ndarray], np.ndarray] | None,
    tau_zeros: Sequence[complex],
    n: int,
    z: complex,
    poly: MonicPoly | None = None,
) -> JoukowskiCheck:
    """Strong asymptotics on an interval with weight ``e^h dμ / τ_n``.

    Evaluates ``2 G̃_n²(z) p_n²(z)/τ_n(z) Π (φ(z) - φ(a_j))/(1 - conj φ(a_j) φ(z))``
    and the leading-coefficient product; both tend to 1.  ``τ_n`` has the
    zeros ``a_j`` (``inf`` allowed, and implied for any of the ``2n`` not
    listed) and value 1 at the centre of the interval,
    which is 0 for ``[-1, 1]``.
    """
    iv = weight.interval
    if len(tau_zeros) > 2 * n:
        raise DomainError("tau has degree at most 2n")
    # missing zeros sit at infinity
    tau_zeros = [*tau_zeros] + [complex("inf")] * (2 * n - len(tau_zeros))
    _check_tau(iv, tau_zeros)
    zc = complex(z)
    if zc.imag == 0 and iv.alpha <= zc.real <= iv.beta:
        raise DomainError("z must lie off the interval")
    local = [(complex(a) - iv.center) / iv.radius if np.isfinite(complex(a)) else complex("inf") for a in tau_zeros]
    tau, finite = _tau(local)

    def theta(x):
        s = (np.asarray(x, dtype=float) - iv.center) / iv.radius
        out = -np.log(np.real(tau(s)))
        return out + (h(x) if h is not None else 0.0)

    T = poly or monic_orthogonal(VaryingWeight(weight, theta, n), n)
    nsq = float(norm_squared(T))
    G = complex(szego_G(weight, iv, zc, h=h))
    Ginf = float(np.real(szego_G(weight, iv, np.inf, h=h)))
    phi_z = conformal_frame(iv, zc).phi
    s = (zc - iv.center) / iv.radius
    prod = 1 + 0j
    for a in local:
        b = 0j if not np.isfinite(a) else conformal_frame(Interval(-1, 1), a).phi
        prod *= (phi_z - b) / (1 - np.conj(b) * phi_z)
    # monic in x is r^n times monic in the local variable s
    p_sq = complex(T.eval_mp(zc)) ** 2 / nsq
    lhs = 2 * G**2 * p_sq / complex(tau(s)) * prod
    gamma = 1 / math.sqrt(nsq)
    lead = Ginf**2 * gamma**2 * iv.radius ** (2 * n) / 2 ** (2 * n - 1)
    pairs = 1 + 0j
    for a in finite:
        pairs *= 2 * a * conformal_frame(Interval(-1, 1), a).phi
    # conjugate symmetry makes the product real
    lead *= pairs.real
    return JoukowskiCheck(lhs, abs(lhs - 1), float(lead), abs(lead - 1), gamma)


@dataclass(frozen=True)
class BridgeCheck:
    G: complex
    D: complex
    rel_err: float


def joukowski_bridge(
    weight: WeightSpec,
    h: Callable[[np.ndarray], np.ndarray] | None,
    z: complex,
    order: int = 512,
) -> BridgeCheck:
    """Compare ``G(e^h μ, z)`` with ``D(σ, ζ)`` where ``z = J(ζ)`` and ``σ`` is the image measure."""
    iv = weight.interval
    sigma = CircleMeasure.from_interval_weight(weight, h, order)
    zeta = conformal_frame(iv, complex(z)).phi
    G = complex(szego_G(weight, iv, complex(z), h=h))
    D = disk_functions(sigma, zeta).D
    return BridgeCheck(G, D, abs(G / D - 1))


# }}}
