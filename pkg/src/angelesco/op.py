"""Monic orthogonal polynomials for fixed and varying weights on one interval."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .core import DomainError, Interval, PrecisionConfig, WeightSpec, conformal_frame, szego_G
from .hp import (
    PrecisionError,
    horner,
    horner_with_derivative,
    lu_solve,
    poly_from_roots,
    relative_residual,
    to_mpc,
    to_mpfr,
    working_precision,
)
from .quadrature import gauss_jacobi


class ZeroCountError(ArithmeticError):
    """Fewer (or more) zeros were located than the degree guarantees."""


@dataclass(frozen=True, eq=False)
class MonicPoly:
    """Monic polynomial ``P(x) = scale^n Q((x - shift)/scale)``.

    ``tcoeffs`` are the ascending coefficients of the monic ``Q`` in the local
    variable; :attr:`coeffs` converts to the monomial basis in ``x``.  When the
    zeros are known they are kept and used for evaluation.
    """

    tcoeffs: tuple
    shift: float = 0.0
    scale: float = 1.0
    bits: int = 256
    solve_residual: float = 0.0
    roots: tuple | None = None
    diagnostics: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.tcoeffs[-1] != 1:
            raise DomainError("MonicPoly must have leading coefficient 1")

    @classmethod
    def from_roots(
        cls, roots: Sequence, bits: int = 256, shift: float = 0.0, scale: float = 1.0
    ) -> MonicPoly:
        with working_precision(bits):
            s, h = to_mpfr(shift), to_mpfr(scale)
            rts = tuple(to_mpfr(r) for r in roots)
            tco = tuple(poly_from_roots([(r - s) / h for r in rts]))
        return cls(tco, shift, scale, bits, roots=rts)

    @property
    def degree(self) -> int:
        return len(self.tcoeffs) - 1

    @property
    def coeffs(self) -> tuple:
        """Ascending monomial coefficients in ``x`` (leading coefficient 1)."""
        n = self.degree
        with working_precision(self.bits):
            s, h = to_mpfr(self.shift), to_mpfr(self.scale)
            # Horner in the ring: P = sum_k q_k h^(n-k) (x - s)^k
            acc = [mpfr(1)]
            for k in range(n - 1, -1, -1):
                new = [mpfr(0)] * (len(acc) + 1)
                for j, a in enumerate(acc):
                    new[j + 1] += a
                    new[j] -= s * a
                new[0] += self.tcoeffs[k] * h ** (n - k)
                acc = new
            return tuple(acc)

    def eval_mp(self, z):
        """Value at ``z`` in the polynomial's precision (``mpfr`` or ``mpc``)."""
        with working_precision(self.bits):
            zz = to_mpc(z) if isinstance(z, complex) else to_mpfr(z)
            if self.roots is not None:
                acc = zz * 0 + 1
                for r in self.roots:
                    acc *= zz - r
                return acc
            t = (zz - to_mpfr(self.shift)) / to_mpfr(self.scale)
            return horner(self.tcoeffs, t) * to_mpfr(self.scale) ** self.degree

    def __call__(self, z):
        if np.ndim(z):
            return np.array([self(v) for v in np.ravel(z)]).reshape(np.shape(z))
        v = self.eval_mp(complex(z) if np.iscomplexobj(z) else float(z))
        return complex(v) if isinstance(v, gmpy2.mpc) else float(v)

    def log_abs(self, x) -> np.ndarray:
        """``log|P(x)|`` evaluated without overflow."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        with working_precision(self.bits):
            out = [float(gmpy2.log(abs(self.eval_mp(float(v))))) for v in xs]
        return np.array(out) if np.ndim(x) else out[0]


@dataclass(frozen=True, eq=False)
class VaryingWeight:
    """The weight ``e^{θ(x)} μ'(x)`` with ``θ`` continuous on the interval.

    ``theta`` acts on float arrays.  ``theta_mp`` may supply an
    extended-precision version; without it the residual contract is relaxed to
    the float64 accuracy of ``θ``.
    """

    base: WeightSpec
    theta: Callable[[np.ndarray], np.ndarray]
    n: int = 0
    theta_mp: Callable | None = None


def _weighted_rule(weight: WeightSpec, theta, theta_mp, k: int, bits: int):
    iv = weight.interval
    ga, gb = weight.exponent_left, weight.exponent_right
    nodes, w = gauss_jacobi(k, gb, ga, bits)
    with working_precision(bits):
        c, r = to_mpfr(iv.center), to_mpfr(iv.radius)
        scale = r ** to_mpfr(ga + gb + 1)
        xs = [c + r * s for s in nodes]
        expo = [weight.A_mp(x) for x in xs] if weight.analytic_log else [mpfr(0)] * k
        if theta_mp is not None:
            expo = [e + theta_mp(x) for e, x in zip(expo, xs)]
        elif theta is not None:
            tv = np.asarray(theta(np.array([float(x) for x in xs])), dtype=float)
            if not np.all(np.isfinite(tv)):
                raise DomainError("theta is not finite at the quadrature nodes")
            expo = [e + mpfr(float(t)) for e, t in zip(expo, tv)]
        ww = [wi * scale * gmpy2.exp(e) for wi, e in zip(w, expo)]
    return list(nodes), ww


def _moments(nodes, weights, top: int) -> list:
    mom = [mpfr(0)] * (top + 1)
    for s, w in zip(nodes, weights):
        p = w
        for j in range(top + 1):
            mom[j] += p
            p = p * s
    return mom


def monic_orthogonal(
    weight: VaryingWeight | WeightSpec,
    n: int,
    precision: PrecisionConfig | None = None,
) -> MonicPoly:
    """Monic ``T_n`` orthogonal to ``1, x, ..., x^{n-1}`` against ``e^θ dμ``.

    The Gram system is solved in the local monomial basis.  Its residual is
    measured with an independent Gauss-Jacobi rule of 1.5 times the order as

        ``max_k |∫ t^k T_n dμ| / (‖t^k‖ ‖T_n‖)``,

    and the order doubles (twice at most) when it exceeds the tolerance.
    """
    precision = precision or PrecisionConfig()
    if n < 0:
        raise DomainError("degree must be nonnegative")
    if isinstance(weight, VaryingWeight):
        base, theta, theta_mp = weight.base, weight.theta, weight.theta_mp
    else:
        base, theta, theta_mp = weight, None, None
    exact = theta is None or theta_mp is not None
    tol = precision.solve_residual_tol if exact else max(precision.solve_residual_tol, 1e-12)
    bits = precision.mantissa_bits
    iv = base.interval
    k = precision.order_for(n)
    history = []
    for _ in range(3):
        nodes, w = _weighted_rule(base, theta, theta_mp, k, bits)
        cnodes, cw = _weighted_rule(base, theta, theta_mp, k + k // 2 + 1, bits)
        with working_precision(bits):
            mom = _moments(nodes, w, 2 * n)
            cmom = _moments(cnodes, cw, 2 * n)
            if n == 0:
                coeffs, solve_res, resid = [], 0.0, 0.0
            else:
                gram = [[mom[i + j] for j in range(n)] for i in range(n)]
                rhs = [-mom[i + n] for i in range(n)]
                coeffs = lu_solve(gram, rhs)
                solve_res = relative_residual(gram, coeffs, rhs)
                resid = _orthogonality_residual(coeffs + [mpfr(1)], cmom, n)
            full = coeffs + [mpfr(1)]
            norm_sq = sum(
                full[i] * full[j] * cmom[i + j] for i in range(n + 1) for j in range(n + 1)
            ) * to_mpfr(iv.radius) ** (2 * n)
        history.append((k, resid))
        if max(resid, solve_res) < tol:
            break
        k *= 2
    else:
        raise PrecisionError(
            f"orthogonality residual {history[-1][1]:.3e} above {tol:.1e} for n={n}; "
            "increase mantissa_bits or the quadrature order"
        )
    return MonicPoly(
        tuple(full),
        iv.center,
        iv.radius,
        bits,
        solve_residual=max(resid, solve_res),
        diagnostics={"norm_sq": norm_sq, "order": k, "history": history},
    )


def _orthogonality_residual(full: list, mom: list, m: int) -> float:
    """``max_{k<m} |⟨t^k, Q⟩| / (‖t^k‖ ‖Q‖)`` from a moment table."""
    deg = len(full) - 1
    nq = sum(full[i] * full[j] * mom[i + j] for i in range(deg + 1) for j in range(deg + 1))
    if nq <= 0:
        return float("inf")
    out = mpfr(0)
    for kk in range(m):
        ip = sum(c * mom[kk + j] for j, c in enumerate(full))
        out = max(out, abs(ip) / gmpy2.sqrt(mom[2 * kk] * nq))
    return float(out)


def norm_squared(p: MonicPoly) -> mpfr:
    """``∫ T_n^2 e^θ dμ`` recorded by :func:`monic_orthogonal`."""
    return p.diagnostics["norm_sq"]


# {{{ zeros


def _refine_zero(q, lo, hi, eps):
    flo = horner(q, lo)
    x = (lo + hi) / 2
    for _ in range(400):
        f, df = horner_with_derivative(q, x)
        if f == 0:
            return x
        if (f > 0) == (flo > 0):
            lo, flo = x, f
        else:
            hi = x
        step = f / df if df != 0 else None
        nx = x - step if step is not None else None
        if nx is None or not (lo < nx < hi):
            nx = (lo + hi) / 2
            if hi - lo <= eps:
                return nx
        elif abs(step) <= eps:
            return nx
        x = nx
    return x


def zeros_in(p: MonicPoly, interval: Interval, scan_factor: int = 8) -> list:
    """Real zeros of ``p`` in ``interval`` located by sign changes and refined.

    The scan uses ``scan_factor * degree`` Chebyshev points (endpoints
    included); the points themselves are ``mpfr`` in the local variable of
    ``p``.  Returns ascending ``mpfr`` zeros in ``x``.
    """
    n = max(p.degree, 1)
    m = scan_factor * n
    bits = p.bits
    with working_precision(bits):
        s, h = to_mpfr(p.shift), to_mpfr(p.scale)
        a, b = to_mpfr(interval.alpha), to_mpfr(interval.beta)
        mid, rad = (a + b) / 2, (b - a) / 2
        pi = gmpy2.const_pi()
        ts = [((mid - rad * gmpy2.cos(pi * j / m)) - s) / h for j in range(m + 1)]
        vals = [horner(p.tcoeffs, t) for t in ts]
        eps = mpfr(2) ** (-(bits // 2)) * (rad / h)
        out = []
        for j in range(m + 1):
            if vals[j] == 0:
                out.append(ts[j])
            elif j < m and vals[j + 1] != 0 and (vals[j] > 0) != (vals[j + 1] > 0):
                out.append(_refine_zero(p.tcoeffs, ts[j], ts[j + 1], eps))
        return sorted(s + h * t for t in out)


def poly_zeros(p: MonicPoly, interval: Interval) -> list:
    """All ``degree`` zeros of an orthogonal polynomial on ``interval``, ascending."""
    for factor in (8, 32, 128):
        zs = zeros_in(p, interval, factor)
        if len(zs) == p.degree:
            return zs
    raise ZeroCountError(
        f"found {len(zs)} zeros of a degree-{p.degree} polynomial in {interval}"
    )


# }}}


class AsymptoticCheck(NamedTuple):
    lhs: complex
    rhs: complex
    rel_err: float


def classical_asymptotics_check(
    weight: WeightSpec,
    n: int,
    z: complex,
    precision: PrecisionConfig | None = None,
    poly: MonicPoly | None = None,
) -> AsymptoticCheck:
    """Compare ``P_n(z)`` with ``((β-α)/(4 φ(z)))^n G(μ, ∞)/G(μ, z)``."""
    iv = weight.interval
    phi = conformal_frame(iv, z).phi
    p = poly or monic_orthogonal(weight, n, precision)
    lhs = complex(p.eval_mp(complex(z)))
    rhs = (iv.length / (4 * phi)) ** n * szego_G(weight, iv, np.inf) / szego_G(weight, iv, z)
    rhs = complex(rhs)
    return AsymptoticCheck(lhs, rhs, abs(lhs / rhs - 1))


def interlace(inner: Sequence, outer: Sequence) -> bool:
    """True when every gap of ``outer`` contains exactly one point of ``inner``."""
    if len(outer) != len(inner) + 1:
        return False
    return all(outer[k] < inner[k] < outer[k + 1] for k in range(len(inner)))


__all__ = [
    "AsymptoticCheck",
    "MonicPoly",
    "VaryingWeight",
    "ZeroCountError",
    "classical_asymptotics_check",
    "interlace",
    "monic_orthogonal",
    "norm_squared",
    "poly_zeros",
    "zeros_in",
]
