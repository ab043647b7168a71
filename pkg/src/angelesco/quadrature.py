"""Gauss-Jacobi rules in extended precision and Chebyshev helpers in float64."""

from __future__ import annotations

import functools
from fractions import Fraction

import gmpy2
import numpy as np
from gmpy2 import mpfr
from scipy.special import roots_jacobi

from .hp import to_mpfr, working_precision


def _jacobi_eval(n: int, a: mpfr, b: mpfr, rec: list, x: mpfr) -> tuple[mpfr, mpfr]:
    """Return ``(P_n(x), P_{n-1}(x))`` for the Jacobi polynomial ``P^{(a,b)}``."""
    p0 = mpfr(1)
    p1 = (a + 1) + (a + b + 2) * (x - 1) / 2
    if n == 1:
        return p1, p0
    for c2, c3, c4, c1 in rec:
        p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
    return p1, p0


@functools.lru_cache(maxsize=256)
def gauss_jacobi(n: int, a: Fraction, b: Fraction, bits: int) -> tuple[tuple, tuple]:
    """Nodes and weights for ``∫ f(s) (1-s)^a (1+s)^b ds`` on ``[-1, 1]``.

    Nodes start from the float64 rule and are polished by Newton's method on
    the three-term recurrence, so the result is accurate to ``bits``.
    """
    if n < 1:
        raise ValueError("rule order must be positive")
    guess, _ = roots_jacobi(n, float(a), float(b))
    with working_precision(bits + 24):
        am, bm = to_mpfr(a), to_mpfr(b)
        ab = am + bm
        rec = []
        for k in range(2, n + 1):
            s = 2 * k + ab
            rec.append((
                (s - 1) * (am * am - bm * bm),
                (s - 2) * (s - 1) * s,
                2 * (k + am - 1) * (k + bm - 1) * s,
                2 * k * (k + ab) * (s - 2),
            ))
        eps = mpfr(2) ** (-(bits + 8))

        def deriv(x, pn, pm):
            s = 2 * n + ab
            return (n * ((am - bm) - s * x) * pn + 2 * (n + am) * (n + bm) * pm) / (
                s * (1 - x * x)
            )

        nodes, dvals = [], []
        for g in guess:
            x = mpfr(float(g))
            for _ in range(60):
                pn, pm = _jacobi_eval(n, am, bm, rec, x)
                dx = pn / deriv(x, pn, pm)
                x -= dx
                if abs(dx) <= eps:
                    break
            pn, pm = _jacobi_eval(n, am, bm, rec, x)
            nodes.append(x)
            dvals.append(deriv(x, pn, pm))
        const = (
            mpfr(2) ** (ab + 1)
            * gmpy2.gamma(n + am + 1)
            * gmpy2.gamma(n + bm + 1)
            / (gmpy2.gamma(n + ab + 1) * gmpy2.gamma(mpfr(n + 1)))
        )
        weights = [const / ((1 - x * x) * d * d) for x, d in zip(nodes, dvals)]
    with working_precision(bits):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


def cheb_points(n: int) -> np.ndarray:
    """Ascending first-kind Chebyshev points on ``[-1, 1]``."""
    return -np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))


@functools.lru_cache(maxsize=64)
def _cheb_analysis(n: int) -> np.ndarray:
    theta = np.pi - (2 * np.arange(n) + 1) * np.pi / (2 * n)
    mat = (2.0 / n) * np.cos(np.outer(np.arange(n), theta))
    mat[0] /= 2
    mat.setflags(write=False)
    return mat


def cheb_analysis_matrix(n: int) -> np.ndarray:
    """Matrix mapping values at :func:`cheb_points` to Chebyshev coefficients."""
    return _cheb_analysis(n)


def cheb_coeffs(values: np.ndarray) -> np.ndarray:
    return _cheb_analysis(len(values)) @ np.asarray(values, dtype=float)


def cheb_eval(coeffs: np.ndarray, s: np.ndarray) -> np.ndarray:
    return np.polynomial.chebyshev.chebval(s, coeffs)


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)
