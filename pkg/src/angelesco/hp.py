"""Small extended-precision toolkit on top of :mod:`gmpy2`.

Every routine here works on plain Python lists of ``mpfr``/``mpc`` values and
assumes the caller has entered :func:`working_precision`.
"""

from __future__ import annotations

import contextlib
from collections.abc import Iterator, Sequence
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq


class PrecisionError(ArithmeticError):
    """A linear solve or quadrature did not reach its residual tolerance."""


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[None]:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def to_mpfr(x: object) -> mpfr:
    if isinstance(x, Fraction):
        return mpfr(mpq(x.numerator, x.denominator))
    if isinstance(x, mpfr):
        return x
    return mpfr(x)


def to_mpc(z: object) -> mpc:
    if isinstance(z, mpc):
        return z
    if isinstance(z, complex):
        return mpc(z.real, z.imag)
    return mpc(to_mpfr(z), 0)


def lu_solve(a: Sequence[Sequence], b: Sequence) -> list:
    """Gaussian elimination with partial pivoting; ``a`` and ``b`` are copied."""
    n = len(b)
    m = [list(row) for row in a]
    rhs = list(b)
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[piv][k] == 0:
            raise PrecisionError("singular matrix in extended-precision solve")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            rhs[k], rhs[piv] = rhs[piv], rhs[k]
        rk = m[k]
        inv = 1 / rk[k]
        for r in range(k + 1, n):
            row = m[r]
            f = row[k] * inv
            if f == 0:
                continue
            for j in range(k + 1, n):
                row[j] -= f * rk[j]
            rhs[r] -= f * rhs[k]
    x = [mpfr(0)] * n
    for k in range(n - 1, -1, -1):
        s = rhs[k]
        rk = m[k]
        for j in range(k + 1, n):
            s -= rk[j] * x[j]
        x[k] = s / rk[k]
    return x


def relative_residual(a: Sequence[Sequence], x: Sequence, b: Sequence) -> float:
    """``max|Ax - b| / (max|A| max|x| + max|b|)`` re-substituted in working precision."""
    r = 0
    for row, bi in zip(a, b):
        s = -bi
        for aij, xj in zip(row, x):
            s += aij * xj
        r = max(r, abs(s))
    scale = max(abs(v) for row in a for v in row) * max(
        (abs(v) for v in x), default=0
    ) + max((abs(v) for v in b), default=0)
    return float(r / scale) if scale != 0 else 0.0


def horner(coeffs: Sequence, x):
    """Evaluate ``sum(coeffs[k] x**k)``."""
    acc = coeffs[-1] * 1
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def horner_with_derivative(coeffs: Sequence, x):
    p = coeffs[-1] * 1
    dp = p * 0
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def poly_from_roots(roots: Sequence) -> list:
    """Monic coefficients (ascending) of ``prod(x - r)``."""
    coeffs = [mpfr(1)]
    for r in roots:
        new = [mpfr(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] += c
            new[k] -= r * c
        coeffs = new
    return coeffs
