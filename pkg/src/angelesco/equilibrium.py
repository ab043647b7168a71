"""Vector equilibrium problem with Angelesco interaction.

For masses ``c`` and disjoint hulls ``Δ_i`` the measures ``ω_i`` satisfy

    V^{ω_j} + Σ_i V^{ω_i} = ℓ_j  on supp ω_j,   > ℓ_j  on Δ_j \\ supp ω_j.

Densities are stored as :class:`~angelesco.core.ArcsineSeries`, so the
``1/sqrt`` behaviour at hard edges is built in and a soft (square-root) edge
is a zero of the Chebyshev factor at that endpoint.  For fixed supports the
equality conditions are a square linear collocation system.  Pushed endpoints
are located by root finding on the endpoint value of the Chebyshev factor.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from .core import LOG2, ArcsineSeries, DomainError, GridDensity, Interval, conformal_frame
from .quadrature import cheb_points, gauss_legendre


class EquilibriumError(ArithmeticError):
    """The support iteration did not settle within its budget."""


class InconclusiveFitError(ArithmeticError):
    """An endpoint exponent fit is too far from both admissible values."""


LEFT, RIGHT = -1, 1


def _side(side) -> int:
    if side in (LEFT, "left", "l"):
        return LEFT
    if side in (RIGHT, "right", "r"):
        return RIGHT
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass(frozen=True, eq=False)
class EquilibriumSolution:
    """Vector equilibrium measures on disjoint hulls.

    ``soft[i]`` flags the (left, right) endpoints of support ``i`` that carry
    square-root vanishing; the remaining ones are hard edges.
    """

    c: tuple[float, ...]
    hulls: tuple[Interval, ...]
    supports: tuple[Interval, ...]
    series: tuple[ArcsineSeries, ...]
    ell: tuple[float, ...]
    soft: tuple[tuple[bool, bool], ...]
    grid_n: int = 64
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def d(self) -> int:
        return len(self.c)

    @property
    def densities(self) -> tuple[GridDensity, ...]:
        return tuple(s.grid(self.grid_n) for s in self.series)

    @property
    def endpoint_exponents(self) -> tuple[tuple[float, float], ...]:
        return tuple(tuple(0.5 if f else -0.5 for f in pair) for pair in self.soft)

    def pushed(self, i: int) -> tuple[bool, bool]:
        sup, hull = self.supports[i], self.hulls[i]
        return (sup.alpha > hull.alpha, sup.beta < hull.beta)

    def potential(self, i: int, z):
        return self.series[i].potential(z)

    def effective(self, j: int, x):
        """``V^{ω_j} + Σ_i V^{ω_i} - ℓ_j``."""
        out = self.series[j].potential(x)
        for s in self.series:
            out = out + s.potential(x)
        return out - self.ell[j]

    def cauchy(self, i: int, z):
        return self.series[i].cauchy(z)

    def scaled(self, factor: float) -> EquilibriumSolution:
        """Densities multiplied by ``factor``; used to build invalid inputs."""
        ser = tuple(ArcsineSeries(s.interval, factor * s.coeffs) for s in self.series)
        return replace(self, series=ser, c=tuple(factor * ci for ci in self.c))


def _validate(hulls: Sequence[Interval], c: Sequence[float]) -> tuple:
    hulls = tuple(hulls)
    c = tuple(float(ci) for ci in c)
    if len(hulls) != len(c):
        raise DomainError("need one mass per hull")
    if any(not 0 < ci <= 1 for ci in c) or abs(sum(c) - 1) > 1e-12:
        raise DomainError(f"masses must lie in (0, 1] and sum to one, got {c}")
    for a, b in zip(hulls, hulls[1:]):
        if a.beta > b.alpha:
            raise DomainError("hulls must be disjoint and ordered left to right")
    return hulls, c


def _collocation_system(supports, c, n):
    """Square system for the coefficients ``a_{i,1..n-1}`` and the constants ``ℓ``."""
    d = len(supports)
    s = cheb_points(n)
    k = np.arange(1, n)
    tk = np.cos(np.outer(np.arccos(s), k))
    mat = np.zeros((d * n, d * n))
    rhs = np.zeros(d * n)
    for j, tj in enumerate(supports):
        rows = slice(j * n, (j + 1) * n)
        xj = tj.to_global(s)
        for i, ti in enumerate(supports):
            cols = slice(i * n, i * n + n - 1)
            logr = math.log(ti.radius)
            if i == j:
                mat[rows, cols] += 2 * tk / k
                rhs[rows] -= 2 * c[i] * (LOG2 - logr)
            else:
                phi = np.real(conformal_frame(ti, xj + 0j).phi)
                mat[rows, cols] += phi[:, None] ** k / k
                rhs[rows] -= c[i] * (LOG2 + np.log(np.abs(phi)) - logr)
        mat[rows, j * n + n - 1] = -1.0
    return mat, rhs


def _solve_fixed(supports, c, n):
    mat, rhs = _collocation_system(supports, c, n)
    sol = np.linalg.solve(mat, rhs)
    series, ell = [], []
    for i, iv in enumerate(supports):
        coeffs = np.concatenate([[c[i]], sol[i * n : i * n + n - 1]])
        series.append(ArcsineSeries(iv, coeffs))
        ell.append(float(sol[i * n + n - 1]))
    return tuple(series), tuple(ell)


def _endpoints_to_supports(hulls, soft_pos):
    out = []
    for i, h in enumerate(hulls):
        a = soft_pos.get((i, LEFT), h.alpha)
        b = soft_pos.get((i, RIGHT), h.beta)
        out.append(Interval(a, b))
    return tuple(out)


def _bracket_soft(g, edge: float, far: float) -> float | None:
    """Zero of ``g`` between ``edge`` and ``far``; ``None`` without a sign change."""
    prev = edge
    if g(edge) >= 0:
        return None
    for t in np.concatenate([np.geomspace(1e-4, 0.5, 30), np.linspace(0.55, 0.95, 9)]):
        e = edge + t * (far - edge)
        if g(e) > 0:
            return optimize.brentq(g, prev, e, xtol=1e-15, rtol=1e-15, maxiter=200)
        prev = e
    return None


def _locate_soft(hulls, c, n, keys, start) -> dict:
    """Place the soft endpoints ``keys`` where the Chebyshev factor vanishes.

    Endpoints without a sign change are left out of the returned mapping.
    """

    def values(pos):
        sup = _endpoints_to_supports(hulls, dict(zip(keys, pos)))
        ser, _ = _solve_fixed(sup, c, n)
        return np.array([ser[i].endpoint_value(side) for i, side in keys])

    def ends(key):
        h = hulls[key[0]]
        return (h.alpha, h.beta) if key[1] == LEFT else (h.beta, h.alpha)

    if len(keys) > 1:
        try:
            res = optimize.root(values, np.asarray(start, dtype=float), method="hybr", tol=1e-15)
            inside = all(min(ends(k)) < x < max(ends(k)) for k, x in zip(keys, res.x))
            if inside and np.max(np.abs(res.fun)) <= 1e-11:
                return dict(zip(keys, res.x))
        except DomainError:
            pass
    # coordinate-wise bracketing (also the single-endpoint case)
    pos = dict(zip(keys, start))
    for _ in range(50):
        old = dict(pos)
        for k in list(pos):
            edge, far = ends(k)

            def g(e, k=k):
                trial = dict(pos)
                trial[k] = e
                ser, _ = _solve_fixed(_endpoints_to_supports(hulls, trial), c, n)
                return ser[k[0]].endpoint_value(k[1])

            root = _bracket_soft(g, edge, far)
            if root is None:
                del pos[k]
            else:
                pos[k] = root
        if pos.keys() == old.keys() and all(abs(pos[k] - old[k]) < 1e-14 for k in pos):
            break
    return pos


def solve_vector_equilibrium(
    hulls,
    c: Sequence[float],
    grid_n: int = 64,
    tol: float = 1e-10,
    n_modes: int = 64,
    max_iter: int = 20,
    initial_soft: Sequence[tuple[int, str]] = (),
) -> EquilibriumSolution:
    """Solve the vector equilibrium problem on disjoint ``hulls``.

    ``hulls`` may be a sequence of intervals or an ``AngelescoSystem``.
    ``n_modes`` Chebyshev modes are used per interval; ``grid_n`` sets the
    sampling of the returned :class:`GridDensity` objects.  ``initial_soft``
    seeds the endpoint classification, which is otherwise started from
    full supports with hard edges.
    """
    hulls = getattr(hulls, "intervals", hulls)
    hulls, c = _validate(hulls, c)
    n = int(n_modes)
    soft_keys = {(int(i), _side(s)) for i, s in initial_soft}
    positions: dict = {}
    history = []
    for it in range(max_iter):
        keys = sorted(soft_keys)
        if keys:
            start = [positions.get(k, _midway(hulls[k[0]], k[1])) for k in keys]
            positions = _locate_soft(hulls, c, n, keys, start)
        else:
            positions = {}
        changed = set(positions) != soft_keys
        soft_keys = set(positions)
        supports = _endpoints_to_supports(hulls, positions)
        series, ell = _solve_fixed(supports, c, n)
        for i, ser in enumerate(series):
            for side in (LEFT, RIGHT):
                key = (i, side)
                val = ser.endpoint_value(side)
                if key not in soft_keys and val < -tol:
                    soft_keys.add(key)
                    changed = True
        # a soft endpoint is justified only if the hard solution on the hull is negative there
        for key in list(soft_keys):
            if key in positions:
                trial = dict(positions)
                del trial[key]
                ser_h, _ = _solve_fixed(_endpoints_to_supports(hulls, trial), c, n)
                if ser_h[key[0]].endpoint_value(key[1]) >= -tol:
                    soft_keys.discard(key)
                    changed = True
        history.append(sorted(soft_keys))
        if not changed:
            break
    else:
        raise EquilibriumError(f"support classification did not settle: {history}")
    soft = tuple(((i, LEFT) in soft_keys, (i, RIGHT) in soft_keys) for i in range(len(c)))
    sol = EquilibriumSolution(
        c, hulls, supports, series, ell, soft, grid_n,
        diagnostics={"iterations": it + 1, "classification": history, "n_modes": n},
    )
    res = variational_residual(sol)
    sol.diagnostics.update(eq_max=res.eq_max, ineq_min=res.ineq_min,
                           tail=max(float(np.max(np.abs(s.coeffs[-4:]))) for s in series))
    return sol


def _midway(h: Interval, side: int) -> float:
    return h.alpha + 0.1 * h.length if side == LEFT else h.beta - 0.1 * h.length


@dataclass(frozen=True)
class VariationalResidual:
    eq_max: float
    ineq_min: float


def variational_residual(sol: EquilibriumSolution, probe_n: int = 301) -> VariationalResidual:
    """Equality defect on supports and the minimum effective potential off them.

    Probes avoid the collocation nodes.  Points closer than one probe spacing
    to a pushed endpoint are skipped since the defect vanishes there like
    ``dist^{3/2}``.  ``ineq_min`` is ``+inf`` when no support is pushed.
    """
    eq_max, ineq_min = 0.0, math.inf
    t = np.cos(np.pi * (np.arange(probe_n) + 0.5) / probe_n)[::-1]
    t = 0.5 * (t[1:] + t[:-1])
    for j in range(sol.d):
        sup, hull = sol.supports[j], sol.hulls[j]
        x = sup.to_global(t)
        eq_max = max(eq_max, float(np.max(np.abs(sol.effective(j, x)))))
        spacing = hull.length / probe_n
        gaps = []
        if sup.alpha > hull.alpha:
            gaps.append((hull.alpha, sup.alpha - spacing))
        if sup.beta < hull.beta:
            gaps.append((sup.beta + spacing, hull.beta))
        for a, b in gaps:
            if b > a:
                xs = np.linspace(a, b, probe_n)
                ineq_min = min(ineq_min, float(np.min(sol.effective(j, xs))))
    return VariationalResidual(eq_max, ineq_min)


def _check_in_hull(sol: EquilibriumSolution, i: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = sol.hulls[i]
    if np.any((x < h.alpha) | (x > h.beta)):
        raise DomainError(f"points must lie in the hull {h}")
    return x


def kappa(sol: EquilibriumSolution, i: int, x):
    """``κ_i = (1/c_i)(-V^{ω_i} + ℓ_i/2 - ½ Σ_{j≠i} V^{ω_j})`` on the hull ``Δ_i``."""
    xa = _check_in_hull(sol, i, x)
    out = -sol.effective(i, xa) / (2 * sol.c[i])
    return out if np.ndim(x) else float(out)


def kappa_line_integral(sol: EquilibriumSolution, i: int, x, order: int = 40):
    """``κ_i`` from ``Re ∫ (h_i - h_0) ds`` started at the nearest support endpoint.

    The substitution ``s = e ± u²`` removes the square-root behaviour of the
    Cauchy transform at a soft endpoint ``e``.  Accuracy degrades within
    about ``1e-3`` of a hard edge of a neighbouring support.
    """
    xa = np.atleast_1d(_check_in_hull(sol, i, x))
    sup = sol.supports[i]
    g, wg = gauss_legendre(order)
    out = np.zeros(xa.shape)
    for m, xm in enumerate(xa):
        if sup.alpha <= xm <= sup.beta:
            continue
        e = sup.alpha if xm < sup.alpha else sup.beta
        sgn = math.copysign(1.0, xm - e)
        umax = math.sqrt(abs(xm - e))
        u = 0.5 * umax * (g + 1)
        s = e + sgn * u * u
        integrand = 2 * sol.cauchy(i, s + 0j)
        for j in range(sol.d):
            if j != i:
                integrand = integrand + sol.cauchy(j, s + 0j)
        val = np.sum(wg * np.real(integrand) * 2 * sgn * u) * 0.5 * umax
        out[m] = val
    out = -out / (2 * sol.c[i])
    return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class EndpointFit:
    exponent: float
    fitted: float
    residual: float


def fit_endpoint_exponent(
    sol: EquilibriumSolution,
    i: int,
    side,
    decades: tuple[float, float] = (1e-5, 1e-3),
    points: int = 25,
    tol: float = 0.15,
) -> EndpointFit:
    """Least-squares slope of ``log ω'_i`` against ``log dist`` near an endpoint."""
    side = _side(side)
    sup = sol.supports[i]
    dist = sup.length * np.geomspace(*decades, points)
    x = sup.alpha + dist if side == LEFT else sup.beta - dist
    dens = sol.series[i].density(x)
    if np.any(dens <= 0):
        raise InconclusiveFitError("density is not positive near the endpoint")
    ld, lx = np.log(dens), np.log(dist)
    slope, icpt = np.polyfit(lx, ld, 1)
    resid = float(np.max(np.abs(ld - (slope * lx + icpt))))
    nearest = 0.5 if abs(slope - 0.5) < abs(slope + 0.5) else -0.5
    if abs(slope - nearest) > tol:
        raise InconclusiveFitError(f"fitted exponent {slope:.3f} is not close to ±1/2")
    return EndpointFit(nearest, float(slope), resid)


def endpoint_exponent(sol: EquilibriumSolution, i: int, side) -> float:
    return fit_endpoint_exponent(sol, i, side).exponent


def kappa_scaling_exponent(
    sol: EquilibriumSolution,
    i: int,
    side,
    decades: tuple[float, float] = (1e-4, 1e-2),
    points: int = 17,
) -> float:
    """Fitted exponent of ``|κ_i(x)|`` against the distance to a pushed endpoint."""
    side = _side(side)
    sup, hull = sol.supports[i], sol.hulls[i]
    room = sup.alpha - hull.alpha if side == LEFT else hull.beta - sup.beta
    if room <= 0:
        raise DomainError("endpoint is not pushed")
    dist = room * np.geomspace(*decades, points)
    x = sup.alpha - dist if side == LEFT else sup.beta + dist
    k = np.abs(kappa_line_integral(sol, i, x))
    return float(np.polyfit(np.log(dist), np.log(k), 1)[0])


def density_from_cauchy(sol: EquilibriumSolution, i: int, x):
    """``(h_{i+} - h_{i-})/(2πi)`` from boundary values of the Cauchy transform."""
    from .core import boundary_phi

    ser = sol.series[i]
    iv = ser.interval
    s = iv.to_local(np.asarray(x, dtype=float))
    root = np.sqrt(1 - s * s)
    vals = []
    for side in (1, -1):
        phi = boundary_phi(iv, x, side)
        wr = 1j * side * root
        vals.append(-np.polynomial.polynomial.polyval(phi, ser.coeffs.astype(complex)) / (iv.radius * wr))
    return np.real((vals[0] - vals[1]) / (2j * math.pi))


def gap_sign_changes(sol: EquilibriumSolution, i: int, probe_n: int = 400) -> int:
    """Sign changes of ``h_0 = -Σ h_j`` along the gap after support ``i``."""
    a, b = sol.supports[i].beta, sol.supports[i + 1].alpha
    if not b > a:
        return 0
    x = np.linspace(a, b, probe_n + 2)[1:-1]
    h0 = -sum(np.real(sol.cauchy(j, x + 0j)) for j in range(sol.d))
    sg = np.sign(h0)
    return int(np.sum(sg[1:] != sg[:-1]))


# {{{ independent oracle: discrete energy minimisation


@dataclass(frozen=True, eq=False)
class OracleResult:
    edges: tuple[np.ndarray, ...]
    masses: tuple[np.ndarray, ...]
    energy: float
    kkt: float
    iterations: int

    def cdf(self, i: int, x):
        """Piecewise-linear distribution function of the discrete measure ``i``."""
        cum = np.concatenate([[0.0], np.cumsum(self.masses[i])])
        return np.interp(x, self.edges[i], cum)


def _graded_edges(h: Interval, cells: int) -> np.ndarray:
    return h.to_global(-np.cos(np.pi * np.arange(cells + 1) / cells))


def _cell_kernel(ea: np.ndarray, eb: np.ndarray, quad: int = 4) -> np.ndarray:
    """Mean of ``-log|x - y|`` over cell pairs (uniform density in each cell)."""
    a1, a2 = ea[:-1], ea[1:]
    b1, b2 = eb[:-1], eb[1:]
    wa, wb = a2 - a1, b2 - b1
    ca, cb = 0.5 * (a1 + a2), 0.5 * (b1 + b2)
    g, w = gauss_legendre(quad)
    xa = ca[:, None] + 0.5 * wa[:, None] * g[None, :]
    xb = cb[:, None] + 0.5 * wb[:, None] * g[None, :]
    diff = np.abs(xa[:, None, :, None] - xb[None, :, None, :])
    with np.errstate(divide="ignore"):
        out = -np.einsum("ijkl,k,l->ij", np.log(diff), w, w) / 4
    sep = np.abs(ca[:, None] - cb[None, :]) - 0.5 * (wa[:, None] + wb[None, :])
    near = sep < 2 * np.maximum(wa[:, None], wb[None, :])

    def F(u):
        u = np.abs(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u == 0, 0.0, u * u * (2 * np.log(u) - 3) / 4)

    ii, jj = np.nonzero(near)
    A1, A2, B1, B2 = a1[ii], a2[ii], b1[jj], b2[jj]
    exact = F(A2 - B1) - F(A1 - B1) - F(A2 - B2) + F(A1 - B2)
    out[ii, jj] = -exact / (wa[ii] * wb[jj])
    return out


def _project_simplex(v: np.ndarray, mass: float) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - mass
    ind = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def energy_oracle(
    hulls,
    c: Sequence[float],
    cells: int = 512,
    max_iter: int = 2000,
    polish: bool = True,
) -> OracleResult:
    """Minimise ``½ Σ_{ij} (1 + δ_ij) I[ω_i, ω_j]`` over piecewise-constant densities.

    Cells are Chebyshev graded.  Accelerated projected gradient on the scaled
    simplices identifies the active cells; an active-set KKT solve then
    polishes the minimiser.  No support information is used.
    """
    hulls = getattr(hulls, "intervals", hulls)
    hulls, c = _validate(hulls, c)
    d = len(hulls)
    edges = [_graded_edges(h, cells) for h in hulls]
    blocks = [[(1 + (i == j)) * _cell_kernel(edges[i], edges[j]) for j in range(d)] for i in range(d)]
    B = np.block(blocks)
    sl = [slice(i * cells, (i + 1) * cells) for i in range(d)]

    def project(v):
        out = np.empty_like(v)
        for i in range(d):
            out[sl[i]] = _project_simplex(v[sl[i]], c[i])
        return out

    m = np.concatenate([np.diff(_arcsine_cdf(e)) * ci for e, ci in zip(edges, c)])
    step = 1.0 / np.linalg.eigvalsh(B)[-1]
    y, t = m.copy(), 1.0
    for it in range(max_iter):
        m_new = project(y - step * (B @ y))
        t_new = 0.5 * (1 + math.sqrt(1 + 4 * t * t))
        y = m_new + ((t - 1) / t_new) * (m_new - m)
        if np.max(np.abs(m_new - m)) < 1e-15:
            m = m_new
            break
        m, t = m_new, t_new
    if polish:
        m = _active_set_polish(B, m, c, sl)
    grad = B @ m
    kkt = 0.0
    for i in range(d):
        g = grad[sl[i]]
        act = m[sl[i]] > 0
        lam = float(np.mean(g[act]))
        kkt = max(kkt, float(np.max(np.abs(g[act] - lam))))
        if np.any(~act):
            kkt = max(kkt, float(max(0.0, -(np.min(g[~act]) - lam))))
    energy = 0.5 * float(m @ B @ m)
    return OracleResult(
        tuple(edges), tuple(m[s] for s in sl), energy, kkt, it + 1
    )


def _arcsine_cdf(edges: np.ndarray) -> np.ndarray:
    s = (edges - 0.5 * (edges[0] + edges[-1])) / (0.5 * (edges[-1] - edges[0]))
    return 1 - np.arccos(np.clip(s, -1, 1)) / math.pi


def _active_set_polish(B, m, c, sl, max_rounds: int = 50):
    """Solve the KKT system on the active cells, adjusting the active set."""
    d = len(sl)
    active = m > 0
    for _ in range(max_rounds):
        idx = np.nonzero(active)[0]
        owner = np.concatenate([np.full(s.stop - s.start, i) for i, s in enumerate(sl)])[idx]
        na = len(idx)
        K = np.zeros((na + d, na + d))
        K[:na, :na] = B[np.ix_(idx, idx)]
        for i in range(d):
            K[:na, na + i] = -(owner == i).astype(float)
            K[na + i, :na] = (owner == i).astype(float)
        rhs = np.concatenate([np.zeros(na), c])
        sol = np.linalg.solve(K, rhs)
        trial = np.zeros_like(m)
        trial[idx] = sol[:na]
        lam = sol[na:]
        neg = trial < 0
        if np.any(neg):
            # drop the most negative cells and retry
            active &= ~neg
            continue
        grad = B @ trial
        viol = np.zeros(len(m), dtype=bool)
        for i, s in enumerate(sl):
            viol[s] = (~active[s]) & (grad[s] < lam[i] - 1e-14)
        if not np.any(viol):
            return trial
        active |= viol
    return trial


# }}}
