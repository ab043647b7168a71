"""Scenarios, ray sequences and end-to-end verification of the asymptotic theorems."""

from __future__ import annotations

import functools
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circle import (
    CircleMeasure,
    circle_asymptotics,
    circle_onp,
    companion_psi,
    dt_family,
    joukowski_bridge,
    lambda_boundary_gap,
    lambda_mass,
)
from .config import Config, ConfigError
from .core import ArcsineSeries, DomainError, Interval, PrecisionConfig, WeightSpec, szego_G
from .equilibrium import (
    EquilibriumSolution,
    kappa,
    solve_vector_equilibrium,
    variational_residual,
)
from .mop import AngelescoSystem, DiscreteMeasure, MultiIndex, solve_mop, split_factors
from .op import VaryingWeight, classical_asymptotics_check, monic_orthogonal, norm_squared
from .report import Record, Report
from .szego import boundary_product_residual, eval_S, solve_szego_system, szego_data
from .usz import LogWeightFn, usz_verdict

_EQ_TOL = 1e-8
_SZ_TOL = 1e-8
_FACTOR_TOL = 1e-10


# {{{ scenario


def _largest_remainder(c: Sequence[float], total: int) -> tuple[int, ...]:
    raw = [ci * total for ci in c]
    base = [int(np.floor(r)) for r in raw]
    order = sorted(range(len(c)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[: total - sum(base)]:
        base[i] += 1
    return tuple(base)


@dataclass(frozen=True)
class Ray:
    """A non-marginal ray ``c`` with an increasing schedule of multi-indices."""

    c: tuple[float, ...]
    schedule: tuple[MultiIndex, ...]

    def __post_init__(self) -> None:
        if any(ci <= 0 for ci in self.c) or abs(sum(self.c) - 1) > 1e-12:
            raise DomainError("c must have positive entries summing to 1")
        totals = [m.total for m in self.schedule]
        if not totals or any(b <= a for a, b in zip(totals, totals[1:])):
            raise DomainError("the schedule must be non-empty and strictly increasing in |n|")
        if any(len(m) != len(self.c) for m in self.schedule):
            raise DomainError("multi-index length differs from len(c)")

    @classmethod
    def rounded(cls, c: Sequence[float], totals: Sequence[int]) -> Ray:
        c = tuple(float(x) for x in c)
        return cls(c, tuple(MultiIndex(_largest_remainder(c, int(N))) for N in totals))

    @classmethod
    def multiple(cls, m: Sequence[int], multiples: Sequence[int]) -> Ray:
        tot = sum(m)
        return cls(
            tuple(k / tot for k in m),
            tuple(MultiIndex(tuple(k * j for j in m)) for k in multiples),
        )


@dataclass(frozen=True)
class Scenario:
    system: AngelescoSystem
    ray: Ray
    z_points: tuple[complex, ...]
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    grid_n: int = 64
    tol: float = 0.05
    usz_levels: int = 5
    workers: int = 1

    def __post_init__(self) -> None:
        if len(self.ray.c) != self.system.d:
            raise DomainError("ray dimension differs from the number of weights")
        for z in self.z_points:
            z = complex(z)
            for iv in self.system.intervals:
                if z.imag == 0 and iv.alpha <= z.real <= iv.beta:
                    raise DomainError(f"probe point {z} lies on the hull {iv}")


def _weights_from_config(cfg: Config) -> tuple[WeightSpec, ...]:
    d = cfg.require("system.d")
    out = []
    for i in range(1, d + 1):
        iv = cfg.require(f"system.{i}.interval")
        if len(iv) != 2:
            raise ConfigError(f"system.{i}.interval needs two numbers")
        out.append(
            WeightSpec(
                Interval(*iv),
                cfg.get(f"system.{i}.weight.ga", 0),
                cfg.get(f"system.{i}.weight.gb", 0),
                cfg.get(f"system.{i}.weight.A", ()),
            )
        )
    return tuple(out)


def system_from_config(cfg: Config) -> AngelescoSystem:
    return AngelescoSystem(_weights_from_config(cfg))


def scenario_from_config(cfg: Config) -> Scenario:
    system = system_from_config(cfg)
    kind = cfg.get("ray.schedule", "rounded")
    if kind == "rounded":
        ray = Ray.rounded(cfg.require("ray.c"), cfg.require("ray.totals"))
    else:
        ray = Ray.multiple(cfg.require("ray.m"), cfg.require("ray.multiples"))
    return Scenario(
        system,
        ray,
        tuple(cfg.require("z_points")),
        PrecisionConfig(mantissa_bits=cfg.get("precision.bits", 256)),
        cfg.get("grid.n", 64),
        cfg.get("tol", 0.05),
        cfg.get("usz.levels", 5),
    )


# }}}


# {{{ shared pieces


@functools.lru_cache(maxsize=16)
def _equilibrium(hulls: tuple[Interval, ...], c: tuple[float, ...], grid_n: int) -> EquilibriumSolution:
    return solve_vector_equilibrium(hulls, c, grid_n=grid_n)


def _usz_precondition(scenario: Scenario, eq: EquilibriumSolution) -> dict[str, bool]:
    out = {}
    for i, (w, sup) in enumerate(zip(scenario.system.weights, eq.supports)):
        lw = LogWeightFn.from_weight(w)
        for side, e in (("left", sup.alpha), ("right", sup.beta)):
            v = usz_verdict(lw, e, side, max_m=scenario.usz_levels)
            out[f"usz_{i + 1}_{side}"] = v.passed
    return out


@dataclass(frozen=True)
class _Step:
    n: MultiIndex
    lhs: tuple
    flags: tuple[str, ...]
    residual: float
    zeros: tuple
    eq_n: EquilibriumSolution | None


def _mop_step(system: AngelescoSystem, n: MultiIndex, z_points, precision, cap: int, grid_n: int) -> _Step:
    flags = []
    P = solve_mop(system, n, precision, max_total=cap)
    if P.solve_residual >= precision.solve_residual_tol:
        flags.append("mop_residual")
    if n.total == 0:
        lhs = tuple((1.0 + 0j,) * len(z_points) for _ in range(system.d))
        return _Step(n, lhs, tuple(flags), P.solve_residual, tuple(() for _ in range(system.d)), None)
    fac = split_factors(P, system, n)
    if fac.reconstruction_error > _FACTOR_TOL:
        flags.append("factor")
    lhs = tuple(
        tuple(complex(f.eval_mp(complex(z))) if f.degree else 1.0 + 0j for z in z_points)
        for f in fac.factors
    )
    eq_n = _equilibrium(system.intervals, n.c, grid_n)
    if eq_n.diagnostics.get("eq_max", 0.0) > _EQ_TOL:
        flags.append("equilibrium_n")
    return _Step(n, lhs, tuple(flags), P.solve_residual, tuple(tuple(zs) for zs in fac.zeros), eq_n)


def run_steps(scenario: Scenario) -> list[_Step]:
    cap = max(m.total for m in scenario.ray.schedule)
    args = [
        (scenario.system, n, scenario.z_points, scenario.precision, cap, scenario.grid_n)
        for n in scenario.ray.schedule
    ]
    if scenario.workers > 1:
        with ProcessPoolExecutor(scenario.workers) as pool:
            return list(pool.map(_mop_step, *zip(*args)))
    return [_mop_step(*a) for a in args]


def _decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


# }}}


# {{{ strong asymptotics for multiple orthogonal polynomials


def verify_sa4(scenario: Scenario, steps: list[_Step] | None = None) -> Report:
    """Compare the factors ``P_{n,i}`` with their strong asymptotic formula.

    The reference is ``exp(|n| ∫ log(z-x) dω_{n,i}) S_{c,i}(∞)/S_{c,i}(z)`` with
    the equilibrium recomputed at ``c = n/|n|``; a fixed-``c`` variant is
    reported alongside for comparison.
    """
    t0 = time.perf_counter()
    sc = scenario
    sysm = sc.system
    eq = _equilibrium(sysm.intervals, sc.ray.c, sc.grid_n)
    vr = variational_residual(eq)
    a = szego_data(sysm.weights, eq.supports, sc.grid_n)
    sz = solve_szego_system(a)
    bres = boundary_product_residual(sz.s, a)
    upstream = []
    if vr.eq_max > _EQ_TOL:
        upstream.append("equilibrium")
    if bres > _SZ_TOL:
        upstream.append("szego")
    t_setup = time.perf_counter()
    steps = steps or run_steps(sc)
    t_mop = time.perf_counter()
    report = Report(
        "sa4",
        params={
            "precision_bits": sc.precision.mantissa_bits,
            "grid_n": sc.grid_n,
            "tol": sc.tol,
            "c": list(sc.ray.c),
            "schedule": [list(m.n) for m in sc.ray.schedule],
        },
    )
    s_inf = [complex(eval_S(sz.s, i, np.inf)) for i in range(sysm.d)]
    errs: dict = {}
    for st in steps:
        flags = tuple(upstream) + st.flags
        for i in range(sysm.d):
            for k, z in enumerate(sc.z_points):
                ratio = s_inf[i] / complex(eval_S(sz.s, i, complex(z)))
                lhs = st.lhs[i][k]
                for variant, e in (("n", st.eq_n), ("fixed_c", eq)):
                    expo = 0j if e is None else st.n.total * complex(e.series[i].complex_log_potential(complex(z)))
                    rhs = np.exp(expo) * ratio
                    err = abs(lhs / rhs - 1)
                    report.records.append(
                        Record(st.n.total, i + 1, complex(z), lhs, complex(rhs), float(err), flags,
                               variant, st.n.n, sc.precision.mantissa_bits, sc.grid_n)
                    )
                    if variant == "n":
                        errs.setdefault((i, k), []).append(err)
    final_total = sc.ray.schedule[-1].total
    final = max((v[-1] for v in errs.values()), default=0.0)
    report.residuals.update(
        eq_max=vr.eq_max,
        szego_boundary=bres,
        mop_max=max(st.residual for st in steps),
        final_max_rel_err=final,
    )
    report.contracts["no_flagged_rows"] = not any(r.flags for r in report.records)
    usz = _usz_precondition(sc, eq)
    report.extra["usz"] = usz
    report.contracts["usz_precondition"] = all(usz.values())
    if final_total > 0:
        report.contracts["final_below_tol"] = bool(final < sc.tol)
    if len(steps) > 1:
        report.contracts["decreasing"] = all(_decreasing(v) for v in errs.values())
    report.extra["cross_consistency"] = cross_consistency(sz, eq, sysm)
    report.contracts["cross_consistency"] = report.extra["cross_consistency"] < 10 * sc.tol
    report.extra["supports"] = [[s.alpha, s.beta] for s in eq.supports]
    report.extra["S_inf"] = [v.real for v in s_inf]
    report.timing.update(setup=t_setup - t0, mop=t_mop - t_setup, total=time.perf_counter() - t0)
    return report


def cross_consistency(sz, eq: EquilibriumSolution, system: AngelescoSystem, z: complex = 3.0 + 1.0j) -> float:
    """``S_i(∞)/S_i(z)`` against ``G(e^{h_i} μ_{i|Δ_{c,i}})`` with ``h_i = -Σ_{j≠i} log S_j``.

    The second route is the single-interval Szegő function used by the varying
    weight theorems, built independently of the coupled solve.
    """
    out = 0.0
    for i, (w, sup) in enumerate(zip(system.weights, eq.supports)):

        def h(x, i=i):
            x = np.asarray(x, dtype=float) + 0j
            return -sum(np.real(np.log(eval_S(sz.s, j, x))) for j in range(system.d) if j != i)

        ref = complex(eval_S(sz.s, i, np.inf) / eval_S(sz.s, i, z))
        alt = complex(szego_G(w, sup, np.inf, h=h) / szego_G(w, sup, z, h=h))
        out = max(out, abs(alt / ref - 1))
    return out


# }}}


# {{{ weak asymptotics


def verify_weak(scenario: Scenario, steps: list[_Step] | None = None) -> Report:
    """Kolmogorov distance between zero counting measures and ``c_i^{-1} ω_{c,i}``."""
    t0 = time.perf_counter()
    sc = scenario
    eq = _equilibrium(sc.system.intervals, sc.ray.c, sc.grid_n)
    steps = steps or run_steps(sc)
    report = Report(
        "weak",
        params={"precision_bits": sc.precision.mantissa_bits, "grid_n": sc.grid_n, "tol": sc.tol},
    )
    dists: dict = {}
    for st in steps:
        if st.n.total == 0:
            continue
        for i in range(sc.system.d):
            if not st.n[i]:
                continue
            ci = eq.c[i]
            meas = DiscreteMeasure(np.sort(np.array([float(x) for x in st.zeros[i]])))
            dist = meas.kolmogorov_distance(lambda x, i=i, ci=ci: eq.series[i].cdf(x) / ci)
            dists.setdefault(i, []).append(dist)
            report.records.append(
                Record(st.n.total, i + 1, None, dist, 0.0, dist, st.flags, "kolmogorov",
                       st.n.n, sc.precision.mantissa_bits, sc.grid_n)
            )
    final = max((v[-1] for v in dists.values()), default=0.0)
    report.residuals["final_max_distance"] = final
    report.contracts["no_flagged_rows"] = not any(r.flags for r in report.records)
    if dists:
        report.contracts["final_below_tol"] = final < sc.tol
    if len(steps) > 1:
        report.contracts["decreasing"] = all(_decreasing(v) for v in dists.values())
    report.timing["total"] = time.perf_counter() - t0
    return report


# }}}


# {{{ varying weights


@dataclass(frozen=True)
class VwConfig:
    """Inputs for the varying-weight checks.

    Mode ``full``: ``ω_n`` is the arcsine series ``omega`` on the whole interval
    of ``weight``.  Mode ``equilibrium``: ``ω_n = c_i^{-1} ω_{c,i}`` and ``κ_n = κ_i``
    from the equilibrium of ``system`` at ``c``, with ``weight`` the ``i``-th one.
    """

    mode: str
    weight: WeightSpec
    degrees: tuple[int, ...] = (8, 16, 24)
    z_points: tuple[complex, ...] = (3.0 + 0j,)
    h: tuple[float, ...] = ()
    omega: tuple[float, ...] = (1.0,)
    system: AngelescoSystem | None = None
    c: tuple[float, ...] = ()
    i: int = 0
    tol: float = 0.1
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    grid_n: int = 64

    def __post_init__(self) -> None:
        if self.mode not in ("full", "equilibrium"):
            raise DomainError("mode must be 'full' or 'equilibrium'")
        if self.mode == "equilibrium" and self.system is None:
            raise DomainError("equilibrium mode needs an Angelesco system and a ray c")
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise DomainError("degrees must increase")


def vw_from_config(cfg: Config) -> VwConfig:
    mode = cfg.require("vw.mode")
    common = dict(
        degrees=tuple(cfg.get("vw.degrees", (8, 16, 24))),
        z_points=tuple(cfg.get("vw.z", (3.0 + 0j,))),
        h=tuple(cfg.get("vw.h", ())),
        omega=tuple(cfg.get("vw.omega", (1.0,))),
        tol=cfg.get("vw.tol", 0.1),
        precision=PrecisionConfig(mantissa_bits=cfg.get("precision.bits", 256)),
        grid_n=cfg.get("grid.n", 64),
    )
    i = cfg.get("vw.i", 1) - 1
    weights = _weights_from_config(cfg)
    if not 0 <= i < len(weights):
        raise ConfigError("vw.i is out of range")
    if mode == "full":
        return VwConfig("full", weights[i], **common)
    return VwConfig(
        "equilibrium", weights[i], system=AngelescoSystem(weights), c=tuple(cfg.require("ray.c")), i=i, **common
    )


def _poly_fn(coeffs: Sequence[float]):
    if not coeffs:
        return None
    cs = np.asarray(coeffs, dtype=float)
    return lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), cs)


def verify_vw(cfg: VwConfig) -> Report:
    """Strong asymptotics and the norm identity for ``T_n(e^{θ_n} μ)``."""
    t0 = time.perf_counter()
    w = cfg.weight
    h = _poly_fn(cfg.h)
    if cfg.mode == "full":
        omega = ArcsineSeries(w.interval, np.asarray(cfg.omega, dtype=float) / cfg.omega[0])
        support = w.interval
        kap = None
    else:
        eq = _equilibrium(cfg.system.intervals, cfg.c, cfg.grid_n)
        ci = eq.c[cfg.i]
        omega = ArcsineSeries(eq.supports[cfg.i], eq.series[cfg.i].coeffs / ci)
        support = eq.supports[cfg.i]
        kap = functools.partial(kappa, eq, cfg.i)
    g_inf = float(np.real(szego_G(w, support, np.inf, h=h)))
    report = Report(
        f"vw_{cfg.mode}",
        params={
            "mode": cfg.mode,
            "precision_bits": cfg.precision.mantissa_bits,
            "grid_n": cfg.grid_n,
            "tol": cfg.tol,
            "support": [support.alpha, support.beta],
        },
    )
    errs: dict = {}
    norm_errs = []
    for n in cfg.degrees:

        def theta(x, n=n):
            x = np.asarray(x, dtype=float)
            out = 2 * n * omega.potential(x)
            if kap is not None:
                out = out + 2 * n * kap(x)
            return out + (h(x) if h is not None else 0.0)

        T = monic_orthogonal(VaryingWeight(w, theta, n), n, cfg.precision)
        flags = ("op_residual",) if T.solve_residual >= 1e-12 else ()
        for k, z in enumerate(cfg.z_points):
            z = complex(z)
            lhs = complex(T.eval_mp(z))
            rhs = complex(
                np.exp(n * omega.complex_log_potential(z)) * g_inf / szego_G(w, support, z, h=h)
            )
            err = abs(lhs / rhs - 1)
            errs.setdefault(k, []).append(err)
            report.records.append(
                Record(n, cfg.i + 1, z, lhs, rhs, err, flags, "strong", (n,),
                       cfg.precision.mantissa_bits, cfg.grid_n)
            )
        nsq = norm_squared(T)
        target = 2 * g_inf**2
        nerr = abs(float(nsq) / target - 1)
        norm_errs.append(nerr)
        report.records.append(
            Record(n, cfg.i + 1, None, nsq, target, nerr, flags, "norm", (n,),
                   cfg.precision.mantissa_bits, cfg.grid_n)
        )
    final = max(v[-1] for v in errs.values())
    report.residuals.update(final_max_rel_err=final, final_norm_err=norm_errs[-1])
    report.contracts["no_flagged_rows"] = not any(r.flags for r in report.records)
    report.contracts["final_below_tol"] = final < cfg.tol
    report.contracts["norm_within_tol"] = norm_errs[-1] < cfg.tol
    if len(cfg.degrees) > 1:
        report.contracts["norm_decreasing"] = _decreasing(norm_errs)
    report.timing["total"] = time.perf_counter() - t0
    return report


def classical_degenerate_gap(weight: WeightSpec, n: int, z: complex) -> float:
    """Difference between the ``full`` mode error with ``ω = ω_Δ``, ``h = 0`` and the classical check."""
    rep = verify_vw(VwConfig("full", weight, degrees=(n,), z_points=(z,)))
    err = next(r.rel_err for r in rep.records if r.variant == "strong")
    return abs(err - classical_asymptotics_check(weight, n, z).rel_err)


# }}}


# {{{ single-module reports


def equilibrium_report(system: AngelescoSystem, c: Sequence[float], grid_n: int = 64, tol: float = 1e-8) -> tuple[Report, EquilibriumSolution]:
    t0 = time.perf_counter()
    eq = _equilibrium(system.intervals, tuple(float(x) for x in c), grid_n)
    vr = variational_residual(eq)
    rep = Report("equilibrium", params={"grid_n": grid_n, "tol": tol, "c": list(eq.c)})
    masses = [s.mass for s in eq.series]
    rep.residuals.update(eq_max=vr.eq_max, ineq_min=vr.ineq_min, mass_err=max(abs(m - ci) for m, ci in zip(masses, eq.c)))
    rep.contracts.update(
        equality=vr.eq_max < tol,
        inequality=vr.ineq_min >= -tol,
        masses=rep.residuals["mass_err"] < 1e-10,
    )
    rep.extra.update(
        supports=[[s.alpha, s.beta] for s in eq.supports],
        ell=list(eq.ell),
        soft=[list(p) for p in eq.soft],
        pushed=[list(eq.pushed(i)) for i in range(eq.d)],
    )
    for i, sup in enumerate(eq.supports):
        rep.extra[f"density_{i + 1}"] = _density_samples(eq, i, sup)
    rep.timing["total"] = time.perf_counter() - t0
    return rep, eq


def _density_samples(eq: EquilibriumSolution, i: int, sup: Interval, k: int = 201) -> dict:
    s = np.cos(np.pi * (np.arange(k) + 0.5) / k)[::-1]
    x = sup.to_global(s)
    return {"x": x.tolist(), "density": np.asarray(eq.series[i].density(x)).tolist()}


def szego_report(system: AngelescoSystem, c: Sequence[float], grid_n: int = 64, tol: float = 1e-8) -> Report:
    t0 = time.perf_counter()
    eq = _equilibrium(system.intervals, tuple(float(x) for x in c), grid_n)
    a = szego_data(system.weights, eq.supports, grid_n)
    sz = solve_szego_system(a)
    bres = boundary_product_residual(sz.s, a)
    rep = Report("szego", params={"grid_n": grid_n, "tol": tol})
    rep.residuals.update(fixed_point=sz.residual, boundary_product=bres, min_singular_value=sz.min_singular_value)
    rep.contracts.update(fixed_point=sz.residual < tol, boundary_product=bres < tol)
    rep.extra.update(
        supports=[[s.alpha, s.beta] for s in eq.supports],
        S_inf=[float(np.real(eval_S(sz.s, i, np.inf))) for i in range(system.d)],
    )
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def mop_report(system: AngelescoSystem, n: Sequence[int], precision: PrecisionConfig | None = None) -> Report:
    t0 = time.perf_counter()
    precision = precision or PrecisionConfig()
    mi = MultiIndex(tuple(n))
    P = solve_mop(system, mi, precision)
    fac = split_factors(P, system, mi)
    rep = Report("mop", params={"precision_bits": precision.mantissa_bits, "n": list(mi.n)})
    rep.residuals.update(orthogonality=P.solve_residual, reconstruction=fac.reconstruction_error)
    rep.contracts.update(
        orthogonality=P.solve_residual < precision.solve_residual_tol,
        zero_split=tuple(len(z) for z in fac.zeros) == mi.n,
    )
    rep.extra["zeros"] = [[str(x) for x in zs] for zs in fac.zeros]
    rep.extra["coefficients"] = [str(x) for x in P.coeffs]
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def usz_report(weight: LogWeightFn, endpoints: Sequence[tuple[float, str]], levels: int = 12, label: str = "usz") -> Report:
    from .usz import szego_integral

    t0 = time.perf_counter()
    rep = Report(label, params={"levels": levels})
    for e, side in endpoints:
        v = usz_verdict(weight, e, side, max_m=levels)
        rep.extra[f"{side}@{e:g}"] = {"levels": list(v.levels), "worst": list(v.worst), "passed": v.passed}
        rep.contracts[f"usz_{side}@{e:g}"] = v.passed
    sz = szego_integral(weight)
    rep.extra["szego_integral"] = {"value": sz.value, "divergent": sz.divergent}
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def circle_report(
    n: int = 12,
    radius: float = 0.6,
    logv: Sequence[float] = (0.0, 0.2),
    g: Sequence[float] = (),
    bridge_weight: WeightSpec | None = None,
    tol: float = 0.05,
) -> Report:
    """Circle checks on a (D_T) family: ``α_n D_n(0)``, the ``λ_n`` identities and the bridge."""
    t0 = time.perf_counter()
    sigma = CircleMeasure.from_fourier(list(logv) or [0.0])
    gfn = None
    if g:
        gc = np.asarray(g, dtype=float)
        gfn = lambda t: np.cos(np.multiply.outer(np.asarray(t, dtype=float), np.arange(len(gc)))) @ gc  # noqa: E731
    W = dt_family(n, radius)
    onp = circle_onp(sigma, gfn, W)
    asy = circle_asymptotics(onp)
    comp = companion_psi(onp)
    mass = onp.sigma.mass()
    mass_err = max(abs(lambda_mass(comp) - mass), abs(comp.lambda_n(0) - mass))
    gap = lambda_boundary_gap(comp)
    rep = Report("circle", params={"n": n, "radius": radius, "tol": tol})
    rep.residuals.update(
        alpha_D0=asy.alpha_D0, mass_identity=mass_err, lambda_boundary=gap, orthogonality=onp.residual
    )
    rep.contracts.update(
        alpha_D0=abs(asy.alpha_D0 - 1) < tol,
        entropy=asy.alpha_D0 <= 1 + 1e-12,
        mass_identity=mass_err < 1e-10,
        lambda_boundary=gap < 1e-8,
    )
    rep.extra.update(deficiency=W.deficiency, strong=[asy.strong.real, asy.strong.imag])
    bw = bridge_weight or WeightSpec.jacobi(Interval(-1, 1), 0, 0, (0.2,))
    berr = max(joukowski_bridge(bw, None, z).rel_err for z in (2.0, 1.2 + 0.5j, -0.3 + 0.2j))
    rep.residuals["bridge"] = berr
    rep.contracts["bridge"] = berr < 1e-8
    rep.timing["total"] = time.perf_counter() - t0
    return rep


# }}}
