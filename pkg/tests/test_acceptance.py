"""End-to-end acceptance checks at their stated tolerances.

Each test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary.
"""

from __future__ import annotations

import math
import time
from pathlib import Path

import numpy as np
import pytest

from angelesco.circle import joukowski_bridge
from angelesco.config import load_config
from angelesco.core import Interval, WeightSpec
from angelesco.equilibrium import (
    energy_oracle,
    fit_endpoint_exponent,
    kappa_scaling_exponent,
    solve_vector_equilibrium,
    variational_residual,
)
from angelesco.harness import (
    circle_report,
    classical_degenerate_gap,
    run_steps,
    scenario_from_config,
    verify_sa4,
    verify_vw,
    verify_weak,
    vw_from_config,
)
from angelesco.mop import solve_mop, split_factors
from angelesco.op import monic_orthogonal
from angelesco.szego import (
    TraceVector,
    apply_D,
    boundary_product_residual,
    iterate_D,
    q_from_factors,
    solve_szego_system,
    szego_data,
    y_start,
)
from angelesco.usz import make_example_weight, szego_integral, usz_endpoint_integral

from conftest import GAPPED, TOUCHING

pytestmark = pytest.mark.slow

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
RESULTS: list[str] = []


def verdict(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _index_set(total: int):
    return [(a, b) for t in range(total + 1) for a in range(t + 1) for b in [t - a]]


@pytest.fixture(scope="module")
def symmetric_run():
    sc = scenario_from_config(load_config(CONFIGS / "symmetric.cfg"))
    t0 = time.perf_counter()
    steps = run_steps(sc)
    sa4 = verify_sa4(sc, steps)
    weak = verify_weak(sc, steps)
    return sc, sa4, weak, time.perf_counter() - t0


def test_01_orthogonality_residuals(gapped_system, asymmetric_system):
    t0 = time.perf_counter()
    weights = [
        WeightSpec.uniform(Interval(-1.0, 1.0)),
        WeightSpec.chebyshev(Interval(-1.0, 1.0)),
        *gapped_system.weights,
        *asymmetric_system.weights,
    ]
    op_worst = max(monic_orthogonal(w, n).solve_residual for w in weights for n in range(41))
    mop_worst = max(
        solve_mop(s, (a, 40 - a), max_total=40).solve_residual
        for s in (gapped_system, asymmetric_system)
        for a in range(41)
    )
    elapsed = time.perf_counter() - t0
    ok = op_worst < 1e-20 and mop_worst < 1e-20 and elapsed <= 60
    verdict(1, "orthogonality residuals", ok,
            f"OP max {float(op_worst):.1e}, MOP max {float(mop_worst):.1e}, {elapsed:.0f} s")


def test_02_zero_split(gapped_system, asymmetric_system):
    t0 = time.perf_counter()
    bad = []
    count = 0
    for s in (gapped_system, asymmetric_system):
        for n in _index_set(40):
            if sum(n) == 0:
                continue
            f = split_factors(solve_mop(s, n, max_total=40), s, n)
            count += 1
            if tuple(len(z) for z in f.zeros) != n:
                bad.append(n)
    elapsed = time.perf_counter() - t0
    verdict(2, "Angelesco zero split", not bad and elapsed <= 120,
            f"{count} multi-indices, {len(bad)} mismatches, {elapsed:.0f} s")


def test_03_vector_equilibrium():
    t0 = time.perf_counter()
    worst = {"eq": 0.0, "ineq": math.inf, "mass": 0.0, "cdf": 0.0, "interior": 0.0}
    for hulls, c in ((GAPPED, (0.5, 0.5)), (TOUCHING, (0.75, 0.25))):
        sol = solve_vector_equilibrium(hulls, c)
        vr = variational_residual(sol)
        worst["eq"] = max(worst["eq"], vr.eq_max)
        worst["ineq"] = min(worst["ineq"], vr.ineq_min)
        oracle = energy_oracle(hulls, c, cells=512)
        for i, (s, sup) in enumerate(zip(sol.series, sol.supports)):
            worst["mass"] = max(worst["mass"], abs(s.mass - c[i]))
            e = oracle.edges[i]
            worst["cdf"] = max(worst["cdf"], float(np.max(np.abs(s.cdf(e) - oracle.cdf(i, e)))))
            # density on cells kept 0.05 away from every support edge
            w = np.diff(e)
            keep = (e[:-1] >= sup.alpha + 0.05) & (e[1:] <= sup.beta - 0.05)
            mean = np.diff(s.cdf(e)) / w
            dens = np.abs(mean - oracle.masses[i] / w)[keep]
            worst["interior"] = max(worst["interior"], float(dens.max()))
    elapsed = time.perf_counter() - t0
    ok = (
        worst["eq"] < 1e-8
        and worst["ineq"] >= 0
        and worst["mass"] < 1e-10
        and worst["cdf"] < 1e-4
        and worst["interior"] < 1e-4
        and elapsed <= 120
    )
    verdict(3, "vector equilibrium", ok,
            f"eq {worst['eq']:.1e}, ineq min {worst['ineq']:.1e}, mass {worst['mass']:.1e}, "
            f"oracle CDF {worst['cdf']:.1e}, interior density {worst['interior']:.1e}, {elapsed:.0f} s")


def test_04_pushing(pushed_eq):
    pushed = pushed_eq.pushed(1)[0] and pushed_eq.supports[1].alpha > 0
    fit = fit_endpoint_exponent(pushed_eq, 1, "left")
    kap = kappa_scaling_exponent(pushed_eq, 1, "left")
    ok = pushed and fit.exponent == 0.5 and abs(fit.fitted - 0.5) <= 0.05 and abs(kap - 1.5) <= 0.1
    verdict(4, "pushing effect", ok,
            f"alpha {pushed_eq.supports[1].alpha:.6f}, density exponent {fit.fitted:.4f}, kappa exponent {kap:.4f}")


def test_05_szego_system(gapped_system, asymmetric_system, gapped_eq):
    bres = 0.0
    for system in (gapped_system, asymmetric_system):
        eq = gapped_eq if system is gapped_system else solve_vector_equilibrium(system.intervals, (2 / 3, 1 / 3))
        a = szego_data(system.weights, eq.supports)
        bres = max(bres, boundary_product_residual(solve_szego_system(a).s, a))
    two = (Interval(-1.0, 0.0), Interval(1.0, 2.0))
    const = 0.0
    for a1, a2 in ((1.0, 1.0), (0.3, -0.2), (-2.0, 0.5)):
        s = solve_szego_system(TraceVector.constants(two, (a1, a2))).s
        got = [float(s(i, iv.center)) for i, iv in enumerate(two)]
        const = max(const, abs(got[0] - (4 * a1 - 2 * a2) / 3), abs(got[1] - (4 * a2 - 2 * a1) / 3))
    z = solve_szego_system(TraceVector.constants(GAPPED, (0.0, 0.0))).s
    zero = max(float(np.max(np.abs(z(i, np.linspace(iv.alpha, iv.beta, 33))))) for i, iv in enumerate(GAPPED))
    ok = bres < 1e-8 and const < 1e-13 and zero < 1e-12
    verdict(5, "Szego system", ok, f"boundary {bres:.1e}, constants {const:.1e}, zero input {zero:.1e}")


def test_06_D_fixed_point(gapped_system, gapped_eq):
    n = (10, 10)
    fac = split_factors(solve_mop(gapped_system, n), gapped_system, n)
    q = q_from_factors(gapped_system, n, gapped_eq, fac.factors)
    dq, _ = apply_D(gapped_system, n, gapped_eq, q)
    fixed = dq.sup_distance(q)
    it = iterate_D(gapped_system, n, gapped_eq, y_start(gapped_system, gapped_eq))
    dist = it.q.sup_distance(q)
    verdict(6, "D fixed point", fixed < 1e-8 and dist < 1e-6,
            f"residual at |n|=20 {fixed:.1e}, iterate from y within {dist:.1e} after {len(it.history)} steps")


def test_07_strong_asymptotics(symmetric_run):
    sc, sa4, _, elapsed = symmetric_run
    errs = {}
    for r in sa4.records:
        if r.variant == "n":
            errs.setdefault((r.i, r.z), []).append((r.n_total, r.rel_err))
    finals = [v[-1][1] for v in errs.values()]
    decreasing = all(all(b[1] < a[1] for a, b in zip(v, v[1:])) for v in errs.values())
    totals = sorted({r.n_total for r in sa4.records})
    ok = (
        len(sc.z_points) == 6
        and totals == [10, 20, 40]
        and max(finals) < 0.05
        and decreasing
        and not any(r.flags for r in sa4.records)
        and elapsed <= 300
    )
    verdict(7, "strong asymptotics", ok,
            f"max error at |n|=40 {max(finals):.4f}, decreasing {decreasing}, {elapsed:.0f} s")


def test_08_weak_asymptotics(symmetric_run):
    _, _, weak, _ = symmetric_run
    final = weak.residuals["final_max_distance"]
    ok = final < 0.05 and weak.contracts.get("decreasing", False)
    verdict(8, "weak asymptotics", ok, f"Kolmogorov distance at |n|=40 {final:.4f}")


def test_09_varying_weights():
    parts = []
    ok = True
    for name in ("asymmetric", "pushed"):
        cfg = vw_from_config(load_config(CONFIGS / f"{name}.cfg"))
        rep = verify_vw(cfg)
        assert cfg.degrees[-1] == 24
        rel = rep.residuals["final_max_rel_err"]
        norm = rep.residuals["final_norm_err"]
        ok &= rel < 0.1 and norm < 0.1 and not any(r.flags for r in rep.records)
        parts.append(f"mode {cfg.mode} rel {rel:.1e} norm {norm:.1e}")
    gap = classical_degenerate_gap(WeightSpec.chebyshev(Interval(-1.0, 1.0)), 24, 2.0)
    ok &= gap < 1e-12
    verdict(9, "varying weights", ok, ", ".join(parts) + f", Chebyshev gap {gap:.1e}")


def test_10_circle():
    cfg = load_config(CONFIGS / "circle.cfg")
    rep = circle_report(
        cfg.get("circle.n"), cfg.get("circle.radius"), cfg.get("circle.logv"), cfg.get("circle.g")
    )
    jac = WeightSpec.jacobi(Interval(-1.0, 1.0), 0.5, -0.5, (0.1,))
    bridge = max(
        rep.residuals["bridge"],
        *(joukowski_bridge(jac, lambda x: 0.3 * x, z).rel_err for z in (2.0, 1.2 + 0.5j, -0.3 + 0.2j)),
    )
    ad = rep.residuals["alpha_D0"]
    mass = rep.residuals["mass_identity"]
    ok = cfg.get("circle.n") == 12 and abs(ad - 1) < 0.05 and ad <= 1 and mass < 1e-10 and bridge < 1e-8
    verdict(10, "circle", ok, f"alpha D(0) {ad:.7f}, mass identity {mass:.1e}, bridge {bridge:.1e}")


def test_11_usz_example():
    w0 = make_example_weight(0.0)
    unit = max(
        abs(usz_endpoint_integral(w0, a, d, "right") / math.pi - 1)
        for a in (-1.0, -0.5, 0.0)
        for d in (1e-1, 1e-3, 1e-6, 1e-12, 0.5)
    )
    zero = max(abs(usz_endpoint_integral(w0, -1.0, d, "right")) for d in (0.0, -1e-9, -0.1, -0.5))
    w = make_example_weight(0.5)
    deltas = (1e-2, 1e-8, 1e-20)
    ratios = [usz_endpoint_integral(w, 0.0, d, "right") / math.pi * math.sqrt(1 - math.log(d)) for d in deltas]
    like = all(0.5 < r <= 1 for r in ratios) and ratios[0] < ratios[1] < ratios[2]
    div = szego_integral(w, Interval(0.0, 1.0)).divergent
    ok = unit < 1e-6 and zero < 1e-6 and like and div
    verdict(11, "USz example", ok,
            f"theta_0 {unit:.1e} / {zero:.1e}, theta_1/2 scaled {', '.join(f'{r:.3f}' for r in ratios)}, "
            f"Szego integral divergent {div}")
