"""Command line entry point ``angelesco``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import Config, ConfigError, load_config
from .core import DomainError, Interval, PrecisionConfig
from .harness import (
    Scenario,
    circle_report,
    equilibrium_report,
    mop_report,
    run_steps,
    scenario_from_config,
    szego_report,
    system_from_config,
    usz_report,
    verify_sa4,
    verify_vw,
    verify_weak,
    vw_from_config,
)
from .report import Report, render_curves
from .usz import LogWeightFn, make_example_weight


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path, help="flat key = value scenario file")
    common.add_argument("--precision-bits", type=int, help="mantissa bits for extended precision")
    common.add_argument("--grid", type=int, help="grid / collocation size")
    common.add_argument("--tol", type=float, help="contract tolerance")
    common.add_argument("--out-dir", type=Path, help="output directory (default: ./angelesco-out)")
    common.add_argument("--format", choices=("csv", "json"), help="record format")
    common.add_argument("--no-figures", action="store_true", help="skip matplotlib figures")
    common.add_argument("--workers", type=int, default=1, help="processes for the MOP steps")

    p = argparse.ArgumentParser(prog="angelesco", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="strong, weak and varying-weight checks")
    sub.add_parser("equilibrium", parents=[common], help="vector equilibrium problem")
    sub.add_parser("szego", parents=[common], help="coupled Szegő system")
    m = sub.add_parser("mop", parents=[common], help="one multiple orthogonal polynomial")
    m.add_argument("--n", required=True, help="multi-index, e.g. 5,3")
    u = sub.add_parser("usz", parents=[common], help="uniform Szegő test")
    u.add_argument("--epsilon", type=float, help="use the example weight θ_ε instead of the system")
    sub.add_parser("circle", parents=[common], help="unit circle and Joukowski checks")
    return p


def _config(args) -> Config:
    cfg = load_config(args.config)
    return cfg.with_overrides(
        precision__bits=args.precision_bits,
        grid__n=args.grid,
        tol=args.tol,
        output__dir=str(args.out_dir) if args.out_dir else None,
        output__format=args.format,
    )


def _emit(reports: list[Report], cfg: Config, figures: bool) -> int:
    out = Path(cfg.get("output.dir", "angelesco-out"))
    fmt = cfg.get("output.format", "csv")
    ok = True
    for r in reports:
        r.write(out, fmt, figures)
        status = "PASS" if r.passed else "FAIL"
        failed = [k for k, v in r.contracts.items() if not v]
        print(f"{status} {r.check}" + (f" (failed: {', '.join(failed)})" if failed else ""))
        ok &= r.passed
    print(f"reports written to {out}")
    return 0 if ok else 1


def _run(args, cfg: Config) -> list[Report]:
    sc = scenario_from_config(cfg)
    sc = Scenario(sc.system, sc.ray, sc.z_points, sc.precision, sc.grid_n, sc.tol, sc.usz_levels, args.workers)
    steps = run_steps(sc)
    reports = [verify_sa4(sc, steps), verify_weak(sc, steps)]
    if "vw.mode" in cfg:
        reports.append(verify_vw(vw_from_config(cfg)))
    return reports


def _equilibrium(args, cfg: Config) -> list[Report]:
    system = system_from_config(cfg)
    rep, _ = equilibrium_report(system, cfg.require("ray.c"), cfg.get("grid.n", 64), args.tol or 1e-8)
    if not args.no_figures:
        out = Path(cfg.get("output.dir", "angelesco-out"))
        out.mkdir(parents=True, exist_ok=True)
        curves = {
            f"ω_{i + 1}": (rep.extra[f"density_{i + 1}"]["x"], rep.extra[f"density_{i + 1}"]["density"])
            for i in range(system.d)
        }
        render_curves(curves, out / "equilibrium_densities.png", "equilibrium densities")
    return [rep]


def _szego(args, cfg: Config) -> list[Report]:
    system = system_from_config(cfg)
    return [szego_report(system, cfg.require("ray.c"), cfg.get("grid.n", 64), args.tol or 1e-8)]


def _mop(args, cfg: Config) -> list[Report]:
    n = tuple(int(k) for k in args.n.split(","))
    prec = PrecisionConfig(mantissa_bits=cfg.get("precision.bits", 256))
    return [mop_report(system_from_config(cfg), n, prec)]


def _usz(args, cfg: Config) -> list[Report]:
    eps = args.epsilon if args.epsilon is not None else cfg.get("usz.epsilon")
    levels = cfg.get("usz.levels", 12)
    if eps is not None:
        w = make_example_weight(eps)
        return [usz_report(w, [(0.0, "right")], levels, "usz_example")]
    reports = []
    for i, ws in enumerate(system_from_config(cfg).weights):
        iv: Interval = ws.interval
        reports.append(
            usz_report(LogWeightFn.from_weight(ws), [(iv.alpha, "left"), (iv.beta, "right")], levels, f"usz_{i + 1}")
        )
    return reports


def _circle(args, cfg: Config) -> list[Report]:
    return [
        circle_report(
            cfg.get("circle.n", 12),
            cfg.get("circle.radius", 0.6),
            cfg.get("circle.logv", (0.0, 0.2)),
            cfg.get("circle.g", ()),
            tol=cfg.get("tol", 0.05),
        )
    ]


_COMMANDS = {
    "run": _run,
    "equilibrium": _equilibrium,
    "szego": _szego,
    "mop": _mop,
    "usz": _usz,
    "circle": _circle,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _config(args)
        reports = _COMMANDS[args.command](args, cfg)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _emit(reports, cfg, not args.no_figures)


if __name__ == "__main__":
    sys.exit(main())
