"""Versioned CSV and JSON reports, with optional figures."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import gmpy2

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "n_total",
    "i",
    "z_re",
    "z_im",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "rel_err",
    "residual_flags",
    "variant",
    "n_vector",
    "precision_bits",
    "grid_n",
)


_MPFR = type(gmpy2.mpfr(0))
_MPC = type(gmpy2.mpc(0))


def decimal(x) -> str:
    """Full-precision decimal text for floats and gmpy2 numbers."""
    if x is None:
        return ""
    if isinstance(x, _MPFR):
        if not gmpy2.is_finite(x):
            return str(float(x))
        if x == 0:
            return "0.0"
        mant, exp, _ = x.digits(10)
        sign = "-" if mant.startswith("-") else ""
        mant = mant.lstrip("-").rstrip("0") or "0"
        return f"{sign}{mant[0]}.{mant[1:] or '0'}e{exp - 1:+d}"
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def _parts(v):
    """Real and imaginary parts of a float, complex or gmpy2 value."""
    if v is None:
        return None, None
    if isinstance(v, _MPC):
        return v.real, v.imag
    if isinstance(v, complex):
        return v.real, v.imag
    return v, 0.0


@dataclass(frozen=True)
class Record:
    n_total: int
    i: int
    z: complex | None
    lhs: object
    rhs: object
    rel_err: float
    flags: tuple[str, ...] = ()
    variant: str = ""
    n_vector: tuple[int, ...] = ()
    precision_bits: int = 256
    grid_n: int = 64

    def row(self) -> dict:
        lr, li = _parts(self.lhs)
        rr, ri = _parts(self.rhs)
        z = self.z
        return {
            "n_total": str(self.n_total),
            "i": str(self.i),
            "z_re": "" if z is None else repr(float(z.real)),
            "z_im": "" if z is None else repr(float(z.imag)),
            "lhs_re": decimal(lr),
            "lhs_im": decimal(li),
            "rhs_re": decimal(rr),
            "rhs_im": decimal(ri),
            "rel_err": decimal(self.rel_err),
            "residual_flags": ";".join(self.flags),
            "variant": self.variant,
            "n_vector": ";".join(str(k) for k in self.n_vector),
            "precision_bits": str(self.precision_bits),
            "grid_n": str(self.grid_n),
        }


@dataclass
class Report:
    """Records of one check plus contract outcomes and residual summaries."""

    check: str
    records: list[Record] = field(default_factory=list)
    contracts: dict[str, bool] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.contracts.values())

    def summary(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "check": self.check,
            "passed": self.passed,
            "contracts": {k: bool(v) for k, v in self.contracts.items()},
            "residuals": {k: decimal(v) for k, v in self.residuals.items()},
            "params": self.params,
            "extra": self.extra,
        }

    def write(self, out_dir: str | Path, fmt: str = "csv", figures: bool = True) -> list[Path]:
        """Write the report; timing goes to a sidecar so reports stay reproducible."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        summary = self.summary()
        if fmt == "csv":
            p = out / f"{self.check}.csv"
            with p.open("w", newline="", encoding="utf-8") as fh:
                w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
                w.writeheader()
                for r in self.records:
                    w.writerow(r.row())
            paths.append(p)
        else:
            summary["records"] = [r.row() for r in self.records]
        p = out / f"{self.check}.json"
        p.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(p)
        t = out / f"{self.check}.timing.json"
        t.write_text(json.dumps(self.timing, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(t)
        if figures and self.records:
            fig = render_figure(self, out / f"{self.check}.png")
            if fig is not None:
                paths.append(fig)
        return paths


def render_figure(report: Report, path: Path) -> Path | None:
    """Error against ``|n|`` for every (variant, i, z) series; ``None`` if nothing to plot."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict = {}
    for r in report.records:
        if r.rel_err is None or not math.isfinite(r.rel_err) or r.rel_err <= 0:
            continue
        key = (r.variant, r.i, r.z)
        series.setdefault(key, []).append((r.n_total, r.rel_err))
    if not series:
        return None
    fig, ax = plt.subplots(figsize=(6, 4))
    for (variant, i, z), pts in sorted(series.items(), key=lambda kv: str(kv[0])):
        pts.sort()
        xs, ys = zip(*pts)
        label = f"i={i}" + (f", z={z:.3g}" if z is not None else "") + (f" [{variant}]" if variant else "")
        ax.plot(xs, ys, marker="o", lw=1, label=label)
    ax.set_yscale("log")
    ax.set_xlabel("|n|")
    ax.set_ylabel("error")
    ax.set_title(report.check)
    if len(series) <= 12:
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_curves(curves: dict, path: Path, title: str = "") -> Path:
    """Line plot of named ``(x, y)`` curves."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, (x, y) in curves.items():
        ax.plot(x, y, lw=1.2, label=name)
    ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
