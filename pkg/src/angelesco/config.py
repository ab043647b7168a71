"""Flat typed ``key = value`` scenario files.

Example::

    system.d = 2
    system.1.interval = -1, -0.2
    system.2.interval = 0.2, 1
    system.2.weight.ga = -1/2
    ray.c = 1/2, 1/2
    ray.schedule = rounded
    ray.totals = 10, 20, 40
    z_points = 2+1j, -2+1j
    precision.bits = 256
    grid.n = 64
    tol = 0.05

Intervals are numbered from 1.  Lines starting with ``#`` are comments.
Unknown keys are errors.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


class ConfigError(ValueError):
    """Malformed, unknown or missing configuration entries."""


def _floats(v: str) -> tuple[float, ...]:
    return tuple(float(Fraction(x.strip())) for x in v.split(",") if x.strip())


def _fractions(v: str) -> Fraction:
    return Fraction(v.strip())


def _complexes(v: str) -> tuple[complex, ...]:
    return tuple(complex(x.strip().replace(" ", "")) for x in v.split(",") if x.strip())


def _ints(v: str) -> tuple[int, ...]:
    return tuple(int(x) for x in v.split(",") if x.strip())


def _int(v: str) -> int:
    return int(v)


def _float(v: str) -> float:
    return float(Fraction(v.strip()))


def _choice(*options: str) -> Callable[[str], str]:
    def parse(v: str) -> str:
        v = v.strip()
        if v not in options:
            raise ValueError(f"expected one of {options}")
        return v

    return parse


def _string(v: str) -> str:
    return v.strip()


_SCHEMA: tuple[tuple[str, Callable], ...] = (
    (r"system\.d", _int),
    (r"system\.\d+\.interval", _floats),
    (r"system\.\d+\.weight\.ga", _fractions),
    (r"system\.\d+\.weight\.gb", _fractions),
    (r"system\.\d+\.weight\.A", _floats),
    (r"ray\.c", _floats),
    (r"ray\.schedule", _choice("rounded", "multiple")),
    (r"ray\.totals", _ints),
    (r"ray\.m", _ints),
    (r"ray\.multiples", _ints),
    (r"z_points", _complexes),
    (r"precision\.bits", _int),
    (r"grid\.n", _int),
    (r"tol", _float),
    (r"usz\.levels", _int),
    (r"usz\.epsilon", _float),
    (r"vw\.mode", _choice("full", "equilibrium")),
    (r"vw\.i", _int),
    (r"vw\.degrees", _ints),
    (r"vw\.z", _complexes),
    (r"vw\.h", _floats),
    (r"vw\.omega", _floats),
    (r"vw\.tol", _float),
    (r"circle\.n", _int),
    (r"circle\.radius", _float),
    (r"circle\.logv", _floats),
    (r"circle\.g", _floats),
    (r"output\.dir", _string),
    (r"output\.format", _choice("csv", "json")),
)


@dataclass(frozen=True)
class Config:
    """Parsed entries keyed by their dotted names."""

    entries: dict

    def get(self, key: str, default=None):
        return self.entries.get(key, default)

    def require(self, key: str):
        if key not in self.entries:
            raise ConfigError(f"missing required key {key!r}")
        return self.entries[key]

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def with_overrides(self, **kv) -> Config:
        out = dict(self.entries)
        out.update({k.replace("__", "."): v for k, v in kv.items() if v is not None})
        return Config(out)


def parse_config(text: str) -> Config:
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        for pattern, parser in _SCHEMA:
            if re.fullmatch(pattern, key):
                break
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            entries[key] = parser(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    return Config(entries)


def load_config(path: str | Path) -> Config:
    return parse_config(Path(path).read_text(encoding="utf-8"))
