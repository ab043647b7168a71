from __future__ import annotations

from fractions import Fraction

import pytest

from angelesco.core import Interval, WeightSpec
from angelesco.equilibrium import solve_vector_equilibrium
from angelesco.mop import AngelescoSystem

GAPPED = (Interval(-1.0, -0.2), Interval(0.2, 1.0))
TOUCHING = (Interval(-1.0, 0.0), Interval(0.0, 1.0))


@pytest.fixture(scope="session")
def gapped_system() -> AngelescoSystem:
    return AngelescoSystem(tuple(WeightSpec.uniform(iv) for iv in GAPPED))


@pytest.fixture(scope="session")
def asymmetric_system() -> AngelescoSystem:
    return AngelescoSystem(
        (
            WeightSpec.jacobi(Interval(-1.0, 0.0), Fraction(1, 2), Fraction(0)),
            WeightSpec.jacobi(Interval(0.5, 2.0), Fraction(0), Fraction(-1, 2), (0.0, 0.3)),
        )
    )


@pytest.fixture(scope="session")
def gapped_eq():
    return solve_vector_equilibrium(GAPPED, (0.5, 0.5))


@pytest.fixture(scope="session")
def pushed_eq():
    return solve_vector_equilibrium(TOUCHING, (0.75, 0.25))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
