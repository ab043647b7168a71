"""Multiple orthogonal polynomials for Angelesco systems and their asymptotics.

The package computes type II multiple orthogonal polynomials at extended
precision, solves the vector equilibrium and coupled Szegő problems attached to
an Angelesco system, and compares the polynomials with their weak and strong
asymptotic formulas.  A command line front end lives in :mod:`angelesco.cli`.
"""

from __future__ import annotations

from .circle import (
    BlaschkeData,
    CircleMeasure,
    circle_asymptotics,
    circle_onp,
    companion_psi,
    disk_functions,
    dt_family,
    joukowski_bridge,
    joukowski_check,
)
from .config import Config, ConfigError, load_config, parse_config
from .core import (
    ArcsineSeries,
    DomainError,
    GridDensity,
    Interval,
    PrecisionConfig,
    WeightSpec,
    arcsine_density,
    conformal_frame,
    dirichlet_extend,
    log_potential,
    outer_omega,
    szego_G,
)
from .equilibrium import (
    EquilibriumSolution,
    endpoint_exponent,
    energy_oracle,
    kappa,
    solve_vector_equilibrium,
    variational_residual,
)
from .harness import Ray, Scenario, verify_sa4, verify_vw, verify_weak
from .hp import PrecisionError
from .mop import (
    AngelescoError,
    AngelescoSystem,
    MultiIndex,
    counting_measure,
    solve_mop,
    split_factors,
)
from .op import MonicPoly, VaryingWeight, classical_asymptotics_check, monic_orthogonal, poly_zeros
from .report import Record, Report
from .szego import TraceVector, apply_H, eval_S, iterate_D, solve_szego_system
from .usz import (
    LogWeightFn,
    frac_integral,
    make_example_weight,
    usz_endpoint_integral,
    usz_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "AngelescoError",
    "AngelescoSystem",
    "ArcsineSeries",
    "BlaschkeData",
    "CircleMeasure",
    "Config",
    "ConfigError",
    "DomainError",
    "EquilibriumSolution",
    "GridDensity",
    "Interval",
    "LogWeightFn",
    "MonicPoly",
    "MultiIndex",
    "PrecisionConfig",
    "PrecisionError",
    "Ray",
    "Record",
    "Report",
    "Scenario",
    "TraceVector",
    "VaryingWeight",
    "WeightSpec",
    "apply_H",
    "arcsine_density",
    "circle_asymptotics",
    "circle_onp",
    "classical_asymptotics_check",
    "companion_psi",
    "conformal_frame",
    "counting_measure",
    "dirichlet_extend",
    "disk_functions",
    "dt_family",
    "endpoint_exponent",
    "energy_oracle",
    "eval_S",
    "frac_integral",
    "iterate_D",
    "joukowski_bridge",
    "joukowski_check",
    "kappa",
    "load_config",
    "log_potential",
    "make_example_weight",
    "monic_orthogonal",
    "outer_omega",
    "parse_config",
    "poly_zeros",
    "solve_mop",
    "solve_szego_system",
    "solve_vector_equilibrium",
    "split_factors",
    "szego_G",
    "usz_endpoint_integral",
    "usz_verdict",
    "variational_residual",
    "verify_sa4",
    "verify_vw",
    "verify_weak",
]
