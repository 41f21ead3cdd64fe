"""Robust cost estimation for linear systems stopped at an uncertain time."""

from .config import DEFAULT_TOLS, Tolerances
from .finite_horizon import (
    CostSequence,
    cost_sequence_naive,
    cost_sequence_strided,
    rce_finite,
)
from .infinite_horizon import (
    ComplexTerm,
    CutoffResult,
    OscillatorySum,
    RceInfResult,
    RealTerm,
    adversarial_instance,
    bezout_steps,
    decompose,
    dircyc_instance,
    eval_g,
    find_n0,
    find_t0,
    geometric_drce,
    rce_infinite,
    rce_infinite_2d,
)
from .lp_solver import LinearProgram, LpSolution, lp_solve
from .markov_gas import (
    GasSystem,
    MarkovChain,
    build_ab,
    project_state,
    recover_state,
    stationary,
    to_gas,
    transfer_cost,
)
from .matrix_core import RealJordanForm, mat_pow, mat_vec, real_jordan, spectral_radius
from .scenarios import (
    ComparisonReport,
    CsocParams,
    HealthParams,
    build_csoc_overtime,
    build_health_chain,
    compare_report,
    person_chain,
    sample_horizons,
)
from .wasserstein import (
    AmbiguitySet,
    DrceSolution,
    GroundDistance,
    drce_finite,
    drce_with_initial_uncertainty,
    unit_ball_vertices,
    w1_distance,
    w_norm,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguitySet",
    "ComparisonReport",
    "ComplexTerm",
    "CostSequence",
    "CsocParams",
    "CutoffResult",
    "DEFAULT_TOLS",
    "DrceSolution",
    "GasSystem",
    "GroundDistance",
    "HealthParams",
    "LinearProgram",
    "LpSolution",
    "MarkovChain",
    "OscillatorySum",
    "RceInfResult",
    "RealJordanForm",
    "RealTerm",
    "Tolerances",
    "adversarial_instance",
    "bezout_steps",
    "build_ab",
    "build_csoc_overtime",
    "build_health_chain",
    "compare_report",
    "cost_sequence_naive",
    "cost_sequence_strided",
    "decompose",
    "dircyc_instance",
    "drce_finite",
    "drce_with_initial_uncertainty",
    "eval_g",
    "find_n0",
    "find_t0",
    "geometric_drce",
    "lp_solve",
    "mat_pow",
    "mat_vec",
    "person_chain",
    "project_state",
    "rce_finite",
    "rce_infinite",
    "rce_infinite_2d",
    "real_jordan",
    "recover_state",
    "sample_horizons",
    "spectral_radius",
    "stationary",
    "to_gas",
    "transfer_cost",
    "unit_ball_vertices",
    "w1_distance",
    "w_norm",
]
