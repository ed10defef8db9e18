"""Python bindings for the obro function-generation solver."""

from ._core import (
    BudgetExceeded,
    EngineResult,
    Error,
    InvalidInput,
    Problem,
    ProblemInfeasible,
    SolverFailure,
    degradation_curve,
    degradation_reference,
    load_config,
    make_partition,
    parse_config,
    solve,
    solve_master,
    solve_subproblem,
    verify_saddle,
)

__all__ = [
    "BudgetExceeded",
    "EngineResult",
    "Error",
    "InvalidInput",
    "Problem",
    "ProblemInfeasible",
    "SolverFailure",
    "degradation_curve",
    "degradation_reference",
    "load_config",
    "make_partition",
    "parse_config",
    "solve",
    "solve_master",
    "solve_subproblem",
    "verify_saddle",
]
