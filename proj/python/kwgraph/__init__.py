"""Kazdan-Warner equation on finite weighted graphs."""

from ._kwgraph import (
    Classification,
    KWError,
    KWProblem,
    MountainPassReport,
    LambdaStarBracket,
    SolutionCandidate,
    SolverConfig,
    WeightedGraph,
    brute_force_solve_2v,
    continuation_solve,
    emit_problem,
    energy,
    estimate_lambda_star,
    hessian_min_eigenvalue,
    infeasibility_certificate,
    laplacian,
    minimal_solution,
    mountain_pass_solve,
    parse_problem,
    residual,
    solve_convex,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
