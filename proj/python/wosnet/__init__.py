from ._core import (  # noqa: F401
    CheckResult,
    ConvexDomain,
    PlanOverrides,
    Problem,
    ProblemNorms,
    RandomTableau,
    ReluNet,
    SizeBudgetError,
    SolveConfig,
    SynthesisConstants,
    SynthesisPlan,
    WosEstimate,
    build_dist_ball,
    build_dist_cube,
    build_product,
    build_sqrt,
    build_square,
    compose,
    flatten,
    freeze_tableau,
    get_problem,
    l2_error,
    linear_combination,
    load_network,
    load_tableau,
    make_dist_net,
    make_plan,
    phi_u_eval,
    problem_names,
    run_verification,
    save_network,
    save_tableau,
    solve_point,
)

__all__ = [name for name in dir() if not name.startswith("_")]
