"""Python bindings for the arena autobidding simulator."""

from ._arena import (
    ArenaError,
    BidProfile,
    Instance,
    Mechanism,
    best_response,
    check_gamma_equilibrium,
    default_alphas,
    eval_f,
    evaluate_profile,
    g,
    gen_instance,
    liquid_welfare,
    make_det_lb_instance,
    make_rtruth_lb_instance,
    optimal_welfare,
    optimize_f,
    query_outcome,
    rtruth_lb_ratio,
    run_dynamics,
    run_experiment,
)

__all__ = [
    "ArenaError",
    "BidProfile",
    "Instance",
    "Mechanism",
    "best_response",
    "check_gamma_equilibrium",
    "default_alphas",
    "eval_f",
    "evaluate_profile",
    "g",
    "gen_instance",
    "liquid_welfare",
    "make_det_lb_instance",
    "make_rtruth_lb_instance",
    "optimal_welfare",
    "optimize_f",
    "query_outcome",
    "rtruth_lb_ratio",
    "run_dynamics",
    "run_experiment",
]
