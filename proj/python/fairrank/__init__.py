"""Two-sided fair rankings by welfare maximization with Frank-Wolfe."""

from ._fairrank import (
    FairrankError,
    Mode,
    Objective,
    PenaltyKind,
    PenaltyParams,
    ProblemInstance,
    ProfileView,
    StochasticRanking,
    WelfareParams,
    dominance,
    gen_leader_star,
    gen_micro_example,
    gen_pair_triangle,
    gen_qw_counterexample,
    gen_random,
    gini,
    group_welfare_objective,
    leximin_compare,
    load_instance,
    lorenz_curve,
    lorenz_report,
    penalized_objective,
    run_criterion,
    save_instance,
    std_dev,
    utilitarian_ranking,
    utility_profile,
    welfare_objective,
)
from ._fairrank import solve as _solve

_PENALTIES = {
    "qua": PenaltyKind.QUALITY_WEIGHTED,
    "expo": PenaltyKind.EQUAL_EXPOSURE,
    "eq-util": PenaltyKind.EQUAL_UTILITY,
}


def make_objective(instance, objective="welfare", lam=0.5, alpha1=0.0, alpha2=0.0, eta=1e-4,
                   beta=0.0, sqrt_eps=1e-12, normalize_by_n=True):
    """Objective by CLI name: welfare, group-welfare, qua, expo or eq-util."""
    if isinstance(objective, Objective):
        return objective
    if objective in _PENALTIES:
        return penalized_objective(instance, PenaltyParams(_PENALTIES[objective], beta, sqrt_eps, normalize_by_n))
    params = WelfareParams(lam, alpha1, alpha2, eta)
    if objective == "welfare":
        return welfare_objective(instance, params)
    if objective == "group-welfare":
        return group_welfare_objective(instance, params)
    raise ValueError(f"unknown objective {objective!r}")


def solve(instance, objective="welfare", *, iterations=5000, slots=None, gap_tolerance=None,
          trace_every=1, threads=1, **params):
    """Run Frank-Wolfe. Extra keyword arguments go to make_objective."""
    obj = make_objective(instance, objective, **params)
    return _solve(instance, obj, iterations=iterations, slots=slots, gap_tolerance=gap_tolerance,
                  trace_every=trace_every, threads=threads)


__all__ = [name for name in dir() if not name.startswith("_")]
