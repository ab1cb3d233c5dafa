"""Pivotal-vote probabilities for instant-runoff and plurality elections."""

from ._core import (
    DomainError,
    Profile,
    best_ballot,
    enumerate_alternates,
    expected_utility,
    gen_powerlaw_profile,
    gen_uniform_profile,
    mc_pivot_estimate,
    prob_strictly_greater,
    run_experiment,
    skellam_pmf,
    smdp_pivot_prob,
    tabulate,
    tie_terms,
    total_pivot_prob,
)

__all__ = [
    "DomainError",
    "Profile",
    "best_ballot",
    "enumerate_alternates",
    "expected_utility",
    "gen_powerlaw_profile",
    "gen_uniform_profile",
    "mc_pivot_estimate",
    "prob_strictly_greater",
    "run_experiment",
    "skellam_pmf",
    "smdp_pivot_prob",
    "tabulate",
    "tie_terms",
    "total_pivot_prob",
]
