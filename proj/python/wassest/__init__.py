"""Location and scale estimation for box-uniform densities."""

from ._wassest import (
    Instance,
    InvalidInput,
    SolverAbort,
    brute_force_sat,
    decide_positive_likelihood,
    discrete_transport_cost,
    dump_instance,
    energy,
    epsilon_prime,
    estimate,
    gradient,
    load_instance,
    parse_instance,
    reduce_3sat,
    smoothness_constant,
    solve_dual,
    transport_cost_1d,
)

__all__ = [name for name in dir() if not name.startswith("_")]
