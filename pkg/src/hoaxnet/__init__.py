"""Hoax spreading with believers and fact-checkers on random networks.

A Monte Carlo laboratory for a three-state contagion (susceptible,
believer, fact-checker) on Erdos-Renyi and two-block random graphs, with
deterministic seeding, ensemble statistics, parameter sweeps, CSV output,
and an exact enumeration oracle for small systems.
"""

from .dynamics import (
    AgentState,
    ModelParams,
    NeighborTally,
    belief_probability,
    factcheck_probability,
    states_from_string,
    states_to_string,
    step,
    tally_neighbors,
)
from .engine import (
    EnsembleStats,
    InitialCondition,
    StateDistribution,
    Trajectory,
    child_seed,
    ensemble,
    ensemble_series,
    exact_state_distribution,
    monte_carlo_marginals,
    run_trajectory,
    seed_initial,
)
from .graph import (
    BlockMatrix,
    ERGraphSpec,
    Graph,
    SBMGraphSpec,
    generate_er,
    generate_sbm,
    group_counts,
    minority_count,
    replicate,
    write_edge_list,
)

__all__ = [
    "AgentState",
    "BlockMatrix",
    "ERGraphSpec",
    "EnsembleStats",
    "Graph",
    "InitialCondition",
    "ModelParams",
    "NeighborTally",
    "SBMGraphSpec",
    "StateDistribution",
    "Trajectory",
    "belief_probability",
    "child_seed",
    "ensemble",
    "ensemble_series",
    "exact_state_distribution",
    "factcheck_probability",
    "generate_er",
    "generate_sbm",
    "group_counts",
    "minority_count",
    "monte_carlo_marginals",
    "replicate",
    "run_trajectory",
    "seed_initial",
    "states_from_string",
    "states_to_string",
    "step",
    "tally_neighbors",
    "write_edge_list",
]

__version__ = "0.1.0"
