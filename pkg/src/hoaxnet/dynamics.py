"""Transition kernel for the susceptible / believer / fact-checker contagion.

A susceptible node exposed to believing or fact-checking neighbors leaves
its state with total probability beta, split between adopting the hoax and
fact-checking it according to the neighbor mix and the gullibility bias.
Believers may verify (becoming fact-checkers) or forget; fact-checkers may
forget. All nodes update synchronously from the previous step's snapshot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .graph import Graph


class AgentState(enum.IntEnum):
    SUSCEPTIBLE = 0
    BELIEVER = 1
    FACT_CHECKER = 2


STATE_CHARS = "SBF"  # serialization order matches the enum values

S = AgentState.SUSCEPTIBLE
B = AgentState.BELIEVER
F = AgentState.FACT_CHECKER

# StateVector: np.ndarray of dtype int8 holding AgentState values, one per node.
StateVector = np.ndarray


def states_from_string(text: str) -> StateVector:
    """Parse a state string like "SBFS" into a state vector."""
    try:
        return np.array([STATE_CHARS.index(c) for c in text], dtype=np.int8)
    except ValueError:
        raise ValueError(f"state string may only contain S, B, F; got {text!r}") from None


def states_to_string(states: StateVector) -> str:
    return "".join(STATE_CHARS[s] for s in states)


@dataclass
class ModelParams:
    """The four contagion rates.

    beta:     overall per-step probability of leaving the susceptible state
              when exposed, in [0, 1].
    alpha:    gullibility bias in (-1, 1); positive values tilt exposed
              nodes toward believing, negative toward fact-checking.
    p_verify: per-step probability that a believer fact-checks.
    p_forget: per-step probability that a believer or fact-checker reverts
              to susceptible. p_verify + p_forget must not exceed 1 so the
              believer's two exits form a valid sub-distribution.
    """

    beta: float
    alpha: float
    p_verify: float
    p_forget: float

    def __post_init__(self):
        problems = []
        if not 0.0 <= self.beta <= 1.0:
            problems.append(f"beta must lie in [0, 1]; got {self.beta}")
        if not -1.0 < self.alpha < 1.0:
            problems.append(f"alpha must lie in the open interval (-1, 1); got {self.alpha}")
        if not 0.0 <= self.p_verify <= 1.0:
            problems.append(f"p_verify must lie in [0, 1]; got {self.p_verify}")
        if not 0.0 <= self.p_forget <= 1.0:
            problems.append(f"p_forget must lie in [0, 1]; got {self.p_forget}")
        if self.p_verify >= 0.0 and self.p_forget >= 0.0 and self.p_verify + self.p_forget > 1.0:
            problems.append(
                f"p_verify + p_forget must not exceed 1; got {self.p_verify} + {self.p_forget}"
            )
        if problems:
            raise ValueError("; ".join(problems))


class NeighborTally(NamedTuple):
    n_believer: int
    n_factchecker: int


def tally_neighbors(g: Graph, states: StateVector, i: int) -> NeighborTally:
    """Count believer and fact-checker neighbors of node i."""
    _check_states(g, states)
    nbrs = g.neighbors(i)  # raises IndexError when i is out of range
    nbr_states = states[nbrs]
    return NeighborTally(
        n_believer=int(np.count_nonzero(nbr_states == B)),
        n_factchecker=int(np.count_nonzero(nbr_states == F)),
    )


def belief_probability(params: ModelParams, tally: NeighborTally) -> float:
    """Per-step probability that an exposed susceptible node adopts the hoax.

    Believing neighbors are weighted by (1 + alpha), fact-checking ones by
    (1 - alpha); the result is beta times the believer weight share. With
    no believing neighbors (including no exposure at all) this is 0.
    """
    if tally.n_believer == 0:
        return 0.0
    if tally.n_factchecker == 0:
        return params.beta  # weight ratio collapses to exactly 1
    weight_b = tally.n_believer * (1.0 + params.alpha)
    weight_f = tally.n_factchecker * (1.0 - params.alpha)
    return params.beta * weight_b / (weight_b + weight_f)


def factcheck_probability(params: ModelParams, tally: NeighborTally) -> float:
    """Per-step probability that an exposed susceptible node turns fact-checker.

    Mirror image of belief_probability: beta times the fact-checker weight
    share; 0 when there are no fact-checking neighbors.
    """
    if tally.n_factchecker == 0:
        return 0.0
    if tally.n_believer == 0:
        return params.beta  # weight ratio collapses to exactly 1
    weight_b = tally.n_believer * (1.0 + params.alpha)
    weight_f = tally.n_factchecker * (1.0 - params.alpha)
    return params.beta * weight_f / (weight_b + weight_f)


def _check_states(g: Graph, states: StateVector) -> None:
    if len(states) != g.node_count:
        raise ValueError(
            f"state vector length {len(states)} does not match node count {g.node_count}"
        )


@numba.njit(cache=True)
def _step_kernel(offsets, indices, states, u, beta, alpha, p_verify, p_forget, out):
    # One pass over nodes; neighbor tallies are read from the input snapshot
    # only, so the update is synchronous. Hot loop of the Monte Carlo engine.
    for i in range(len(states)):
        s = states[i]
        draw = u[i]
        if s == 0:  # susceptible
            n_b = 0
            n_f = 0
            for k in range(offsets[i], offsets[i + 1]):
                t = states[indices[k]]
                if t == 1:
                    n_b += 1
                elif t == 2:
                    n_f += 1
            new = 0
            if n_b + n_f > 0:
                # Collapsed one-sided exposures are exactly beta, matching
                # belief_probability / factcheck_probability.
                if n_f == 0:
                    adopt = beta
                    check = 0.0
                elif n_b == 0:
                    adopt = 0.0
                    check = beta
                else:
                    weight_b = n_b * (1.0 + alpha)
                    weight_f = n_f * (1.0 - alpha)
                    adopt = beta * weight_b / (weight_b + weight_f)
                    check = beta * weight_f / (weight_b + weight_f)
                if draw < adopt:
                    new = 1
                elif draw < adopt + check:
                    new = 2
            out[i] = new
        elif s == 1:  # believer
            if draw < p_verify:
                out[i] = 2
            elif draw < p_verify + p_forget:
                out[i] = 0
            else:
                out[i] = 1
        else:  # fact-checker
            out[i] = 0 if draw < p_forget else 2


def step(g: Graph, states: StateVector, params: ModelParams, rng: np.random.Generator) -> StateVector:
    """One synchronous update; returns a fresh state vector, input untouched.

    All neighbor tallies are taken against the input snapshot. Exactly one
    uniform draw is consumed per node, in node-index order, which fixes the
    reproducibility contract: a seeded generator yields identical
    trajectories regardless of internal execution strategy.

    Per-node transition, given its draw u:
      susceptible:  u < f -> believer; f <= u < f + g -> fact-checker
                    (f and g from belief_/factcheck_probability; f + g <= beta)
      believer:     u < p_verify -> fact-checker;
                    p_verify <= u < p_verify + p_forget -> susceptible
      fact-checker: u < p_forget -> susceptible
    """
    _check_states(g, states)
    u = rng.random(g.node_count)
    out = np.empty(g.node_count, dtype=np.int8)
    _step_kernel(
        g.neighbor_offsets, g.neighbor_indices, np.asarray(states, dtype=np.int8), u,
        params.beta, params.alpha, params.p_verify, params.p_forget, out,
    )
    return out
