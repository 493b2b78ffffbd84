"""Trajectory and ensemble runners plus an exact small-system oracle.

Seeding contract: every source of randomness is derived from integer seeds
with a fixed splitmix64 mix (`child_seed`), so results are identical across
platforms, execution orders, and worker counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .dynamics import B, F, S, ModelParams, StateVector, step, tally_neighbors
from .dynamics import belief_probability, factcheck_probability
from .graph import Graph, NetworkSpec

_MASK64 = (1 << 64) - 1

# Stream tags so one iteration seed can feed several independent generators.
_GRAPH_STREAM = 0
_DYNAMICS_STREAM = 1
_QUENCHED_TAG = 1 << 48  # never collides with iteration indices

SEEDING_SCOPES = ("whole-network", "minority-only", "majority-only")


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def child_seed(master: int, index: int) -> int:
    """64-bit child seed for stream `index` of `master`, via splitmix64 mixing."""
    return _splitmix64(_splitmix64(master & _MASK64) ^ (index & _MASK64))


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass
class InitialCondition:
    """How believers (and optionally fact-checkers) are seeded at t = 0.

    Exactly round(fraction * scope size) nodes of the scope are set to each
    seeded state, drawn uniformly without replacement; everyone else starts
    susceptible.
    """

    believer_fraction: float = 0.01
    seeding_scope: str = "whole-network"
    factchecker_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.believer_fraction <= 1.0:
            raise ValueError(f"believer_fraction must lie in [0, 1]; got {self.believer_fraction}")
        if not 0.0 <= self.factchecker_fraction <= 1.0:
            raise ValueError(
                f"factchecker_fraction must lie in [0, 1]; got {self.factchecker_fraction}"
            )
        if self.believer_fraction + self.factchecker_fraction > 1.0:
            raise ValueError("believer_fraction + factchecker_fraction must not exceed 1")
        if self.seeding_scope not in SEEDING_SCOPES:
            raise ValueError(
                f"seeding_scope must be one of {SEEDING_SCOPES}; got {self.seeding_scope!r}"
            )


def seed_initial(g: Graph, ic: InitialCondition, rng: np.random.Generator) -> StateVector:
    """Draw the t = 0 state vector for the given initial condition."""
    if ic.seeding_scope == "whole-network":
        scope = np.arange(g.node_count)
    elif ic.seeding_scope == "minority-only":
        scope = np.flatnonzero(g.labels == 0)
    else:
        scope = np.flatnonzero(g.labels == 1)

    seeded = ic.believer_fraction > 0.0 or ic.factchecker_fraction > 0.0
    if seeded and len(scope) == 0:
        raise ValueError(f"seeding scope {ic.seeding_scope!r} is empty on this graph")
    n_believer = _round_half_away(ic.believer_fraction * len(scope))
    n_factchecker = _round_half_away(ic.factchecker_fraction * len(scope))
    if n_believer + n_factchecker > len(scope):
        # Possible only when the fractions sum to ~1 and both round up.
        raise ValueError("rounded seed counts exceed the seeding scope size")

    states = np.full(g.node_count, S, dtype=np.int8)
    if n_believer + n_factchecker:
        chosen = rng.choice(len(scope), size=n_believer + n_factchecker, replace=False)
        states[scope[chosen[:n_believer]]] = B
        states[scope[chosen[n_believer:]]] = F
    return states


@dataclass
class Trajectory:
    """Per-step state counts of one run, including the t = 0 row.

    Count arrays have shape (steps + 1, 3) with columns ordered S, B, F;
    the global counts are the sum of the two group arrays.
    """

    minority_counts: np.ndarray
    majority_counts: np.ndarray

    @property
    def counts(self) -> np.ndarray:
        return self.minority_counts + self.majority_counts

    @property
    def steps(self) -> int:
        return len(self.minority_counts) - 1

    @property
    def node_count(self) -> int:
        return int(self.counts[0].sum())

    def believer_fraction(self, scope: str = "global") -> np.ndarray:
        """Believer share time series; NaN everywhere if the scope is empty."""
        if scope == "global":
            series, size = self.counts[:, B], self.node_count
        elif scope == "minority":
            series, size = self.minority_counts[:, B], int(self.minority_counts[0].sum())
        elif scope == "majority":
            series, size = self.majority_counts[:, B], int(self.majority_counts[0].sum())
        else:
            raise ValueError(f"unknown scope {scope!r}")
        if size == 0:
            return np.full(len(series), np.nan)
        return series / size

    def final_believer_fractions(self, window: int = 1) -> tuple[float, float, float]:
        """(global, minority, majority) believer share averaged over the last `window` steps."""
        if not 1 <= window <= self.steps + 1:
            raise ValueError(f"window must lie in [1, steps + 1]; got {window}")
        return tuple(
            float(np.mean(self.believer_fraction(scope)[-window:]))
            for scope in ("global", "minority", "majority")
        )


def run_trajectory(
    g: Graph, params: ModelParams, ic: InitialCondition, steps: int, seed: int
) -> Trajectory:
    """Seed an initial state and run `steps` synchronous updates, recording counts."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = np.random.default_rng(seed)
    states = seed_initial(g, ic, rng)

    minority = np.zeros((steps + 1, 3), dtype=np.int64)
    majority = np.zeros((steps + 1, 3), dtype=np.int64)
    group_shift = 3 * g.labels.astype(np.int8)

    def record(t: int, states: StateVector) -> None:
        combined = np.bincount(states + group_shift, minlength=6)
        minority[t] = combined[:3]
        majority[t] = combined[3:]

    record(0, states)
    for t in range(1, steps + 1):
        states = step(g, states, params, rng)
        record(t, states)
    return Trajectory(minority_counts=minority, majority_counts=majority)


@dataclass
class EnsembleStats:
    """Final believer shares across ensemble iterations.

    Per-group entries are NaN when the corresponding group is empty (e.g.
    the minority of an Erdos-Renyi graph). Standard deviations are sample
    standard deviations, reported as 0 for a single iteration.
    """

    finals_global: np.ndarray
    finals_minority: np.ndarray
    finals_majority: np.ndarray

    @property
    def iterations(self) -> int:
        return len(self.finals_global)

    @staticmethod
    def _mean(values: np.ndarray) -> float:
        return float(np.mean(values))

    @staticmethod
    def _std(values: np.ndarray) -> float:
        if len(values) < 2:
            return 0.0 if not np.isnan(values).any() else float("nan")
        return float(np.std(values, ddof=1))

    @property
    def mean_global(self) -> float:
        return self._mean(self.finals_global)

    @property
    def std_global(self) -> float:
        return self._std(self.finals_global)

    @property
    def mean_minority(self) -> float:
        return self._mean(self.finals_minority)

    @property
    def std_minority(self) -> float:
        return self._std(self.finals_minority)

    @property
    def mean_majority(self) -> float:
        return self._mean(self.finals_majority)

    @property
    def std_majority(self) -> float:
        return self._std(self.finals_majority)


def _iteration_finals(netspec, params, ic, steps, window, iter_seed, graph):
    if graph is None:
        graph_rng = np.random.default_rng(child_seed(iter_seed, _GRAPH_STREAM))
        graph = netspec.generate(graph_rng)
    traj = run_trajectory(graph, params, ic, steps, child_seed(iter_seed, _DYNAMICS_STREAM))
    return traj.final_believer_fractions(window)


def _iteration_series(netspec, params, ic, steps, iter_seed, graph):
    if graph is None:
        graph_rng = np.random.default_rng(child_seed(iter_seed, _GRAPH_STREAM))
        graph = netspec.generate(graph_rng)
    traj = run_trajectory(graph, params, ic, steps, child_seed(iter_seed, _DYNAMICS_STREAM))
    return traj.believer_fraction("global")


def _map_iterations(worker, netspec, params, ic, steps, extra, iterations, master_seed,
                    annealed, executor):
    graph = None
    if not annealed:
        quenched_rng = np.random.default_rng(child_seed(master_seed, _QUENCHED_TAG))
        graph = netspec.generate(quenched_rng)
    seeds = [child_seed(master_seed, k) for k in range(iterations)]
    args = [(netspec, params, ic, steps, *extra, s, graph) for s in seeds]
    if executor is None:
        return [worker(*a) for a in args]
    futures = [executor.submit(worker, *a) for a in args]
    return [f.result() for f in futures]  # submission order keeps aggregation deterministic


def ensemble(
    netspec: NetworkSpec,
    params: ModelParams,
    ic: InitialCondition,
    steps: int,
    iterations: int,
    master_seed: int,
    *,
    window: int = 1,
    annealed: bool = True,
    executor=None,
) -> EnsembleStats:
    """Run `iterations` independent trajectories and aggregate final believer shares.

    Iteration k draws its seed as child_seed(master_seed, k). With
    annealed=True (default) each iteration regenerates a fresh graph from
    `netspec`; annealed=False generates one quenched graph shared by all
    iterations. Passing a concurrent.futures executor parallelizes
    iterations without changing any result.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    finals = _map_iterations(
        _iteration_finals, netspec, params, ic, steps, (window,),
        iterations, master_seed, annealed, executor,
    )
    arr = np.array(finals, dtype=np.float64)
    return EnsembleStats(
        finals_global=arr[:, 0], finals_minority=arr[:, 1], finals_majority=arr[:, 2]
    )


def ensemble_series(
    netspec: NetworkSpec,
    params: ModelParams,
    ic: InitialCondition,
    steps: int,
    iterations: int,
    master_seed: int,
    *,
    annealed: bool = True,
    executor=None,
) -> np.ndarray:
    """Global believer share per step, averaged pointwise across iterations.

    Uses the same per-iteration seeds as `ensemble`, so the last entry
    equals the ensemble mean (at window 1).
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    series = _map_iterations(
        _iteration_series, netspec, params, ic, steps, (),
        iterations, master_seed, annealed, executor,
    )
    return np.mean(np.array(series, dtype=np.float64), axis=0)


# ---------------------------------------------------------------------------
# Exact enumeration oracle (small systems only)

MAX_ORACLE_NODES = 8
MAX_ORACLE_STEPS = 6


@dataclass
class StateDistribution:
    """Exact probability over all 3^n state configurations.

    Configurations are indexed base 3 with node 0 as the most significant
    digit and per-node values ordered S, B, F.
    """

    node_count: int
    probs: np.ndarray = field(repr=False)

    def probability(self, states) -> float:
        from .dynamics import states_from_string

        if isinstance(states, str):
            states = states_from_string(states)
        return float(self.probs[self._encode(np.asarray(states))])

    def _encode(self, states: np.ndarray) -> int:
        powers = 3 ** np.arange(self.node_count - 1, -1, -1)
        return int(np.dot(states, powers))

    def marginals(self) -> np.ndarray:
        """Per-node state probabilities, shape (node_count, 3), columns S/B/F."""
        out = np.zeros((self.node_count, 3))
        configs = _all_configs(self.node_count)
        for i in range(self.node_count):
            for s in range(3):
                out[i, s] = self.probs[configs[:, i] == s].sum()
        return out

    def to_dict(self) -> dict[str, float]:
        """Nonzero configurations keyed by their S/B/F string."""
        from .dynamics import states_to_string

        configs = _all_configs(self.node_count)
        support = np.flatnonzero(self.probs)
        return {states_to_string(configs[i]): float(self.probs[i]) for i in support}


def _all_configs(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1, 2), repeat=n)), dtype=np.int8)


def _node_transition_rows(g: Graph, states: StateVector, params: ModelParams) -> list[np.ndarray]:
    """Per-node next-state distributions [P(S), P(B), P(F)] for one source config."""
    rows = []
    for i in range(g.node_count):
        s = states[i]
        if s == S:
            tally = tally_neighbors(g, states, i)
            adopt = belief_probability(params, tally)
            check = factcheck_probability(params, tally)
            rows.append(np.array([1.0 - adopt - check, adopt, check]))
        elif s == B:
            rows.append(
                np.array([params.p_forget, 1.0 - params.p_verify - params.p_forget, params.p_verify])
            )
        else:
            rows.append(np.array([params.p_forget, 0.0, 1.0 - params.p_forget]))
    return rows


def exact_state_distribution(
    g: Graph, initial: StateVector, params: ModelParams, steps: int
) -> StateDistribution:
    """Exact forward propagation of the synchronous dynamics.

    Enumerates every reachable configuration and every combination of
    per-node transitions, so it is independent of the Monte Carlo path and
    serves as its oracle. Enforced bounds keep 3^n * steps tractable.
    """
    n = g.node_count
    if n > MAX_ORACLE_NODES:
        raise ValueError(f"exact enumeration is limited to {MAX_ORACLE_NODES} nodes; got {n}")
    if not 0 <= steps <= MAX_ORACLE_STEPS:
        raise ValueError(f"exact enumeration is limited to {MAX_ORACLE_STEPS} steps; got {steps}")
    if len(initial) != n:
        raise ValueError("initial state length does not match node count")

    configs = _all_configs(n)
    dist = StateDistribution(node_count=n, probs=np.zeros(3 ** n))
    dist.probs[dist._encode(np.asarray(initial))] = 1.0

    for _ in range(steps):
        nxt = np.zeros_like(dist.probs)
        for idx in np.flatnonzero(dist.probs):
            rows = _node_transition_rows(g, configs[idx], params)
            joint = reduce(np.multiply.outer, rows).ravel()
            nxt += dist.probs[idx] * joint
        dist = StateDistribution(node_count=n, probs=nxt)
    return dist


def monte_carlo_marginals(
    g: Graph,
    initial: StateVector,
    params: ModelParams,
    steps: int,
    runs: int,
    seed: int,
) -> np.ndarray:
    """Per-node state frequencies over `runs` independent realizations, shape (n, 3).

    All runs start from the same deterministic initial state and advance
    through the production `step` kernel in one vectorized pass (a disjoint
    union of graph copies, one uniform draw per node per step).
    """
    from .graph import replicate

    big = replicate(g, runs)
    states = np.tile(np.asarray(initial, dtype=np.int8), runs)
    rng = np.random.default_rng(seed)
    for _ in range(steps):
        states = step(big, states, params, rng)
    per_run = states.reshape(runs, g.node_count)
    freq = np.empty((g.node_count, 3))
    for s in range(3):
        freq[:, s] = np.count_nonzero(per_run == s, axis=0) / runs
    return freq
