"""Undirected labeled graphs and random-network generators.

Two node groups are supported: a minority (label 0) and a majority
(label 1). Erdos-Renyi graphs carry majority labels only; the two-block
generator controls intra- and inter-group link probabilities separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

MINORITY = 0
MAJORITY = 1


def minority_count(f0: float, n: int) -> int:
    """Number of minority nodes for minority share f0, rounding half away from zero."""
    if not 0.0 <= f0 <= 1.0:
        raise ValueError(f"minority share f0 must lie in [0, 1]; got {f0}")
    return int(math.floor(f0 * n + 0.5))


@dataclass
class BlockMatrix:
    """Symmetric 2x2 edge-probability matrix for the two-block generator.

    h00 and h11 are the intra-group link probabilities (minority and
    majority respectively); h01 is the inter-group link probability.
    """

    h00: float
    h01: float
    h11: float

    def __post_init__(self):
        for name in ("h00", "h01", "h11"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]; got {value}")

    def probability(self, label_a: int, label_b: int) -> float:
        """Link probability between nodes with the given group labels."""
        return (self.h00, self.h01, self.h11)[label_a + label_b]


@dataclass
class Graph:
    """Immutable undirected simple graph with per-node group labels.

    Neighbor lists are stored in compressed form: the neighbors of node i
    are ``neighbor_indices[neighbor_offsets[i]:neighbor_offsets[i + 1]]``,
    sorted ascending. Every edge appears in both endpoint lists. Instances
    are treated as read-only after construction and are safe to share
    across parallel workers.
    """

    node_count: int
    neighbor_offsets: np.ndarray  # int64, length node_count + 1
    neighbor_indices: np.ndarray  # int32, length 2 * edge_count
    labels: np.ndarray            # int8, length node_count, values in {0, 1}

    @property
    def edge_count(self) -> int:
        return len(self.neighbor_indices) // 2

    @property
    def adjacency(self) -> list[np.ndarray]:
        """Per-node neighbor index arrays (views into shared storage)."""
        return [self.neighbors(i) for i in range(self.node_count)]

    def neighbors(self, i: int) -> np.ndarray:
        if not 0 <= i < self.node_count:
            raise IndexError(f"node index {i} out of range for {self.node_count} nodes")
        return self.neighbor_indices[self.neighbor_offsets[i]:self.neighbor_offsets[i + 1]]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoint arrays (ei, ej) with ei < ej, in sorted order."""
        src = np.repeat(np.arange(self.node_count), np.diff(self.neighbor_offsets))
        keep = src < self.neighbor_indices
        return src[keep], self.neighbor_indices[keep].astype(np.int64)

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on any violation."""
        n = self.node_count
        if n < 1:
            raise ValueError("graph must have at least one node")
        if len(self.labels) != n:
            raise ValueError("label array length does not match node count")
        if not np.isin(self.labels, (MINORITY, MAJORITY)).all():
            raise ValueError("labels must be 0 (minority) or 1 (majority)")
        if len(self.neighbor_offsets) != n + 1 or self.neighbor_offsets[0] != 0:
            raise ValueError("malformed neighbor offsets")
        if len(self.neighbor_indices) and (
            self.neighbor_indices.min() < 0 or self.neighbor_indices.max() >= n
        ):
            raise ValueError("neighbor index out of range")
        seen = set()
        for i in range(n):
            nbrs = self.neighbors(i)
            if np.any(nbrs == i):
                raise ValueError(f"self-loop at node {i}")
            if len(np.unique(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate neighbor entries at node {i}")
            seen.update((i, int(j)) for j in nbrs)
        for i, j in seen:
            if (j, i) not in seen:
                raise ValueError(f"asymmetric adjacency: {i}->{j} without {j}->{i}")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        """Build a graph from an iterable of (i, j) pairs.

        Reversed duplicates and repeated pairs collapse to a single edge;
        self-loops are rejected.
        """
        pairs = {(min(i, j), max(i, j)) for i, j in edges}
        if any(i == j for i, j in pairs):
            raise ValueError("self-loops are not allowed")
        if pairs:
            ei = np.fromiter((p[0] for p in sorted(pairs)), dtype=np.int64)
            ej = np.fromiter((p[1] for p in sorted(pairs)), dtype=np.int64)
        else:
            ei = ej = np.empty(0, dtype=np.int64)
        if labels is None:
            labels = np.full(n, MAJORITY, dtype=np.int8)
        return _assemble(n, ei, ej, np.asarray(labels, dtype=np.int8))


@lru_cache(maxsize=8)
def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    # All unordered node pairs (i < j); cached because n rarely changes.
    return np.triu_indices(n, k=1)


def _assemble(n: int, ei: np.ndarray, ej: np.ndarray, labels: np.ndarray) -> Graph:
    # Both edge directions, grouped by source and sorted by target within rows.
    src = np.concatenate([ei, ej])
    dst = np.concatenate([ej, ei])
    order = np.lexsort((dst, src))
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
    return Graph(
        node_count=n,
        neighbor_offsets=offsets,
        neighbor_indices=dst[order].astype(np.int32),
        labels=labels,
    )


def _check_node_count(n: int) -> None:
    if n < 1:
        raise ValueError(f"node count must be at least 1; got {n}")


def generate_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi graph: every unordered pair is linked independently with probability p.

    All nodes carry the majority label. Identical (n, p, seed) produce an
    identical edge set.
    """
    _check_node_count(n)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability p must lie in [0, 1]; got {p}")
    iu, ju = _pair_indices(n)
    mask = rng.random(len(iu)) < p
    return _assemble(n, iu[mask], ju[mask], np.full(n, MAJORITY, dtype=np.int8))


def generate_sbm(n: int, f0: float, blocks: BlockMatrix, rng: np.random.Generator) -> Graph:
    """Two-block random graph with a minority of round(f0 * n) nodes.

    Minority nodes occupy the first indices (the model is exchangeable, so
    index order carries no meaning). Each unordered pair (i, j) is linked
    independently with probability blocks[label_i][label_j].
    """
    _check_node_count(n)
    m = minority_count(f0, n)
    labels = np.full(n, MAJORITY, dtype=np.int8)
    labels[:m] = MINORITY
    iu, ju = _pair_indices(n)
    lookup = np.array([blocks.h00, blocks.h01, blocks.h11])
    thresholds = lookup[labels[iu] + labels[ju]]
    mask = rng.random(len(iu)) < thresholds
    return _assemble(n, iu[mask], ju[mask], labels)


def group_counts(g: Graph) -> tuple[int, int]:
    """(minority, majority) node counts; they sum to the node count."""
    minority = int(np.count_nonzero(g.labels == MINORITY))
    return minority, g.node_count - minority


def replicate(g: Graph, copies: int) -> Graph:
    """Disjoint union of `copies` copies of g (copy k occupies indices [k*n, (k+1)*n)).

    Dynamics on the union factor exactly over copies, which makes this the
    cheap way to run many independent realizations in one vectorized pass.
    """
    if copies < 1:
        raise ValueError("need at least one copy")
    n = g.node_count
    block_sizes = np.diff(g.neighbor_offsets)
    offsets = np.zeros(copies * n + 1, dtype=np.int64)
    np.cumsum(np.tile(block_sizes, copies), out=offsets[1:])
    shift = np.repeat(np.arange(copies, dtype=np.int64) * n, len(g.neighbor_indices))
    indices = (np.tile(g.neighbor_indices.astype(np.int64), copies) + shift)
    return Graph(
        node_count=copies * n,
        neighbor_offsets=offsets,
        neighbor_indices=indices.astype(np.int32),
        labels=np.tile(g.labels, copies),
    )


def write_edge_list(g: Graph, path) -> None:
    """Write a debugging edge list: a `# labels:` header, then one `i j` line per edge."""
    ei, ej = g.edges()
    lines = ["# labels: " + " ".join(str(int(l)) for l in g.labels)]
    lines.extend(f"{i} {j}" for i, j in zip(ei, ej))
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class ERGraphSpec:
    """Recipe for Erdos-Renyi graphs; regenerated per ensemble iteration."""

    n: int
    p: float

    def generate(self, rng: np.random.Generator) -> Graph:
        return generate_er(self.n, self.p, rng)


@dataclass
class SBMGraphSpec:
    """Recipe for two-block graphs; regenerated per ensemble iteration."""

    n: int
    f0: float
    blocks: BlockMatrix

    def generate(self, rng: np.random.Generator) -> Graph:
        return generate_sbm(self.n, self.f0, self.blocks, rng)


NetworkSpec = ERGraphSpec | SBMGraphSpec
