"""Graph/state family generators for size scans, plus the registry of
closed-form boundedness witnesses that back "fails universality" verdicts.

A family maps a size to a graph (most kinds) or directly to a state (the W
family, which is not a graph state).  Graph families get their dense state
through the graph-state engine when a state-level measure asks for one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import statevec as sv
from .errors import UsageError
from .graphstate import Graph, GraphState, read_edge_list
from .lattices import LatticeSpec, generate_lattice

FAMILY_KINDS = ("linear_cluster", "ring", "ghz", "w", "tree", "grid",
                "hexagonal", "triangular", "kagome", "file")

GRAPH_FAMILIES = frozenset(FAMILY_KINDS) - {"w"}

MIN_SIZE = {"ring": 3, "w": 2, "tree": 1}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    sizes: tuple[int, ...]
    seed: int = 0
    path: str | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if self.kind not in FAMILY_KINDS:
            raise UsageError(f"unknown family kind {self.kind!r}")
        if not self.sizes:
            raise UsageError("need at least one size")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise UsageError("sizes must be strictly increasing")
        lo = MIN_SIZE.get(self.kind, 1)
        if self.sizes[0] < lo:
            raise UsageError(f"{self.kind} needs size >= {lo}")
        if self.kind == "file" and not self.path:
            raise UsageError("file family needs a graph path")


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform labeled tree via a random linear-code sequence."""
    if n == 1:
        return Graph.from_edges(1, [])
    if n == 2:
        return Graph.from_edges(2, [(0, 1)])
    seq = [int(x) for x in rng.integers(0, n, n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    import heapq

    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def family_graph(spec: FamilySpec, size: int) -> Graph | None:
    """The graph of one family member; None for non-graph-state families."""
    kind = spec.kind
    if kind == "linear_cluster":
        return Graph.from_edges(size, [(i, i + 1) for i in range(size - 1)])
    if kind == "ring":
        return Graph.from_edges(size, [(i, (i + 1) % size) for i in range(size)])
    if kind == "ghz":
        # complete graph: the graph-state orbit representative of GHZ
        return Graph.from_edges(
            size, [(i, j) for i in range(size) for j in range(i + 1, size)])
    if kind == "tree":
        rng = np.random.default_rng((spec.seed, size))
        return random_tree(size, rng)
    if kind == "grid":
        edges = []
        for i in range(size):
            for j in range(size):
                if i + 1 < size:
                    edges.append(((i, j), (i + 1, j)))
                if j + 1 < size:
                    edges.append(((i, j), (i, j + 1)))
        labels = [(i, j) for i in range(size) for j in range(size)]
        return Graph.from_edges(labels, edges)
    if kind in ("hexagonal", "triangular", "kagome"):
        return generate_lattice(LatticeSpec(kind, (size, size)))
    if kind == "file":
        return read_edge_list(Path(spec.path).read_text())
    return None  # w


def family_state(spec: FamilySpec, size: int, *,
                 max_qubits: int | None = None) -> sv.PureState:
    if spec.kind == "w":
        return sv.w_state(size)
    if spec.kind == "ghz":
        return sv.ghz_state(size)
    g = family_graph(spec, size)
    return GraphState(g).to_statevector(max_qubits=max_qubits)


# -- boundedness witnesses --------------------------------------------------------
#
# A finite size scan cannot certify an asymptotic bound, so "bounded" /
# "logarithmic" verdicts additionally require one of these closed-form
# witnesses.  Each entry gives the analytic bound and the reason it holds
# for every member of the family.

WITNESSES = {
    "ghz": {
        "rank_width": (1.0, "complete graphs: every cut matrix is all-ones,"
                            " rank 1"),
        "entanglement_width": (1.0, "every bipartition of a GHZ state has"
                                    " Schmidt rank 2"),
        "schmidt_rank_width": (1.0, "every bipartition of a GHZ state has"
                                    " Schmidt rank 2"),
        "geometric_measure": (1.0, "overlap 1/2 with |0..0> at every size"),
    },
    "linear_cluster": {
        "rank_width": (1.0, "paths: consecutive cuts have rank 1"),
        "entanglement_width": (1.0, "path graph states: rank width 1"),
        "schmidt_rank_width": (1.0, "path graph states: rank width 1"),
    },
    "ring": {
        "rank_width": (2.0, "cycles: contiguous cuts have rank at most 2"),
    },
    "tree": {
        "rank_width": (1.0, "trees are distance-hereditary: rank width 1"),
    },
    "w": {
        "geometric_measure": (1.0 / math.log(2.0),
                              "(n-1) log2(n/(n-1)) increases to 1/ln 2"),
        "schmidt_rank_width": (1.0, "every bipartition of a W state has"
                                    " Schmidt rank 2"),
        "entanglement_width": (1.0, "every bipartition of a W state has"
                                    " Schmidt rank 2"),
    },
}


def witness_for(kind: str, measure: str):
    """(bound, reason) when the family has a closed-form bound, else None."""
    return WITNESSES.get(kind, {}).get(measure)
