"""Graph states with local Clifford frames and Pauli measurement rewrites.

A state is represented as ``(tensor_b frame_b) |G>`` where ``|G>`` is the
graph state of a simple graph G (the joint +1 eigenstate of the correlation
operators X_a Z_N(a)) and each ``frame_b`` is a single-qubit Clifford. The
sigma_z / sigma_y measurement rules rewrite G (vertex deletion, respectively
local complementation followed by deletion) and push the outcome-dependent
byproduct unitaries into the neighbors' frames, so desk-scale protocols run
entirely at the graph level; ``to_statevector`` crosses over to the dense
engine for verification.

sigma_x measurements are deliberately unsupported at the graph level; route
those through the state-vector engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import cliffords as cl
from . import statevec as sv
from .errors import GraphMeasurementError, UnknownVertexError
from .gf2 import rank_of_rows

Label = Hashable


class Graph:
    """Immutable simple graph with hashable vertex labels.

    Adjacency is stored as bit-packed rows over internal indices; all
    mutating operations return new graphs.
    """

    __slots__ = ("labels", "_index", "adj")

    def __init__(self, labels: Sequence[Label], adj_rows: Sequence[int]):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate vertex labels")
        n = len(self.labels)
        if len(adj_rows) != n:
            raise ValueError("adjacency row count does not match labels")
        for i, row in enumerate(adj_rows):
            if row >> n:
                raise ValueError("adjacency row has bits beyond n")
            if (row >> i) & 1:
                raise ValueError("self-loops are not allowed")
        for i in range(n):
            for j in range(i):
                if ((adj_rows[i] >> j) & 1) != ((adj_rows[j] >> i) & 1):
                    raise ValueError("adjacency is not symmetric")
        self.adj = tuple(adj_rows)
        self._index = {l: i for i, l in enumerate(self.labels)}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, vertices: int | Sequence[Label],
                   edges: Iterable[tuple[Label, Label]]) -> "Graph":
        labels: Sequence[Label]
        if isinstance(vertices, int):
            labels = tuple(range(vertices))
        else:
            labels = tuple(vertices)
        index = {l: i for i, l in enumerate(labels)}
        rows = [0] * len(labels)
        for a, b in edges:
            if a not in index or b not in index:
                raise UnknownVertexError(f"edge ({a!r}, {b!r}) uses unknown vertex")
            if a == b:
                raise ValueError("self-loops are not allowed")
            i, j = index[a], index[b]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(labels, rows)

    @classmethod
    def empty(cls, vertices: int | Sequence[Label]) -> "Graph":
        return cls.from_edges(vertices, [])

    # -- queries -----------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    def index(self, v: Label) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(f"no vertex labeled {v!r}") from None

    def has_vertex(self, v: Label) -> bool:
        return v in self._index

    def has_edge(self, a: Label, b: Label) -> bool:
        return bool((self.adj[self.index(a)] >> self.index(b)) & 1)

    def neighbors(self, v: Label) -> tuple:
        row = self.adj[self.index(v)]
        return tuple(self.labels[j] for j in _bits(row))

    def degree(self, v: Label) -> int:
        return _popcount(self.adj[self.index(v)])

    def edges(self) -> list[tuple[Label, Label]]:
        out = []
        for i in range(self.n_vertices):
            row = self.adj[i] >> (i + 1)
            j = i + 1
            while row:
                if row & 1:
                    out.append((self.labels[i], self.labels[j]))
                row >>= 1
                j += 1
        return out

    def n_edges(self) -> int:
        return sum(_popcount(r) for r in self.adj) // 2

    # -- rewrites ----------------------------------------------------------

    def local_complement(self, v: Label) -> "Graph":
        """Toggle every edge between two neighbors of v."""
        i = self.index(v)
        nbr = self.adj[i]
        rows = list(self.adj)
        for j in _bits(nbr):
            rows[j] ^= nbr & ~(1 << j)
        return Graph(self.labels, rows)

    def delete_vertex(self, v: Label) -> "Graph":
        i = self.index(v)
        keep = [j for j in range(self.n_vertices) if j != i]
        labels = [self.labels[j] for j in keep]
        rows = []
        for j in keep:
            row = self.adj[j]
            low = row & ((1 << i) - 1)
            high = (row >> (i + 1)) << i
            rows.append(low | high)
        return Graph(labels, rows)

    def induced_subgraph(self, vertices: Iterable[Label]) -> "Graph":
        vs = [v for v in self.labels if v in set(vertices)]
        idx = [self.index(v) for v in vs]
        rows = []
        for i in idx:
            bits = 0
            for jj, j in enumerate(idx):
                if (self.adj[i] >> j) & 1:
                    bits |= 1 << jj
            rows.append(bits)
        return Graph(vs, rows)

    # -- structure ----------------------------------------------------------

    def connected_components(self) -> list[frozenset]:
        seen = [False] * self.n_vertices
        comps = []
        for s in range(self.n_vertices):
            if seen[s]:
                continue
            comp = []
            stack = [s]
            seen[s] = True
            while stack:
                i = stack.pop()
                comp.append(self.labels[i])
                for j in _bits(self.adj[i]):
                    if not seen[j]:
                        seen[j] = True
                        stack.append(j)
            comps.append(frozenset(comp))
        return comps

    def shortest_path(self, a: Label, b: Label) -> list | None:
        """BFS shortest path from a to b (inclusive), None when disconnected.

        Neighbor exploration follows internal index order, so the result is
        deterministic for a given construction order.
        """
        src, dst = self.index(a), self.index(b)
        prev = {src: None}
        frontier = [src]
        while frontier and dst not in prev:
            nxt = []
            for i in frontier:
                for j in _bits(self.adj[i]):
                    if j not in prev:
                        prev[j] = i
                        nxt.append(j)
            frontier = nxt
        if dst not in prev:
            return None
        path = []
        cur: int | None = dst
        while cur is not None:
            path.append(self.labels[cur])
            cur = prev[cur]
        return path[::-1]

    def cut_rank(self, side_a: Iterable[Label]) -> int:
        """GF(2) rank of the adjacency submatrix rows(side_a) x cols(complement)."""
        a_idx = [self.index(v) for v in side_a]
        a_mask = 0
        for i in a_idx:
            a_mask |= 1 << i
        b_mask = ((1 << self.n_vertices) - 1) & ~a_mask
        return rank_of_rows([self.adj[i] & b_mask for i in a_idx])

    def adjacency_numpy(self) -> np.ndarray:
        n = self.n_vertices
        out = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            for j in _bits(self.adj[i]):
                out[i, j] = 1
        return out

    def relabeled(self, mapping: dict) -> "Graph":
        return Graph([mapping.get(l, l) for l in self.labels], self.adj)

    def __eq__(self, other) -> bool:
        """Label-aware equality: same vertex set and same edge set."""
        if not isinstance(other, Graph):
            return NotImplemented
        if set(self.labels) != set(other.labels):
            return False
        perm = [other.index(l) for l in self.labels]
        for i in range(self.n_vertices):
            row = 0
            for j in _bits(self.adj[i]):
                row |= 1 << perm[j]
            if row != other.adj[perm[i]]:
                return False
        return True

    def __hash__(self):
        return hash((frozenset(self.labels), self.n_edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n_vertices}, m={self.n_edges()})"


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _popcount(x: int) -> int:
    return bin(x).count("1")


# -- Pauli operators on labeled qubits -------------------------------------


@dataclass(frozen=True)
class PauliOperator:
    """sign * product of single-qubit Paulis (identity on omitted labels)."""

    sign: int
    paulis: tuple  # tuple of (label, 'X'|'Y'|'Z') pairs

    def apply(self, state: sv.PureState) -> sv.PureState:
        out = state
        for label, p in self.paulis:
            out = sv.apply_local_unitary(out, label, cl.PAULIS[cl.PAULI_INDEX[p]])
        if self.sign == -1:
            out = sv.PureState(out.labels, -out.amps)
        return out


# -- graph states -----------------------------------------------------------


class GraphState:
    """(tensor of local Clifford frames) applied to the graph state |G>."""

    __slots__ = ("graph", "frames")

    def __init__(self, graph: Graph, frames: Sequence[int] | None = None):
        self.graph = graph
        if frames is None:
            frames = (cl.C_ID,) * graph.n_vertices
        frames = tuple(frames)
        if len(frames) != graph.n_vertices:
            raise ValueError("one frame per vertex required")
        for f in frames:
            if not 0 <= f < cl.N_CLIFFORD:
                raise ValueError(f"invalid Clifford index {f}")
        self.frames = frames

    @property
    def labels(self) -> tuple:
        return self.graph.labels

    def frame_index(self, v: Label) -> int:
        return self.frames[self.graph.index(v)]

    def frame_matrix(self, v: Label) -> np.ndarray:
        return cl.MATRICES[self.frame_index(v)]

    def with_graph(self, graph: Graph, frames: Sequence[int]) -> "GraphState":
        return GraphState(graph, frames)

    def apply_local_clifford(self, v: Label, u) -> "GraphState":
        """Left-multiply the frame at v by a Clifford (index or 2x2 matrix)."""
        idx = u if isinstance(u, (int, np.integer)) else cl.index_of(u)
        i = self.graph.index(v)
        frames = list(self.frames)
        frames[i] = cl.COMPOSE[int(idx)][frames[i]]
        return GraphState(self.graph, frames)

    # -- stabilizers -------------------------------------------------------

    def stabilizer_generators(self) -> list[PauliOperator]:
        """One generator per vertex: the frame-conjugated correlation operator."""
        gens = []
        for a in self.labels:
            sign = 1
            sites = []
            fa = self.frame_index(a)
            q, s = cl.CONJ_PAULI[fa][cl.PAULI_INDEX["X"]]
            sign *= s
            sites.append((a, cl.PAULI_NAME[q]))
            for b in self.graph.neighbors(a):
                fb = self.frame_index(b)
                q, s = cl.CONJ_PAULI[fb][cl.PAULI_INDEX["Z"]]
                sign *= s
                sites.append((b, cl.PAULI_NAME[q]))
            gens.append(PauliOperator(sign, tuple(sites)))
        return gens

    # -- dense crossover -----------------------------------------------------

    def to_statevector(self, *, max_qubits: int | None = None) -> sv.PureState:
        state = sv.plus_state(self.labels, max_qubits=max_qubits)
        for a, b in self.graph.edges():
            state = sv.apply_cz(state, a, b)
        for v, f in zip(self.labels, self.frames):
            if f != cl.C_ID:
                state = sv.apply_local_unitary(state, v, cl.MATRICES[f])
        return state

    # -- measurements --------------------------------------------------------

    def measure_graph_pauli(self, v: Label, pauli: str, outcome: int) -> "GraphState":
        """Measure the bare graph Pauli (frame at v is ignored and discarded).

        Outcome probabilities for Y/Z on any vertex of a graph state are 1/2
        each; both branches are legal inputs.
        """
        if pauli not in ("Y", "Z"):
            if pauli == "X":
                raise GraphMeasurementError(
                    "sigma_x has no vertex-deletion rule here; route through the "
                    "state-vector engine")
            raise ValueError(f"unknown Pauli {pauli!r}")
        if outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        g = self.graph
        i = g.index(v)
        neighbors = g.neighbors(v)
        if pauli == "Y":
            new_graph = g.local_complement(v).delete_vertex(v)
            u = cl.U_Y[outcome]
        else:
            new_graph = g.delete_vertex(v)
            u = cl.U_Z[outcome]
        frames = [f for j, f in enumerate(self.frames) if j != i]
        if u != cl.C_ID:
            for b in neighbors:
                j = new_graph.index(b)
                frames[j] = cl.COMPOSE[frames[j]][u]
        return GraphState(new_graph, frames)

    def measure_pauli(self, v: Label, basis: str, outcome: int) -> "GraphState":
        """Measure the physical Pauli ``basis`` on qubit v of the framed state.

        The requested basis is conjugated through the frame at v to a signed
        graph-level Pauli; a graph-level X raises
        :class:`GraphMeasurementError`.
        """
        if basis not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {basis!r}")
        if outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        f = self.frame_index(v)
        q, sign = cl.CONJ_PAULI[cl.DAGGER[f]][cl.PAULI_INDEX[basis]]
        graph_outcome = outcome ^ (1 if sign < 0 else 0)
        return self.measure_graph_pauli(v, cl.PAULI_NAME[q], graph_outcome)

    def graph_measurement_projector(self, v: Label, pauli: str, outcome: int) -> np.ndarray:
        """Physical 2x2 projector realizing ``measure_graph_pauli`` on this state."""
        vec = sv.pauli_eigenvector(pauli, outcome)
        vec = self.frame_matrix(v) @ vec
        return np.outer(vec, vec.conj())

    def __repr__(self) -> str:
        return f"GraphState(n={self.graph.n_vertices}, m={self.graph.n_edges()})"


# -- protocol running ----------------------------------------------------------


def run_pauli_measurements(gs: GraphState, steps: Sequence[tuple],
                           outcomes: Sequence[int], *,
                           apply_corrections: bool = True) -> GraphState:
    """Measure graph Paulis in sequence, optionally undoing each byproduct.

    With ``apply_corrections`` the protocol actively applies the inverse
    byproduct unitary to the neighbors after every measurement (allowed under
    LOCC since the outcome is known), so the graph rewrite sequence is
    outcome-independent and an identity-frame input stays identity-framed.
    Without it, byproducts accumulate in the frames.
    """
    if len(steps) != len(outcomes):
        raise ValueError("need one outcome per step")
    for (v, pauli), k in zip(steps, outcomes):
        if apply_corrections:
            old = {b: gs.frame_index(b) for b in gs.graph.neighbors(v)}
            gs = gs.measure_graph_pauli(v, pauli, k)
            frames = list(gs.frames)
            for b, f in old.items():
                frames[gs.graph.index(b)] = f
            gs = GraphState(gs.graph, frames)
        else:
            gs = gs.measure_graph_pauli(v, pauli, k)
    return gs


def dense_run(gs: GraphState, steps: Sequence[tuple], outcomes: Sequence[int],
              *, apply_corrections: bool = True,
              max_qubits: int | None = None):
    """Dense mirror of :func:`run_pauli_measurements`.

    Projects the physical 2x2 projector of each graph-level measurement on
    the state vector, applying the same correction unitaries, and returns
    (final PureState, list of branch probabilities). The graph-level and
    dense runs are advanced in lockstep so each step's projector reflects the
    current frame.
    """
    state = gs.to_statevector(max_qubits=max_qubits)
    probs = []
    for (v, pauli), k in zip(steps, outcomes):
        proj = gs.graph_measurement_projector(v, pauli, k)
        before = {b: gs.frame_index(b) for b in gs.graph.neighbors(v)}
        state, p = sv.project_measure(state, v, proj)
        probs.append(p)
        gs_next = gs.measure_graph_pauli(v, pauli, k)
        if apply_corrections:
            frames = list(gs_next.frames)
            for b, f_old in before.items():
                f_new = gs_next.frame_index(b)
                if f_new != f_old:
                    u = cl.MATRICES[f_old] @ cl.MATRICES[f_new].conj().T
                    state = sv.apply_local_unitary(state, b, u)
                    frames[gs_next.graph.index(b)] = f_old
            gs_next = GraphState(gs_next.graph, frames)
        gs = gs_next
    return state, probs


# -- file formats -------------------------------------------------------------


def read_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format: first line n, then one 'u v' per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty edge-list input")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        u, vv = int(parts[0]), int(parts[1])
        edges.append((u, vv))
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    """Edge-list text for integer-indexable graphs (vertices renumbered 0..n-1)."""
    index = {l: i for i, l in enumerate(g.labels)}
    out = [str(g.n_vertices)]
    for a, b in g.edges():
        i, j = index[a], index[b]
        if i > j:
            i, j = j, i
        out.append(f"{i} {j}")
    return "\n".join(out) + "\n"


def read_graph6(line: str) -> Graph:
    """Decode one graph6 line (with or without the standard header)."""
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = [ord(c) - 63 for c in s]
    if any(d < 0 or d > 63 for d in data):
        raise ValueError("invalid graph6 characters")
    if not data:
        raise ValueError("empty graph6 line")
    if data[0] < 63:
        n = data[0]
        body = data[1:]
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        n = (data[2] << 30) | (data[3] << 24) | (data[4] << 18) | (data[5] << 12) \
            | (data[6] << 6) | data[7]
        body = data[8:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) < need:
        raise ValueError("graph6 body too short")
    bits = []
    for d in body[:need]:
        for k in range(5, -1, -1):
            bits.append((d >> k) & 1)
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph.from_edges(n, edges)
