"""Width measures over subcubic-tree decompositions.

A subcubic tree on n leaves (every vertex degree 1 or 3) assigns a
bipartition of the leaf set to each of its 2n-3 edges; a width measure is
the min over trees of the max over edges of a cut functional (bipartite
entropy, log2 Schmidt rank, or GF(2) cut-rank for graphs).

Trees are enumerated by inserting each new leaf into every edge of the
smaller tree, which produces every leaf-labeled subcubic tree exactly once
((2n-5)!! of them). The enumeration is materialized per leaf count as a
numpy array of per-edge leaf masks, so evaluating a width is two gathers:
``f[masks].max(axis=1).min()``. A branch-and-bound search over the same
insertion tree covers graphs beyond the exhaustive ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from heapq import heappop, heappush
from typing import Callable, Iterable, Sequence

import numpy as np

from . import statevec as sv
from .errors import SizeLimitError
from .gf2 import rank_of_rows
from .graphstate import Graph

MAX_EXHAUSTIVE_LEAVES = 9  # (2n-5)!! trees: 135135 at n=9
DEFAULT_NODE_BUDGET = 500_000


# -- tree enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class SubcubicTree:
    """Unrooted tree, all degrees 1 or 3. Nodes 0..n-1 are leaves, the rest
    internal; ``leaf_masks[i]`` is the leaf set on the far side of edge i."""

    n_leaves: int
    edges: tuple
    leaf_masks: tuple

    def __post_init__(self):
        degree: dict[int, int] = {}
        for a, b in self.edges:
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        for node, d in degree.items():
            expect = 1 if node < self.n_leaves else 3
            if self.n_leaves <= 2:
                expect = 1
            if d != expect:
                raise ValueError(f"node {node} has degree {d}, expected {expect}")

    def bipartitions(self) -> list:
        """Leaf-index sets on the far side of each edge, aligned with edges."""
        return [frozenset(_mask_bits(m)) for m in self.leaf_masks]


def _mask_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _insertion_sizes(n: int) -> list[int]:
    # inserting leaf k into a k-leaf tree offers 2k-3 edges, k = 3..n-1
    return [2 * k - 3 for k in range(3, n)]


def tree_count(n: int) -> int:
    if n < 2:
        return 0 if n < 1 else 1
    out = 1
    for s in _insertion_sizes(n):
        out *= s
    return out


def _replay_tree(n: int, choices: Sequence[int]) -> SubcubicTree:
    """Rebuild the tree for one choice sequence of the insertion enumeration."""
    if n == 2:
        return SubcubicTree(2, ((0, 1),), (0b10,))
    center = n
    edges = [(0, center), (center, 1), (center, 2)]
    masks = [0b110, 0b010, 0b100]
    nxt = n + 1
    for k, c in zip(range(3, n), choices):
        a, b = edges[c]
        m = masks[c]
        w = nxt
        nxt += 1
        # leaf k lands on the far side of every edge whose far-side mask
        # contains the chosen edge's mask (including the chosen edge itself)
        masks = [mm | (1 << k) if (m & ~mm) == 0 else mm for mm in masks]
        edges[c] = (a, w)
        edges.append((w, b))
        masks.append(m)
        edges.append((w, k))
        masks.append(1 << k)
    return SubcubicTree(n, tuple(edges), tuple(masks))


def _decode_choices(n: int, index: int) -> list[int]:
    choices = []
    for size in reversed(_insertion_sizes(n)):
        index, c = divmod(index, size)
        choices.append(c)
    return choices[::-1]


def enumerate_subcubic_trees(n: int):
    """Yield every leaf-labeled subcubic tree on n >= 2 leaves exactly once."""
    if n < 2:
        raise ValueError("need at least 2 leaves")
    if n == 2:
        yield _replay_tree(2, [])
        return
    for index in range(tree_count(n)):
        yield _replay_tree(n, _decode_choices(n, index))


@lru_cache(maxsize=8)
def _tree_cut_masks(n: int) -> np.ndarray:
    """(T, 2n-3) array: per-tree, per-edge far-side leaf masks. Row order
    matches the mixed-radix index of ``_decode_choices``."""
    if n > MAX_EXHAUSTIVE_LEAVES:
        raise SizeLimitError(f"{n} leaves exceeds exhaustive ceiling "
                             f"{MAX_EXHAUSTIVE_LEAVES}")
    if n == 2:
        return np.array([[0b10]], dtype=np.int32)
    m = np.array([[0b110, 0b010, 0b100]], dtype=np.int32)
    for k in range(3, n):
        t, e = m.shape
        bit = np.int32(1 << k)
        rep = np.repeat(m, e, axis=0)
        chosen = rep[np.arange(t * e), np.tile(np.arange(e), t)]
        gains_leaf = (chosen[:, None] & ~rep) == 0
        # chosen column becomes mask|bit (chosen is a subset of itself); the
        # appended columns are the untouched half of the split edge and the
        # new leaf edge
        rep = rep | np.where(gains_leaf, bit, np.int32(0))
        m = np.hstack([rep, chosen[:, None],
                       np.full((t * e, 1), bit, dtype=np.int32)])
    return m


# -- width evaluation ---------------------------------------------------------


@dataclass(frozen=True)
class WidthResult:
    value: float
    exact: bool
    tree: SubcubicTree | None
    leaf_labels: tuple
    cut_values: tuple

    def witness_json(self) -> dict:
        leaves = [list(l) if isinstance(l, tuple) else l for l in self.leaf_labels]
        if self.tree is None:
            return {"width": self.value, "exact": self.exact,
                    "leaves": leaves, "edges": [], "cuts": []}
        cuts = []
        for (a, b), mask, val in zip(self.tree.edges, self.tree.leaf_masks,
                                     self.cut_values):
            side = [leaves[i] for i in _mask_bits(mask)]
            cuts.append({"edge": [a, b], "side": side, "value": val})
        return {"width": self.value, "exact": self.exact, "leaves": leaves,
                "edges": [list(e) for e in self.tree.edges], "cuts": cuts}


def _min_max_over_all_trees(n: int, f: np.ndarray) -> tuple[float, SubcubicTree, list]:
    masks = _tree_cut_masks(n)
    per_tree = f[masks].max(axis=1)
    best = int(per_tree.argmin())
    tree = _replay_tree(n, _decode_choices(n, best))
    cut_values = [float(f[m]) for m in tree.leaf_masks]
    return float(per_tree[best]), tree, cut_values


def _evaluate_tree(tree: SubcubicTree, f: Callable[[int], float]):
    cut_values = [f(m) for m in tree.leaf_masks]
    return max(cut_values), cut_values


def _normalize_groups(state: sv.PureState, groups) -> tuple:
    if groups is None:
        return tuple((l,) for l in state.labels)
    groups = tuple(tuple(g) for g in groups)
    flat = [l for g in groups for l in g]
    if len(flat) != len(set(flat)) or set(flat) != set(state.labels):
        raise ValueError("groups must partition the state's qubits")
    if any(not g for g in groups):
        raise ValueError("empty group")
    return groups


def _state_cut_functional(state: sv.PureState, groups: tuple,
                          kind: str, tol: float) -> Callable[[int], float]:
    def f(mask: int) -> float:
        side = [l for i in _mask_bits(mask) for l in groups[i]]
        bp = sv.Bipartition.of_state(state, side)
        if kind == "entropy":
            return sv.entanglement_entropy(state, bp)
        return float(np.log2(sv.schmidt_rank(state, bp, tol=tol)))
    return f


def _state_width(state: sv.PureState, groups, kind: str, tol: float,
                 max_leaves: int, tree: SubcubicTree | None) -> WidthResult:
    groups = _normalize_groups(state, groups)
    n = len(groups)
    if n == 1:
        return WidthResult(0.0, True, None, groups, ())
    f = _state_cut_functional(state, groups, kind, tol)
    if tree is not None:
        value, cut_values = _evaluate_tree(tree, f)
        return WidthResult(value, False, tree, groups, tuple(cut_values))
    if n > max_leaves:
        raise SizeLimitError(
            f"{n} leaves exceeds exhaustive ceiling {max_leaves}; pass a "
            "candidate tree for an upper bound")
    needed = np.unique(_tree_cut_masks(n))
    f_all = np.zeros(1 << n)
    for m in needed:
        f_all[m] = f(int(m))
    value, best_tree, cut_values = _min_max_over_all_trees(n, f_all)
    return WidthResult(value, True, best_tree, groups, tuple(cut_values))


def entanglement_width(state: sv.PureState, *, groups=None,
                       max_leaves: int = MAX_EXHAUSTIVE_LEAVES,
                       tree: SubcubicTree | None = None) -> WidthResult:
    """min over subcubic trees of the max edge-cut entanglement entropy."""
    return _state_width(state, groups, "entropy", sv.SCHMIDT_RANK_TOL,
                        max_leaves, tree)


def schmidt_rank_width(state: sv.PureState, *, groups=None,
                       tol: float = sv.SCHMIDT_RANK_TOL,
                       max_leaves: int = MAX_EXHAUSTIVE_LEAVES,
                       tree: SubcubicTree | None = None) -> WidthResult:
    """min over subcubic trees of the max edge-cut log2 Schmidt rank."""
    return _state_width(state, groups, "logrank", tol, max_leaves, tree)


# -- graph rank-width ---------------------------------------------------------


def cut_rank(g: Graph, side_a: Iterable) -> int:
    """GF(2) rank of the adjacency block between side_a and its complement."""
    return g.cut_rank(side_a)


def _mask_cut_rank(adj: Sequence[int], full: int, mask: int) -> int:
    other = full & ~mask
    return rank_of_rows([adj[i] & other for i in _mask_bits(mask)])


def rank_width(g: Graph, *, mode: str = "auto",
               max_exhaustive: int = MAX_EXHAUSTIVE_LEAVES,
               node_budget: int = DEFAULT_NODE_BUDGET) -> WidthResult:
    """min over subcubic trees of the max edge cut-rank.

    mode 'exact' enumerates all trees (n <= max_exhaustive); 'bb' runs the
    branch-and-bound search with a node budget and flags whether it finished;
    'auto' picks by size.
    """
    n = g.n_vertices
    labels = g.labels
    if n <= 1:
        return WidthResult(0, True, None, labels, ())
    if mode not in ("auto", "exact", "bb"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact" or (mode == "auto" and n <= max_exhaustive):
        if n > max_exhaustive:
            raise SizeLimitError(
                f"{n} vertices exceeds exhaustive ceiling {max_exhaustive}")
        full = (1 << n) - 1
        f = np.zeros(1 << n)
        for m in range(1, full):
            f[m] = _mask_cut_rank(g.adj, full, m)
        value, tree, cut_values = _min_max_over_all_trees(n, f)
        return WidthResult(int(value), True, tree, labels,
                           tuple(int(v) for v in cut_values))
    return _rank_width_branch_and_bound(g, node_budget)


# -- branch and bound ---------------------------------------------------------


def _caterpillar_tree(order: Sequence[int]) -> SubcubicTree:
    """Caterpillar whose spine cuts are the prefixes of ``order``."""
    n = len(order)
    if n == 2:
        return SubcubicTree(2, ((order[0], order[1]),), (1 << order[1],))
    spine = list(range(n, 2 * n - 2))  # n-2 internal nodes
    edges = [(order[0], spine[0]), (order[1], spine[0])]
    masks = [1 << order[0], 1 << order[1]]
    prefix = (1 << order[0]) | (1 << order[1])
    for i in range(1, n - 2):
        edges.append((spine[i - 1], spine[i]))
        masks.append(prefix)
        leaf = order[i + 1]
        edges.append((leaf, spine[i]))
        masks.append(1 << leaf)
        prefix |= 1 << leaf
    edges.append((order[n - 1], spine[n - 3]))
    masks.append(1 << order[n - 1])
    return SubcubicTree(n, tuple(edges), tuple(masks))


def _order_width(adj, full, order) -> int:
    prefix = 0
    worst = 0
    for v in order[:-1]:
        prefix |= 1 << v
        worst = max(worst, _mask_cut_rank(adj, full, prefix))
    return worst


def _greedy_orders(g: Graph) -> list[list[int]]:
    """Linear arrangements grown by smallest next prefix cut-rank."""
    n = g.n_vertices
    full = (1 << n) - 1
    orders = []
    for start in range(n):
        placed = [start]
        mask = 1 << start
        while len(placed) < n:
            best = None
            for v in range(n):
                if (mask >> v) & 1:
                    continue
                r = _mask_cut_rank(g.adj, full, mask | (1 << v))
                if best is None or r < best[0]:
                    best = (r, v)
            placed.append(best[1])
            mask |= 1 << best[1]
        orders.append(placed)
    return orders


def _improve_order(adj, full, order: list[int], rounds: int = 3) -> list[int]:
    order = list(order)
    best = _order_width(adj, full, order)
    for _ in range(rounds):
        improved = False
        for i in range(len(order) - 1):
            order[i], order[i + 1] = order[i + 1], order[i]
            w = _order_width(adj, full, order)
            if w < best:
                best = w
                improved = True
            else:
                order[i], order[i + 1] = order[i + 1], order[i]
        if not improved:
            break
    return order


def _rank_width_branch_and_bound(g: Graph, node_budget: int) -> WidthResult:
    """Iterative-deepening decision search with a caterpillar incumbent.

    For each candidate width k below the incumbent, grow the family of leaf
    sets that admit a subtree with all cuts <= k: singletons seed it, and any
    disjoint union of two members whose own cut-rank is <= k joins it. A pair
    covering all vertices is a width-k tree; exhausting the closure refutes
    k. The budget counts join tests; exceeding it falls back to the incumbent
    with exact=False.
    """
    n = g.n_vertices
    adj = g.adj
    full = (1 << n) - 1
    labels = g.labels
    if n == 2:
        tree = _caterpillar_tree([0, 1])
        val = _mask_cut_rank(adj, full, 1)
        return WidthResult(int(val), True, tree, labels, (int(val),))

    best_order = None
    best_width = n + 1
    for order in _greedy_orders(g):
        order = _improve_order(adj, full, order)
        width = _order_width(adj, full, order)
        if width < best_width:
            best_width, best_order = width, order
    fallback_tree = _caterpillar_tree(best_order)
    ub = best_width

    fcache: dict[int, int] = {}

    def f_of(mask: int) -> int:
        r = fcache.get(mask)
        if r is None:
            r = _mask_cut_rank(adj, full, mask)
            fcache[mask] = r
        return r

    joins = 0

    def decide(k: int):
        """-> ("yes", parents, root_pair) / ("no", None, None) / ("budget",)"""
        nonlocal joins
        parents: dict[int, tuple | None] = {}
        heap: list[tuple[int, int, int]] = []
        tick = 0
        for v in range(n):
            s = 1 << v
            if f_of(s) > k:
                return ("no", None, None)
            parents[s] = None
            heappush(heap, (-1, tick, s))
            tick += 1
        while heap:
            _, _, a = heappop(heap)
            for b in list(parents.keys()):
                if a & b:
                    continue
                joins += 1
                if joins > node_budget:
                    return ("budget", None, None)
                c = a | b
                if c == full:
                    return ("yes", parents, (a, b))
                if c in parents or f_of(c) > k:
                    continue
                parents[c] = (a, b)
                heappush(heap, (-_popcount(c), tick, c))
                tick += 1
        return ("no", None, None)

    lower = max(f_of(1 << v) for v in range(n))
    for k in range(lower, ub):
        status, parents, root_pair = decide(k)
        if status == "budget":
            cut_values = tuple(f_of(m) for m in fallback_tree.leaf_masks)
            return WidthResult(int(ub), False, fallback_tree, labels, cut_values)
        if status == "yes":
            tree = _tree_from_parents(n, parents, root_pair)
            cut_values = tuple(f_of(m) for m in tree.leaf_masks)
            return WidthResult(int(max(cut_values)), True, tree, labels,
                               cut_values)
    cut_values = tuple(f_of(m) for m in fallback_tree.leaf_masks)
    return WidthResult(int(ub), True, fallback_tree, labels, cut_values)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _tree_from_parents(n: int, parents: dict, root_pair: tuple) -> SubcubicTree:
    edges: list[tuple[int, int]] = []
    masks: list[int] = []
    counter = [n]

    def build(s: int) -> int:
        if s & (s - 1) == 0:
            return s.bit_length() - 1
        a, b = parents[s]
        w = counter[0]
        counter[0] += 1
        na, nb = build(a), build(b)
        edges.append((w, na))
        masks.append(a)
        edges.append((w, nb))
        masks.append(b)
        return w

    ra, rb = root_pair
    na, nb = build(ra), build(rb)
    edges.append((na, nb))
    masks.append(ra)
    return SubcubicTree(n, tuple(edges), tuple(masks))
