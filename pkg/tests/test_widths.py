import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mqc_lab import statevec as sv
from mqc_lab import widths as w
from mqc_lab.errors import SizeLimitError
from mqc_lab.graphstate import Graph, GraphState


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid_graph(rows, cols):
    labels = [(x, y) for y in range(rows) for x in range(cols)]
    edges = []
    for x, y in labels:
        if x + 1 < cols:
            edges.append(((x, y), (x + 1, y)))
        if y + 1 < rows:
            edges.append(((x, y), (x, y + 1)))
    return Graph.from_edges(labels, edges)


def random_graph(n, rng, p=0.5):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


# -- tree enumeration ---------------------------------------------------------


@pytest.mark.parametrize("n,count", [(2, 1), (3, 1), (4, 3), (5, 15), (6, 105),
                                     (9, 135135)])
def test_tree_counts(n, count):
    assert w.tree_count(n) == count


def test_enumeration_matches_count_and_is_duplicate_free():
    for n in (3, 4, 5, 6):
        trees = list(w.enumerate_subcubic_trees(n))
        assert len(trees) == w.tree_count(n)
        full = (1 << n) - 1
        signatures = {frozenset(min(m, full ^ m) for m in t.leaf_masks)
                      for t in trees}
        assert len(signatures) == len(trees)


def test_tree_structure_validates():
    for t in w.enumerate_subcubic_trees(5):
        assert len(t.edges) == 2 * 5 - 3
        parts = t.bipartitions()
        assert frozenset({1}) in parts or frozenset({0}) in parts


def test_tree_masks_match_edge_structure():
    # recompute each edge's far-side leaves by deleting the edge
    for n in (4, 5):
        full = (1 << n) - 1
        for t in w.enumerate_subcubic_trees(n):
            for (a, b), mask in zip(t.edges, t.leaf_masks):
                adj = {}
                for x, y in t.edges:
                    if (x, y) == (a, b):
                        continue
                    adj.setdefault(x, []).append(y)
                    adj.setdefault(y, []).append(x)
                seen = {b}
                stack = [b]
                while stack:
                    u = stack.pop()
                    for v in adj.get(u, []):
                        if v not in seen:
                            seen.add(v)
                            stack.append(v)
                comp = sum(1 << l for l in seen if l < n)
                assert mask in (comp, full ^ comp)


# -- state widths -------------------------------------------------------------


def test_product_state_width_zero():
    s = sv.computational_state([0, 1, 2], [0, 1, 0])
    assert w.entanglement_width(s).value == 0.0
    assert w.schmidt_rank_width(s).value == 0.0


def test_ghz_width_one():
    for n in (3, 4, 5, 6):
        r = w.entanglement_width(sv.ghz_state(n))
        assert r.value == pytest.approx(1.0, abs=1e-12)
        assert r.exact


def test_w4_schmidt_rank_width_one():
    r = w.schmidt_rank_width(sv.w_state(4))
    assert r.value == pytest.approx(1.0, abs=1e-12)


def test_bell_pair_width():
    assert w.schmidt_rank_width(sv.ghz_state(2)).value == pytest.approx(1.0)


def test_single_qubit_width():
    s = sv.plus_state(["q"])
    r = w.entanglement_width(s)
    assert r.value == 0.0 and r.tree is None


def test_size_limit_and_candidate_tree():
    rng = np.random.default_rng(0)
    s = sv.random_state(list(range(5)), rng)
    with pytest.raises(SizeLimitError):
        w.entanglement_width(s, max_leaves=4)
    t = next(w.enumerate_subcubic_trees(5))
    r = w.entanglement_width(s, max_leaves=4, tree=t)
    assert not r.exact
    assert r.value >= w.entanglement_width(s).value - 1e-12


def test_groups_behave_as_blocks():
    # Bell pair between blocks: one cut, entropy 1
    s = sv.ghz_state(4)
    r = w.entanglement_width(s, groups=[(0, 1), (2, 3)])
    assert r.value == pytest.approx(1.0, abs=1e-12)
    # grouping everything into one block gives width 0
    r = w.entanglement_width(s, groups=[(0, 1, 2, 3)])
    assert r.value == 0.0


def test_groups_must_partition():
    s = sv.ghz_state(3)
    with pytest.raises(ValueError):
        w.entanglement_width(s, groups=[(0, 1)])
    with pytest.raises(ValueError):
        w.entanglement_width(s, groups=[(0, 1), (1, 2)])


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**30))
def test_chi_width_dominates_entropy_width(n, seed):
    rng = np.random.default_rng(seed)
    s = sv.random_state(list(range(n)), rng)
    assert (w.schmidt_rank_width(s).value
            >= w.entanglement_width(s).value - 1e-10)


# -- graph rank-width ---------------------------------------------------------


def test_rank_width_named_graphs():
    assert w.rank_width(complete_graph(7)).value == 1
    assert w.rank_width(path_graph(9)).value == 1
    assert w.rank_width(Graph.from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4),
                                             (3, 5)])).value == 1  # a tree
    assert w.rank_width(cycle_graph(5)).value == 2
    assert w.rank_width(cycle_graph(9)).value == 2
    assert w.rank_width(Graph.empty(4)).value == 0
    assert w.rank_width(Graph.empty(1)).value == 0


def test_grid_rank_widths():
    assert w.rank_width(grid_graph(2, 2)).value == 1
    assert w.rank_width(grid_graph(3, 3)).value == 2


def test_grid_4x4_branch_and_bound():
    res = w.rank_width(grid_graph(4, 4), mode="bb")
    assert res.value == 3
    assert res.exact
    assert max(res.cut_values) == 3


def test_bb_agrees_with_exact():
    rng = np.random.default_rng(5)
    for _ in range(15):
        n = int(rng.integers(4, 9))
        g = random_graph(n, rng)
        assert (w.rank_width(g, mode="bb").value
                == w.rank_width(g, mode="exact").value)


def test_bb_budget_abort_is_flagged():
    res = w.rank_width(grid_graph(4, 4), mode="bb", node_budget=10)
    assert not res.exact
    assert res.value >= 3  # still a valid upper bound


def test_exact_mode_size_guard():
    with pytest.raises(SizeLimitError):
        w.rank_width(complete_graph(10), mode="exact")


def test_unknown_mode():
    with pytest.raises(ValueError):
        w.rank_width(path_graph(3), mode="fast")


def test_witness_json_shape():
    res = w.rank_width(grid_graph(3, 3))
    js = res.witness_json()
    assert js["width"] == res.value
    assert len(js["edges"]) == 2 * 9 - 3
    assert len(js["cuts"]) == len(js["edges"])
    assert all(c["value"] <= res.value for c in js["cuts"])
    assert max(c["value"] for c in js["cuts"]) == res.value


def test_cut_rank_wrapper():
    g = path_graph(4)
    assert w.cut_rank(g, [0, 1]) == 1
    assert w.cut_rank(g, [0, 2]) == 2


# -- the measure-equality mechanism --------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 7), st.integers(0, 2**30))
def test_graph_state_entropy_width_equals_rank_width(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(n, rng)
    psi = GraphState(g).to_statevector()
    ew = w.entanglement_width(psi)
    rw = w.rank_width(g)
    assert ew.value == pytest.approx(float(rw.value), abs=1e-9)


def test_cut_entropy_equals_cut_rank_for_graph_states():
    rng = np.random.default_rng(11)
    for _ in range(10):
        g = random_graph(6, rng)
        psi = GraphState(g).to_statevector()
        side = [v for v in range(3)]
        h = sv.entanglement_entropy(psi, sv.Bipartition.of_state(psi, side))
        assert h == pytest.approx(float(g.cut_rank(side)), abs=1e-9)
