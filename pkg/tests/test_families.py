import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqc_lab import statevec as sv
from mqc_lab.errors import UsageError
from mqc_lab.families import (FAMILY_KINDS, FamilySpec, family_graph,
                              family_state, random_tree, witness_for)
from mqc_lab.graphstate import GraphState, write_edge_list
from mqc_lab.monotones import w_state_geometric_value


def spec(kind, *sizes, **kw):
    return FamilySpec(kind, tuple(sizes), **kw)


@pytest.mark.parametrize("bad", [
    ("nope", (3,)),
    ("ghz", ()),
    ("ghz", (3, 3)),
    ("ghz", (4, 2)),
    ("ring", (2, 3)),
    ("file", (3,)),
])
def test_spec_validation(bad):
    with pytest.raises(UsageError):
        FamilySpec(*bad)


@pytest.mark.parametrize("kind,n,vertices,edges", [
    ("linear_cluster", 5, 5, 4),
    ("ring", 6, 6, 6),
    ("ghz", 5, 5, 10),
    ("grid", 3, 9, 12),
    ("hexagonal", 4, 10, 11),
    ("triangular", 3, 9, 16),
    ("kagome", 4, 12, 17),
])
def test_graph_counts(kind, n, vertices, edges):
    g = family_graph(spec(kind, n), n)
    assert g.n_vertices == vertices
    assert len(g.edges()) == edges


def test_w_has_no_graph():
    assert family_graph(spec("w", 4), 4) is None


def test_file_family_roundtrip(tmp_path):
    g = family_graph(spec("ring", 5), 5)
    path = tmp_path / "ring5.edges"
    path.write_text(write_edge_list(g))
    g2 = family_graph(spec("file", 5, path=str(path)), 5)
    assert g2 == g


def test_tree_seed_determinism():
    a = family_graph(spec("tree", 8, seed=3), 8)
    b = family_graph(spec("tree", 8, seed=3), 8)
    c = family_graph(spec("tree", 8, seed=4), 8)
    assert a == b
    assert a != c


def test_tree_seed_varies_with_size():
    s = spec("tree", 5, 6, seed=3)
    g5 = family_graph(s, 5)
    g6 = family_graph(s, 6)
    assert g5.n_vertices == 5 and g6.n_vertices == 6


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 16), seed=st.integers(0, 2 ** 20))
def test_random_tree_is_a_tree(n, seed):
    g = random_tree(n, np.random.default_rng(seed))
    assert g.n_vertices == n
    assert len(g.edges()) == n - 1 if n > 0 else 0
    assert len(g.connected_components()) == 1


def test_states_match_reference_constructions():
    assert sv.equal_up_to_phase(family_state(spec("w", 3), 3), sv.w_state(3))
    assert sv.equal_up_to_phase(family_state(spec("ghz", 3), 3),
                                sv.ghz_state(3))
    s = spec("linear_cluster", 4)
    want = GraphState(family_graph(s, 4)).to_statevector()
    assert sv.equal_up_to_phase(family_state(s, 4), want)


def test_witness_registry():
    bound, reason = witness_for("ghz", "rank_width")
    assert bound == 1.0 and reason
    assert witness_for("grid", "rank_width") is None
    assert witness_for("hexagonal", "entanglement_width") is None
    assert witness_for("tree", "rank_width")[0] == 1.0
    assert witness_for("ring", "rank_width")[0] == 2.0


def test_w_geometric_witness_dominates_closed_form():
    bound, _ = witness_for("w", "geometric_measure")
    assert bound == pytest.approx(1.0 / math.log(2.0))
    values = [w_state_geometric_value(n) for n in range(2, 60)]
    assert all(v < bound for v in values)
    assert all(b > a for a, b in zip(values, values[1:]))
