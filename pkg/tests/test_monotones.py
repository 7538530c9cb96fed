import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mqc_lab import monotones as mo
from mqc_lab import statevec as sv
from mqc_lab.errors import NoPathError
from mqc_lab.graphstate import Graph, GraphState


def _grid(d):
    labels = [(r, c) for r in range(d) for c in range(d)]
    edges = []
    for r in range(d):
        for c in range(d):
            if c + 1 < d:
                edges.append(((r, c), (r, c + 1)))
            if r + 1 < d:
                edges.append(((r, c), (r + 1, c)))
    return Graph.from_edges(labels, edges)


# ---- geometric measure ----------------------------------------------------------

# For two qubits the maximal product overlap is exactly the largest Schmidt
# coefficient, so -log2(lambda_max^2) is an independent oracle.

def _two_qubit_oracle(state):
    lam = sv.schmidt_spectrum(state, [state.labels[0]])
    return max(0.0, -math.log2(float(lam[0])))


def test_geometric_two_qubit_matches_schmidt_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        state = sv.random_state(["a", "b"], rng)
        want = _two_qubit_oracle(state)
        got = mo.geometric_measure(state, restarts=20).value
        assert got == pytest.approx(want, abs=1e-9)


def test_geometric_ghz_is_one():
    for n in (2, 3, 4):
        res = mo.geometric_measure(sv.ghz_state(n), restarts=25)
        assert res.value == pytest.approx(1.0, abs=1e-10)


def test_geometric_w_closed_form():
    for n in (2, 3, 4, 5):
        res = mo.geometric_measure(sv.w_state(n), restarts=40)
        want = (n - 1) * math.log2(n / (n - 1))
        assert res.value == pytest.approx(want, abs=1e-8)
        assert mo.w_state_geometric_value(n) == pytest.approx(want)


def test_geometric_product_state_is_zero():
    state = sv.computational_state([0, 1, 2], [1, 0, 1])
    res = mo.geometric_measure(state, restarts=5)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    assert res.value >= 0.0


def test_geometric_witness_reproduces_overlap():
    state = sv.w_state(3)
    res = mo.geometric_measure(state, restarts=30)
    phi = res.product_state(state.labels)
    overlap = abs(np.vdot(phi.amps, state.amps)) ** 2
    assert overlap == pytest.approx(res.overlap_sq, abs=1e-10)


def test_geometric_deterministic_given_seed():
    state = sv.w_state(4)
    a = mo.geometric_measure(state, restarts=10, seed=3)
    b = mo.geometric_measure(state, restarts=10, seed=3)
    assert a.value == b.value
    assert all(np.array_equal(x, y) for x, y in zip(a.witness, b.witness))


def test_geometric_single_qubit():
    state = sv.computational_state(["q"], [1])
    res = mo.geometric_measure(state)
    assert res.value == 0.0


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_geometric_never_exceeds_entropy_bound(seed):
    # E_g <= any bipartite entanglement entropy is false in general, but the
    # overlap found is always a valid lower bound on the max overlap, so the
    # reported value is an upper bound on the true measure and must be >= the
    # two-qubit oracle value when restricted to two qubits.
    rng = np.random.default_rng(seed)
    state = sv.random_state([0, 1], rng)
    got = mo.geometric_measure(state, restarts=8).value
    want = _two_qubit_oracle(state)
    assert got >= want - 1e-9
    assert got == pytest.approx(want, abs=1e-7)


# ---- Schmidt measure bounds -----------------------------------------------------


def test_schmidt_bounds_ghz_exact_one():
    for n in (2, 3, 4, 5):
        b = mo.schmidt_measure_bounds(sv.ghz_state(n))
        assert b.lower == 1.0
        assert b.upper == 1.0
        assert b.exact
        assert b.terms == 2


def test_schmidt_bounds_w3_gap():
    b = mo.schmidt_measure_bounds(sv.w_state(3))
    assert b.lower == 1.0
    # the 2-term fits that approach W are border-rank artifacts with diverging
    # coefficients; the cap must reject them and settle on three terms
    assert b.upper == pytest.approx(math.log2(3), abs=1e-12)
    assert not b.exact
    assert b.terms == 3


def test_schmidt_bounds_w4():
    b = mo.schmidt_measure_bounds(sv.w_state(4))
    assert b.lower == 1.0
    assert b.upper == pytest.approx(2.0, abs=1e-12)
    assert b.terms == 4


def test_schmidt_bounds_product_state():
    b = mo.schmidt_measure_bounds(sv.computational_state([0, 1, 2], [0, 1, 0]))
    assert b == mo.SchmidtMeasureBounds(0.0, 0.0, True, 1)


def test_schmidt_bounds_single_qubit():
    b = mo.schmidt_measure_bounds(sv.computational_state(["z"], [0]))
    assert b.exact and b.lower == 0.0 and b.upper == 0.0


def test_schmidt_bounds_path_graph_state():
    # the 3-vertex path graph state is locally equivalent to GHZ_3
    gs = GraphState(Graph.from_edges([0, 1, 2], [(0, 1), (1, 2)]))
    b = mo.schmidt_measure_bounds(gs.to_statevector())
    assert b.lower == 1.0
    assert b.upper == 1.0
    assert b.exact


def test_schmidt_bounds_size_guard():
    state = sv.plus_state(list(range(6)))
    with pytest.raises(sv.SizeLimitError):
        mo.schmidt_measure_bounds(state)
    # but an explicit limit raises the ceiling
    b = mo.schmidt_measure_bounds(state, max_qubits=6, max_terms=1)
    assert b.exact and b.terms == 1


def test_schmidt_lower_bound_caps_upper_search():
    # when max_terms is below the lower-bound rank, no fit can be reported
    b = mo.schmidt_measure_bounds(sv.ghz_state(3), max_terms=1)
    assert b.lower == 1.0
    assert b.upper == math.inf
    assert b.terms is None
    assert not b.exact


# ---- Bell localizability ----------------------------------------------------------


def test_bell_pattern_path_structure():
    g = _grid(3)
    pat = mo.bell_localization_pattern(g, (0, 0), (2, 2))
    assert pat.path[0] == (0, 0) and pat.path[-1] == (2, 2)
    assert len(pat.path) == 5  # shortest corner-to-corner route
    paulis = dict(pat.steps)
    for v in pat.path[1:-1]:
        assert paulis[v] == "Y"
    off_path = set(g.labels) - set(pat.path)
    for v in off_path:
        assert paulis[v] == "Z"
    assert set(pat.measured_qubits()) == off_path | set(pat.path[1:-1])


def test_bell_pattern_adjacent_pair_needs_no_y():
    g = Graph.from_edges([0, 1, 2], [(0, 1), (1, 2)])
    pat = mo.bell_localization_pattern(g, 0, 1)
    assert pat.steps == ((2, "Z"),)


def test_bell_pattern_rejects_same_vertex():
    g = Graph.from_edges([0, 1], [(0, 1)])
    with pytest.raises(ValueError):
        mo.bell_localization_pattern(g, 0, 0)


def test_bell_pattern_disconnected_raises():
    g = Graph.from_edges([0, 1, 2, 3], [(0, 1), (2, 3)])
    with pytest.raises(NoPathError):
        mo.bell_localization_pattern(g, 0, 3)


def test_bell_path4_every_branch_is_bare_edge():
    g = Graph.from_edges([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3)])
    pat = mo.bell_localization_pattern(g, 0, 3)
    target = GraphState(Graph.from_edges([0, 3], [(0, 3)])).to_statevector()
    for bits in itertools.product((0, 1), repeat=len(pat.steps)):
        out = mo.execute_bell_pattern(g, pat, bits)
        state = out.to_statevector()
        assert sv.fidelity_up_to_phase(state, target) == pytest.approx(1.0, abs=1e-12)
        assert sv.entanglement_entropy(state, [0]) == pytest.approx(1.0, abs=1e-12)


def test_certify_bell_pair_grid_corner():
    cert = mo.certify_bell_pair(_grid(3), (0, 0), (2, 2))
    assert cert.n_branches == 128
    assert cert.all_exact
    assert cert.min_entropy == pytest.approx(1.0, abs=1e-12)


def test_certify_bell_pair_sampled_grid_pairs():
    g = _grid(3)
    rng = np.random.default_rng(11)
    labels = list(g.labels)
    for _ in range(4):
        a, b = rng.choice(len(labels), size=2, replace=False)
        cert = mo.certify_bell_pair(g, labels[a], labels[b])
        assert cert.all_exact, (labels[a], labels[b])


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1), st.data())
def test_bell_random_tree_random_outcomes(seed, data):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    labels = list(range(n))
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    g = Graph.from_edges(labels, edges)
    a, b = rng.choice(n, size=2, replace=False)
    pat = mo.bell_localization_pattern(g, int(a), int(b))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=len(pat.steps),
                              max_size=len(pat.steps)))
    out = mo.execute_bell_pattern(g, pat, bits)
    state = out.to_statevector()
    assert sv.entanglement_entropy(state, [int(a)]) == pytest.approx(1.0, abs=1e-12)


def test_n_le_components():
    g = Graph.from_edges(list(range(7)), [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)])
    assert mo.n_le(g) == 4
    assert mo.n_le(Graph.empty([])) == 0
    assert mo.n_le(Graph.empty(["solo"])) == 1
    assert mo.n_le(_grid(3)) == 9
