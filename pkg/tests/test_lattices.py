import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mqc_lab import statevec as sv
from mqc_lab.errors import StructureCheckError
from mqc_lab.graphstate import GraphState, dense_run, run_pauli_measurements
from mqc_lab.lattices import (BULK_DEGREE, LATTICE_KINDS, LatticeSpec,
                              apply_plan, chain_overhead_series, convert_chain,
                              generate_lattice, hex_extent_for_square,
                              hex_to_triangular, kagome_to_square,
                              lattice_census, plan_hex_to_triangular,
                              plan_kagome_to_square, plan_triangular_to_kagome,
                              triangular_to_kagome)


def patch(kind, extent):
    return generate_lattice(LatticeSpec(kind, extent))


# -- generators ----------------------------------------------------------------


@pytest.mark.parametrize("kind,extent,nv,ne", [
    ("square", (3, 3), 9, 12),
    ("square", (1, 4), 4, 3),
    ("triangular", (3, 3), 9, 16),
    ("triangular", (4, 4), 16, 33),
    ("hexagonal", (4, 3), 8, 8),
    ("hexagonal", (4, 4), 10, 11),
    ("kagome", (4, 4), 12, 17),
    ("kagome", (5, 4), 14, 20),
    ("kagome", (7, 4), 20, 30),
    ("kagome", (7, 6), 30, 48),
])
def test_generator_counts(kind, extent, nv, ne):
    g = patch(kind, extent)
    assert g.n_vertices == nv
    assert g.n_edges() == ne


def test_triangular_edge_count_formula():
    # (d1-1)*d2 + d1*(d2-1) + (d1-1)*(d2-1) edges along the three directions
    for d1 in range(1, 6):
        for d2 in range(1, 6):
            g = patch("triangular", (d1, d2))
            want = (d1 - 1) * d2 + d1 * (d2 - 1) + (d1 - 1) * (d2 - 1)
            assert g.n_edges() == want


def test_bulk_degrees_reached():
    for kind, extent in [("square", (5, 5)), ("triangular", (5, 5)),
                         ("hexagonal", (7, 7)), ("kagome", (7, 6))]:
        g = patch(kind, extent)
        assert max(g.degree(v) for v in g.labels) == BULK_DEGREE[kind]


def test_census_reports_patch():
    c = lattice_census(LatticeSpec("kagome", (7, 6)))
    assert c["vertices"] == 30 and c["edges"] == 48
    assert c["bulk_degree"] == 4 and c["bulk_vertices"] > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        LatticeSpec("cubic", (3, 3))
    with pytest.raises(ValueError):
        LatticeSpec("square", (0, 3))
    assert set(LATTICE_KINDS) == {"square", "hexagonal", "triangular", "kagome"}


# -- single conversion stages ---------------------------------------------------


def test_hex_to_triangular_two_extents():
    for extent in [(12, 9), (16, 12)]:
        gs = GraphState(patch("hexagonal", extent))
        out = hex_to_triangular(gs)
        d = (1 + max(i for i, _ in out.graph.labels),
             1 + max(j for _, j in out.graph.labels))
        assert out.graph == patch("triangular", d)
        assert min(d) >= 4


def test_triangular_to_kagome_identity_extent():
    for extent in [(4, 4), (5, 6)]:
        gs = GraphState(patch("triangular", extent))
        out = triangular_to_kagome(gs)
        assert out.graph == patch("kagome", extent)


def test_kagome_to_square_window():
    gs = GraphState(patch("kagome", (15, 10)))
    out = kagome_to_square(gs, target=(2, 2))
    assert out.graph == patch("square", (2, 2))


def test_stage_rejects_wrong_input():
    tri = GraphState(patch("triangular", (4, 4)))
    with pytest.raises(StructureCheckError):
        hex_to_triangular(tri)
    sq = GraphState(patch("square", (3, 3)))
    with pytest.raises(StructureCheckError):
        kagome_to_square(sq)
    with pytest.raises(StructureCheckError):
        triangular_to_kagome(GraphState(patch("hexagonal", (4, 4))))


def test_window_target_unreachable():
    g = patch("kagome", (7, 6))
    with pytest.raises(StructureCheckError):
        plan_kagome_to_square(g, target=(3, 3))


def test_non_coordinate_labels_rejected():
    from mqc_lab.graphstate import Graph
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(StructureCheckError):
        plan_triangular_to_kagome(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.integers(2, 6))
def test_triangular_to_kagome_any_extent(d1, d2):
    gs = GraphState(patch("triangular", (d1, d2)))
    out = triangular_to_kagome(gs)
    assert out.graph == patch("kagome", (d1, d2))


@settings(max_examples=15, deadline=None)
@given(st.integers(5, 9), st.integers(4, 8))
def test_hex_to_triangular_any_extent(d1, d2):
    gs = GraphState(patch("hexagonal", (d1, d2)))
    out = hex_to_triangular(gs)
    d = (1 + max(i for i, _ in out.graph.labels),
         1 + max(j for _, j in out.graph.labels))
    assert out.graph == patch("triangular", d)


# -- branch fidelity and determinism -------------------------------------------


def stage_branch(gs, plan, outcomes):
    graph_out = run_pauli_measurements(gs, plan.steps, list(outcomes))
    dense_out, probs = dense_run(gs, plan.steps, list(outcomes))
    fid = sv.fidelity_up_to_phase(dense_out, graph_out.to_statevector())
    return graph_out, fid, probs


def test_hex_stage_all_branches_exact():
    g = patch("hexagonal", (4, 3))
    plan = plan_hex_to_triangular(g)
    assert plan.n_measured == 5
    gs = GraphState(g)
    want = patch("triangular", plan.extent_out)
    for bits in itertools.product((0, 1), repeat=plan.n_measured):
        graph_out, fid, probs = stage_branch(gs, plan, bits)
        assert fid >= 1 - 1e-9
        assert all(p > 1e-12 for p in probs)
        assert graph_out.graph.relabeled(plan.relabel) == want


def test_triangular_stage_all_branches_exact():
    g = patch("triangular", (4, 4))
    plan = plan_triangular_to_kagome(g)
    assert plan.n_measured == 4
    gs = GraphState(g)
    want = patch("kagome", (4, 4))
    for bits in itertools.product((0, 1), repeat=4):
        graph_out, fid, probs = stage_branch(gs, plan, bits)
        assert fid >= 1 - 1e-9
        assert graph_out.graph.relabeled(plan.relabel) == want


def test_kagome_stage_sampled_branches():
    g = patch("kagome", (5, 4))
    plan = plan_kagome_to_square(g)
    gs = GraphState(g)
    want = patch("square", plan.extent_out)
    rng = np.random.default_rng(11)
    for _ in range(6):
        bits = [int(b) for b in rng.integers(0, 2, plan.n_measured)]
        graph_out, fid, probs = stage_branch(gs, plan, bits)
        assert fid >= 1 - 1e-9
        assert graph_out.graph.relabeled(plan.relabel) == want


def test_kagome_stage_twenty_qubits():
    g = patch("kagome", (7, 4))
    assert g.n_vertices == 20
    plan = plan_kagome_to_square(g)
    gs = GraphState(g)
    rng = np.random.default_rng(3)
    for _ in range(3):
        bits = [int(b) for b in rng.integers(0, 2, plan.n_measured)]
        _, fid, _ = stage_branch(gs, plan, bits)
        assert fid >= 1 - 1e-9


def test_apply_plan_outcome_independent():
    g = patch("kagome", (7, 6))
    plan = plan_kagome_to_square(g)
    gs = GraphState(g)
    base = apply_plan(gs, plan)
    rng = np.random.default_rng(5)
    for _ in range(8):
        bits = [int(b) for b in rng.integers(0, 2, plan.n_measured)]
        out = apply_plan(gs, plan, bits)
        assert out.graph == base.graph
        assert out.frames == base.frames


def test_order_free_within_phases():
    g = patch("kagome", (7, 6))
    plan = plan_kagome_to_square(g)
    gs = GraphState(g)
    base = run_pauli_measurements(gs, plan.steps, [0] * plan.n_measured)
    rng = np.random.default_rng(17)
    for _ in range(4):
        steps = []
        for phase in plan.y_phases:
            phase = list(phase)
            rng.shuffle(phase)
            steps += [(v, "Y") for v in phase]
        zs = list(plan.z_steps)
        rng.shuffle(zs)
        steps += [(v, "Z") for v in zs]
        out = run_pauli_measurements(gs, steps, [0] * len(steps))
        assert out.graph == base.graph
        assert out.frames == base.frames


def test_apply_plan_outcome_length_checked():
    g = patch("triangular", (4, 4))
    plan = plan_triangular_to_kagome(g)
    with pytest.raises(ValueError):
        apply_plan(GraphState(g), plan, [0])


# -- full chain -----------------------------------------------------------------


def test_chain_two_nested_extents():
    reports = {}
    for t in (1, 2):
        rep = convert_chain(t)
        reports[t] = rep
        assert [s["stage"] for s in rep["stages"]] == [
            "hex-to-triangular", "triangular-to-kagome", "kagome-to-square"]
        assert all(s["check"] == "ok" for s in rep["stages"])
        assert rep["stages"][-1]["extent_out"] == [t, t]
        assert rep["stages"][-1]["qubits_after"] == t * t
        # each stage's output is a generated patch of the declared extent
        for s in rep["stages"]:
            kind = s["stage"].split("-to-")[1]
            kind = {"triangular": "triangular", "kagome": "kagome",
                    "square": "square"}[kind]
            c = lattice_census(LatticeSpec(kind, tuple(s["extent_out"])))
            assert c["vertices"] == s["qubits_after"]
    h1 = hex_extent_for_square(1)
    h2 = hex_extent_for_square(2)
    assert h1[0] < h2[0] and h1[1] < h2[1]

    r1 = reports[1]["overhead"]
    r2 = reports[2]["overhead"]
    # support-based ratios move toward the bulk constants 8 and 16
    assert abs(r2["support_hexagons_per_cell"] - 8) < abs(
        r1["support_hexagons_per_cell"] - 8)
    assert abs(r2["support_hexagons_per_cell"] - 8) <= 0.5
    assert abs(r2["support_sites_per_cell"] - 16) <= 1.0
    assert r2["patch_qubit_ratio"] > 1


def test_chain_outcome_determinism():
    rep0 = convert_chain(1)
    total = sum(s["measured_y"] + s["measured_z"] for s in rep0["stages"])
    rng = np.random.default_rng(23)
    rep1 = convert_chain(1, outcomes=[int(b) for b in rng.integers(0, 2, total)])
    assert rep1 == rep0


def test_overhead_series_fit():
    ser = chain_overhead_series([1, 2])
    assert [r["t"] for r in ser["rows"]] == [1, 2]
    assert ser["fit"] is not None
    hexes = [r["hexagons_per_cell"] for r in ser["rows"]]
    assert hexes[0] < hexes[1] <= 8.5
