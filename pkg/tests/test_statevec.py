import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mqc_lab import statevec as sv
from mqc_lab.errors import ImpossibleOutcomeError, SizeLimitError


def test_computational_state_indexing():
    s = sv.computational_state(["a", "b", "c"], [1, 0, 1])
    # MSB-first over label order: index 0b101 = 5
    expect = np.zeros(8)
    expect[5] = 1.0
    assert np.allclose(s.amps, expect)


def test_plus_state_uniform():
    s = sv.plus_state([0, 1])
    assert np.allclose(s.amps, 0.5)


def test_ghz_state():
    s = sv.ghz_state(3)
    expect = np.zeros(8)
    expect[0] = expect[7] = 1 / np.sqrt(2)
    assert np.allclose(s.amps, expect)


def test_w_state():
    s = sv.w_state(3)
    expect = np.zeros(8)
    expect[[4, 2, 1]] = 1 / np.sqrt(3)
    assert np.allclose(s.amps, expect)


def test_max_qubits_guard():
    with pytest.raises(SizeLimitError):
        sv.plus_state(list(range(8)), max_qubits=6)


def test_normalization_check():
    with pytest.raises(ValueError):
        sv.PureState([0], np.array([1.0, 1.0]))
    s = sv.PureState([0], np.array([1.0, 1.0]), normalize=True)
    assert np.isclose(np.linalg.norm(s.amps), 1.0)


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        sv.PureState(["q", "q"], np.zeros(4))


def test_apply_cz_on_plus_pair():
    s = sv.apply_cz(sv.plus_state([0, 1]), 0, 1)
    assert np.allclose(s.amps * 2, [1, 1, 1, -1])


def test_entropy_of_product_state():
    s = sv.computational_state([0, 1], [0, 1])
    bp = sv.Bipartition.of_state(s, [0])
    assert sv.entanglement_entropy(s, bp) == pytest.approx(0.0, abs=1e-12)
    assert sv.schmidt_rank(s, bp) == 1


def test_entropy_of_bell_pair():
    s = sv.ghz_state(2)
    bp = sv.Bipartition.of_state(s, [0])
    assert sv.entanglement_entropy(s, bp) == pytest.approx(1.0, abs=1e-12)
    assert sv.schmidt_rank(s, bp) == 2


def test_w3_cut_entropy_value():
    # entropy of W_3 across 1|2: eigenvalues 1/3, 2/3
    s = sv.w_state(3)
    bp = sv.Bipartition.of_state(s, [0])
    expect = -(1 / 3) * np.log2(1 / 3) - (2 / 3) * np.log2(2 / 3)
    assert sv.entanglement_entropy(s, bp) == pytest.approx(expect, abs=1e-12)
    assert expect == pytest.approx(0.9182958340544896, abs=1e-12)


def test_schmidt_spectrum_sorted_and_normalized():
    rng = np.random.default_rng(0)
    s = sv.random_state([0, 1, 2, 3], rng)
    lam = sv.schmidt_spectrum(s, sv.Bipartition.of_state(s, [0, 2]))
    assert np.all(np.diff(lam) <= 1e-12)
    assert np.isclose(lam.sum(), 1.0)


def test_project_measure_plus_state():
    s = sv.plus_state([0, 1])
    proj = sv.pauli_projector("Z", 0)
    post, p = sv.project_measure(s, 0, proj)
    assert p == pytest.approx(0.5)
    assert post.labels == (1,)
    assert np.allclose(np.abs(post.amps), 1 / np.sqrt(2))


def test_project_measure_impossible():
    s = sv.computational_state([0], [0])
    with pytest.raises(ImpossibleOutcomeError):
        sv.project_measure(s, 0, sv.pauli_projector("Z", 1))


def test_pauli_eigenvectors():
    for p in "XYZ":
        m = {"X": np.array([[0, 1], [1, 0]]),
             "Y": np.array([[0, -1j], [1j, 0]]),
             "Z": np.array([[1, 0], [0, -1]])}[p]
        for k in (0, 1):
            v = sv.pauli_eigenvector(p, k)
            assert np.allclose(m @ v, (-1) ** k * v)


def test_fidelity_label_permutation():
    rng = np.random.default_rng(5)
    s = sv.random_state(["a", "b", "c"], rng)
    perm = s.permuted(["c", "a", "b"])
    assert sv.fidelity_up_to_phase(s, perm) == pytest.approx(1.0)
    assert sv.equal_up_to_phase(s, perm)


def test_equal_up_to_phase_catches_difference():
    rng = np.random.default_rng(6)
    a = sv.random_state([0, 1], rng)
    b = sv.random_state([0, 1], rng)
    assert not sv.equal_up_to_phase(a, b)


def test_tensor_product_and_relabel():
    a = sv.computational_state([0], [1])
    b = sv.plus_state([1])
    ab = sv.tensor_product(a, b)
    assert ab.labels == (0, 1)
    assert np.allclose(ab.amps, [0, 0, 1 / np.sqrt(2), 1 / np.sqrt(2)])
    re = ab.relabeled({0: "x"})
    assert re.labels == ("x", 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**30))
def test_entropy_bounds_random(n, seed):
    rng = np.random.default_rng(seed)
    s = sv.random_state(list(range(n)), rng)
    side = [0]
    h = sv.entanglement_entropy(s, sv.Bipartition.of_state(s, side))
    assert -1e-10 <= h <= 1.0 + 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 4), st.integers(0, 2**30))
def test_appending_zero_qubit_keeps_spectrum(n, seed):
    rng = np.random.default_rng(seed)
    s = sv.random_state(list(range(n)), rng)
    ext = sv.tensor_product(s, sv.computational_state(["anc"], [0]))
    for side in ([0], [0, 1]):
        lam0 = sv.schmidt_spectrum(s, sv.Bipartition.of_state(s, side))
        lam1 = sv.schmidt_spectrum(ext, sv.Bipartition.of_state(ext, side))
        k = min(len(lam0), len(lam1))
        assert np.allclose(lam0[:k], lam1[:k], atol=1e-10)
        assert np.allclose(lam0[k:], 0, atol=1e-10)
        assert np.allclose(lam1[k:], 0, atol=1e-10)


def test_apply_local_unitary_preserves_norm():
    rng = np.random.default_rng(9)
    s = sv.random_state([0, 1, 2], rng)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    out = sv.apply_local_unitary(s, 1, h)
    assert np.isclose(np.linalg.norm(out.amps), 1.0)
    # H twice is identity
    back = sv.apply_local_unitary(out, 1, h)
    assert sv.equal_up_to_phase(back, s)
