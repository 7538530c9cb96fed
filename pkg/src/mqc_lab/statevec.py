"""Dense state-vector engine for desk-scale pure states.

A :class:`PureState` stores complex amplitudes for qubits identified by
hashable labels; label ``labels[i]`` owns axis ``i`` of the amplitude tensor
(most-significant bit first in the flat index). States are treated as
immutable: operations return new instances.

The engine enforces a configurable qubit ceiling (default 22) so that callers
hit a clear error instead of an allocation surprise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import ImpossibleOutcomeError, SizeLimitError

DEFAULT_MAX_QUBITS = 22
SCHMIDT_RANK_TOL = 1e-8

Label = Hashable


def _check_size(n: int, max_qubits: int | None) -> None:
    limit = DEFAULT_MAX_QUBITS if max_qubits is None else max_qubits
    if n > limit:
        raise SizeLimitError(f"{n} qubits exceeds the state-vector ceiling of {limit}")


class PureState:
    """Normalized pure state of labeled qubits."""

    __slots__ = ("labels", "amps")

    def __init__(self, labels: Sequence[Label], amps: np.ndarray, *,
                 max_qubits: int | None = None, normalize: bool = False):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate qubit labels")
        _check_size(len(labels), max_qubits)
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        if amps.shape != (2 ** len(labels),):
            raise ValueError(f"expected {2 ** len(labels)} amplitudes for {len(labels)} qubits")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm < 1e-12:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state is not normalized (|psi| = {norm})")
        self.labels = labels
        self.amps = amps
        self.amps.flags.writeable = False

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def axis(self, label: Label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no qubit labeled {label!r}") from None

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n_qubits)

    def relabeled(self, mapping: dict) -> "PureState":
        return PureState([mapping.get(l, l) for l in self.labels], self.amps)

    def permuted(self, new_order: Sequence[Label]) -> "PureState":
        """Same state with axes rearranged into ``new_order``."""
        if set(new_order) != set(self.labels) or len(new_order) != len(self.labels):
            raise ValueError("new_order must be a permutation of the labels")
        perm = [self.axis(l) for l in new_order]
        amps = self.tensor().transpose(perm).reshape(-1)
        return PureState(new_order, amps)

    def __repr__(self) -> str:
        return f"PureState(n={self.n_qubits})"


@dataclass(frozen=True)
class Bipartition:
    """A two-sided split of a state's qubit labels."""

    side_a: frozenset
    side_b: frozenset

    def __init__(self, side_a: Iterable[Label], side_b: Iterable[Label]):
        object.__setattr__(self, "side_a", frozenset(side_a))
        object.__setattr__(self, "side_b", frozenset(side_b))
        if self.side_a & self.side_b:
            raise ValueError("bipartition sides overlap")
        if not self.side_a or not self.side_b:
            raise ValueError("bipartition sides must be non-empty")

    @classmethod
    def of_state(cls, state: PureState, side_a: Iterable[Label]) -> "Bipartition":
        side_a = frozenset(side_a)
        all_labels = frozenset(state.labels)
        if not side_a <= all_labels:
            raise ValueError("side_a contains labels not in the state")
        return cls(side_a, all_labels - side_a)

    def validate(self, state: PureState) -> None:
        if self.side_a | self.side_b != frozenset(state.labels):
            raise ValueError("bipartition does not cover the state's labels")


def schmidt_spectrum(state: PureState, cut: Bipartition | Iterable[Label]) -> np.ndarray:
    """Decreasing Schmidt coefficients squared (eigenvalues of rho_A), summing to 1."""
    if not isinstance(cut, Bipartition):
        cut = Bipartition.of_state(state, cut)
    cut.validate(state)
    a_axes = sorted(state.axis(l) for l in cut.side_a)
    b_axes = sorted(state.axis(l) for l in cut.side_b)
    mat = state.tensor().transpose(a_axes + b_axes).reshape(2 ** len(a_axes), 2 ** len(b_axes))
    s = np.linalg.svd(mat, compute_uv=False)
    lam = s * s
    lam = lam / lam.sum()
    return np.sort(lam)[::-1]


def entanglement_entropy(state: PureState, cut: Bipartition | Iterable[Label]) -> float:
    """Von Neumann entropy (base 2) across the cut."""
    lam = schmidt_spectrum(state, cut)
    lam = lam[lam > 1e-15]
    return float(-(lam * np.log2(lam)).sum())


def schmidt_rank(state: PureState, cut: Bipartition | Iterable[Label],
                 tol: float = SCHMIDT_RANK_TOL) -> int:
    """Number of Schmidt coefficients above ``tol`` (on the squared spectrum's sqrt)."""
    lam = schmidt_spectrum(state, cut)
    return int((np.sqrt(lam) > tol).sum())


def apply_local_unitary(state: PureState, label: Label, u: np.ndarray) -> PureState:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 unitary")
    ax = state.axis(label)
    t = np.tensordot(u, state.tensor(), axes=([1], [ax]))  # new axis 0
    t = np.moveaxis(t, 0, ax)
    return PureState(state.labels, t.reshape(-1))


def apply_cz(state: PureState, a: Label, b: Label) -> PureState:
    i, j = state.axis(a), state.axis(b)
    t = state.tensor().copy()
    idx = [slice(None)] * state.n_qubits
    idx[i] = 1
    idx[j] = 1
    t[tuple(idx)] *= -1
    return PureState(state.labels, t.reshape(-1))


def outcome_probability(state: PureState, label: Label, projector: np.ndarray) -> float:
    projector = _check_projector(projector)
    ax = state.axis(label)
    t = np.tensordot(projector, state.tensor(), axes=([1], [ax]))
    return float(np.vdot(t, t).real)


def _check_projector(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    if p.shape != (2, 2):
        raise ValueError("expected a 2x2 projector")
    if not np.allclose(p, p.conj().T, atol=1e-9) or not np.allclose(p @ p, p, atol=1e-9):
        raise ValueError("matrix is not an orthogonal projector")
    if not np.isclose(np.trace(p).real, 1.0, atol=1e-9):
        raise ValueError("expected a rank-1 projector")
    return p


def project_measure(state: PureState, label: Label, projector: np.ndarray,
                    prob_floor: float = 1e-12) -> tuple[PureState, float]:
    """Measure one qubit with a rank-1 projector; drop it from the state.

    Returns ``(post_state, probability)``. Raises
    :class:`ImpossibleOutcomeError` when the branch probability is below
    ``prob_floor``.
    """
    projector = _check_projector(projector)
    ax = state.axis(label)
    # rank-1 projector = |v><v|; eigenvector with eigenvalue 1
    w, vecs = np.linalg.eigh(projector)
    v = vecs[:, int(np.argmax(w))]
    t = np.tensordot(v.conj(), state.tensor(), axes=([0], [ax]))
    prob = float(np.vdot(t, t).real)
    if prob < prob_floor:
        raise ImpossibleOutcomeError(
            f"outcome has probability {prob:.3e} < {prob_floor:.0e} on qubit {label!r}")
    rest = tuple(l for l in state.labels if l != label)
    return PureState(rest, (t / np.sqrt(prob)).reshape(-1)), prob


def pauli_eigenvector(pauli: str, outcome: int) -> np.ndarray:
    """Eigenvector of sigma_pauli with eigenvalue (-1)^outcome."""
    from .cliffords import PAULIS, PAULI_INDEX

    m = PAULIS[PAULI_INDEX[pauli]]
    w, vecs = np.linalg.eigh(m)
    target = 1.0 if outcome == 0 else -1.0
    return vecs[:, int(np.argmin(np.abs(w - target)))]


def pauli_projector(pauli: str, outcome: int) -> np.ndarray:
    v = pauli_eigenvector(pauli, outcome)
    return np.outer(v, v.conj())


def fidelity_up_to_phase(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 after aligning qubit orders. Requires identical label sets."""
    if set(a.labels) != set(b.labels):
        raise ValueError("states live on different qubit sets")
    if a.labels != b.labels:
        b = b.permuted(a.labels)
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def equal_up_to_phase(a: PureState, b: PureState, tol: float = 1e-9) -> bool:
    return fidelity_up_to_phase(a, b) >= 1.0 - tol


# -- standard states ------------------------------------------------------


def computational_state(labels: Sequence[Label], bits: Sequence[int]) -> PureState:
    n = len(labels)
    idx = 0
    for b in bits:
        idx = (idx << 1) | (int(b) & 1)
    amps = np.zeros(2 ** n, dtype=complex)
    amps[idx] = 1.0
    return PureState(labels, amps)


def plus_state(labels: Sequence[Label], *, max_qubits: int | None = None) -> PureState:
    n = len(labels)
    _check_size(n, max_qubits)
    amps = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    return PureState(labels, amps, max_qubits=max_qubits)


def ghz_state(n: int, labels: Sequence[Label] | None = None) -> PureState:
    if n < 1:
        raise ValueError("GHZ needs at least one qubit")
    labels = tuple(range(n)) if labels is None else tuple(labels)
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return PureState(labels, amps)


def w_state(n: int, labels: Sequence[Label] | None = None) -> PureState:
    if n < 2:
        raise ValueError("W needs at least two qubits")
    labels = tuple(range(n)) if labels is None else tuple(labels)
    amps = np.zeros(2 ** n, dtype=complex)
    for i in range(n):
        amps[1 << (n - 1 - i)] = 1 / np.sqrt(n)
    return PureState(labels, amps)


def random_state(labels: Sequence[Label], rng: np.random.Generator) -> PureState:
    n = len(labels)
    amps = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return PureState(labels, amps, normalize=True)


def tensor_product(a: PureState, b: PureState) -> PureState:
    if set(a.labels) & set(b.labels):
        raise ValueError("label collision in tensor product")
    return PureState(a.labels + b.labels, np.kron(a.amps, b.amps))
