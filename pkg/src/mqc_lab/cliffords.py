"""The 24-element single-qubit Clifford group, tabulated.

Elements are 2x2 unitaries modulo global phase, canonicalized by making the
first nonzero entry real and positive. The module builds, once at import:

* ``MATRICES[i]``    -- canonical numpy matrix of element i (identity is 0),
* ``COMPOSE[i][j]``  -- index of U_i @ U_j,
* ``DAGGER[i]``      -- index of U_i^dag,
* ``CONJ_PAULI[i][p]`` -- (q, sign) with U_i P_p U_i^dag = sign * P_q.

Paulis are indexed 0=X, 1=Y, 2=Z throughout.
"""

from __future__ import annotations

import numpy as np

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)
PAULI_INDEX = {"X": 0, "Y": 1, "Z": 2}
PAULI_NAME = "XYZ"

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)


def _canonical(u: np.ndarray) -> np.ndarray:
    flat = u.reshape(-1)
    k = int(np.argmax(np.abs(flat) > 1e-9))
    phase = flat[k] / abs(flat[k])
    return u / phase


def _key(u: np.ndarray) -> tuple:
    c = _canonical(u)
    return tuple(np.round(c.reshape(-1), 9).view(float))


def _build() -> tuple[list[np.ndarray], dict]:
    mats = [_canonical(np.eye(2, dtype=complex))]
    index = {_key(mats[0]): 0}
    frontier = [mats[0]]
    while frontier:
        nxt = []
        for u in frontier:
            for g in (_H, _S):
                v = _canonical(g @ u)
                k = _key(v)
                if k not in index:
                    index[k] = len(mats)
                    mats.append(v)
                    nxt.append(v)
        frontier = nxt
    return mats, index


MATRICES, _INDEX = _build()
N_CLIFFORD = len(MATRICES)
assert N_CLIFFORD == 24, f"single-qubit Clifford group has 24 elements, built {N_CLIFFORD}"


def index_of(u: np.ndarray) -> int:
    """Index of a 2x2 Clifford unitary (up to global phase). KeyError if not Clifford."""
    return _INDEX[_key(np.asarray(u, dtype=complex))]


COMPOSE = tuple(
    tuple(index_of(MATRICES[i] @ MATRICES[j]) for j in range(N_CLIFFORD))
    for i in range(N_CLIFFORD)
)
DAGGER = tuple(index_of(MATRICES[i].conj().T) for i in range(N_CLIFFORD))


def _conj_pauli_entry(i: int, p: int) -> tuple[int, int]:
    m = MATRICES[i] @ PAULIS[p] @ MATRICES[i].conj().T
    for q in range(3):
        for sign in (1, -1):
            if np.allclose(m, sign * PAULIS[q], atol=1e-9):
                return q, sign
    raise AssertionError("Clifford conjugation did not map Pauli to signed Pauli")


CONJ_PAULI = tuple(tuple(_conj_pauli_entry(i, p) for p in range(3)) for i in range(N_CLIFFORD))

# Frequently used elements by name.
C_ID = index_of(np.eye(2))
C_H = index_of(_H)
C_S = index_of(_S)
C_SDG = index_of(_S.conj().T)
C_X = index_of(PAULI_X)
C_Y = index_of(PAULI_Y)
C_Z = index_of(PAULI_Z)

# Byproduct unitaries of the graph measurement rules. A sigma_y outcome k
# leaves sqrt((-1)^k (-i sigma_z)) on each neighbor, which is S (k=0) or
# S^dag (k=1) up to phase; a sigma_z outcome k leaves sigma_z^k.
U_Y = (C_S, C_SDG)
U_Z = (C_ID, C_Z)

_NAMES = {C_ID: "I", C_H: "H", C_S: "S", C_SDG: "Sdg", C_X: "X", C_Y: "Y", C_Z: "Z"}


def name_of(i: int) -> str:
    """Short name when the element is one of the common ones, else 'C<i>'."""
    return _NAMES.get(i, f"C{i}")
