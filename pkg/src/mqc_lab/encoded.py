"""Block encodings of multi-qubit states and their coarse-grained analysis.

An :class:`Encoding` fixes two orthogonal m-qubit states as the logical
basis; every logical qubit of an encoded state occupies one block of m
physical qubits.  The module provides the encoder, width/entropy measures
evaluated with blocks as atomic parties, logical Pauli operators with a
numerically decided tensor-product locality verdict, and block-level
two-outcome logical measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import statevec as sv

ORTHO_TOL = 1e-10
LOCALITY_TOL = 1e-8


@dataclass(frozen=True)
class Encoding:
    """Per-qubit block encoding |0> -> logical_zero, |1> -> logical_one."""

    m: int
    logical_zero: sv.PureState
    logical_one: sv.PureState
    name: str = "custom"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("encoding needs at least one physical qubit")
        for state in (self.logical_zero, self.logical_one):
            if state.n_qubits != self.m:
                raise ValueError(
                    f"logical states must live on m={self.m} qubits")
        if self.logical_zero.labels != self.logical_one.labels:
            raise ValueError("logical states must share their qubit labels")
        overlap = abs(np.vdot(self.logical_zero.amps, self.logical_one.amps))
        if overlap > ORTHO_TOL:
            raise ValueError(
                f"logical basis is not orthogonal (|<0|1>| = {overlap:.2e})")

    def logical(self, bit: int) -> sv.PureState:
        return self.logical_one if bit else self.logical_zero

    def basis_matrix(self) -> np.ndarray:
        """2^m x 2 isometry mapping logical amplitudes to block amplitudes."""
        return np.column_stack(
            [self.logical_zero.amps, self.logical_one.amps])


def trivial_encoding() -> Encoding:
    return Encoding(1, sv.computational_state((0,), [0]),
                    sv.computational_state((0,), [1]), name="trivial")


def ghz_encoding(m: int) -> Encoding:
    labels = tuple(range(m))
    return Encoding(m, sv.computational_state(labels, [0] * m),
                    sv.computational_state(labels, [1] * m),
                    name=f"ghz{m}")


def w_encoding(m: int) -> Encoding:
    if m < 2:
        raise ValueError("W encoding needs m >= 2")
    labels = tuple(range(m))
    return Encoding(m, sv.computational_state(labels, [0] * m),
                    sv.w_state(m, labels), name=f"w{m}")


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint equal-size qubit blocks treated as atomic parties."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("need at least one block")
        sizes = {len(b) for b in blocks}
        if sizes == {0} or len(sizes) != 1:
            raise ValueError("blocks must be nonempty and of equal size")
        flat = [l for b in blocks for l in b]
        if len(flat) != len(set(flat)):
            raise ValueError("blocks must be disjoint")

    @property
    def m(self) -> int:
        return len(self.blocks[0])

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def labels(self) -> list:
        return [l for b in self.blocks for l in b]

    @classmethod
    def for_encoded(cls, logical_labels, m: int) -> "BlockPartition":
        return cls(tuple(tuple((v, k) for k in range(m))
                         for v in logical_labels))


def encoded_labels(labels, m: int) -> list:
    return [(v, k) for v in labels for k in range(m)]


def encode_state(s: sv.PureState, e: Encoding, *,
                 max_qubits: int | None = None) -> sv.PureState:
    """Transport the amplitudes of `s` onto the logical basis of `e`.

    Qubit `v` of `s` becomes the block (v, 0) .. (v, m-1).
    """
    n = s.n_qubits
    sv._check_size(e.m * n, max_qubits)
    iso = e.basis_matrix()  # 2^m x 2
    amps = s.amps.copy()
    for k in range(n):
        # expand logical axis k (current leading dims are already encoded)
        amps = amps.reshape(2 ** (e.m * k), 2, -1)
        amps = np.einsum("pl,alb->apb", iso, amps)
    labels = encoded_labels(s.labels, e.m)
    return sv.PureState(labels, amps.reshape(-1), max_qubits=max_qubits)


COARSE_MEASURES = ("entanglement_width", "schmidt_rank_width", "entropy")


def coarse_measure(s: sv.PureState, p: BlockPartition, which: str,
                   cut=None) -> float:
    """Width/entropy of `s` with the partition's blocks as atomic parties.

    `which` is one of COARSE_MEASURES; "entropy" needs `cut` = iterable of
    block indices forming side A of the bipartition.
    """
    from . import widths

    if set(p.labels()) != set(s.labels):
        raise ValueError("partition must cover exactly the state's qubits")
    if which == "entanglement_width":
        return float(widths.entanglement_width(s, groups=p.blocks).value)
    if which == "schmidt_rank_width":
        return float(widths.schmidt_rank_width(s, groups=p.blocks).value)
    if which == "entropy":
        if cut is None:
            raise ValueError("block-cut entropy needs a cut")
        side = [l for i in cut for l in p.blocks[int(i)]]
        return float(sv.entanglement_entropy(s, side))
    raise ValueError(f"unknown coarse measure {which!r}")


# -- logical operators ----------------------------------------------------------


@dataclass(frozen=True)
class LogicalPauliResult:
    """Logical operator on one block plus its tensor-product verdict.

    `local` reports whether alternating least squares found single-qubit
    factors realizing the operator on the logical subspace within
    LOCALITY_TOL.  A False verdict is heuristic (the fit may have missed a
    solution), flagged by heuristic_negative.
    """

    which: str
    operator: np.ndarray
    local: bool
    residual: float
    factors: tuple | None = field(default=None, repr=False)

    @property
    def heuristic_negative(self) -> bool:
        return not self.local


def _logical_targets(e: Encoding, which: str):
    z0, z1 = e.logical_zero.amps, e.logical_one.amps
    if which == "X":
        return (z1, z0)
    if which == "Y":
        return (1j * z1, -1j * z0)
    if which == "Z":
        return (z0, -z1)
    raise ValueError(f"unknown logical Pauli {which!r}")


def _apply_factors(vec: np.ndarray, factors, skip: int | None, m: int):
    t = vec.reshape((2,) * m)
    for k, b in enumerate(factors):
        if k == skip:
            continue
        t = np.moveaxis(np.tensordot(b, t, axes=([1], [k])), 0, k)
    return t


def _als_tensor_fit(sources, targets, m: int, rng, sweeps: int = 80):
    """Fit single-qubit factors B_k with (tensor B_k) source_b = target_b."""
    factors = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
               for _ in range(m)]

    def residual():
        r = 0.0
        for src, tgt in zip(sources, targets):
            got = _apply_factors(src, factors, None, m).reshape(-1)
            r += float(np.linalg.norm(got - tgt) ** 2)
        return np.sqrt(r)

    best = residual()
    for _ in range(sweeps):
        for k in range(m):
            rows = []
            rhs = []
            for src, tgt in zip(sources, targets):
                part = _apply_factors(src, factors, k, m)
                part = np.moveaxis(part, k, 0).reshape(2, -1)
                # out = B_k @ part, vectorized over B_k entries
                block = np.zeros((2 * part.shape[1], 4), dtype=complex)
                for r in range(2):
                    for c in range(2):
                        block[r * part.shape[1]:(r + 1) * part.shape[1],
                              2 * r + c] = part[c]
                rows.append(block)
                rhs.append(np.moveaxis(tgt.reshape((2,) * m), k, 0).reshape(-1))
            sol, *_ = np.linalg.lstsq(np.vstack(rows), np.concatenate(rhs),
                                      rcond=None)
            factors[k] = sol.reshape(2, 2)
        cur = residual()
        if cur >= best - 1e-14:
            best = cur
            break
        best = cur
    return best, factors


def logical_pauli(e: Encoding, which: str, *, restarts: int = 6,
                  seed: int = 0) -> LogicalPauliResult:
    """Logical Pauli on the m-qubit block and its locality verdict."""
    t0, t1 = _logical_targets(e, which)
    z0, z1 = e.logical_zero.amps, e.logical_one.amps
    op = (np.outer(t0, z0.conj()) + np.outer(t1, z1.conj()))
    rng = np.random.default_rng(seed)
    best_res, best_factors = np.inf, None
    for _ in range(max(1, restarts)):
        res, factors = _als_tensor_fit((z0, z1), (t0, t1), e.m, rng)
        if res < best_res:
            best_res, best_factors = res, factors
        if best_res <= LOCALITY_TOL:
            break
    local = bool(best_res <= LOCALITY_TOL)
    return LogicalPauliResult(
        which=which, operator=op, local=local, residual=float(best_res),
        factors=tuple(best_factors) if local else None)


# -- logical measurements --------------------------------------------------------


def logical_two_outcome_measurement(s: sv.PureState, block, pair):
    """Project one block onto an orthogonal pair of m-qubit states.

    Returns ((p0, p1), (post0, post1)); post-states live on the unmeasured
    qubits and are None for (near-)impossible outcomes.  Position k of
    `block` is matched with qubit k of the pair states.  The block-level
    projection reproduces the statistics of the logical measurement; an
    LOCC realization exists for any two orthogonal states.
    """
    block = tuple(block)
    phi0, phi1 = pair
    if phi0.n_qubits != len(block) or phi1.n_qubits != len(block):
        raise ValueError("pair states must match the block size")
    overlap = abs(np.vdot(phi0.amps, phi1.amps))
    if overlap > ORTHO_TOL:
        raise ValueError(
            f"measurement pair is not orthogonal (|<0|1>| = {overlap:.2e})")
    axes = [s.axis(l) for l in block]
    rest = [l for l in s.labels if l not in set(block)]
    t = np.moveaxis(s.tensor(), axes, range(len(block)))
    mat = t.reshape(2 ** len(block), -1)
    probs = []
    posts = []
    for phi in (phi0, phi1):
        vec = phi.amps.conj() @ mat
        p = float(np.linalg.norm(vec) ** 2)
        probs.append(p)
        if p > 1e-12:
            posts.append(sv.PureState(rest, vec / np.sqrt(p)))
        else:
            posts.append(None)
    return tuple(probs), tuple(posts)


def logical_basis_pair(e: Encoding, basis: str):
    """Eigenstate pair of the logical X, Y or Z operator on one block."""
    z0, z1 = e.logical_zero, e.logical_one
    labels = z0.labels
    if basis == "Z":
        return (z0, z1)
    if basis == "X":
        plus = (z0.amps + z1.amps) / np.sqrt(2)
        minus = (z0.amps - z1.amps) / np.sqrt(2)
    elif basis == "Y":
        plus = (z0.amps + 1j * z1.amps) / np.sqrt(2)
        minus = (z0.amps - 1j * z1.amps) / np.sqrt(2)
    else:
        raise ValueError(f"unknown logical basis {basis!r}")
    return (sv.PureState(labels, plus), sv.PureState(labels, minus))


# -- amplitude file format --------------------------------------------------------


def state_to_amplitude_rows(s: sv.PureState, *, tol: float = 1e-12) -> list:
    """JSON-friendly [bitstring, re, im] rows of the nonzero amplitudes."""
    rows = []
    for idx, a in enumerate(s.amps):
        if abs(a) > tol:
            bits = format(idx, f"0{s.n_qubits}b")
            rows.append([bits, float(a.real), float(a.imag)])
    return rows


def state_from_amplitude_rows(rows, labels=None) -> sv.PureState:
    if not rows:
        raise ValueError("no amplitudes given")
    n = len(rows[0][0])
    amps = np.zeros(2 ** n, dtype=complex)
    for bits, re, im in rows:
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"bad bitstring {bits!r}")
        amps[int(bits, 2)] += re + 1j * im
    if labels is None:
        labels = tuple(range(n))
    return sv.PureState(labels, amps, normalize=True)


def encoding_from_amplitude_rows(rows0, rows1, name: str = "custom") -> Encoding:
    zero = state_from_amplitude_rows(rows0)
    one = state_from_amplitude_rows(rows1)
    return Encoding(zero.n_qubits, zero, one, name=name)
