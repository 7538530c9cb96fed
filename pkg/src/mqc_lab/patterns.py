"""Adaptive one-qubit measurement patterns and their dense-simulation executor.

A pattern is an ordered list of single-qubit measurements (Pauli axis or a
Bloch direction given by a polar/azimuth pair), where each azimuth may be
adapted by the parity of earlier outcomes, plus declared output qubits and
outcome-conditioned local-Clifford correction rules. Executing a pattern on a
state and undoing the recorded byproduct should reproduce the target gate on
every outcome branch; the fixtures at the bottom package the standard wire
constructions (Euler rotations, bridge controlled-phase, the two-wire
crossing) with their fitted correction rules.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cliffords as cl
from . import statevec as sv
from .errors import UsageError
from .graphstate import Graph

PAULI_DIRECTIONS = {
    "X": (math.pi / 2, 0.0),
    "Y": (math.pi / 2, math.pi / 2),
    "Z": (0.0, 0.0),
}


@dataclass(frozen=True)
class PatternStep:
    """One measurement: a Pauli axis or a Bloch direction (theta, phi).

    ``flip_sign`` / ``add_pi`` hold indices of earlier steps; odd outcome
    parity negates / offsets the azimuth. Only angle-basis steps may adapt.
    """

    qubit: object
    basis: str | tuple[float, float]
    flip_sign: tuple[int, ...] = ()
    add_pi: tuple[int, ...] = ()

    def is_pauli(self) -> bool:
        return isinstance(self.basis, str)

    def direction(self, outcomes: Sequence[int]) -> tuple[float, float]:
        if self.is_pauli():
            return PAULI_DIRECTIONS[self.basis]
        theta, phi = self.basis
        if sum(outcomes[i] for i in self.flip_sign) % 2:
            phi = -phi
        if sum(outcomes[i] for i in self.add_pi) % 2:
            phi = phi + math.pi
        return theta, phi


def direction_projector(theta: float, phi: float, outcome: int) -> np.ndarray:
    """Rank-1 projector onto the (-1)^outcome eigenstate along (theta, phi)."""
    n = np.array([math.sin(theta) * math.cos(phi),
                  math.sin(theta) * math.sin(phi),
                  math.cos(theta)])
    sigma = (n[0] * cl.PAULIS[0] + n[1] * cl.PAULIS[1] + n[2] * cl.PAULIS[2])
    return (np.eye(2) + (-1) ** outcome * sigma) / 2


@dataclass(frozen=True)
class CorrectionRule:
    """Outcome-dependent local Clifford on one output qubit.

    The byproduct is ``base`` right-multiplied by each conditional Clifford
    whose outcome parity fires, in declaration order:
    ``B = base @ c1^{p1} @ c2^{p2} @ ...``.
    """

    qubit: object
    base: int = cl.C_ID
    conditional: tuple[tuple[tuple[int, ...], int], ...] = ()

    def evaluate(self, outcomes: Sequence[int]) -> int:
        frame = self.base
        for indices, c in self.conditional:
            if sum(outcomes[i] for i in indices) % 2:
                frame = cl.COMPOSE[frame][c]
        return frame


@dataclass(frozen=True)
class MeasurementPattern:
    steps: tuple[PatternStep, ...]
    outputs: tuple
    corrections: tuple[CorrectionRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "corrections", tuple(self.corrections))
        measured = [s.qubit for s in self.steps]
        if len(set(measured)) != len(measured):
            raise ValueError("a qubit is measured more than once")
        overlap = set(measured) & set(self.outputs)
        if overlap:
            raise ValueError(f"outputs are measured: {sorted(map(repr, overlap))}")
        for i, s in enumerate(self.steps):
            refs = tuple(s.flip_sign) + tuple(s.add_pi)
            if any(j >= i or j < 0 for j in refs):
                raise ValueError(f"step {i} adapts on a non-earlier step")
            if s.is_pauli():
                if s.basis not in PAULI_DIRECTIONS:
                    raise ValueError(f"unknown Pauli basis {s.basis!r}")
                if refs:
                    raise ValueError("Pauli steps cannot adapt")
        for rule in self.corrections:
            if rule.qubit not in self.outputs:
                raise ValueError(f"correction on non-output qubit {rule.qubit!r}")

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def measured_qubits(self) -> tuple:
        return tuple(s.qubit for s in self.steps)


@dataclass(frozen=True)
class PatternRun:
    state: sv.PureState           # on the output qubits
    outcomes: tuple[int, ...]
    probability: float            # joint probability of this branch
    byproduct: tuple              # (qubit, clifford index) pairs, outputs order


def execute_pattern(state: sv.PureState, pattern: MeasurementPattern,
                    outcomes: Sequence[int] | None = None, *,
                    rng: np.random.Generator | None = None,
                    seed: int | None = None) -> PatternRun:
    """Run the pattern; outcomes are forced when given, else sampled.

    Forcing a zero-probability branch raises
    :class:`~mqc_lab.errors.ImpossibleOutcomeError`.
    """
    measured = set(pattern.measured_qubits())
    have = set(state.labels)
    needed = measured | set(pattern.outputs)
    if needed != have:
        raise ValueError(f"pattern covers {sorted(map(repr, needed))}, "
                         f"state has {sorted(map(repr, have))}")
    if outcomes is not None:
        outcomes = list(outcomes)
        if len(outcomes) != pattern.n_steps:
            raise ValueError("outcome vector length mismatch")
    elif rng is None:
        rng = np.random.default_rng(seed)

    record: list[int] = []
    prob = 1.0
    for i, step in enumerate(pattern.steps):
        theta, phi = step.direction(record)
        if outcomes is not None:
            k = int(outcomes[i])
        else:
            p0 = sv.outcome_probability(state, step.qubit,
                                        direction_projector(theta, phi, 0))
            k = int(rng.random() >= p0)
        state, p = sv.project_measure(state, step.qubit,
                                      direction_projector(theta, phi, k))
        record.append(k)
        prob *= p

    byproduct = []
    for q in pattern.outputs:
        frame = cl.C_ID
        for rule in pattern.corrections:
            if rule.qubit == q:
                frame = rule.evaluate(record)
        byproduct.append((q, frame))
    return PatternRun(state, tuple(record), prob, tuple(byproduct))


def undo_byproduct(run: PatternRun) -> sv.PureState:
    """Apply the inverse of each recorded byproduct Clifford."""
    state = run.state
    for q, frame in run.byproduct:
        if frame != cl.C_ID:
            state = sv.apply_local_unitary(state, q, cl.MATRICES[frame].conj().T)
    return state


def run_all_branches(state: sv.PureState, pattern: MeasurementPattern,
                     prob_floor: float = 1e-12) -> list[PatternRun]:
    """Every outcome branch with probability above the floor."""
    runs = []
    for bits in itertools.product((0, 1), repeat=pattern.n_steps):
        try:
            runs.append(execute_pattern(state, pattern, bits))
        except sv.ImpossibleOutcomeError:
            continue
    total = sum(r.probability for r in runs)
    if abs(total - 1.0) > 1e-6:
        raise AssertionError(f"branch probabilities sum to {total}")
    return runs


# -- JSON round-trip -----------------------------------------------------------


def _label_to_json(label):
    if isinstance(label, tuple):
        return list(label)
    return label


def _label_from_json(obj):
    if isinstance(obj, list):
        return tuple(obj)
    return obj


def pattern_to_json(pattern: MeasurementPattern) -> str:
    doc = {
        "steps": [
            {
                "qubit": _label_to_json(s.qubit),
                "basis": s.basis if s.is_pauli() else list(s.basis),
                "flip_sign": list(s.flip_sign),
                "add_pi": list(s.add_pi),
            }
            for s in pattern.steps
        ],
        "outputs": [_label_to_json(q) for q in pattern.outputs],
        "corrections": [
            {
                "qubit": _label_to_json(r.qubit),
                "base": r.base,
                "conditional": [[list(idx), c] for idx, c in r.conditional],
            }
            for r in pattern.corrections
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def pattern_from_json(text: str) -> MeasurementPattern:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"pattern file is not valid JSON: {exc}") from exc
    try:
        steps = tuple(
            PatternStep(
                qubit=_label_from_json(s["qubit"]),
                basis=s["basis"] if isinstance(s["basis"], str)
                else (float(s["basis"][0]), float(s["basis"][1])),
                flip_sign=tuple(int(i) for i in s.get("flip_sign", [])),
                add_pi=tuple(int(i) for i in s.get("add_pi", [])),
            )
            for s in doc["steps"]
        )
        outputs = tuple(_label_from_json(q) for q in doc["outputs"])
        corrections = tuple(
            CorrectionRule(
                qubit=_label_from_json(r["qubit"]),
                base=int(r["base"]),
                conditional=tuple((tuple(int(i) for i in idx), int(c))
                                  for idx, c in r.get("conditional", [])),
            )
            for r in doc.get("corrections", [])
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise UsageError(f"pattern file is missing fields: {exc}") from exc
    return MeasurementPattern(steps, outputs, corrections)


# -- fixtures -----------------------------------------------------------------


def cluster_with_inputs(g: Graph, inputs: dict) -> sv.PureState:
    """CZ-entangled register: given 1-qubit states on some vertices, |+> else."""
    state = None
    for v in g.labels:
        if v in inputs:
            amps = np.asarray(inputs[v], dtype=complex).reshape(2)
            one = sv.PureState([v], amps)
        else:
            one = sv.plus_state([v])
        state = one if state is None else sv.tensor_product(state, one)
    for a, b in g.edges():
        state = sv.apply_cz(state, a, b)
    return state


def rotation_target(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """R_x(gamma) R_z(beta) R_x(alpha), the gate the 5-chain pattern realizes."""
    def rz(t):
        return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])

    h = cl.MATRICES[cl.C_H]
    rx = lambda t: h @ rz(t) @ h
    return rx(gamma) @ rz(beta) @ rx(alpha)


def euler_chain(alpha: float, beta: float, gamma: float,
                labels: Sequence = (0, 1, 2, 3, 4)):
    """5-qubit wire realizing R_x(gamma) R_z(beta) R_x(alpha).

    Returns ``(graph, pattern)``; the input rides on ``labels[0]``, the output
    appears on ``labels[4]``. Measuring a wire qubit along azimuth phi maps
    the logical state by X^k H R_z(-phi), so the wire needs azimuths
    (0, -alpha, -beta, -gamma) with the usual parity sign flips; byproduct
    X^(s1+s3) Z^(s0+s2).
    """
    if len(labels) != 5:
        raise ValueError("the rotation wire uses exactly 5 qubits")
    a, b, c, d, e = labels
    g = Graph.from_edges(labels, [(a, b), (b, c), (c, d), (d, e)])
    steps = (
        PatternStep(a, (math.pi / 2, 0.0)),
        PatternStep(b, (math.pi / 2, -alpha), flip_sign=(0,)),
        PatternStep(c, (math.pi / 2, -beta), flip_sign=(1,)),
        PatternStep(d, (math.pi / 2, -gamma), flip_sign=(0, 2)),
    )
    corrections = (
        CorrectionRule(e, conditional=(((1, 3), cl.C_X), ((0, 2), cl.C_Z))),
    )
    return g, MeasurementPattern(steps, (e,), corrections)


def bridge_cz(labels: Sequence = ("in1", "out1", "bridge", "in2", "out2")):
    """Two 2-qubit wires coupled through a Y-measured bridge qubit.

    Returns ``(graph, pattern, local_gate)``: undoing the byproduct leaves
    CZ (H (x) H) acting on the two wire inputs, i.e. a controlled-phase up to
    the fixed teleportation Hadamards (returned as ``local_gate`` per qubit).
    """
    in1, out1, mid, in2, out2 = labels
    g = Graph.from_edges(labels, [(in1, out1), (out1, mid), (mid, out2),
                                  (in2, out2)])
    steps = (
        PatternStep(in1, (math.pi / 2, 0.0)),
        PatternStep(in2, (math.pi / 2, 0.0)),
        PatternStep(mid, "Y"),
    )
    # outcome 0 on the bridge leaves CZ (S (x) S); wire outcomes conjugate to
    # X on the own wire and Z on the opposite one
    corrections = (
        CorrectionRule(out1, base=cl.C_S,
                       conditional=(((2,), cl.C_Z), ((0,), cl.C_X),
                                    ((1,), cl.C_Z))),
        CorrectionRule(out2, base=cl.C_S,
                       conditional=(((2,), cl.C_Z), ((1,), cl.C_X),
                                    ((0,), cl.C_Z))),
    )
    return g, MeasurementPattern(steps, (out1, out2), corrections), cl.MATRICES[cl.C_H]


def branch_operator(g: Graph, pattern: MeasurementPattern, input_labels,
                    outcomes: Sequence[int]) -> np.ndarray:
    """The linear map on the input qubits realized by one outcome branch.

    Columns are reconstructed by feeding computational basis states through
    ``cluster_with_inputs`` + ``execute_pattern``; the per-branch maps of a
    pattern differ from the branch-0 map only by the byproduct when the
    pattern is deterministic.
    """
    n_in = len(input_labels)
    dim = 2 ** n_in
    cols = []
    for idx in range(dim):
        bits = [(idx >> (n_in - 1 - i)) & 1 for i in range(n_in)]
        inputs = {q: np.eye(2)[:, b] for q, b in zip(input_labels, bits)}
        state = cluster_with_inputs(g, inputs)
        run = execute_pattern(state, pattern, outcomes)
        out = run.state.permuted(pattern.outputs)
        cols.append(out.amps * math.sqrt(run.probability * dim))
    return np.array(cols).T


# Pauli byproduct of the 15-qubit crossing, fitted by reconstructing each
# single-outcome branch operator, factoring it against the all-zero branch,
# and checking GF(2) additivity on random branches. Step order: t0..t5,
# b0..b5, bridge.
_CROSSING_X_T = (0, 1, 2, 3, 5, 6, 8, 12)
_CROSSING_Z_T = (0, 2, 4)
_CROSSING_X_B = (0, 2, 6, 7, 8, 9, 11, 12)
_CROSSING_Z_B = (6, 8, 10)


def two_wire_crossing():
    """Two 7-qubit wires joined by one bridge qubit at the midpoints.

    The 15-qubit crossing patch: every wire qubit is measured along X and the
    bridge along Y, leaving a fixed gate in the controlled-phase equivalence
    class between the two wire outputs (reconstructable per branch with
    :func:`branch_operator`). Undoing the frozen Pauli byproduct makes every
    branch agree with the all-zero branch.
    """
    wire_len = 7
    top = [("t", i) for i in range(wire_len)]
    bot = [("b", i) for i in range(wire_len)]
    mid = ("m", 0)
    hub = wire_len // 2
    edges = [(top[i], top[i + 1]) for i in range(wire_len - 1)]
    edges += [(bot[i], bot[i + 1]) for i in range(wire_len - 1)]
    edges += [(top[hub], mid), (mid, bot[hub])]
    g = Graph.from_edges(top + bot + [mid], edges)
    steps = [PatternStep(q, "X") for q in top[:-1]]
    steps += [PatternStep(q, "X") for q in bot[:-1]]
    steps.append(PatternStep(mid, "Y"))
    corrections = (
        CorrectionRule(top[-1], conditional=((_CROSSING_X_T, cl.C_X),
                                             (_CROSSING_Z_T, cl.C_Z))),
        CorrectionRule(bot[-1], conditional=((_CROSSING_X_B, cl.C_X),
                                             (_CROSSING_Z_B, cl.C_Z))),
    )
    return g, MeasurementPattern(tuple(steps), (top[-1], bot[-1]), corrections)
