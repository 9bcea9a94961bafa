"""Descriptor networks: Heisenberg-picture qubit observables under gate conjugation.

A network is fully specified by one (x, y, z) observable triple per qubit and
a fixed state vector (the first standard basis vector, i.e. every z-observable
initially sharp at +1). Gates are characteristic functions of the *current*
descriptors; applying a gate conjugates every descriptor with the resulting
unitary and advances time by one step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import linalg
from .errors import DimMismatch, NotHermitian, SizeLimit, ValidationError
from .linalg import COMPONENTS, DEFAULT_TOL, Tolerances, max_abs

GATE_KINDS = ("I", "NOT", "H", "CNOT", "RZ", "F", "CCNOT", "CUSTOM")

# Number of operands / parameters each gate kind requires.
_ARITY = {"I": 0, "NOT": 1, "H": 1, "CNOT": 2, "RZ": 1, "F": 2, "CCNOT": 3}
_NPARAMS = {"I": 0, "NOT": 0, "H": 0, "CNOT": 0, "RZ": 1, "F": 4, "CCNOT": 0}


def f_unitarity_defect(params: tuple[float, ...]) -> float:
    """Max deviation of |a +- b +- c +- d| from 1 over the four sign choices.

    These are the eigenvalues of the diagonal two-qubit gate
    a*1 + b*q_az + c*q_bz + d*q_az*q_bz, so the gate is unitary iff all four
    have unit modulus.
    """
    a, b, c, d = params
    combos = (a + b + c + d, a + b - c - d, a - b + c - d, a - b - c + d)
    return max(abs(abs(v) - 1.0) for v in combos)


@dataclass(frozen=True)
class Gate:
    """A named, parameterized network gate; operands are 1-based qubit indices.

    For multi-operand kinds, controls precede the target. CUSTOM carries an
    explicit builder mapping the current descriptor triples to a unitary.
    """

    kind: str
    operands: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    builder: Optional[Callable] = None

    def validate(self, n: int, tol: Tolerances = DEFAULT_TOL) -> None:
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CUSTOM":
            if self.builder is None:
                raise ValidationError("CUSTOM gate requires a builder")
        else:
            if len(self.operands) != _ARITY[self.kind]:
                raise ValidationError(
                    f"{self.kind} takes {_ARITY[self.kind]} operand(s), "
                    f"got {len(self.operands)}")
            if len(self.params) != _NPARAMS[self.kind]:
                raise ValidationError(
                    f"{self.kind} takes {_NPARAMS[self.kind]} parameter(s), "
                    f"got {len(self.params)}")
        if len(set(self.operands)) != len(self.operands):
            raise ValidationError(f"repeated operand in {self.operands}")
        for q in self.operands:
            if not 1 <= q <= n:
                raise ValidationError(f"operand {q} out of range 1..{n}")
        if self.kind == "F":
            defect = f_unitarity_defect(self.params)
            if defect > tol.unitary:
                raise ValidationError(
                    f"F coefficients not unitary: defect {defect:.3e}")

    # Convenience constructors -------------------------------------------------

    @classmethod
    def identity(cls) -> "Gate":
        return cls("I")

    @classmethod
    def not_(cls, qubit: int) -> "Gate":
        return cls("NOT", (qubit,))

    @classmethod
    def h(cls, qubit: int) -> "Gate":
        return cls("H", (qubit,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("CNOT", (control, target))

    @classmethod
    def rz(cls, qubit: int, theta: float) -> "Gate":
        return cls("RZ", (qubit,), (float(theta),))

    @classmethod
    def f(cls, a: int, b: int, alpha: float, beta: float,
          gamma: float, delta: float) -> "Gate":
        return cls("F", (a, b), (float(alpha), float(beta),
                                 float(gamma), float(delta)))

    @classmethod
    def ccnot(cls, control1: int, control2: int, target: int) -> "Gate":
        return cls("CCNOT", (control1, control2, target))

    @classmethod
    def custom(cls, operands: tuple[int, ...], builder: Callable) -> "Gate":
        return cls("CUSTOM", tuple(operands), (), builder)


@dataclass(frozen=True)
class Descriptor:
    """The (x, y, z) observable triple of one qubit at one time step."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    qubit: int
    time: int

    def component(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def components(self):
        return tuple((c, getattr(self, c)) for c in COMPONENTS)


@dataclass(frozen=True, eq=False)
class NetworkState:
    """Immutable network snapshot: descriptors, fixed state, record snapshots.

    ``records`` maps (qubit, component, step) to the descriptor-component
    matrix captured at that step; later relative-state constructions project
    current descriptors with these fixed snapshots.
    """

    n: int
    t: int
    descriptors: tuple[Descriptor, ...]
    psi: np.ndarray
    tol: Tolerances = DEFAULT_TOL
    records: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def descriptor(self, qubit: int) -> Descriptor:
        if not 1 <= qubit <= self.n:
            raise ValidationError(f"qubit {qubit} out of range 1..{self.n}")
        return self.descriptors[qubit - 1]

    def record(self, qubit: int, component: str) -> "NetworkState":
        """Snapshot one descriptor component at the current step."""
        if component not in COMPONENTS:
            raise ValidationError(f"bad component {component!r}")
        snapshot = dict(self.records)
        snapshot[(qubit, component, self.t)] = self.descriptor(qubit).component(component)
        return NetworkState(self.n, self.t, self.descriptors, self.psi,
                            self.tol, snapshot)

    def get_record(self, qubit: int, component: str, step: int) -> np.ndarray:
        try:
            return self.records[(qubit, component, step)]
        except KeyError:
            raise ValidationError(
                f"no record for qubit {qubit} component {component} at step {step}"
            ) from None


def init_network(n: int, tol: Tolerances = DEFAULT_TOL) -> NetworkState:
    """Fresh n-qubit network at t=0: generator descriptors, all z sharp at +1."""
    if not 1 <= n <= linalg.MAX_QUBITS:
        raise SizeLimit(f"n must be in 1..{linalg.MAX_QUBITS}, got {n}")
    descriptors = tuple(
        Descriptor(*linalg.embed_pauli(a, n), qubit=a, time=0)
        for a in range(1, n + 1)
    )
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    return NetworkState(n, 0, descriptors, psi, tol)


def build_gate_unitary(state: NetworkState, gate: Gate) -> np.ndarray:
    """Evaluate the gate's characteristic function on the current descriptors."""
    gate.validate(state.n, state.tol)
    dim = state.dim
    one = linalg.identity(dim)
    if gate.kind == "I":
        return one
    if gate.kind == "NOT":
        return state.descriptor(gate.operands[0]).x
    if gate.kind == "H":
        d = state.descriptor(gate.operands[0])
        return (d.x + d.z) / np.sqrt(2)
    if gate.kind == "RZ":
        (theta,) = gate.params
        qz = state.descriptor(gate.operands[0]).z
        return np.cos(theta / 2) * one - 1j * np.sin(theta / 2) * qz
    if gate.kind == "CNOT":
        control, target = gate.operands
        cz = state.descriptor(control).z
        tx = state.descriptor(target).x
        p_plus = linalg.pauli_projector(cz, +1, 100 * state.tol.general)
        p_minus = linalg.pauli_projector(cz, -1, 100 * state.tol.general)
        return p_plus + tx @ p_minus
    if gate.kind == "F":
        a, b = gate.operands
        alpha, beta, gamma, delta = gate.params
        qa = state.descriptor(a).z
        qb = state.descriptor(b).z
        return alpha * one + beta * qa + gamma * qb + delta * (qa @ qb)
    if gate.kind == "CCNOT":
        c1, c2, target = gate.operands
        p1 = linalg.pauli_projector(state.descriptor(c1).z, -1, 100 * state.tol.general)
        p2 = linalg.pauli_projector(state.descriptor(c2).z, -1, 100 * state.tol.general)
        tx = state.descriptor(target).x
        both = p1 @ p2
        return one - both + tx @ both
    # CUSTOM
    u = gate.builder(state)
    linalg.check_unitary(u, state.tol.unitary)
    return u


def apply_gate(state: NetworkState, gate: Gate) -> NetworkState:
    """Conjugate every descriptor by the gate unitary; advance one time step."""
    u = build_gate_unitary(state, gate)
    # Same 100x budget as the algebra-conservation bound: deep conjugation
    # chains drift the descriptors the unitary is built from.
    linalg.check_unitary(u, 100 * state.tol.unitary)
    # Polish to the nearest exact unitary; without this, roundoff in the
    # descriptors feeds back through the gate construction and compounds
    # exponentially with depth.
    w, _, vh = np.linalg.svd(u)
    u = w @ vh
    udag = u.conj().T
    new_descriptors = tuple(
        Descriptor(udag @ d.x @ u, udag @ d.y @ u, udag @ d.z @ u,
                   qubit=d.qubit, time=state.t + 1)
        for d in state.descriptors
    )
    return NetworkState(state.n, state.t + 1, new_descriptors, state.psi,
                        state.tol, dict(state.records))


def expectation(state: NetworkState, observable: np.ndarray):
    """<Psi| A |Psi> against the fixed state; real float when A is Hermitian."""
    observable = np.asarray(observable)
    if observable.shape != (state.dim, state.dim):
        raise DimMismatch(
            f"observable shape {observable.shape} != ({state.dim}, {state.dim})")
    value = complex(np.vdot(state.psi, observable @ state.psi))
    if abs(value.imag) <= state.tol.general * max(1.0, abs(value)):
        return value.real
    return value


def is_sharp(state: NetworkState, observable: np.ndarray) -> Optional[float]:
    """The sharp value of a Hermitian observable, or None when it has none.

    Sharp means <A>^2 = <A^2> within tol.sharp, i.e. the fixed state is an
    eigenstate of A.
    """
    defect = linalg.hermiticity_defect(observable)
    if defect > state.tol.hermitian:
        raise NotHermitian(f"hermiticity defect {defect:.3e}")
    mean = expectation(state, observable)
    second = expectation(state, observable @ observable)
    if abs(mean * mean - second) <= state.tol.sharp:
        return float(np.real(mean))
    return None


@dataclass(frozen=True)
class EntanglementWitness:
    entangled: bool
    components: Optional[tuple[str, str]]
    discrepancy: float


def are_entangled(state: NetworkState, a: int, b: int) -> EntanglementWitness:
    """Correlation test: some component pair with <q_ai q_bj> != <q_ai><q_bj>.

    Returns the maximal witnessing pair and its discrepancy.
    """
    if a == b:
        raise ValidationError("entanglement test needs two distinct qubits")
    da, db = state.descriptor(a), state.descriptor(b)
    best = ("", "", 0.0)
    for ci, mi in da.components():
        ei = expectation(state, mi)
        for cj, mj in db.components():
            ej = expectation(state, mj)
            joint = expectation(state, mi @ mj)
            disc = abs(joint - ei * ej)
            if disc > best[2]:
                best = (ci, cj, disc)
    if best[2] > state.tol.entangle:
        return EntanglementWitness(True, (best[0], best[1]), best[2])
    return EntanglementWitness(False, None, best[2])


_EPS = {("x", "y"): ("z", 1), ("y", "x"): ("z", -1),
        ("y", "z"): ("x", 1), ("z", "y"): ("x", -1),
        ("z", "x"): ("y", 1), ("x", "z"): ("y", -1)}


def algebra_residual(state: NetworkState, cross_qubit: bool = True) -> float:
    """Max residual of the Pauli relations over all qubits.

    Checks q_i q_j = delta_ij 1 + i eps_ijk q_k per qubit and, optionally,
    commutation of descriptors of distinct qubits.
    """
    one = linalg.identity(state.dim)
    worst = 0.0
    for d in state.descriptors:
        mats = {c: d.component(c) for c in COMPONENTS}
        for i in COMPONENTS:
            for j in COMPONENTS:
                product = mats[i] @ mats[j]
                if i == j:
                    expected = one
                else:
                    k, sign = _EPS[(i, j)]
                    expected = 1j * sign * mats[k]
                worst = max(worst, max_abs(product - expected))
    if cross_qubit:
        for ai in range(state.n):
            for bi in range(ai + 1, state.n):
                for _, ma in state.descriptors[ai].components():
                    for _, mb in state.descriptors[bi].components():
                        worst = max(worst, linalg.commutator_norm(ma, mb))
    return worst


def run_gates(state: NetworkState, gates, record_plan=None) -> list[NetworkState]:
    """Apply a gate sequence, returning the full timeline (t=0 state included).

    ``record_plan`` maps a step index to a list of (qubit, component) pairs to
    snapshot when the network reaches that step.
    """
    record_plan = record_plan or {}
    for qc in record_plan.get(state.t, ()):
        state = state.record(*qc)
    timeline = [state]
    for gate in gates:
        state = apply_gate(state, gate)
        for qc in record_plan.get(state.t, ()):
            state = state.record(*qc)
        timeline.append(state)
    return timeline
