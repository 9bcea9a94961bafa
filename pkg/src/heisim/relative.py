"""Everett-branch machinery: relative frames, descriptors, and autonomy.

A measurement record defines a PVM of projectors; multiplying a qubit's
descriptors by a commuting projector yields the branch ("relative") copy of
that qubit, a fully-fledged qubit whose unit element is the projector itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg, network
from .errors import NonCommuting, WrongGateKind, ZeroWeightBranch
from .linalg import COMPONENTS, max_abs
from .network import Gate, NetworkState


@dataclass(frozen=True)
class RelativeFrame:
    """A branch selector: projector, its eigenvalue label, and its weight."""

    projector: np.ndarray
    label: float
    source: str
    weight: float

    def compose(self, other: "RelativeFrame") -> "RelativeFrame":
        """Nested branch: projector product for sequential records.

        The projectors must commute for the product to be a projector; the
        composed weight is recomputed by the caller against the network state.
        """
        proj = self.projector @ other.projector
        return RelativeFrame(proj, self.label,
                             f"{self.source} & {other.source}", float("nan"))


@dataclass(frozen=True)
class RelativeDescriptor:
    """One branch instance of a qubit: components q_i * P with unit P."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    frame: RelativeFrame
    unit: np.ndarray
    qubit: int

    def component(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def components(self):
        return tuple((c, getattr(self, c)) for c in COMPONENTS)


@dataclass(frozen=True)
class FoliationReport:
    frames: tuple[RelativeFrame, ...]
    relative: dict
    completeness_residual: float
    max_commutator: float
    valid: bool


@dataclass(frozen=True)
class AutonomyResult:
    preserving: bool
    violated_index: Optional[int]
    commutator_norm: float

    @property
    def classification(self) -> str:
        return "PRESERVING" if self.preserving else "DESTROYING"


def identity_frame(state: NetworkState) -> RelativeFrame:
    """The whole-multiverse frame (projector = 1)."""
    return RelativeFrame(linalg.identity(state.dim), 1.0, "multiverse", 1.0)


def make_pvm(state: NetworkState, recorded: np.ndarray,
             source: str = "") -> tuple[RelativeFrame, RelativeFrame]:
    """Two-frame PVM of an involution record: projectors 1/2(1 +- recorded)."""
    frames = []
    for sign in (+1, -1):
        proj = linalg.pauli_projector(recorded, sign, state.tol.general)
        weight = float(np.real(network.expectation(state, proj)))
        frames.append(RelativeFrame(proj, float(sign), source, weight))
    return tuple(frames)


def make_pvm_spectral(state: NetworkState, observable: np.ndarray,
                      source: str = "") -> tuple[RelativeFrame, ...]:
    """One frame per (clustered) eigenvalue of a general Hermitian record."""
    decomp = linalg.spectral(observable, state.tol)
    frames = []
    for lam, proj in zip(decomp.eigenvalues, decomp.projectors):
        weight = float(np.real(network.expectation(state, proj)))
        frames.append(RelativeFrame(proj, lam, source, weight))
    return tuple(frames)


def relative_descriptor(state: NetworkState, qubit: int,
                        frame: RelativeFrame) -> RelativeDescriptor:
    """Branch copy of one qubit: descriptor components times the frame projector.

    The projector must commute with every component, otherwise the products
    are not Hermitian and the foliation attempt is physically meaningless.
    """
    d = state.descriptor(qubit)
    proj = frame.projector
    for name, mat in d.components():
        cnorm = linalg.commutator_norm(proj, mat)
        if cnorm > state.tol.commute:
            raise NonCommuting(
                f"frame projector does not commute with q_{qubit}{name}: "
                f"commutator norm {cnorm:.3e} (invalid foliation; "
                f"unentangled systems cannot be foliated)")
    return RelativeDescriptor(d.x @ proj, d.y @ proj, d.z @ proj,
                              frame, proj, qubit)


def relative_expectation(state: NetworkState, observable: np.ndarray,
                         frame: RelativeFrame):
    """Branch-conditional expectation <A P> / <P>."""
    weight = network.expectation(state, frame.projector)
    if np.real(weight) <= state.tol.weight:
        raise ZeroWeightBranch(
            f"branch {frame.label} of {frame.source!r} has weight "
            f"{np.real(weight):.3e}")
    return network.expectation(state, observable @ frame.projector) / np.real(weight)


def relative_heisenberg_state(state: NetworkState,
                              frame: RelativeFrame) -> np.ndarray:
    """Normalized projection P|Psi>/||P|Psi>|| of the fixed state."""
    projected = frame.projector @ state.psi
    norm = float(np.linalg.norm(projected))
    if norm * norm <= state.tol.weight:
        raise ZeroWeightBranch(
            f"branch {frame.label} of {frame.source!r} has squared norm "
            f"{norm * norm:.3e}")
    return projected / norm


def record_check(state: NetworkState, holder: int,
                 recorded: np.ndarray) -> list[tuple[str, float]]:
    """Components of the holder whose product with the record is sharp.

    The holder contains a copy of the recorded observable iff the list is
    nonempty; components are reported in x, y, z order.
    """
    found = []
    for name, mat in state.descriptor(holder).components():
        product = mat @ recorded
        # Symmetrize: the record commutes with the holder's descriptors in
        # valid setups, but roundoff can leave a tiny anti-Hermitian part.
        product = 0.5 * (product + product.conj().T)
        value = network.is_sharp(state, product)
        if value is not None:
            found.append((name, value))
    return found


def autonomy_check(state: NetworkState, gate: Gate,
                   snapshots: Sequence[np.ndarray]) -> AutonomyResult:
    """Classify a gate against the current foliation's record snapshots.

    PRESERVING iff the gate unitary (evaluated on current descriptors)
    commutes with every recorded snapshot; otherwise DESTROYING with the
    first violated snapshot and the commutator norm.
    """
    u = network.build_gate_unitary(state, gate)
    worst = 0.0
    for idx, snap in enumerate(snapshots):
        cnorm = linalg.commutator_norm(u, snap)
        worst = max(worst, cnorm)
        if cnorm > state.tol.commute:
            return AutonomyResult(False, idx, cnorm)
    return AutonomyResult(True, None, worst)


def branch_evolution_factor(state: NetworkState, gate: Gate,
                            frame: RelativeFrame) -> np.ndarray:
    """Branch-restricted unitary of a diagonal two-qubit F gate.

    The frame must come from the z-record PVM of the gate's first operand;
    for label s the factor is (alpha + s*beta) * P + (gamma + s*delta) * q_bz P,
    acting on the relative copy of the second operand.
    """
    if gate.kind != "F":
        raise WrongGateKind(f"branch factor defined for F gates, got {gate.kind}")
    alpha, beta, gamma, delta = gate.params
    s = 1.0 if frame.label > 0 else -1.0
    _, b = gate.operands
    qbz = state.descriptor(b).z
    proj = frame.projector
    return (alpha + s * beta) * proj + (gamma + s * delta) * (qbz @ proj)


def relative_algebra_residual(rd: RelativeDescriptor) -> float:
    """Residual of the Pauli relations with the frame projector as unit."""
    mats = {c: rd.component(c) for c in COMPONENTS}
    worst = 0.0
    for i in COMPONENTS:
        for j in COMPONENTS:
            product = mats[i] @ mats[j]
            if i == j:
                expected = rd.unit
            else:
                k, sign = network._EPS[(i, j)]
                expected = 1j * sign * mats[k]
            worst = max(worst, max_abs(product - expected))
    # The unit absorbs into each component from either side.
    for c in COMPONENTS:
        worst = max(worst, max_abs(rd.unit @ mats[c] - mats[c]))
        worst = max(worst, max_abs(mats[c] @ rd.unit - mats[c]))
    return worst


def foliate(state: NetworkState, recorded: np.ndarray, qubits: Sequence[int],
            source: str = "") -> FoliationReport:
    """Decompose the listed qubits into relative states of a two-frame PVM."""
    frames = make_pvm(state, recorded, source)
    completeness = max_abs(sum(f.projector for f in frames)
                           - linalg.identity(state.dim))
    relative = {}
    max_comm = 0.0
    valid = completeness <= state.tol.general
    for q in qubits:
        branch = []
        for f in frames:
            rd = relative_descriptor(state, q, f)
            for name, _ in rd.components():
                absolute = state.descriptor(q).component(name)
                max_comm = max(max_comm,
                               linalg.commutator_norm(f.projector, absolute))
            branch.append(rd)
        relative[q] = tuple(branch)
    return FoliationReport(frames, relative, completeness, max_comm, valid)
