"""Schrodinger-picture state-vector simulator used as a ground-truth oracle.

Gates here are fixed matrices built from the initial-time generators and
applied to an evolving state vector. This module deliberately shares no
evolution code with the descriptor network: agreement between the two is the
strongest correctness check the suite has.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import CircuitMismatch, NonUnitary, ZeroWeightBranch
from .linalg import COMPONENTS, DEFAULT_TOL, Tolerances
from .network import Gate, NetworkState


def gate_matrix(gate: Gate, n: int) -> np.ndarray:
    """Fixed matrix of a gate on n qubits, built from initial generators."""
    gate.validate(n)
    dim = 2 ** n
    one = linalg.identity(dim)
    if gate.kind == "I":
        return one
    if gate.kind == "NOT":
        return linalg.embed(linalg.SIGMA_X, gate.operands[0], n)
    if gate.kind == "H":
        x = linalg.embed(linalg.SIGMA_X, gate.operands[0], n)
        z = linalg.embed(linalg.SIGMA_Z, gate.operands[0], n)
        return (x + z) / np.sqrt(2)
    if gate.kind == "RZ":
        (theta,) = gate.params
        z = linalg.embed(linalg.SIGMA_Z, gate.operands[0], n)
        return np.cos(theta / 2) * one - 1j * np.sin(theta / 2) * z
    if gate.kind == "CNOT":
        control, target = gate.operands
        cz = linalg.embed(linalg.SIGMA_Z, control, n)
        tx = linalg.embed(linalg.SIGMA_X, target, n)
        return 0.5 * (one + cz) + tx @ (0.5 * (one - cz))
    if gate.kind == "F":
        a, b = gate.operands
        alpha, beta, gamma, delta = gate.params
        za = linalg.embed(linalg.SIGMA_Z, a, n)
        zb = linalg.embed(linalg.SIGMA_Z, b, n)
        return alpha * one + beta * za + gamma * zb + delta * (za @ zb)
    if gate.kind == "CCNOT":
        c1, c2, target = gate.operands
        p1 = 0.5 * (one - linalg.embed(linalg.SIGMA_Z, c1, n))
        p2 = 0.5 * (one - linalg.embed(linalg.SIGMA_Z, c2, n))
        tx = linalg.embed(linalg.SIGMA_X, target, n)
        both = p1 @ p2
        return one - both + tx @ both
    raise NonUnitary("CUSTOM gates have no fixed oracle matrix")


@dataclass(frozen=True)
class SchrodingerRun:
    """Forward state-vector evolution: states[t] is the vector at step t."""

    n: int
    states: tuple[np.ndarray, ...]
    gates: tuple[Gate, ...]


def evolve(initial: np.ndarray, gates: Sequence[Gate], n: int,
           tol: Tolerances = DEFAULT_TOL) -> SchrodingerRun:
    """Apply each gate's fixed matrix once per step, keeping every state."""
    psi = np.asarray(initial, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > tol.norm:
        raise NonUnitary(f"initial state norm {np.linalg.norm(psi):.12f} != 1")
    states = [psi]
    for gate in gates:
        u = gate_matrix(gate, n)
        linalg.check_unitary(u, tol.unitary)
        psi = u @ psi
        states.append(psi)
    return SchrodingerRun(n, tuple(states), tuple(gates))


def schrodinger_relative_state(psi: np.ndarray, projector: np.ndarray,
                               tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Normalized component P|psi>/||P|psi>||."""
    projected = projector @ psi
    norm = float(np.linalg.norm(projected))
    if norm * norm <= tol.weight:
        raise ZeroWeightBranch(f"projection squared norm {norm * norm:.3e}")
    return projected / norm


@dataclass(frozen=True)
class CrossValidationReport:
    max_residual: float
    per_step: tuple[float, ...]


def cross_validate(run: SchrodingerRun, timeline: Sequence[NetworkState],
                   observables: Optional[Sequence] = None
                   ) -> CrossValidationReport:
    """Compare both pictures step by step.

    For every step t and every descriptor component, the Heisenberg
    expectation of the evolved operator must equal the Schrodinger
    expectation of the fixed operator in the evolved state. Extra
    ``observables`` are callables mapping a network state to the evolved
    matrix; their fixed representation is the callable applied to the t=0
    state.
    """
    if len(run.states) != len(timeline):
        raise CircuitMismatch(
            f"{len(run.states)} oracle states vs {len(timeline)} network steps")
    if timeline and run.n != timeline[0].n:
        raise CircuitMismatch(f"oracle n={run.n} vs network n={timeline[0].n}")
    n = run.n
    fixed = {(a, c): linalg.embed(linalg.PAULIS[c], a, n)
             for a in range(1, n + 1) for c in COMPONENTS}
    builders = list(observables or [])
    fixed_extra = [build(timeline[0]) for build in builders]
    per_step = []
    for psi, state in zip(run.states, timeline):
        worst = 0.0
        for a in range(1, n + 1):
            for c in COMPONENTS:
                heis = np.vdot(state.psi,
                               state.descriptor(a).component(c) @ state.psi)
                schr = np.vdot(psi, fixed[(a, c)] @ psi)
                worst = max(worst, abs(heis - schr))
        for build, obs0 in zip(builders, fixed_extra):
            heis = np.vdot(state.psi, build(state) @ state.psi)
            schr = np.vdot(psi, obs0 @ psi)
            worst = max(worst, abs(heis - schr))
        per_step.append(float(worst))
    return CrossValidationReport(max(per_step), tuple(per_step))
