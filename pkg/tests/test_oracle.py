"""Tests for the independent state-vector oracle and picture cross-validation."""

import numpy as np
import pytest

from heisim import linalg, relative
from heisim.errors import CircuitMismatch, NonUnitary, ZeroWeightBranch
from heisim.linalg import SIGMA_X, SIGMA_Z, max_abs
from heisim.network import Gate, init_network, run_gates
from heisim.oracle import (cross_validate, evolve, gate_matrix,
                           schrodinger_relative_state)


def bell_vector():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return v


class TestGateMatrix:
    def test_not_matrix(self):
        assert np.allclose(gate_matrix(Gate.not_(2), 2),
                           np.kron(linalg.identity(2), SIGMA_X))

    def test_hadamard_matrix(self):
        h = gate_matrix(Gate.h(1), 1)
        assert np.allclose(h, np.array([[1, 1], [1, -1]]) / np.sqrt(2))

    def test_cnot_matrix(self):
        expected = np.array([[1, 0, 0, 0],
                             [0, 1, 0, 0],
                             [0, 0, 0, 1],
                             [0, 0, 1, 0]], dtype=complex)
        assert np.allclose(gate_matrix(Gate.cnot(1, 2), 2), expected)

    def test_custom_rejected(self):
        gate = Gate.custom((1,), lambda s: linalg.identity(2))
        with pytest.raises(NonUnitary):
            gate_matrix(gate, 1)


class TestEvolve:
    def test_empty_gate_list(self):
        psi = init_network(2).psi
        run = evolve(psi, [], 2)
        assert len(run.states) == 1
        assert max_abs(run.states[0] - psi) == 0

    def test_not_flips_basis_vector(self):
        run = evolve(init_network(2).psi, [Gate.not_(1)], 2)
        expected = np.zeros(4, dtype=complex)
        expected[2] = 1.0
        assert max_abs(run.states[-1] - expected) <= 1e-12

    def test_measurement_circuit_gives_bell(self):
        run = evolve(init_network(2).psi, [Gate.h(1), Gate.cnot(1, 2)], 2)
        final = run.states[-1]
        overlap = np.vdot(bell_vector(), final)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-10)

    def test_norm_preserved(self):
        run = evolve(init_network(2).psi,
                     [Gate.h(1), Gate.rz(2, 1.1), Gate.cnot(1, 2)], 2)
        for psi in run.states:
            assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)

    def test_unnormalized_initial_rejected(self):
        with pytest.raises(NonUnitary):
            evolve(2 * init_network(1).psi, [], 1)


class TestSchrodingerRelativeState:
    def test_identity_projector(self):
        psi = bell_vector()
        assert max_abs(schrodinger_relative_state(psi, np.eye(4)) - psi) <= 1e-12

    def test_bell_plus_branch(self):
        p_plus = linalg.pauli_projector(linalg.embed(SIGMA_Z, 1, 2), +1)
        branch = schrodinger_relative_state(bell_vector(), p_plus)
        expected = np.zeros(4, dtype=complex)
        expected[0] = 1.0
        assert max_abs(branch - expected) <= 1e-10

    def test_bell_minus_branch(self):
        p_minus = linalg.pauli_projector(linalg.embed(SIGMA_Z, 1, 2), -1)
        branch = schrodinger_relative_state(bell_vector(), p_minus)
        expected = np.zeros(4, dtype=complex)
        expected[3] = 1.0
        assert max_abs(branch - expected) <= 1e-10

    def test_zero_weight_raises(self):
        psi = init_network(2).psi
        p_minus = linalg.pauli_projector(linalg.embed(SIGMA_Z, 1, 2), -1)
        with pytest.raises(ZeroWeightBranch):
            schrodinger_relative_state(psi, p_minus)


class TestCrossValidate:
    def test_identity_circuit(self):
        gates = [Gate.identity(), Gate.identity()]
        timeline = run_gates(init_network(2), gates)
        run = evolve(timeline[0].psi, gates, 2)
        report = cross_validate(run, timeline)
        assert report.max_residual <= 1e-12

    def test_measurement_circuit(self):
        gates = [Gate.h(1), Gate.cnot(1, 2)]
        timeline = run_gates(init_network(2), gates)
        run = evolve(timeline[0].psi, gates, 2)
        report = cross_validate(run, timeline)
        assert len(report.per_step) == 3
        assert report.max_residual <= 1e-9

    def test_random_circuits(self):
        rng = np.random.default_rng(53)
        for _ in range(5):
            n = 3
            gates = []
            for _ in range(20):
                qubits = [int(q) + 1 for q in rng.permutation(n)]
                kind = rng.integers(5)
                gates.append((Gate.not_(qubits[0]), Gate.h(qubits[0]),
                              Gate.cnot(qubits[0], qubits[1]),
                              Gate.rz(qubits[0], float(rng.uniform(0, 7))),
                              Gate.ccnot(qubits[0], qubits[1], qubits[2])
                              )[kind])
            timeline = run_gates(init_network(n), gates)
            run = evolve(timeline[0].psi, gates, n)
            assert cross_validate(run, timeline).max_residual <= 1e-9

    def test_extra_observables(self):
        gates = [Gate.h(1), Gate.cnot(1, 2)]
        timeline = run_gates(init_network(2), gates)
        run = evolve(timeline[0].psi, gates, 2)
        observables = [lambda s: s.descriptor(1).z @ s.descriptor(2).z]
        report = cross_validate(run, timeline, observables)
        assert report.max_residual <= 1e-9

    def test_length_mismatch(self):
        gates = [Gate.h(1)]
        timeline = run_gates(init_network(2), gates)
        run = evolve(timeline[0].psi, [], 2)
        with pytest.raises(CircuitMismatch):
            cross_validate(run, timeline)

    def test_branch_weight_agreement(self):
        plan = {2: [(1, "z")]}
        gates = [Gate.h(1), Gate.cnot(1, 2)]
        timeline = run_gates(init_network(2), gates, plan)
        final = timeline[-1]
        run = evolve(timeline[0].psi, gates, 2)
        frames = relative.make_pvm(final, final.get_record(1, "z", 2))
        fixed_z = linalg.embed(SIGMA_Z, 1, 2)
        for frame in frames:
            fixed_proj = linalg.pauli_projector(fixed_z, int(frame.label))
            schr_weight = float(np.linalg.norm(fixed_proj @ run.states[-1]) ** 2)
            assert schr_weight == pytest.approx(frame.weight, abs=1e-9)
