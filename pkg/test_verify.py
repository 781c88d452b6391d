#!/usr/bin/env python3
"""
Tests for reversible and statevector simulation and the equivalence checks
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.anf import parse_anf
from modules.circuit import Circuit, GateKind, Granularity, QubitRole, ccx, cx, h, measure_z, t, x
from modules.ciphers import aes_sbox, lowmc_sbox
from modules.errors import GranularityError, SimulationSizeError
from modules.synth import synthesize
from modules.verify import (BitState, check_small_circuit, exhaustive_check, gadget_equivalence,
                            identity_matrix, mct_matrix, simulate_branches, simulate_reversible)

INPUTS3 = (QubitRole.INPUT,) * 3


def test_toffoli_on_bits():
    circuit = Circuit(INPUTS3, (ccx(0, 1, 2),))
    assert simulate_reversible(circuit, BitState((1, 1, 0))).qubits == (1, 1, 1)


def test_reversible_rejects_quantum_gates():
    with pytest.raises(GranularityError):
        simulate_reversible(Circuit(INPUTS3, (h(0),), Granularity.CLIFFORD_T), BitState.basis(3))


def test_lowmc_circuit_on_single_input():
    result = synthesize(lowmc_sbox(), "tdepth1")
    circuit = result.toffoli_circuit
    state = BitState(tuple(1 if q in (0, 1) else 0 for q in range(circuit.num_qubits)))
    out = simulate_reversible(circuit, state)
    assert out.value(circuit.outputs) == 0b101
    assert out.value(circuit.inputs) == 0b011


def test_exhaustive_check_passes_for_lowmc():
    report = exhaustive_check(synthesize(lowmc_sbox()).toffoli_circuit, lowmc_sbox())
    assert report.passed
    assert report.checked == 8 + 16
    assert set(json.loads(report.to_json())) == {"checked", "failures", "max_amplitude_error"}


def test_swapped_control_is_caught():
    f = lowmc_sbox()
    circuit = synthesize(f).toffoli_circuit
    gates = list(circuit.gates)
    index = next(i for i, g in enumerate(gates) if g.kind is GateKind.TOFFOLI)
    a, b, target = gates[index].qubits
    spare = next(q for q in circuit.inputs if q not in (a, b))
    gates[index] = ccx(spare, b, target)
    mutated = Circuit(circuit.roles, tuple(gates), circuit.granularity, circuit.num_clbits, circuit.stages)
    report = exhaustive_check(mutated, f)
    assert not report.passed
    assert report.first_failure is not None


def test_aes_sbox_circuit_exhaustively():
    f = aes_sbox()
    circuit = synthesize(f).toffoli_circuit
    assert exhaustive_check(circuit, f).passed
    out = simulate_reversible(circuit, BitState.basis(circuit.num_qubits, 0))
    assert out.value(circuit.outputs) == 0x63
    work = [q for q, role in enumerate(circuit.roles) if role not in (QubitRole.INPUT, QubitRole.OUTPUT)]
    assert not any(out.qubits[q] for q in work)


def test_measurement_splits_branches():
    circuit = Circuit((QubitRole.INPUT,), (h(0), measure_z(0, 0)), Granularity.CLIFFORD_T, num_clbits=1)
    branches = simulate_branches(circuit, 0).branches
    assert [b.outcomes[0] for b in branches] == [0, 1]
    assert [round(b.probability, 12) for b in branches] == [0.5, 0.5]


def test_statevector_width_guard():
    circuit = Circuit((QubitRole.HELPER,) * 15, (), Granularity.CLIFFORD_T)
    with pytest.raises(SimulationSizeError):
        simulate_branches(circuit)


def test_identity_against_identity():
    circuit = Circuit((QubitRole.INPUT,) * 2, (x(0), x(0)), Granularity.CLIFFORD_T)
    assert gadget_equivalence(circuit, identity_matrix(2)).passed


def test_mct_matrix_is_a_permutation():
    matrix = mct_matrix(3)
    assert np.allclose(matrix @ matrix, np.eye(16))
    assert matrix[0b1111, 0b0111] == 1


@pytest.mark.parametrize("variant", ["tdepth1", "logical-and"])
def test_branch_level_check_of_lowered_majority(variant):
    f = parse_anf("x0*x1 + x0*x2 + x1*x2")
    result = synthesize(f, variant)
    report = check_small_circuit(result.circuit, f)
    assert report.passed
    assert report.checked == 8


random_ops = st.lists(st.tuples(st.sampled_from(["h", "t", "cx", "mz"]), st.permutations(range(4))), max_size=12)


@settings(max_examples=40, deadline=None)
@given(random_ops, st.integers(0, 15))
def test_branch_probabilities_are_conserved(ops, start):
    gates, clbits = [], 0
    for name, qubits in ops:
        if name == "h":
            gates.append(h(qubits[0]))
        elif name == "t":
            gates.append(t(qubits[0]))
        elif name == "cx":
            gates.append(cx(qubits[0], qubits[1]))
        else:
            gates.append(measure_z(qubits[0], clbits))
            clbits += 1
    circuit = Circuit((QubitRole.HELPER,) * 4, tuple(gates), Granularity.CLIFFORD_T, clbits)
    state = simulate_branches(circuit, start)
    assert abs(state.total_probability - 1) < 1e-9
    for branch in state.branches:
        assert abs(np.linalg.norm(branch.amplitudes) - 1) < 1e-9


classical_ops = st.lists(st.tuples(st.sampled_from(["x", "cx", "ccx"]), st.permutations(range(6))), max_size=25)


@settings(max_examples=40, deadline=None)
@given(classical_ops, st.integers(0, 63))
def test_reversible_agrees_with_statevector(ops, start):
    makers = {"x": lambda q: x(q[0]), "cx": lambda q: cx(q[0], q[1]), "ccx": lambda q: ccx(q[0], q[1], q[2])}
    gates = tuple(makers[name](qubits) for name, qubits in ops)
    bits = simulate_reversible(Circuit((QubitRole.HELPER,) * 6, gates), BitState.basis(6, start))
    branches = simulate_branches(Circuit((QubitRole.HELPER,) * 6, gates), start).branches
    assert len(branches) == 1
    assert int(np.argmax(np.abs(branches[0].amplitudes))) == bits.value(range(6))
