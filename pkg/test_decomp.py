#!/usr/bin/env python3
"""
Tests for the Toffoli gadgets, the measurement uncompute gadget and MCT trees
"""

import dataclasses

import pytest

from modules.circuit import GateKind, lower_toffolis, metrics, schedule, toffoli_layers
from modules.decomp import (CLEAN_TARGET_INPUTS, ERASABLE_INPUTS, build_mct_tree, build_toffoli_gadget,
                            build_uncompute_gadget, ceil_log2, cost_model, tree_level_widths)
from modules.errors import EstimateDomainError
from modules.verify import check_mct_tree, gadget_equivalence, simulate_branches, toffoli_matrix


@pytest.mark.parametrize("variant,expected", [
    ("tdepth1", (4, 1, 8, 4, 1)),
    ("logical-and", (4, 2, 6, 6, 0)),
])
def test_gadget_measured_costs(variant, expected):
    g = build_toffoli_gadget(variant)
    assert (g.t_count, g.t_depth, g.cnot_count, g.cnot_depth, g.helper_count) == expected


@pytest.mark.parametrize("variant", ["tdepth1", "logical-and"])
def test_gadget_realizes_toffoli_on_clean_target(variant):
    gadget = build_toffoli_gadget(variant)
    report = gadget_equivalence(gadget.to_circuit(), toffoli_matrix(), CLEAN_TARGET_INPUTS)
    assert report.passed
    assert report.max_amplitude_error < 1e-10


def test_flipped_t_gate_is_caught():
    gadget = build_toffoli_gadget("tdepth1")
    template = list(gadget.template)
    index = next(i for i, (kind, _) in enumerate(template) if kind is GateKind.T)
    template[index] = (GateKind.TDG, template[index][1])
    broken = dataclasses.replace(gadget, template=tuple(template))
    assert not gadget_equivalence(broken.to_circuit(), toffoli_matrix(), CLEAN_TARGET_INPUTS).passed


def test_unknown_variant():
    with pytest.raises(ValueError):
        build_toffoli_gadget("relative-phase")


def test_uncompute_gadget_erases_on_every_branch():
    gadget = build_uncompute_gadget()
    circuit = gadget.to_circuit()
    assert circuit.count(GateKind.T, GateKind.TDG) == 0
    assert gadget_equivalence(circuit, toffoli_matrix(), ERASABLE_INPUTS).passed
    branches = simulate_branches(circuit, 0b111).branches
    assert len(branches) == 2
    for branch in branches:
        assert abs(abs(branch.amplitudes[0b011]) - 1) < 1e-10


@pytest.mark.parametrize("k", range(2, 65))
def test_tree_toffoli_count_and_layers(k):
    tree = build_mct_tree(k)
    assert len(tree.compute) == k - 1
    assert tree.depth == ceil_log2(k)
    assert all(g.kind is GateKind.TOFFOLI for g in tree.compute)
    circuit = tree.to_circuit("logical-and")
    compute_only = circuit.slice(0, k - 1)
    assert schedule(compute_only).depth == ceil_log2(k)
    assert max(toffoli_layers(circuit).values()) == ceil_log2(k)
    assert sum(tree_level_widths(k)) == k - 1


@pytest.mark.parametrize("k", range(1, 11))
def test_lowered_tree_t_costs(k):
    tree = build_mct_tree(k)
    fast = metrics(lower_toffolis(tree.to_circuit("tdepth1"), "tdepth1"))
    assert fast.t_count == 4 * (k - 1)
    assert fast.t_depth == ceil_log2(k)
    cheap = metrics(lower_toffolis(tree.to_circuit("logical-and"), "logical-and"))
    assert cheap.t_count == 4 * (k - 1)
    assert cheap.t_depth == (ceil_log2(k) + 1 if k >= 2 else 0)


@pytest.mark.parametrize("k", range(1, 9))
def test_tree_computes_and_of_controls(k):
    assert check_mct_tree(build_mct_tree(k).to_circuit(), k).passed


def test_relocated_tree_renumbers_to_standalone_layout():
    relocated = build_mct_tree(5, target=40, controls=(21, 22, 23, 24, 25), nodes=(30, 31, 32))
    circuit = relocated.to_circuit()
    assert circuit.num_qubits == 5 + 3 + 1 + relocated.helper_demand()
    assert circuit.gates == build_mct_tree(5).to_circuit().gates
    assert check_mct_tree(circuit, 5).passed


def test_single_control_is_cnot():
    tree = build_mct_tree(1)
    assert [g.kind for g in tree.compute] == [GateKind.CNOT]
    assert tree.root_marker() is None


def test_root_writes_caller_target():
    tree = build_mct_tree(4, target=9, controls=[0, 1, 2, 3], nodes=[5, 6])
    assert tree.root.qubits == (5, 6, 9)
    assert tree.levels == (1, 1, 2)
    assert [g.target for g in tree.node_markers()] == [6, 5]
    assert all(g.uncompute for g in tree.node_markers())


def test_left_packed_shape_for_odd_k():
    tree = build_mct_tree(5)
    assert [g.qubits for g in tree.compute] == [(0, 1, 5), (2, 3, 6), (5, 6, 7), (7, 4, 8)]
    assert tree_level_widths(7) == [3, 2, 1]


def test_tree_needs_controls():
    with pytest.raises(ValueError):
        build_mct_tree(0)
    with pytest.raises(ValueError):
        build_mct_tree(4, nodes=[9])


@pytest.mark.parametrize("k,variant,expected", [
    (8, "tdepth1", (14, 28, 3, 63)),
    (2, "tdepth1", (2, 4, 1, 9)),
    (2, "logical-and", (1, 4, 1, 6)),
])
def test_cost_model(k, variant, expected):
    cost = cost_model(k, variant)
    assert (cost.ancilla, cost.t_count, cost.t_depth, cost.cnot_count) == expected


def test_cost_model_domain():
    with pytest.raises(EstimateDomainError):
        cost_model(1, "tdepth1")
