#!/usr/bin/env python3
"""
Tests for the four-stage synthesis pipeline
"""

import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from modules.anf import MultiOutputFunction, parse_anf
from modules.circuit import GateKind, QubitRole, export_text
from modules.ciphers import aes_sbox, lowmc_sbox
from modules.decomp import ceil_log2
from modules.estimate import function_specific_estimate, theorem1_bounds
from modules.synth import bipartite_edge_colouring, plan, stage_depth_report, synthesize
from modules.verify import exhaustive_check

EXAMPLE2 = "x0*x2 + x1*x3 + x0*x1*x2*x3"


def complete_function(n, m=1):
    monomials = " + ".join("*".join(f"x{i}" for i in range(n) if mask >> i & 1) for mask in range(1, 1 << n))
    return parse_anf(f"vars {n}\n" + "\n".join([monomials] * m))


def test_plan_for_aes_sbox():
    p = plan(aes_sbox())
    assert p.copy_total == 1000
    assert len(p.storage) == 246


def test_plan_for_complete_function():
    p = plan(complete_function(4))
    assert p.copy_total == sum(k * comb(4, k) for k in range(2, 5)) - 4
    assert len(p.storage) == sum(comb(4, k) for k in range(2, 5))


def test_plan_for_example_two():
    p = plan(parse_anf(EXAMPLE2))
    assert [str(mono) for mono in p.monomials] == ["x0*x2", "x1*x3", "x0*x1*x2*x3"]
    assert p.copy_counts == (1, 1, 1, 1)
    assert len(p.storage) == 3


def test_allocation_order():
    p = plan(lowmc_sbox())
    roles = p.roles()
    order = [QubitRole.INPUT, QubitRole.INPUT_COPY, QubitRole.STORAGE, QubitRole.HELPER, QubitRole.OUTPUT]
    assert [r for i, r in enumerate(roles) if i == 0 or roles[i - 1] != r] == order
    assert p.qubit_count == len(roles) == 15


def test_affine_function_has_no_t_gates():
    f = parse_anf("vars 3\nx0 + x2 + 1\nx1")
    p = plan(f)
    assert p.monomials == () and p.copy_total == 0
    result = synthesize(f)
    assert result.report.t_count == 0
    assert result.report.ancilla_count == 0
    assert result.accounting.ancilla == 2
    assert result.circuit.count(GateKind.X) == 1
    assert exhaustive_check(result.toffoli_circuit, f).passed
    depths = stage_depth_report(p, f)
    assert (depths.fan_out, depths.gadget) == (0, 0)


def test_constant_function():
    result = synthesize(parse_anf("vars 2\n1"))
    assert result.report.t_count == 0
    assert result.report.cnot_count == 0


def test_lowmc_tdepth1():
    result = synthesize(lowmc_sbox(), "tdepth1")
    r = result.report
    assert (r.t_count, r.t_depth, r.ancilla_count) == (12, 1, 9)
    assert exhaustive_check(result.toffoli_circuit, lowmc_sbox()).passed


def test_example_two():
    f = parse_anf(EXAMPLE2)
    result = synthesize(f, "tdepth1")
    assert (result.report.t_count, result.report.t_depth) == (20, 2)
    assert exhaustive_check(result.toffoli_circuit, f).passed
    assert synthesize(f, "logical-and").report.t_depth == 3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_complete_function_synthesis(n):
    f = complete_function(n)
    result = synthesize(f, "tdepth1")
    bound = theorem1_bounds(n, 1, "tdepth1")
    r = result.report
    assert r.t_count == bound.t_count
    assert r.t_depth == bound.t_depth == ceil_log2(n)
    assert result.accounting.ancilla == bound.ancilla
    assert r.ancilla_count <= result.accounting.ancilla
    assert r.cnot_depth <= (1 << n) + 2 * n + 9 * ceil_log2(n) - 3
    assert exhaustive_check(result.toffoli_circuit, f).passed


def test_lowmc_against_printed_figures():
    result = synthesize(lowmc_sbox(), "tdepth1")
    assert result.report.cnot_count <= 78
    printed = result.published_deltas()
    assert printed["example"] == "lowmc_sbox"
    figures = printed["figures"]
    assert {metric: figures[metric]["delta"] for metric in ("ancilla", "t_count", "t_depth")} == {
        "ancilla": 0, "t_count": 0, "t_depth": 0}
    assert figures["cnot_count"]["printed"] == 33
    assert figures["cnot_count"]["delta"] == result.report.cnot_count - 33


def test_example_two_reports_printed_deltas(caplog):
    with caplog.at_level("WARNING", logger="modules.synth"):
        result = synthesize(parse_anf(EXAMPLE2), "tdepth1")
    figures = result.to_dict()["published"]["figures"]
    assert {metric: figures[metric]["printed"] for metric in figures} == {
        "ancilla": 12, "t_count": 20, "t_depth": 2, "cnot_count": 46, "cnot_depth": 12}
    assert figures["t_count"]["delta"] == figures["t_depth"]["delta"] == 0
    assert figures["cnot_count"]["delta"] == result.report.cnot_count - 46
    assert figures["cnot_depth"]["measured"] == result.report.cnot_depth
    flagged = [metric for metric, figure in figures.items() if figure["delta"] > 0]
    for metric in flagged:
        assert any(f"measured {metric} " in message and "exceeds the printed" in message for message in caplog.messages)


def test_printed_figures_only_for_matching_inputs():
    assert synthesize(parse_anf(EXAMPLE2), "logical-and").published_deltas() is None
    assert synthesize(parse_anf("x0*x1 + x2")).to_dict()["published"] is None


def test_aes_sbox_resources():
    f = aes_sbox()
    fast = synthesize(f, "tdepth1")
    assert (fast.report.t_count, fast.report.t_depth) == (3048, 3)
    assert fast.to_dict()["accounted_ancilla"] == 2778
    assert fast.report.ancilla_count <= 2778
    assert fast.stage_depths.total == 186
    cheap = synthesize(f, "logical-and")
    assert (cheap.report.t_count, cheap.report.t_depth) == (3048, 4)
    assert cheap.stage_depths.total == 177


@pytest.mark.parametrize("k", range(2, 17))
def test_t_depth_law_for_single_monomial(k):
    f = parse_anf("*".join(f"x{i}" for i in range(k)))
    assert synthesize(f, "tdepth1").report.t_depth == ceil_log2(k)
    assert synthesize(f, "logical-and").report.t_depth == ceil_log2(k) + 1


def test_adding_a_monomial_never_lowers_t_count():
    base = synthesize(parse_anf("x0*x1 + x2")).report.t_count
    more = synthesize(parse_anf("x0*x1 + x2 + x1*x2*x3")).report.t_count
    assert more >= base


def test_synthesis_is_deterministic():
    assert export_text(synthesize(aes_sbox()).circuit) == export_text(synthesize(aes_sbox()).circuit)


def test_json_report_fields():
    payload = json.loads(synthesize(lowmc_sbox()).to_json())
    for key in ("n", "m", "variant", "ancilla", "t_count", "t_depth", "cnot_count", "cnot_depth",
                "total_depth", "measurements", "stage_depths", "accounted_ancilla", "deltas"):
        assert key in payload
    assert payload["measurements"] == 3
    assert set(payload["stage_depths"]["measured"]) == {"fan-out", "monomials", "output", "uncompute", "whole"}


def test_edge_colouring_uses_max_degree_rounds():
    edges = [(s, o) for s in range(5) for o in range(3) if (s + o) % 4]
    rounds = bipartite_edge_colouring(edges)
    degree = max(max(sum(1 for e in edges if e[0] == s) for s in range(5)),
                 max(sum(1 for e in edges if e[1] == o) for o in range(3)))
    assert len(rounds) == degree
    assert sorted(e for r in rounds for e in r) == sorted(edges)
    for r in rounds:
        assert len({s for s, _ in r}) == len(r) == len({o for _, o in r})


def test_output_stage_depth_is_max_degree():
    result = synthesize(aes_sbox())
    assert result.stage_depths.measured["output"] == 145


@st.composite
def functions(draw, max_n=5, max_m=3):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, max_m))
    values = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=1 << n, max_size=1 << n))
    return MultiOutputFunction.from_lookup(values, n, m)


@settings(max_examples=100, deadline=None)
@given(functions(max_n=6), st.sampled_from(["tdepth1", "logical-and"]))
def test_random_functions_are_correct(f, variant):
    result = synthesize(f, variant)
    assert exhaustive_check(result.toffoli_circuit, f).passed
    expected = ceil_log2(f.degree) + (variant == "logical-and") if f.degree >= 2 else 0
    assert result.report.t_depth == expected


@settings(max_examples=30, deadline=None)
@given(functions(max_n=6, max_m=4))
def test_measured_resources_within_closed_forms(f):
    result = synthesize(f, "tdepth1")
    bound = theorem1_bounds(f.n, f.m, "tdepth1")
    accounting = function_specific_estimate(f, "tdepth1")
    r = result.report
    assert r.ancilla_count <= accounting.ancilla <= bound.ancilla
    assert r.t_count == accounting.t_count <= bound.t_count
    assert r.t_depth <= bound.t_depth
    assert r.cnot_count <= bound.cnot_count
    assert r.cnot_depth <= bound.cnot_depth


def test_unknown_variant_is_rejected():
    with pytest.raises(ValueError, match="expected one of"):
        plan(lowmc_sbox(), "relative-phase")
