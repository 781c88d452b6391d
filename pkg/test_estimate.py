#!/usr/bin/env python3
"""
Tests for the closed-form bounds, the summation form and per-function accounting
"""

import pytest

from modules.anf import parse_anf
from modules.ciphers import aes_sbox
from modules.errors import EstimateDomainError
from modules.estimate import (compare, function_specific_estimate, sbox_bounds, single_output_bounds,
                              summation_bounds, theorem1_bounds)
from modules.synth import synthesize
from test_synth import complete_function

FIELDS = ("ancilla", "t_count", "cnot_count", "cnot_depth", "t_depth")


def values(bounds, fields=FIELDS):
    return tuple(getattr(bounds, f) for f in fields)


def test_closed_form_at_three():
    assert values(theorem1_bounds(3, 3)) == (23, 20, 78, 29, 2)


def test_sbox_ancilla_at_eight():
    assert theorem1_bounds(8, 8).ancilla == 2801
    assert sbox_bounds(8).ancilla == 2801


def test_single_toffoli_case():
    b = theorem1_bounds(2, 1)
    assert (b.t_count, b.t_depth, b.ancilla, b.cnot_count) == (4, 1, 4, 12)


def test_logical_and_trade_off():
    fast, cheap = theorem1_bounds(8, 8, "tdepth1"), theorem1_bounds(8, 8, "logical-and")
    assert fast.ancilla - cheap.ancilla == 2 ** 7 * 6 + 1
    assert fast.cnot_count - cheap.cnot_count == 3 * 2 ** 7 * 6 + 3
    assert cheap.t_depth == fast.t_depth + 1
    assert cheap.t_count == fast.t_count


def test_domain():
    with pytest.raises(EstimateDomainError):
        theorem1_bounds(1, 1)
    with pytest.raises(EstimateDomainError):
        summation_bounds(4, 0)


@pytest.mark.parametrize("variant", ["tdepth1", "logical-and"])
@pytest.mark.parametrize("n", range(2, 17))
@pytest.mark.parametrize("m", range(1, 9))
def test_closed_form_equals_summation(n, m, variant):
    assert values(theorem1_bounds(n, m, variant)) == values(summation_bounds(n, m, variant))


def test_restricted_sums_for_aes():
    restricted = summation_bounds(8, 8, max_degree=7)
    assert summation_bounds(8, 8).t_count == 3076
    assert restricted.t_count == 3048
    assert restricted.breakdown["gadget_cnots"] == 6858
    assert summation_bounds(3, 1).t_count == 20


def test_specializations_match_general_form():
    for n in range(2, 12):
        assert values(single_output_bounds(n)) == values(theorem1_bounds(n, 1))
        assert values(sbox_bounds(n)) == values(theorem1_bounds(n, n))


@pytest.mark.parametrize("variant,expected", [
    ("tdepth1", (2778, 3048, 9859, 186, 3)),
    ("logical-and", (2016, 3048, 7573, 177, 4)),
])
def test_aes_sbox_accounting(variant, expected):
    assert values(function_specific_estimate(aes_sbox(), variant)) == expected


def test_aes_breakdown():
    b = function_specific_estimate(aes_sbox()).breakdown
    assert (b["copies"], b["storage"], b["outputs"], b["decomposition"]) == (1000, 246, 8, 1524)


@pytest.mark.parametrize("n", range(2, 11))
def test_complete_function_reaches_closed_form(n):
    f = complete_function(n, 2)
    closed, specific = theorem1_bounds(n, 2), function_specific_estimate(f)
    assert values(specific, ("ancilla", "t_count", "cnot_count")) == values(closed, ("ancilla", "t_count", "cnot_count"))


def test_affine_accounting():
    b = function_specific_estimate(parse_anf("vars 3\nx0 + x1\nx2"))
    assert (b.ancilla, b.t_count, b.t_depth) == (2, 0, 0)


def test_bounds_are_monotone():
    for n in range(2, 12):
        for m in range(1, 8):
            here = values(theorem1_bounds(n, m))
            assert all(a <= b for a, b in zip(here, values(theorem1_bounds(n + 1, m))))
            assert all(a <= b for a, b in zip(here, values(theorem1_bounds(n, m + 1))))


def test_large_n_is_exact():
    assert theorem1_bounds(64, 64).t_count == 2 ** 65 * 62 + 4


def test_compare_reports_deltas():
    f = parse_anf("x0*x1*x2 + x3")
    result = synthesize(f)
    rows = {c.metric: c for c in compare(result.report, function_specific_estimate(f))}
    assert rows["t_count"].delta == 0
    assert rows["ancilla"].within
    assert rows["cnot_count"].measured == result.report.cnot_count
