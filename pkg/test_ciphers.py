#!/usr/bin/env python3
"""
Tests for the LowMC and AES S-boxes and the AES cost aggregation
"""

import pytest

from modules.anf import Monomial, evaluate, monomial_census
from modules.ciphers import (AES_VARIANTS, PUBLISHED_TABLES, AesParameters, aes_full_costs, aes_round_costs,
                             aes_sbox, aes_sbox_table, comparison_table, lowmc_sbox, monolithic_t_depth)


def gf_mul(a, b):
    product = 0
    while b:
        if b & 1:
            product ^= a
        a = (a << 1) ^ (0x11B if a & 0x80 else 0)
        b >>= 1
    return product


def gf_inverse(a):
    return next((b for b in range(1, 256) if gf_mul(a, b) == 1), 0)


def rotl(byte, shift):
    return ((byte << shift) | (byte >> (8 - shift))) & 0xFF


def derived_sbox(value):
    b = gf_inverse(value)
    return b ^ rotl(b, 1) ^ rotl(b, 2) ^ rotl(b, 3) ^ rotl(b, 4) ^ 0x63


def test_embedded_table_matches_field_construction():
    table = aes_sbox_table()
    assert [int(v) for v in table] == [derived_sbox(v) for v in range(256)]
    assert table[0x53] == 0xED
    assert table[0x00] == 0x63


def test_aes_sbox_census_and_values():
    f = aes_sbox()
    assert monomial_census(f).as_tuple() == (246, 1001, 145, 7)
    full = Monomial.of(range(8))
    assert all(full not in c.monomials for c in f.coords)
    assert evaluate(f, 0x53) == 0xED


def test_lowmc_sbox():
    f = lowmc_sbox()
    assert str(f.coords[1]) == "x0 + x1 + x0*x2"
    assert f.degree == 2
    assert evaluate(f, 0) == 0
    assert [evaluate(f, x) for x in range(8)] == [0, 7, 6, 5, 4, 1, 3, 2]


def test_round_costs_tdepth1():
    costs = aes_round_costs("tdepth1")
    assert costs.total.as_tuple() == (44448, 158264, 200, 48768, 3)
    assert costs.mixcolumns.as_tuple() == (0, 392, 13, 0, 0)
    assert costs.shiftrows.as_tuple() == (0, 0, 0, 0, 0)
    assert costs.total.t_depth == costs.subbytes.t_depth


def test_round_costs_logical_and():
    assert aes_round_costs("logical-and").total.as_tuple() == (32256, 121688, 191, 48768, 4)


@pytest.mark.parametrize("params", AES_VARIANTS, ids=lambda p: f"AES-{p.key_bits}")
def test_full_cipher_rows(params):
    assert aes_full_costs(params).as_tuple() == PUBLISHED_TABLES["aes"][params.key_bits]


def test_full_cost_is_linear_in_rounds():
    costs = [aes_full_costs(p) for p in AES_VARIANTS]
    assert [c.t_depth for c in costs] == [30, 36, 42]
    assert [c.t_count for c in costs] == [48768 * r for r in (10, 12, 14)]


def test_parameters_are_paired():
    with pytest.raises(ValueError):
        AesParameters(128, 12)
    assert AesParameters.for_key(192).rounds == 12


def test_monolithic_t_depth():
    assert [monolithic_t_depth(p) for p in AES_VARIANTS] == [8, 9, 9]


def test_comparison_table_flags_printed_rows():
    rows = comparison_table()
    prior = [r for r in rows if r.label.startswith("prior")]
    assert len(prior) == 7
    assert any(r.key_bits == 128 and r.cells[4] == 40 and r.cells[2] is None for r in prior)
    printed = {r.key_bits: r for r in rows if r.label == "this work (as printed)"}
    assert printed[128].cells[:2] == (37464, 1441128)
    assert any(flag.startswith("ancilla") for flag in printed[128].flags)
    assert any("text states 46" in flag for flag in printed[192].flags)
    computed = {r.key_bits: r for r in rows if r.label == "this work (computed)"}
    assert computed[128].cells[0] == 45600
    assert not computed[128].flags
