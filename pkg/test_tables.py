#!/usr/bin/env python3
"""
Tests for the resource table reproduction and the workbook export
"""

import json

import pandas as pd
import pytest

from modules.tables import COLUMNS, TABLE_NAMES, TableReproducer, export_workbook, render_json, render_text


def test_every_table_matches_published_cells():
    reproducer = TableReproducer()
    tables = reproducer.build_all()
    assert set(tables) == set(TABLE_NAMES)
    assert reproducer.mismatches == []


def test_sbox_table_rows():
    df = TableReproducer().sbox_table()
    assert list(df.columns) == COLUMNS
    assert df.loc["T-depth-1 Toffoli", "Ancilla"] == 2778
    assert df.loc["logical-AND Toffoli", "T depth"] == 4


def test_round_table_has_stage_rows():
    df = TableReproducer().round_table()
    assert df.loc["T-depth-1 Toffoli / mixcolumns", "CNOT"] == 392
    assert df.loc["T-depth-1 Toffoli / total", "CNOT depth"] == 200
    assert df.loc["logical-AND Toffoli / total", "Ancilla"] == 32256


def test_aes_table_carries_monolithic_depth():
    df = TableReproducer().aes_table()
    assert list(df["Monolithic T depth"]) == [8, 9, 9]
    assert list(df["T depth"]) == [30, 36, 42]


def test_compare_table_marks_unprinted_cells():
    df = TableReproducer().compare_table()
    prior = df[df["Scheme"].str.startswith("prior")]
    assert (prior["CNOT depth"] == "NA").all()
    printed = df[df["Scheme"] == "this work (as printed)"]
    assert (printed["Flags"] != "").all()


def test_unknown_table():
    with pytest.raises(ValueError):
        TableReproducer().build("mixcolumns")


def test_renderers():
    tables = {"sbox": TableReproducer().sbox_table()}
    assert render_text(tables["sbox"], "== sbox ==").startswith("== sbox ==\n")
    payload = json.loads(render_json(tables))
    assert payload["sbox"]["columns"] == COLUMNS


def test_workbook_export(tmp_path):
    reproducer = TableReproducer()
    path = tmp_path / "tables.xlsx"
    export_workbook({"sbox": reproducer.sbox_table(), "aes": reproducer.aes_table()}, str(path))
    sheets = pd.read_excel(path, sheet_name=None, index_col=0)
    assert set(sheets) == {"sbox", "aes"}
    assert sheets["aes"].loc["AES-256", "T"] == 682752
