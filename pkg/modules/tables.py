#!/usr/bin/env python3
"""
Tables Module for the T-depth Synthesis Tool
Handles computing the S-box, round, full-cipher and comparison tables as
DataFrames, diffing them against the published cells and exporting them
"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import pandas as pd

from modules.ciphers import (AES_VARIANTS, PUBLISHED_TABLES, aes_full_costs, aes_round_costs,
                             comparison_table, monolithic_t_depth, sbox_costs)

logger = logging.getLogger(__name__)

COLUMNS = ["Ancilla", "CNOT", "CNOT depth", "T", "T depth"]
TABLE_NAMES = ("sbox", "round", "aes", "compare")
VARIANT_LABELS = {"tdepth1": "T-depth-1 Toffoli", "logical-and": "logical-AND Toffoli"}


@dataclass(frozen=True)
class CellMismatch:
    table: str
    row: str
    column: str
    expected: Any
    computed: Any

    def __str__(self) -> str:
        return f"{self.table} / {self.row} / {self.column}: expected {self.expected}, computed {self.computed}"


class TableReproducer:
    """Builds each resource table and diffs it against the published cells"""

    def __init__(self):
        self.mismatches: List[CellMismatch] = []

    def _diff(self, table: str, df: pd.DataFrame, expected: Dict[str, tuple]) -> None:
        for row, cells in expected.items():
            for column, value in zip(COLUMNS, cells):
                computed = df.loc[row, column]
                if value is not None and int(computed) != value:
                    self.mismatches.append(CellMismatch(table, row, column, value, int(computed)))

    def sbox_table(self) -> pd.DataFrame:
        rows = {VARIANT_LABELS[v]: sbox_costs(v).as_tuple() for v in VARIANT_LABELS}
        df = pd.DataFrame.from_dict(rows, orient="index", columns=COLUMNS)
        self._diff("sbox", df, {VARIANT_LABELS[v]: c for v, c in PUBLISHED_TABLES["sbox"].items()})
        return df

    def round_table(self) -> pd.DataFrame:
        rows = {}
        for variant, label in VARIANT_LABELS.items():
            costs = aes_round_costs(variant)
            for stage in ("subbytes", "mixcolumns", "addroundkey", "shiftrows"):
                rows[f"{label} / {stage}"] = getattr(costs, stage).as_tuple()
            rows[f"{label} / total"] = costs.total.as_tuple()
        df = pd.DataFrame.from_dict(rows, orient="index", columns=COLUMNS)
        self._diff("round", df, {f"{VARIANT_LABELS[v]} / total": c for v, c in PUBLISHED_TABLES["round"].items()})
        return df

    def aes_table(self) -> pd.DataFrame:
        rows = {f"AES-{p.key_bits}": aes_full_costs(p).as_tuple() for p in AES_VARIANTS}
        df = pd.DataFrame.from_dict(rows, orient="index", columns=COLUMNS)
        df["Monolithic T depth"] = [monolithic_t_depth(p) for p in AES_VARIANTS]
        self._diff("aes", df, {f"AES-{k}": c for k, c in PUBLISHED_TABLES["aes"].items()})
        return df

    def compare_table(self) -> pd.DataFrame:
        records = []
        for row in comparison_table():
            record = {"Scheme": row.label, "Key bits": row.key_bits}
            record.update({col: ("NA" if cell is None else cell) for col, cell in zip(COLUMNS, row.cells)})
            record["Flags"] = "; ".join(row.flags)
            records.append(record)
        return pd.DataFrame.from_records(records)

    def build(self, which: str) -> pd.DataFrame:
        builders = {"sbox": self.sbox_table, "round": self.round_table,
                    "aes": self.aes_table, "compare": self.compare_table}
        if which not in builders:
            raise ValueError(f"unknown table {which!r}, expected one of {', '.join(TABLE_NAMES)}")
        return builders[which]()

    def build_all(self) -> Dict[str, pd.DataFrame]:
        return {name: self.build(name) for name in TABLE_NAMES}


def render_text(df: pd.DataFrame, title: Optional[str] = None) -> str:
    body = df.to_string()
    return f"{title}\n{body}" if title else body


def render_json(tables: Dict[str, pd.DataFrame]) -> str:
    payload = {name: json.loads(df.to_json(orient="split")) for name, df in tables.items()}
    return json.dumps(payload, indent=2)


def export_workbook(tables: Dict[str, pd.DataFrame], path: str) -> None:
    """Write every table to its own sheet"""
    try:
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            for name, df in tables.items():
                df.to_excel(writer, sheet_name=name)
        logger.info("wrote %d table(s) to %s", len(tables), path)
    except Exception as e:
        logger.error("failed to write workbook %s: %s", path, e)
        raise
