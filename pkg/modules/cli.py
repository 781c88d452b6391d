#!/usr/bin/env python3
"""
Command-line front end for the T-depth Synthesis Tool
Commands: synth, estimate, verify, tables, gadget-check
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from config.settings import VARIANTS, config, configure_logging
from modules.anf import MultiOutputFunction, load_function, parse_anf, parse_truth_table, read_text
from modules.circuit import GateKind, Granularity, export_text, lower_toffolis, metrics, parse_text
from modules.ciphers import aes_sbox, lowmc_sbox
from modules.decomp import build_mct_tree, build_toffoli_gadget, build_uncompute_gadget, cost_model
from modules.errors import (AnfFormatError, AnfSyntaxError, CircuitParseError, EstimateDomainError,
                            GranularityError, IntegrityError, SimulationSizeError)
from modules.estimate import (function_specific_estimate, summation_bounds, theorem1_bounds)
from modules.synth import synthesize
from modules.tables import TABLE_NAMES, TableReproducer, export_workbook, render_json, render_text
from modules.verify import check_mct_tree, check_small_circuit, exhaustive_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILED = 3

BUILTINS = {"aes_sbox": aes_sbox, "lowmc_sbox": lowmc_sbox}
PARSE_ERRORS = (AnfFormatError, AnfSyntaxError, CircuitParseError, EstimateDomainError, OSError)


@dataclass
class RunConfig:
    """Parsed command line"""
    command: str
    anf: Optional[str] = None
    table: Optional[str] = None
    expr: Optional[str] = None
    variant: str = "tdepth1"
    out: Optional[str] = None
    toffoli_out: Optional[str] = None
    report: Optional[str] = None
    verify: bool = False
    json: bool = False
    verbosity: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        return cls(**fields)

    def has_source(self) -> bool:
        return any((self.anf, self.table, self.expr))


def load_source(run: RunConfig) -> MultiOutputFunction:
    """Exactly one of --anf (path or builtin name), --table, --expr"""
    if sum(bool(s) for s in (run.anf, run.table, run.expr)) != 1:
        raise AnfFormatError("give exactly one of --anf, --table or --expr")
    if run.anf:
        if run.anf in BUILTINS and not os.path.exists(run.anf):
            return BUILTINS[run.anf]()
        return load_function(run.anf)
    if run.table:
        return parse_truth_table(read_text(run.table))
    return parse_anf(run.expr.replace(";", "\n"))


def _write(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def cmd_synth(run: RunConfig) -> int:
    f = load_source(run)
    result = synthesize(f, run.variant)
    if run.out:
        _write(run.out, export_text(result.circuit))
    if run.toffoli_out:
        _write(run.toffoli_out, export_text(result.toffoli_circuit))
    if run.report:
        _write(run.report, result.to_json() + "\n")
    if run.json:
        print(result.to_json())
    else:
        r = result.report
        print(f"📊 n={f.n} m={f.m} variant={run.variant}")
        print(f"   ancilla {r.ancilla_count} (accounted {result.accounting.ancilla})")
        print(f"   T count {r.t_count}, T depth {r.t_depth}")
        print(f"   CNOT count {r.cnot_count} (accounted {result.accounting.cnot_count}), CNOT depth {r.cnot_depth}")
        print(f"   measurements {r.measure_count}, total depth {r.total_depth}")
        printed = result.published_deltas()
        if printed:
            for metric, figure in printed["figures"].items():
                mark = "⚠️" if figure["delta"] > 0 else "  "
                print(f" {mark} {metric}: printed {figure['printed']} for {printed['example']}, delta {figure['delta']:+d}")
    if run.verify:
        if f.n > config.get("verify_max_inputs", 20):
            print(f"⚠️ skipping verification: n={f.n} exceeds the exhaustive guard")
        else:
            check = exhaustive_check(result.toffoli_circuit, f)
            if not check.passed:
                print(f"❌ verification failed: {check.first_failure}")
                return EXIT_FAILED
            print(f"✅ verified over {check.checked} points")
    return EXIT_OK


def cmd_estimate(run: RunConfig, n: Optional[int], m: Optional[int], max_degree: Optional[int]) -> int:
    records = []
    f = load_source(run) if run.has_source() else None
    if f is not None:
        n = n or f.n
        m = m or f.m
    if n is None or m is None:
        raise EstimateDomainError("estimate needs -n and -m or a function source")
    closed = theorem1_bounds(n, m, run.variant)
    summed = summation_bounds(n, m, run.variant)
    records.extend([closed, summed])
    if max_degree is not None:
        records.append(summation_bounds(n, m, run.variant, max_degree))
    if f is not None:
        records.append(function_specific_estimate(f, run.variant))
    identity = all(getattr(closed, k) == getattr(summed, k)
                   for k in ("ancilla", "t_count", "cnot_count", "cnot_depth", "t_depth"))
    if run.json:
        print(json.dumps({"bounds": [r.to_dict() for r in records], "identity_holds": identity}, indent=2))
    else:
        for r in records:
            print(f"{r.source:>17}: ancilla {r.ancilla}, CNOT {r.cnot_count}, CNOT depth {r.cnot_depth}, "
                  f"T {r.t_count}, T depth {r.t_depth}")
        print(("✅" if identity else "❌") + " closed form equals summation")
    return EXIT_OK if identity else EXIT_FAILED


def cmd_verify(run: RunConfig, circuit_path: str) -> int:
    f = load_source(run)
    try:
        text = read_text(circuit_path)
    except AnfFormatError as exc:
        raise CircuitParseError(str(exc)) from exc
    circuit = parse_text(text)
    if circuit.granularity is Granularity.TOFFOLI:
        report = exhaustive_check(circuit, f)
    elif circuit.num_qubits <= config.get("statevector_max_qubits", 14):
        report = check_small_circuit(circuit, f)
    else:
        print(f"❌ {circuit.num_qubits}-qubit Clifford+T circuit is too wide to simulate; verify the toffoli-level file")
        return EXIT_USAGE
    print(report.to_json() if run.json else
          ("✅" if report.passed else "❌") + f" checked {report.checked}, failures {len(report.failures)}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_tables(run: RunConfig, which: str, xlsx: Optional[str]) -> int:
    reproducer = TableReproducer()
    names = TABLE_NAMES if which == "all" else (which,)
    tables = {name: reproducer.build(name) for name in names}
    if run.json:
        print(render_json(tables))
    else:
        for name, df in tables.items():
            print(render_text(df, f"== {name} =="))
            print()
    if xlsx:
        export_workbook(tables, xlsx)
    for mismatch in reproducer.mismatches:
        print(f"❌ {mismatch}")
    return EXIT_FAILED if reproducer.mismatches else EXIT_OK


def cmd_gadget_check(run: RunConfig, max_k: int) -> int:
    status = EXIT_OK
    try:
        build_uncompute_gadget()
        print("✅ measurement uncompute gadget: T 0")
    except IntegrityError as e:
        print(f"❌ {e}")
        return EXIT_FAILED
    for variant in VARIANTS:
        try:
            gadget = build_toffoli_gadget(variant)
        except IntegrityError as e:
            print(f"❌ {e}")
            return EXIT_FAILED
        accounting = cost_model(2, variant)
        print(f"✅ {variant}: T {gadget.t_count}, T depth {gadget.t_depth}, CNOT {gadget.cnot_count} "
              f"(accounting {accounting.cnot_count}), CNOT depth {gadget.cnot_depth}, helpers {gadget.helper_count}")
        for k in range(1, max_k + 1):
            tree_circuit = build_mct_tree(k).to_circuit(variant)
            check = check_mct_tree(tree_circuit, k)
            lowered = metrics(lower_toffolis(tree_circuit, variant))
            mark = "✅" if check.passed else "❌"
            print(f"   {mark} k={k}: Toffolis {tree_circuit.count(GateKind.TOFFOLI)}, "
                  f"T {lowered.t_count}, T depth {lowered.t_depth}")
            if not check.passed:
                status = EXIT_FAILED
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdepth_tool",
                                     description="T-depth-optimal Clifford+T synthesis of Boolean functions")
    parser.add_argument("-v", "--verbose", action="count", default=0, dest="verbosity")
    parser.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def sources(p: argparse.ArgumentParser, required: bool) -> None:
        group = p.add_mutually_exclusive_group(required=required)
        group.add_argument("--anf", help="ANF file or builtin name (aes_sbox, lowmc_sbox)")
        group.add_argument("--table", help="truth-table file")
        group.add_argument("--expr", help="inline ANF, coordinates separated by ';'")

    def variant(p: argparse.ArgumentParser) -> None:
        p.add_argument("--variant", choices=VARIANTS, default=config.get("default_variant", "tdepth1"))

    synth = sub.add_parser("synth", help="synthesize a Clifford+T circuit")
    sources(synth, True)
    variant(synth)
    synth.add_argument("--out", help="Clifford+T circuit file")
    synth.add_argument("--toffoli-out", help="toffoli-level circuit file")
    synth.add_argument("--report", help="JSON resource report file")
    synth.add_argument("--verify", action="store_true", help="exhaustively check the toffoli-level circuit")
    synth.add_argument("--json", action="store_true")

    estimate = sub.add_parser("estimate", help="closed-form and summation resource bounds")
    sources(estimate, False)
    variant(estimate)
    estimate.add_argument("-n", type=int)
    estimate.add_argument("-m", type=int)
    estimate.add_argument("--max-degree", type=int)
    estimate.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify", help="check a circuit file against a function")
    sources(verify, True)
    verify.add_argument("--circuit", required=True)
    verify.add_argument("--json", action="store_true")

    tables = sub.add_parser("tables", help="reproduce the resource tables")
    tables.add_argument("which", choices=TABLE_NAMES + ("all",), nargs="?", default="all")
    tables.add_argument("--json", action="store_true")
    tables.add_argument("--xlsx", help="write every table to an Excel workbook")

    gadgets = sub.add_parser("gadget-check", help="verify the Toffoli gadgets and MCT trees")
    gadgets.add_argument("--max-k", type=int, default=8)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("WARNING" if args.quiet else ("DEBUG" if args.verbosity > 1 else
                                                    "INFO" if args.verbosity else "WARNING"))
    run = RunConfig.from_args(args)
    try:
        if args.command == "synth":
            return cmd_synth(run)
        if args.command == "estimate":
            return cmd_estimate(run, args.n, args.m, args.max_degree)
        if args.command == "verify":
            return cmd_verify(run, args.circuit)
        if args.command == "tables":
            return cmd_tables(run, args.which, args.xlsx)
        return cmd_gadget_check(run, args.max_k)
    except PARSE_ERRORS as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GranularityError, SimulationSizeError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
