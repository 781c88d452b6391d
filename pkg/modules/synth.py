#!/usr/bin/env python3
"""
Synthesis Module for the T-depth Synthesis Tool
Compiles a multi-output Boolean function into a toffoli-level circuit with
four stages (fan-out, parallel monomial trees, output XOR, uncompute) and
lowers it to Clifford+T
"""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from config.settings import config
from modules.anf import Monomial, MultiOutputFunction, monomial_census
from modules.ciphers import published_example
from modules.circuit import (Circuit, CircuitBuilder, Gate, QubitRole, ResourceReport, cnot_depth,
                             cx, lower_toffolis, metrics, x)
from modules.decomp import ACCOUNTING, MctTree, build_mct_tree, build_toffoli_gadget, ceil_log2, tree_level_widths
from modules.estimate import ResourceBounds, function_specific_estimate, variable_occurrences

logger = logging.getLogger(__name__)

STAGES = ("fan-out", "monomials", "output", "uncompute")


@dataclass(frozen=True)
class SynthesisPlan:
    """Qubit allocation for one function: inputs, copies, storage, tree nodes, helpers, outputs"""
    n: int
    m: int
    variant: str
    monomials: Tuple[Monomial, ...]
    copy_counts: Tuple[int, ...]
    inputs: Tuple[int, ...]
    copies: Tuple[Tuple[int, ...], ...]
    storage: Tuple[int, ...]
    tree_nodes: Tuple[Tuple[int, ...], ...]
    helpers: Tuple[int, ...]
    outputs: Tuple[int, ...]

    @property
    def qubit_count(self) -> int:
        return self.n + sum(self.copy_counts) + len(self.storage) + sum(map(len, self.tree_nodes)) \
            + len(self.helpers) + self.m

    @property
    def copy_total(self) -> int:
        return sum(self.copy_counts)

    def roles(self) -> List[QubitRole]:
        return ([QubitRole.INPUT] * self.n + [QubitRole.INPUT_COPY] * self.copy_total
                + [QubitRole.STORAGE] * len(self.storage)
                + [QubitRole.TREE_NODE] * sum(map(len, self.tree_nodes))
                + [QubitRole.HELPER] * len(self.helpers) + [QubitRole.OUTPUT] * self.m)

    def holders(self) -> Dict[int, List[int]]:
        """Per variable, the original qubit followed by its copies, in monomial order"""
        return {i: [self.inputs[i], *self.copies[i]] for i in range(self.n)}


def plan(f: MultiOutputFunction, variant: Optional[str] = None) -> SynthesisPlan:
    variant = variant or config.get("default_variant", "tdepth1")
    ok, message = config.validate_variant(variant)
    if not ok:
        raise ValueError(message)
    monomials = f.nonlinear_monomials()
    copy_counts = tuple(max(c - 1, 0) for c in variable_occurrences(f))

    cursor = f.n
    inputs = tuple(range(f.n))
    copies = []
    for count in copy_counts:
        copies.append(tuple(range(cursor, cursor + count)))
        cursor += count
    storage = tuple(range(cursor, cursor + len(monomials)))
    cursor += len(monomials)
    tree_nodes = []
    for mono in monomials:
        size = max(mono.degree - 2, 0)
        tree_nodes.append(tuple(range(cursor, cursor + size)))
        cursor += size
    helper_count = 0
    if build_toffoli_gadget(variant).helper_count and monomials:
        per_level: Dict[int, int] = defaultdict(int)
        for mono in monomials:
            for level, width in enumerate(tree_level_widths(mono.degree)):
                per_level[level] += width
        helper_count = max(per_level.values())
    helpers = tuple(range(cursor, cursor + helper_count))
    cursor += helper_count
    outputs = tuple(range(cursor, cursor + f.m))
    logger.debug("plan: %d copies, %d storage, %d tree nodes, %d helpers over %d qubits",
                 sum(copy_counts), len(storage), sum(map(len, tree_nodes)), helper_count, cursor + f.m)
    return SynthesisPlan(f.n, f.m, variant, monomials, copy_counts, inputs, tuple(copies),
                         storage, tuple(tree_nodes), helpers, outputs)


def bipartite_edge_colouring(edges: Sequence[Tuple[Hashable, Hashable]]) -> List[List[Tuple[Hashable, Hashable]]]:
    """Split a simple bipartite edge list into max-degree rounds of disjoint edges (Kempe chain swaps)"""
    at: Dict[Tuple[str, Hashable], Dict[int, Tuple[str, Hashable]]] = defaultdict(dict)

    def free(vertex) -> int:
        colour = 0
        while colour in at[vertex]:
            colour += 1
        return colour

    for left, right in edges:
        u, v = ("L", left), ("R", right)
        a, b = free(u), free(v)
        if a in at[v]:
            path = []
            vertex, colour = v, a
            while colour in at[vertex]:
                nxt = at[vertex][colour]
                path.append((vertex, nxt, colour))
                vertex, colour = nxt, (b if colour == a else a)
            for p, q, colour in path:
                del at[p][colour]
                del at[q][colour]
            for p, q, colour in path:
                swapped = b if colour == a else a
                at[p][swapped] = q
                at[q][swapped] = p
        at[u][a] = v
        at[v][a] = u

    rounds: Dict[int, List[Tuple[Hashable, Hashable]]] = defaultdict(list)
    for vertex, colours in at.items():
        if vertex[0] == "L":
            for colour, other in colours.items():
                rounds[colour].append((vertex[1], other[1]))
    return [sorted(rounds[c]) for c in sorted(rounds)]


def _fan_out(p: SynthesisPlan) -> List[Gate]:
    """Doubling cascade per variable, emitted round by round"""
    rounds: Dict[int, List[Gate]] = defaultdict(list)
    for i in range(p.n):
        filled = [p.inputs[i]]
        pending = list(p.copies[i])
        depth = 0
        while pending:
            for holder in list(filled):
                if not pending:
                    break
                copy = pending.pop(0)
                rounds[depth].append(cx(holder, copy))
                filled.append(copy)
            depth += 1
    return [g for d in sorted(rounds) for g in rounds[d]]


def _trees(p: SynthesisPlan) -> List[MctTree]:
    holders = p.holders()
    used = defaultdict(int)
    trees = []
    for mono, target, nodes in zip(p.monomials, p.storage, p.tree_nodes):
        controls = []
        for i in mono.vars:
            controls.append(holders[i][used[i]])
            used[i] += 1
        trees.append(build_mct_tree(mono.degree, target=target, controls=controls, nodes=nodes))
    return trees


def build_toffoli_circuit(f: MultiOutputFunction, p: SynthesisPlan) -> Circuit:
    builder = CircuitBuilder()
    builder.allocate(QubitRole.INPUT, p.n)
    builder.allocate(QubitRole.INPUT_COPY, p.copy_total)
    builder.allocate(QubitRole.STORAGE, len(p.storage))
    builder.allocate(QubitRole.TREE_NODE, sum(map(len, p.tree_nodes)))
    builder.allocate(QubitRole.HELPER, len(p.helpers))
    builder.allocate(QubitRole.OUTPUT, p.m)

    fan_out = _fan_out(p)
    trees = _trees(p)
    with builder.stage("fan-out"):
        builder.extend(fan_out)
    with builder.stage("monomials"):
        # level-major order keeps helper reuse within earlier Toffoli layers
        ordered = sorted(((level, index, gate) for index, tree in enumerate(trees)
                          for level, gate in zip(tree.levels, tree.compute)), key=lambda e: (e[0], e[1]))
        builder.extend(gate for _, _, gate in ordered)
    with builder.stage("output"):
        storage_of = dict(zip(p.monomials, p.storage))
        edges = []
        for j, coord in enumerate(f.coords):
            for mono in coord.monomials:
                source = storage_of[mono] if mono.degree >= 2 else p.inputs[mono.vars[0]]
                edges.append((source, p.outputs[j]))
        for round_edges in bipartite_edge_colouring(edges):
            builder.extend(cx(source, out) for source, out in round_edges)
        builder.extend(x(p.outputs[j]) for j, coord in enumerate(f.coords) if coord.a0)
    with builder.stage("uncompute"):
        builder.extend(marker for tree in trees if (marker := tree.root_marker()) is not None)
        node_markers = sorted(((-level, index, pos, gate) for index, tree in enumerate(trees)
                               for pos, (level, gate) in enumerate(zip(tree.levels[:-1], tree.compute[:-1]))),
                              key=lambda e: (e[0], e[1], -e[2]))
        builder.extend(Gate(g.kind, g.qubits, uncompute=True) for _, _, _, g in node_markers)
        builder.extend(reversed(fan_out))
    return builder.build()


@dataclass(frozen=True)
class StageDepthReport:
    """Accounted CNOT depth per stage, optionally beside the measured values"""
    fan_out: int
    output: int
    gadget: int
    uncompute_fan_out: int
    measured: Dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def total(self) -> int:
        return self.fan_out + self.output + self.gadget + self.uncompute_fan_out

    def to_dict(self) -> Dict[str, Any]:
        return {"fan_out": self.fan_out, "output": self.output, "gadget": self.gadget,
                "uncompute_fan_out": self.uncompute_fan_out, "total": self.total,
                "measured": dict(self.measured)}


def stage_depth_report(p: SynthesisPlan, f: MultiOutputFunction,
                       circuit: Optional[Circuit] = None) -> StageDepthReport:
    census = monomial_census(f)
    occurrences = [c + 1 for c in p.copy_counts]
    fan_out = ceil_log2(max(occurrences, default=1)) if p.monomials else 0
    levels = ceil_log2(census.degree) if census.degree >= 2 else 0
    measured = {}
    if circuit is not None:
        measured = {name: cnot_depth(circuit.stage(name)) for name, _, _ in circuit.stages}
        measured["whole"] = cnot_depth(circuit)
    return StageDepthReport(fan_out, census.max_terms, ACCOUNTING[p.variant][2] * levels, fan_out, measured)


@dataclass
class SynthesisResult:
    function: MultiOutputFunction
    plan: SynthesisPlan
    toffoli_circuit: Circuit
    circuit: Circuit
    report: ResourceReport
    stage_depths: StageDepthReport
    accounting: ResourceBounds
    published: Optional[Tuple[str, Dict[str, int]]] = None

    def deltas(self) -> Dict[str, int]:
        """Measured minus accounted, per metric"""
        measured = self.report
        return {
            "ancilla": measured.ancilla_count - self.accounting.ancilla,
            "t_count": measured.t_count - self.accounting.t_count,
            "t_depth": measured.t_depth - self.accounting.t_depth,
            "cnot_count": measured.cnot_count - self.accounting.cnot_count,
            "cnot_depth": measured.cnot_depth - self.accounting.cnot_depth,
        }

    def published_deltas(self) -> Optional[Dict[str, Any]]:
        """Measured against the printed figures of a matching worked example"""
        if self.published is None:
            return None
        name, printed = self.published
        measured = self.report.to_dict()
        measured["ancilla"] = measured["ancilla_count"]
        figures = {metric: {"printed": value, "measured": measured[metric], "delta": measured[metric] - value}
                   for metric, value in printed.items()}
        return {"example": name, "figures": figures}

    def to_dict(self) -> Dict[str, Any]:
        r = self.report
        return {
            "n": self.function.n,
            "m": self.function.m,
            "variant": self.plan.variant,
            "ancilla": r.ancilla_count,
            "t_count": r.t_count,
            "t_depth": r.t_depth,
            "cnot_count": r.cnot_count,
            "cnot_depth": r.cnot_depth,
            "total_depth": r.total_depth,
            "measurements": r.measure_count,
            "stage_depths": self.stage_depths.to_dict(),
            "accounted_ancilla": self.accounting.ancilla,
            "accounted_t_count": self.accounting.t_count,
            "accounted_t_depth": self.accounting.t_depth,
            "accounted_cnot_count": self.accounting.cnot_count,
            "accounted_cnot_depth": self.accounting.cnot_depth,
            "deltas": self.deltas(),
            "published": self.published_deltas(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def synthesize(f: MultiOutputFunction, variant: Optional[str] = None) -> SynthesisResult:
    p = plan(f, variant)
    toffoli_circuit = build_toffoli_circuit(f, p)
    circuit = lower_toffolis(toffoli_circuit, p.variant)
    report = metrics(circuit)
    result = SynthesisResult(f, p, toffoli_circuit, circuit, report,
                             stage_depth_report(p, f, circuit), function_specific_estimate(f, p.variant),
                             published_example(f) if p.variant == "tdepth1" else None)
    logger.info("synthesized n=%d m=%d with %s: T %d, T depth %d, CNOT %d, ancilla %d",
                f.n, f.m, p.variant, report.t_count, report.t_depth, report.cnot_count, report.ancilla_count)
    for metric, delta in result.deltas().items():
        if delta > 0:
            logger.warning("measured %s exceeds the accounted figure by %d", metric, delta)
    printed = result.published_deltas()
    if printed:
        for metric, figure in printed["figures"].items():
            if figure["delta"] > 0:
                logger.warning("%s: measured %s %d exceeds the printed %d", printed["example"], metric,
                               figure["measured"], figure["printed"])
    return result
