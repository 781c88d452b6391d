#!/usr/bin/env python3
"""
Circuit Module for the T-depth Synthesis Tool
Gate-level intermediate representation with qubit roles, ASAP scheduling,
exact T/CNOT metrics and the OpenQASM-compatible text dialect
"""

import re
import logging
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from modules.errors import (AllocationError, CircuitParseError, CircuitValidationError,
                            GranularityError)

logger = logging.getLogger(__name__)


class QubitRole(str, Enum):
    INPUT = "input"
    OUTPUT = "output"
    INPUT_COPY = "input-copy"
    STORAGE = "storage"
    TREE_NODE = "tree-node"
    HELPER = "helper"


class GateKind(str, Enum):
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    X = "x"
    Z = "z"
    CZ = "cz"
    CNOT = "cx"
    TOFFOLI = "ccx"
    MEASURE_X = "measure_x"
    MEASURE_Z = "measure_z"
    CC_CORRECT = "cc_correct"


class Granularity(str, Enum):
    TOFFOLI = "toffoli"
    CLIFFORD_T = "clifford-t"


ARITY = {
    GateKind.H: 1, GateKind.S: 1, GateKind.SDG: 1, GateKind.T: 1, GateKind.TDG: 1,
    GateKind.X: 1, GateKind.Z: 1, GateKind.CZ: 2, GateKind.CNOT: 2, GateKind.TOFFOLI: 3,
    GateKind.MEASURE_X: 1, GateKind.MEASURE_Z: 1,
}
CORRECTIONS = (GateKind.Z, GateKind.CZ, GateKind.X)
MEASUREMENTS = (GateKind.MEASURE_X, GateKind.MEASURE_Z)
T_KINDS = (GateKind.T, GateKind.TDG)


@dataclass(frozen=True)
class Gate:
    """One gate; qubits are (controls..., target)"""
    kind: GateKind
    qubits: Tuple[int, ...]
    clbit: Optional[int] = None
    correction: Optional[GateKind] = None
    uncompute: bool = False

    def __post_init__(self):
        if self.kind is GateKind.CC_CORRECT:
            if self.correction not in CORRECTIONS:
                raise CircuitValidationError(f"classically controlled corrections must be Z, CZ or X, got {self.correction}")
            arity = ARITY[self.correction]
        else:
            arity = ARITY[self.kind]
        if len(self.qubits) != arity:
            raise CircuitValidationError(f"{self.kind.value} takes {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitValidationError(f"operands must be distinct: {self.kind.value} {self.qubits}")
        needs_clbit = self.kind in MEASUREMENTS or self.kind is GateKind.CC_CORRECT
        if needs_clbit != (self.clbit is not None):
            raise CircuitValidationError(f"{self.kind.value} classical bit mismatch")
        if self.uncompute and self.kind is not GateKind.TOFFOLI:
            raise CircuitValidationError("only TOFFOLI gates carry the uncompute marker")

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def controls(self) -> Tuple[int, ...]:
        return self.qubits[:-1]


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def t(q: int) -> Gate:
    return Gate(GateKind.T, (q,))


def tdg(q: int) -> Gate:
    return Gate(GateKind.TDG, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def ccx(a: int, b: int, target: int, uncompute: bool = False) -> Gate:
    return Gate(GateKind.TOFFOLI, (a, b, target), uncompute=uncompute)


def measure_x(q: int, clbit: int) -> Gate:
    return Gate(GateKind.MEASURE_X, (q,), clbit=clbit)


def measure_z(q: int, clbit: int) -> Gate:
    return Gate(GateKind.MEASURE_Z, (q,), clbit=clbit)


def cc_correct(clbit: int, correction: GateKind, *qubits: int) -> Gate:
    return Gate(GateKind.CC_CORRECT, tuple(qubits), clbit=clbit, correction=correction)


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list over a qubit table; stages name gate index spans"""
    roles: Tuple[QubitRole, ...]
    gates: Tuple[Gate, ...] = ()
    granularity: Granularity = Granularity.TOFFOLI
    num_clbits: int = 0
    stages: Tuple[Tuple[str, int, int], ...] = ()

    def __post_init__(self):
        written = set()
        for index, gate in enumerate(self.gates):
            if any(q < 0 or q >= len(self.roles) for q in gate.qubits):
                raise CircuitValidationError(f"gate {index} ({gate.kind.value}) references an unallocated qubit")
            if gate.clbit is not None:
                if not 0 <= gate.clbit < self.num_clbits:
                    raise CircuitValidationError(f"gate {index} references unallocated classical bit {gate.clbit}")
                if gate.kind in MEASUREMENTS:
                    written.add(gate.clbit)
                elif gate.clbit not in written:
                    raise CircuitValidationError(f"gate {index} reads classical bit {gate.clbit} before it is measured")
            if gate.kind is GateKind.TOFFOLI and self.granularity is Granularity.CLIFFORD_T:
                raise CircuitValidationError(f"gate {index}: TOFFOLI is not allowed after Clifford+T lowering")

    @property
    def num_qubits(self) -> int:
        return len(self.roles)

    def qubits_with_role(self, role: QubitRole) -> Tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roles) if r is role)

    @property
    def inputs(self) -> Tuple[int, ...]:
        return self.qubits_with_role(QubitRole.INPUT)

    @property
    def outputs(self) -> Tuple[int, ...]:
        return self.qubits_with_role(QubitRole.OUTPUT)

    def count(self, *kinds: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)

    def concat(self, other: "Circuit") -> "Circuit":
        """Run self then other on the same qubit table; other's classical bits are shifted"""
        if other.roles != self.roles:
            raise CircuitValidationError("concatenated circuits must share the qubit table")
        offset = self.num_clbits
        shifted = tuple(Gate(g.kind, g.qubits, None if g.clbit is None else g.clbit + offset,
                             g.correction, g.uncompute) for g in other.gates)
        base = len(self.gates)
        granularity = (Granularity.TOFFOLI if Granularity.TOFFOLI in (self.granularity, other.granularity)
                       else Granularity.CLIFFORD_T)
        return Circuit(self.roles, self.gates + shifted, granularity, offset + other.num_clbits,
                       self.stages + tuple((name, a + base, b + base) for name, a, b in other.stages))

    def slice(self, start: int, stop: int) -> "Circuit":
        """Gates [start, stop) with every classical bit they read measured inside the slice"""
        gates = self.gates[start:stop]
        measured = {g.clbit for g in gates if g.kind in MEASUREMENTS}
        gates = tuple(g for g in gates if g.kind is not GateKind.CC_CORRECT or g.clbit in measured)
        return Circuit(self.roles, gates, self.granularity, self.num_clbits)

    def stage(self, name: str) -> "Circuit":
        for stage_name, start, stop in self.stages:
            if stage_name == name:
                return self.slice(start, stop)
        raise KeyError(name)


class CircuitBuilder:
    """Mutable helper that allocates qubits in order and records stage spans"""

    def __init__(self, granularity: Granularity = Granularity.TOFFOLI):
        self.granularity = granularity
        self.roles: List[QubitRole] = []
        self.gates: List[Gate] = []
        self.num_clbits = 0
        self.stages: List[Tuple[str, int, int]] = []

    def allocate(self, role: QubitRole, count: int = 1) -> List[int]:
        start = len(self.roles)
        self.roles.extend([role] * count)
        return list(range(start, start + count))

    def allocate_one(self, role: QubitRole) -> int:
        return self.allocate(role, 1)[0]

    def clbit(self) -> int:
        self.num_clbits += 1
        return self.num_clbits - 1

    def add(self, gate: Gate) -> None:
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        self.gates.extend(gates)

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = len(self.gates)
        yield
        self.stages.append((name, start, len(self.gates)))

    def build(self) -> Circuit:
        return Circuit(tuple(self.roles), tuple(self.gates), self.granularity,
                       self.num_clbits, tuple(self.stages))


# ------------------------------------------------------------------ scheduling

@dataclass(frozen=True)
class Schedule:
    """ASAP layers of gate indices"""
    layers: Tuple[Tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)


def dependency_graph(circuit: Circuit) -> nx.DiGraph:
    """DAG with an edge from each gate to the next gate on every qubit or classical bit it touches"""
    graph = nx.DiGraph()
    last_on_qubit: Dict[int, int] = {}
    last_on_clbit: Dict[int, int] = {}
    for index, gate in enumerate(circuit.gates):
        graph.add_node(index, gate=gate)
        for q in gate.qubits:
            if q in last_on_qubit:
                graph.add_edge(last_on_qubit[q], index)
            last_on_qubit[q] = index
        if gate.clbit is not None:
            if gate.clbit in last_on_clbit:
                graph.add_edge(last_on_clbit[gate.clbit], index)
            last_on_clbit[gate.clbit] = index
    return graph


def schedule(circuit: Circuit) -> Schedule:
    graph = dependency_graph(circuit)
    return Schedule(tuple(tuple(sorted(layer)) for layer in nx.topological_generations(graph)))


def weighted_depth(circuit: Circuit, weight: Callable[[Gate], int]) -> int:
    """Longest dependency path where each gate contributes weight(gate)"""
    clock = [0] * circuit.num_qubits
    clbit_clock = [0] * circuit.num_clbits
    deepest = 0
    for gate in circuit.gates:
        level = max(clock[q] for q in gate.qubits)
        if gate.clbit is not None:
            level = max(level, clbit_clock[gate.clbit])
        level += weight(gate)
        for q in gate.qubits:
            clock[q] = level
        if gate.clbit is not None:
            clbit_clock[gate.clbit] = level
        deepest = max(deepest, level)
    return deepest


def toffoli_layers(circuit: Circuit) -> Dict[int, int]:
    """Toffoli-weighted ASAP level of every forward (compute) Toffoli, keyed by gate index"""
    clock = [0] * circuit.num_qubits
    levels: Dict[int, int] = {}
    for index, gate in enumerate(circuit.gates):
        if gate.kind is GateKind.TOFFOLI and not gate.uncompute:
            level = max(clock[q] for q in gate.qubits) + 1
            levels[index] = level
        else:
            level = max(clock[q] for q in gate.qubits)
        for q in gate.qubits:
            clock[q] = level
    return levels


@dataclass(frozen=True)
class ResourceReport:
    """Exact measured resources of a Clifford+T circuit"""
    qubit_count: int
    ancilla_count: int
    t_count: int
    t_depth: int
    cnot_count: int
    cnot_depth: int
    total_depth: int
    measure_count: int

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


def _is_t(gate: Gate) -> int:
    return 1 if gate.kind in T_KINDS else 0


def _is_cnot(gate: Gate) -> int:
    return 1 if gate.kind is GateKind.CNOT else 0


def metrics(circuit: Circuit) -> ResourceReport:
    if circuit.granularity is not Granularity.CLIFFORD_T:
        raise GranularityError("TOFFOLI gates carry no intrinsic T cost; lower the circuit first")
    return ResourceReport(
        qubit_count=circuit.num_qubits,
        ancilla_count=circuit.num_qubits - len(circuit.inputs) - len(circuit.outputs),
        t_count=circuit.count(*T_KINDS),
        t_depth=weighted_depth(circuit, _is_t),
        cnot_count=circuit.count(GateKind.CNOT),
        cnot_depth=weighted_depth(circuit, _is_cnot),
        total_depth=weighted_depth(circuit, lambda g: 1),
        measure_count=circuit.count(*MEASUREMENTS),
    )


def cnot_depth(circuit: Circuit) -> int:
    return weighted_depth(circuit, _is_cnot)


# ---------------------------------------------------------------- text dialect

def _operands(qubits: Sequence[int]) -> str:
    return ", ".join(f"q[{q}]" for q in qubits)


def _gate_line(gate: Gate) -> str:
    if gate.kind is GateKind.MEASURE_X:
        q = gate.qubits[0]
        return f"h q[{q}]; measure q[{q}] -> c[{gate.clbit}];"
    if gate.kind is GateKind.MEASURE_Z:
        return f"measure q[{gate.qubits[0]}] -> c[{gate.clbit}];"
    if gate.kind is GateKind.CC_CORRECT:
        return f"if (c[{gate.clbit}] == 1) {gate.correction.value} {_operands(gate.qubits)};"
    line = f"{gate.kind.value} {_operands(gate.qubits)};"
    return line + " // uncompute" if gate.uncompute else line


def export_text(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";',
             f"// granularity: {circuit.granularity.value}",
             f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    lines.extend(f"// q[{i}]: {role.value}" for i, role in enumerate(circuit.roles))
    lines.extend(f"// stage {name}: {start} {stop}" for name, start, stop in circuit.stages)
    lines.extend(_gate_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_QREF = r"q\[(\d+)\]"
_RE_GRANULARITY = re.compile(r"^// granularity: (toffoli|clifford-t)$")
_RE_QREG = re.compile(r"^qreg q\[(\d+)\];$")
_RE_CREG = re.compile(r"^creg c\[(\d+)\];$")
_RE_ROLE = re.compile(r"^// " + _QREF + r": ([a-z-]+)$")
_RE_STAGE = re.compile(r"^// stage ([\w-]+): (\d+) (\d+)$")
_RE_MEASURE_X = re.compile(r"^h " + _QREF + r"; measure " + _QREF + r" -> c\[(\d+)\];$")
_RE_MEASURE_Z = re.compile(r"^measure " + _QREF + r" -> c\[(\d+)\];$")
_RE_IF = re.compile(r"^if \(c\[(\d+)\] == 1\) (cz|x|z) (.+);$")
_RE_GATE = re.compile(r"^(h|s|sdg|t|tdg|x|z|cz|cx|ccx) ([^;]+);(\s*// uncompute)?$")


def _parse_operands(text: str, line_no: int) -> Tuple[int, ...]:
    refs = [part.strip() for part in text.split(",")]
    qubits = []
    for ref in refs:
        match = re.fullmatch(_QREF, ref)
        if not match:
            raise CircuitParseError(f"bad qubit reference {ref!r}", line_no)
        qubits.append(int(match.group(1)))
    return tuple(qubits)


def parse_text(text: str) -> Circuit:
    """Inverse of export_text"""
    granularity = Granularity.TOFFOLI
    num_qubits: Optional[int] = None
    num_clbits = 0
    roles: Dict[int, QubitRole] = {}
    stages: List[Tuple[str, int, int]] = []
    gates: List[Gate] = []
    saw_granularity = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        try:
            if (m := _RE_GRANULARITY.match(line)):
                granularity = Granularity(m.group(1))
                saw_granularity = True
            elif (m := _RE_QREG.match(line)):
                num_qubits = int(m.group(1))
            elif (m := _RE_CREG.match(line)):
                num_clbits = int(m.group(1))
            elif (m := _RE_ROLE.match(line)):
                roles[int(m.group(1))] = QubitRole(m.group(2))
            elif (m := _RE_STAGE.match(line)):
                stages.append((m.group(1), int(m.group(2)), int(m.group(3))))
            elif line.startswith("//"):
                continue
            elif (m := _RE_MEASURE_X.match(line)):
                if m.group(1) != m.group(2):
                    raise CircuitParseError("X-basis measurement must rotate the measured qubit", line_no)
                gates.append(measure_x(int(m.group(1)), int(m.group(3))))
            elif (m := _RE_MEASURE_Z.match(line)):
                gates.append(measure_z(int(m.group(1)), int(m.group(2))))
            elif (m := _RE_IF.match(line)):
                gates.append(cc_correct(int(m.group(1)), GateKind(m.group(2)),
                                        *_parse_operands(m.group(3), line_no)))
            elif (m := _RE_GATE.match(line)):
                kind = GateKind(m.group(1))
                gates.append(Gate(kind, _parse_operands(m.group(2), line_no),
                                  uncompute=bool(m.group(3))))
            else:
                raise CircuitParseError(f"unrecognized statement {line!r}", line_no)
        except (CircuitValidationError, ValueError) as exc:
            if isinstance(exc, CircuitParseError):
                raise
            raise CircuitParseError(str(exc), line_no) from exc
    if num_qubits is None:
        raise CircuitParseError("missing 'qreg q[N];' declaration")
    if not saw_granularity and any(g.kind is GateKind.TOFFOLI for g in gates):
        granularity = Granularity.TOFFOLI
    elif not saw_granularity:
        granularity = Granularity.CLIFFORD_T
    table = tuple(roles.get(i, QubitRole.HELPER) for i in range(num_qubits))
    try:
        return Circuit(table, tuple(gates), granularity, num_clbits, tuple(stages))
    except CircuitValidationError as exc:
        raise CircuitParseError(str(exc)) from exc


# -------------------------------------------------------------------- lowering

_DIRTYING = (GateKind.X, GateKind.CNOT, GateKind.H)


def lower_toffolis_with_spans(circuit: Circuit, variant: str) -> Tuple[Circuit, List[Tuple[int, int]]]:
    """Replace every Toffoli with its Clifford+T gadget; spans[i] locates gate i in the result"""
    from modules.decomp import build_toffoli_gadget, build_uncompute_gadget

    if circuit.granularity is not Granularity.TOFFOLI:
        raise GranularityError("circuit is already at Clifford+T granularity")
    gadget = build_toffoli_gadget(variant)
    eraser = build_uncompute_gadget()
    helpers = circuit.qubits_with_role(QubitRole.HELPER)
    busy_until = {q: 0 for q in helpers}
    levels = toffoli_layers(circuit) if gadget.helper_count else {}
    clean = [role not in (QubitRole.INPUT, QubitRole.OUTPUT) for role in circuit.roles]

    lowered: List[Gate] = []
    spans: List[Tuple[int, int]] = []
    num_clbits = circuit.num_clbits
    for index, gate in enumerate(circuit.gates):
        start = len(lowered)
        if gate.kind is GateKind.TOFFOLI and gate.uncompute:
            a, b, target = gate.qubits
            lowered.extend(eraser.instantiate(a, b, target, clbit=num_clbits))
            num_clbits += 1
            clean[target] = True
        elif gate.kind is GateKind.TOFFOLI:
            a, b, target = gate.qubits
            if not clean[target]:
                raise AllocationError(f"Toffoli {index} targets q[{target}], which is not a clean ancilla")
            helper = None
            if gadget.helper_count:
                level = levels[index]
                free = [q for q in helpers if busy_until[q] < level]
                if not free:
                    raise AllocationError(
                        f"variant {variant} needs a helper qubit for Toffoli {index} at level {level}; "
                        f"the plan reserved {len(helpers)}")
                helper = free[0]
                busy_until[helper] = level
            lowered.extend(gadget.instantiate(a, b, target, helper))
            clean[target] = False
        else:
            lowered.append(gate)
            if gate.kind in _DIRTYING:
                clean[gate.target] = False
        spans.append((start, len(lowered)))

    def remap(first: int, stop: int) -> Tuple[int, int]:
        if stop <= first:
            anchor = spans[first][0] if first < len(spans) else len(lowered)
            return anchor, anchor
        return spans[first][0], spans[stop - 1][1]

    stages = tuple((name,) + remap(a, b) for name, a, b in circuit.stages)
    result = Circuit(circuit.roles, tuple(lowered), Granularity.CLIFFORD_T, num_clbits, stages)
    logger.debug("lowered %d Toffoli gate(s) with the %s gadget into %d gates",
                 circuit.count(GateKind.TOFFOLI), variant, len(lowered))
    return result, spans


def lower_toffolis(circuit: Circuit, variant: str) -> Circuit:
    return lower_toffolis_with_spans(circuit, variant)[0]
