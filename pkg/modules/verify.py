#!/usr/bin/env python3
"""
Verification Module for the T-depth Synthesis Tool
Handles exhaustive reversible simulation of toffoli-level circuits and
branch-complete statevector simulation of small Clifford+T circuits
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import ANF_TDEPTH_THREADS, config
from modules.anf import MultiOutputFunction
from modules.circuit import Circuit, Gate, GateKind, Granularity, MEASUREMENTS, QubitRole
from modules.errors import GranularityError, SimulationSizeError

logger = logging.getLogger(__name__)

BRANCH_CUTOFF = 1e-12
CHUNK = 4096


# --------------------------------------------------------- reversible (bits)

@dataclass(frozen=True)
class BitState:
    """One bit per qubit plus the classical register"""
    qubits: Tuple[int, ...]
    clbits: Tuple[int, ...] = ()

    @classmethod
    def basis(cls, width: int, value: int = 0) -> "BitState":
        return cls(tuple((value >> i) & 1 for i in range(width)))

    def value(self, qubits: Sequence[int]) -> int:
        return sum(self.qubits[q] << i for i, q in enumerate(qubits))


def _require_classical(circuit: Circuit) -> None:
    for index, gate in enumerate(circuit.gates):
        if gate.kind not in (GateKind.X, GateKind.CNOT, GateKind.TOFFOLI):
            raise GranularityError(f"gate {index} ({gate.kind.value}) has no reversible-classical semantics")


def _run_planes(gates: Sequence[Gate], planes: np.ndarray) -> np.ndarray:
    for gate in gates:
        q = gate.qubits
        if gate.kind is GateKind.X:
            np.logical_not(planes[q[0]], out=planes[q[0]])
        elif gate.kind is GateKind.CNOT:
            planes[q[1]] ^= planes[q[0]]
        else:
            # uncompute markers erase a target holding a AND b, which is the same XOR
            planes[q[2]] ^= planes[q[0]] & planes[q[1]]
    return planes


def simulate_planes(circuit: Circuit, planes: np.ndarray) -> np.ndarray:
    """Run a classical circuit over bit planes (qubits x points), chunked across worker threads"""
    _require_classical(circuit)
    planes = np.array(planes, dtype=bool, copy=True)
    if planes.shape[0] != circuit.num_qubits:
        raise ValueError(f"expected {circuit.num_qubits} bit planes, got {planes.shape[0]}")
    points = planes.shape[1]
    if points <= CHUNK or ANF_TDEPTH_THREADS == 1:
        return _run_planes(circuit.gates, planes)
    bounds = [(start, min(start + CHUNK, points)) for start in range(0, points, CHUNK)]
    with ThreadPoolExecutor(max_workers=ANF_TDEPTH_THREADS) as pool:
        parts = list(pool.map(lambda b: _run_planes(circuit.gates, planes[:, b[0]:b[1]].copy()), bounds))
    return np.concatenate(parts, axis=1)


def simulate_reversible(circuit: Circuit, state: BitState) -> BitState:
    if len(state.qubits) != circuit.num_qubits:
        raise ValueError(f"state width {len(state.qubits)} does not match {circuit.num_qubits} qubits")
    planes = np.array(state.qubits, dtype=bool).reshape(-1, 1)
    result = simulate_planes(circuit, planes)
    return BitState(tuple(int(b) for b in result[:, 0]), state.clbits)


@dataclass
class VerificationReport:
    """Pass/fail result of an equivalence or functional check"""
    checked: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    max_amplitude_error: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Optional[Dict[str, Any]]:
        return self.failures[0] if self.failures else None

    def to_dict(self) -> Dict[str, Any]:
        return {"checked": self.checked, "failures": self.failures,
                "max_amplitude_error": self.max_amplitude_error}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _load_planes(circuit: Circuit, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    planes = np.zeros((circuit.num_qubits, len(xs)), dtype=bool)
    for i, q in enumerate(circuit.inputs):
        planes[q] = (xs >> i) & 1
    for j, q in enumerate(circuit.outputs):
        planes[q] = (ys >> j) & 1
    return planes


def _read(planes: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    value = np.zeros(planes.shape[1], dtype=np.int64)
    for i, q in enumerate(qubits):
        value |= planes[q].astype(np.int64) << i
    return value


def exhaustive_check(circuit: Circuit, f: MultiOutputFunction) -> VerificationReport:
    """All x with y = 0, then XOR semantics on seeded random (x, y) pairs"""
    limit = config.get("verify_max_inputs", 20)
    if f.n > limit:
        raise SimulationSizeError(f"exhaustive check over 2^{f.n} inputs exceeds the {limit}-input guard")
    if len(circuit.inputs) != f.n or len(circuit.outputs) != f.m:
        raise ValueError(f"circuit has {len(circuit.inputs)} inputs / {len(circuit.outputs)} outputs, "
                         f"function has {f.n} / {f.m}")
    table = f.lookup_table().astype(np.int64)
    rng = np.random.default_rng(config.get("random_seed", 2025))
    pairs = config.get("random_pairs", 16)
    xs = np.concatenate([np.arange(1 << f.n, dtype=np.int64),
                         rng.integers(0, 1 << f.n, size=pairs, dtype=np.int64)])
    ys = np.concatenate([np.zeros(1 << f.n, dtype=np.int64),
                         rng.integers(0, 1 << f.m, size=pairs, dtype=np.int64)])
    result = simulate_planes(circuit, _load_planes(circuit, xs, ys))

    report = VerificationReport(checked=len(xs))
    got_x = _read(result, circuit.inputs)
    got_y = _read(result, circuit.outputs)
    expected = ys ^ table[xs]
    work = [q for q, role in enumerate(circuit.roles) if role not in (QubitRole.INPUT, QubitRole.OUTPUT)]
    dirty = result[work].any(axis=0) if work else np.zeros(len(xs), dtype=bool)
    for point in np.flatnonzero((got_x != xs) | (got_y != expected) | dirty):
        reasons = []
        if got_x[point] != xs[point]:
            reasons.append("input modified")
        if got_y[point] != expected[point]:
            reasons.append("wrong output")
        if dirty[point]:
            reasons.append("ancilla not restored")
        report.failures.append({"x": int(xs[point]), "y": int(ys[point]), "expected": int(expected[point]),
                                "got": int(got_y[point]), "reason": ", ".join(reasons)})
    if report.passed:
        logger.info("exhaustive check passed over %d points", report.checked)
    else:
        logger.warning("exhaustive check failed at x=%d (%s)", report.failures[0]["x"],
                       report.failures[0]["reason"])
    return report


def check_mct_tree(circuit: Circuit, k: int) -> VerificationReport:
    """|x, 0, y> -> |x, 0, y xor AND(x)> for every x and both y, target on the first storage qubit"""
    target = circuit.qubits_with_role(QubitRole.STORAGE)[0]
    controls = circuit.inputs
    xs = np.tile(np.arange(1 << k, dtype=np.int64), 2)
    ys = np.repeat(np.array([0, 1], dtype=np.int64), 1 << k)
    planes = np.zeros((circuit.num_qubits, len(xs)), dtype=bool)
    for i, q in enumerate(controls):
        planes[q] = (xs >> i) & 1
    planes[target] = ys.astype(bool)
    result = simulate_planes(circuit, planes)
    expected = ys ^ (xs == (1 << k) - 1)
    others = [q for q in range(circuit.num_qubits) if q != target and q not in controls]
    report = VerificationReport(checked=len(xs))
    bad = (result[target] != expected) | (_read(result, controls) != xs)
    if others:
        bad |= result[others].any(axis=0)
    for point in np.flatnonzero(bad):
        report.failures.append({"x": int(xs[point]), "y": int(ys[point]), "expected": int(expected[point]),
                                "got": int(result[target, point])})
    return report


# ----------------------------------------------------------- statevector

@dataclass
class Branch:
    outcomes: Dict[int, int]
    amplitudes: np.ndarray
    probability: float


@dataclass
class BranchedState:
    branches: List[Branch]

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))


def _phase(state: np.ndarray, mask: np.ndarray, factor: complex) -> np.ndarray:
    return np.where(mask, state * factor, state)


_PHASES = {GateKind.Z: -1, GateKind.S: 1j, GateKind.SDG: -1j,
           GateKind.T: np.exp(1j * np.pi / 4), GateKind.TDG: np.exp(-1j * np.pi / 4)}


def _apply(kind: GateKind, qubits: Tuple[int, ...], state: np.ndarray, index: np.ndarray) -> np.ndarray:
    bits = [(index >> q) & 1 for q in qubits]
    if kind in _PHASES:
        return _phase(state, bits[0].astype(bool), _PHASES[kind])
    if kind is GateKind.CZ:
        return _phase(state, (bits[0] & bits[1]).astype(bool), -1)
    if kind is GateKind.H:
        partner = state[index ^ (1 << qubits[0])]
        return (np.where(bits[0].astype(bool), -state, state) + partner) / np.sqrt(2)
    if kind is GateKind.X:
        return state[index ^ (1 << qubits[0])]
    if kind is GateKind.CNOT:
        return state[index ^ (bits[0] << qubits[1])]
    if kind is GateKind.TOFFOLI:
        return state[index ^ ((bits[0] & bits[1]) << qubits[2])]
    raise GranularityError(f"{kind.value} is not a unitary gate")


def simulate_branches(circuit: Circuit, initial: Union[int, np.ndarray] = 0) -> BranchedState:
    """Full statevector evolution splitting at every measurement, outcome 0 first"""
    width = circuit.num_qubits
    limit = config.get("statevector_max_qubits", 14)
    if width > limit:
        raise SimulationSizeError(f"{width} qubits exceed the statevector limit of {limit}")
    index = np.arange(1 << width, dtype=np.int64)
    if isinstance(initial, (int, np.integer)):
        state = np.zeros(1 << width, dtype=complex)
        state[int(initial)] = 1.0
    else:
        state = np.asarray(initial, dtype=complex).copy()
        state /= np.linalg.norm(state)
    branches = [Branch({}, state, 1.0)]
    for gate in circuit.gates:
        if gate.kind in MEASUREMENTS:
            q = gate.qubits[0]
            split: List[Branch] = []
            for branch in branches:
                amps = branch.amplitudes
                if gate.kind is GateKind.MEASURE_X:
                    amps = _apply(GateKind.H, (q,), amps, index)
                bit = (index >> q) & 1
                for outcome in (0, 1):
                    projected = np.where(bit == outcome, amps, 0)
                    p = float(np.vdot(projected, projected).real)
                    if p < BRANCH_CUTOFF:
                        continue
                    split.append(Branch({**branch.outcomes, gate.clbit: outcome},
                                        projected / np.sqrt(p), branch.probability * p))
            branches = split
        elif gate.kind is GateKind.CC_CORRECT:
            for branch in branches:
                if branch.outcomes.get(gate.clbit) == 1:
                    branch.amplitudes = _apply(gate.correction, gate.qubits, branch.amplitudes, index)
        else:
            for branch in branches:
                branch.amplitudes = _apply(gate.kind, gate.qubits, branch.amplitudes, index)
    return BranchedState(branches)


def _phase_error(got: np.ndarray, expected: np.ndarray) -> float:
    """Largest amplitude difference after aligning the global phase on the first nonzero expected entry"""
    anchor = int(np.flatnonzero(np.abs(expected) > 1e-12)[0])
    if abs(got[anchor]) < 1e-12:
        return float(np.max(np.abs(got - expected)))
    phase = (expected[anchor] / abs(expected[anchor])) / (got[anchor] / abs(got[anchor]))
    return float(np.max(np.abs(got * phase - expected)))


def _embed(reference: np.ndarray, width: int, vector: np.ndarray) -> np.ndarray:
    full = np.zeros(1 << width, dtype=complex)
    full[:len(vector)] = reference @ vector
    return full


def gadget_equivalence(circuit: Circuit, reference: np.ndarray,
                       inputs: Optional[Sequence[int]] = None,
                       tolerance: Optional[float] = None) -> VerificationReport:
    """
    Compare a circuit against a reference unitary on its low qubits.

    The reference acts on the first log2(dim) qubits; every other qubit starts
    at |0> and must come back to |0>. Each admissible basis input is checked on
    every branch, then the uniform superposition of the inputs catches
    relative phases.
    """
    tolerance = config.get("amplitude_tolerance", 1e-10) if tolerance is None else tolerance
    dim = reference.shape[0]
    width = circuit.num_qubits
    inputs = list(range(dim)) if inputs is None else list(inputs)
    report = VerificationReport()
    states = [(x, np.eye(dim, dtype=complex)[x]) for x in inputs]
    superposition = np.zeros(dim, dtype=complex)
    superposition[inputs] = 1 / np.sqrt(len(inputs))
    states.append(("superposition", superposition))
    for label, vector in states:
        initial = np.zeros(1 << width, dtype=complex)
        initial[:dim] = vector
        expected = _embed(reference, width, vector)
        result = simulate_branches(circuit, initial)
        for branch in result.branches:
            error = _phase_error(branch.amplitudes, expected)
            report.max_amplitude_error = max(report.max_amplitude_error, error)
            if error > tolerance:
                report.failures.append({"input": label, "outcomes": dict(branch.outcomes), "error": error})
        report.checked += 1
    return report


def check_small_circuit(circuit: Circuit, f: MultiOutputFunction) -> VerificationReport:
    """Branch-level U_f check of a Clifford+T circuit with y = 0 and clean ancillas"""
    if circuit.granularity is not Granularity.CLIFFORD_T:
        raise GranularityError("check_small_circuit expects a lowered circuit")
    tolerance = config.get("amplitude_tolerance", 1e-10)
    report = VerificationReport()
    table = f.lookup_table()
    for x in range(1 << f.n):
        start = sum(((x >> i) & 1) << q for i, q in enumerate(circuit.inputs))
        target = start | sum(((int(table[x]) >> j) & 1) << q for j, q in enumerate(circuit.outputs))
        expected = np.zeros(1 << circuit.num_qubits, dtype=complex)
        expected[target] = 1.0
        for branch in simulate_branches(circuit, start).branches:
            error = _phase_error(branch.amplitudes, expected)
            report.max_amplitude_error = max(report.max_amplitude_error, error)
            if error > tolerance:
                report.failures.append({"x": x, "outcomes": dict(branch.outcomes), "error": error})
        report.checked += 1
    return report


def identity_matrix(qubits: int) -> np.ndarray:
    return np.eye(1 << qubits, dtype=complex)


def mct_matrix(k: int) -> np.ndarray:
    """Permutation for k controls on qubits 0..k-1 and the target on qubit k"""
    dim = 1 << (k + 1)
    controls = (1 << k) - 1
    index = np.arange(dim)
    image = np.where((index & controls) == controls, index ^ (1 << k), index)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[image, index] = 1.0
    return matrix


def toffoli_matrix() -> np.ndarray:
    return mct_matrix(2)
