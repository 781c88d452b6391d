#!/usr/bin/env python3
"""
Decomposition Module for the T-depth Synthesis Tool
Clifford+T gadgets for Toffoli compute/uncompute and the balanced binary
tree decomposition of multi-controlled Toffoli gates
"""

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import VARIANTS
from modules.circuit import (Circuit, Gate, GateKind, Granularity, QubitRole, ccx, cc_correct,
                             cx, measure_x, metrics)
from modules.errors import EstimateDomainError, IntegrityError

logger = logging.getLogger(__name__)

# Symbolic operands: a, b controls; t target; h helper
Template = Tuple[Tuple[GateKind, Tuple[str, ...]], ...]

LOGICAL_AND_TEMPLATE: Template = (
    (GateKind.H, ("t",)), (GateKind.T, ("t",)),
    (GateKind.CNOT, ("a", "t")), (GateKind.CNOT, ("b", "t")),
    (GateKind.CNOT, ("t", "a")), (GateKind.CNOT, ("t", "b")),
    (GateKind.TDG, ("a",)), (GateKind.TDG, ("b",)), (GateKind.T, ("t",)),
    (GateKind.CNOT, ("t", "a")), (GateKind.CNOT, ("t", "b")),
    (GateKind.H, ("t",)), (GateKind.S, ("t",)),
)

TDEPTH1_TEMPLATE: Template = (
    (GateKind.H, ("t",)),
    (GateKind.CNOT, ("t", "a")), (GateKind.CNOT, ("b", "h")),
    (GateKind.CNOT, ("a", "h")), (GateKind.CNOT, ("t", "b")),
    (GateKind.TDG, ("a",)), (GateKind.TDG, ("b",)), (GateKind.T, ("t",)), (GateKind.T, ("h",)),
    (GateKind.CNOT, ("a", "h")), (GateKind.CNOT, ("t", "b")),
    (GateKind.CNOT, ("t", "a")), (GateKind.CNOT, ("b", "h")),
    (GateKind.H, ("t",)), (GateKind.S, ("t",)),
)

TEMPLATES: Dict[str, Template] = {"tdepth1": TDEPTH1_TEMPLATE, "logical-and": LOGICAL_AND_TEMPLATE}

# Per-Toffoli accounting constants: (ancilla, CNOT count, CNOT depth per Toffoli layer)
ACCOUNTING = {"tdepth1": (2, 9, 9), "logical-and": (1, 6, 6)}

CLEAN_TARGET_INPUTS = tuple(i for i in range(8) if not i & 0b100)
ERASABLE_INPUTS = tuple(a | b << 1 | (a & b) << 2 for b in (0, 1) for a in (0, 1))


def ceil_log2(k: int) -> int:
    return (k - 1).bit_length() if k > 1 else 0


@dataclass(frozen=True)
class ToffoliGadget:
    """Clifford+T compute template for a Toffoli onto a clean target; costs are measured"""
    variant: str
    template: Template
    t_count: int
    t_depth: int
    cnot_count: int
    cnot_depth: int
    helper_count: int

    def instantiate(self, a: int, b: int, target: int, helper: Optional[int] = None) -> List[Gate]:
        operands = {"a": a, "b": b, "t": target, "h": helper}
        if self.helper_count and helper is None:
            raise ValueError(f"the {self.variant} gadget needs a helper qubit")
        return [Gate(kind, tuple(operands[name] for name in names)) for kind, names in self.template]

    def to_circuit(self) -> Circuit:
        roles = (QubitRole.INPUT, QubitRole.INPUT, QubitRole.STORAGE) + (QubitRole.HELPER,) * self.helper_count
        helper = 3 if self.helper_count else None
        return Circuit(roles, tuple(self.instantiate(0, 1, 2, helper)), Granularity.CLIFFORD_T)


@dataclass(frozen=True)
class UncomputeGadget:
    """X-basis measurement of the target with classically controlled Clifford fix-ups"""

    def instantiate(self, a: int, b: int, target: int, clbit: int) -> List[Gate]:
        return [measure_x(target, clbit),
                cc_correct(clbit, GateKind.CZ, a, b),
                cc_correct(clbit, GateKind.X, target)]

    def to_circuit(self) -> Circuit:
        roles = (QubitRole.INPUT, QubitRole.INPUT, QubitRole.STORAGE)
        return Circuit(roles, tuple(self.instantiate(0, 1, 2, 0)), Granularity.CLIFFORD_T, num_clbits=1)


def _measure_template(variant: str, template: Template) -> ToffoliGadget:
    helper_count = 1 if any("h" in names for _, names in template) else 0
    draft = ToffoliGadget(variant, template, 0, 0, 0, 0, helper_count)
    report = metrics(draft.to_circuit())
    return ToffoliGadget(variant, template, report.t_count, report.t_depth,
                         report.cnot_count, report.cnot_depth, helper_count)


@lru_cache(maxsize=None)
def build_toffoli_gadget(variant: str) -> ToffoliGadget:
    """Measured gadget for the variant, rejected unless it matches the Toffoli on a clean target"""
    from modules.verify import gadget_equivalence, toffoli_matrix

    if variant not in TEMPLATES:
        raise ValueError(f"unknown variant {variant!r}, expected one of {', '.join(VARIANTS)}")
    gadget = _measure_template(variant, TEMPLATES[variant])
    report = gadget_equivalence(gadget.to_circuit(), toffoli_matrix(), CLEAN_TARGET_INPUTS)
    if not report.passed:
        raise IntegrityError(f"{variant} Toffoli gadget failed equivalence: {report.first_failure}")
    logger.debug("%s gadget verified: T %d, T depth %d, CNOT %d, CNOT depth %d", variant,
                 gadget.t_count, gadget.t_depth, gadget.cnot_count, gadget.cnot_depth)
    return gadget


@lru_cache(maxsize=None)
def build_uncompute_gadget() -> UncomputeGadget:
    from modules.verify import gadget_equivalence, toffoli_matrix

    gadget = UncomputeGadget()
    report = gadget_equivalence(gadget.to_circuit(), toffoli_matrix(), ERASABLE_INPUTS)
    if not report.passed:
        raise IntegrityError(f"measurement uncompute gadget failed equivalence: {report.first_failure}")
    return gadget


# ------------------------------------------------------------------ MCT trees

@dataclass(frozen=True)
class MctTree:
    """Balanced AND tree over k controls whose root writes the target"""
    controls: Tuple[int, ...]
    nodes: Tuple[int, ...]
    target: int
    compute: Tuple[Gate, ...]
    levels: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.controls)

    @property
    def depth(self) -> int:
        return max(self.levels, default=0)

    @property
    def root(self) -> Gate:
        return self.compute[-1]

    def root_marker(self) -> Optional[Gate]:
        """Erasure marker for the target; None for the single-control CNOT"""
        if self.root.kind is not GateKind.TOFFOLI:
            return None
        a, b, target = self.root.qubits
        return ccx(a, b, target, uncompute=True)

    def node_markers(self) -> Tuple[Gate, ...]:
        """Erasure markers for the non-root nodes, parents before children"""
        return tuple(ccx(*g.qubits, uncompute=True) for g in reversed(self.compute[:-1]))

    def helper_demand(self) -> int:
        return max(tree_level_widths(self.k), default=0)

    def to_circuit(self, variant: str = "tdepth1") -> Circuit:
        """
        Standalone toffoli-level circuit of this tree, renumbered to controls,
        tree nodes, clean target, then the helper pool
        """
        helpers = self.helper_demand() if build_toffoli_gadget(variant).helper_count else 0
        k = self.k
        layout = {q: i for i, q in enumerate(self.controls + self.nodes + (self.target,))}
        compute = tuple(replace(g, qubits=tuple(layout[q] for q in g.qubits)) for g in self.compute)
        markers = tuple(ccx(*g.qubits, uncompute=True) for g in reversed(compute[:-1]))
        roles = ([QubitRole.INPUT] * k + [QubitRole.TREE_NODE] * len(self.nodes)
                 + [QubitRole.STORAGE] + [QubitRole.HELPER] * helpers)
        return Circuit(tuple(roles), compute + markers, Granularity.TOFFOLI)


def tree_level_widths(k: int) -> List[int]:
    """Toffolis per tree level for k controls"""
    widths = []
    while k > 1:
        widths.append(k // 2)
        k = k // 2 + k % 2
    return widths


def build_mct_tree(k: int, target: Optional[int] = None, controls: Optional[Sequence[int]] = None,
                   nodes: Optional[Sequence[int]] = None) -> MctTree:
    """
    Left-packed balanced tree: adjacent pairs are ANDed level by level and an
    odd element is promoted unchanged. Without explicit qubits the controls are
    0..k-1, the k-2 tree nodes follow them and the target comes last.
    """
    if k < 1:
        raise ValueError("an MCT gate needs at least one control; constants are X gates")
    controls = tuple(range(k)) if controls is None else tuple(controls)
    node_count = max(k - 2, 0)
    if nodes is None:
        nodes = tuple(range(k, k + node_count))
    nodes = tuple(nodes)
    if target is None:
        target = k + node_count
    if len(controls) != k or len(nodes) != node_count:
        raise ValueError(f"k={k} needs {k} controls and {node_count} tree nodes")
    if k == 1:
        return MctTree(controls, nodes, target, (cx(controls[0], target),), ())

    compute: List[Gate] = []
    levels: List[int] = []
    fresh = iter(nodes)
    frontier = list(controls)
    level = 0
    while len(frontier) > 1:
        level += 1
        promoted = [frontier[-1]] if len(frontier) % 2 else []
        parents = []
        for a, b in zip(frontier[0::2], frontier[1::2]):
            parent = target if len(frontier) == 2 else next(fresh)
            compute.append(ccx(a, b, parent))
            levels.append(level)
            parents.append(parent)
        frontier = parents + promoted
    return MctTree(controls, nodes, target, tuple(compute), tuple(levels))


@dataclass(frozen=True)
class MctCost:
    """Accounting constants for one k-controlled Toffoli"""
    k: int
    variant: str
    ancilla: int
    t_count: int
    t_depth: int
    cnot_count: int
    cnot_depth: int


def cost_model(k: int, variant: str) -> MctCost:
    if k < 2:
        raise EstimateDomainError(f"cost model needs k >= 2, got {k}")
    if variant not in ACCOUNTING:
        raise ValueError(f"unknown variant {variant!r}")
    ancilla, cnots, cnot_layer = ACCOUNTING[variant]
    t_depth = ceil_log2(k)
    return MctCost(k, variant, ancilla * (k - 1), 4 * (k - 1), t_depth,
                   cnots * (k - 1), cnot_layer * t_depth)
