#!/usr/bin/env python3
"""
Estimate Module for the T-depth Synthesis Tool
Closed-form resource bounds, their summation form, per-function accounting
and measured-versus-bound comparisons
"""

from dataclasses import dataclass, field, asdict
from math import comb
from typing import Any, Dict, List, Optional

from modules.anf import MultiOutputFunction, monomial_census
from modules.decomp import ACCOUNTING, ceil_log2
from modules.errors import EstimateDomainError

METRICS = ("ancilla", "t_count", "t_depth", "cnot_count", "cnot_depth")


@dataclass(frozen=True)
class ResourceBounds:
    n: int
    m: int
    variant: str
    ancilla: int
    t_count: int
    cnot_count: int
    cnot_depth: int
    t_depth: int
    source: str
    breakdown: Dict[str, int] = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check(n: int, m: int, variant: str) -> None:
    if n < 2:
        raise EstimateDomainError(f"n={n}: closed forms need at least two variables")
    if m < 1:
        raise EstimateDomainError(f"m={m}: at least one output is required")
    if variant not in ACCOUNTING:
        raise EstimateDomainError(f"unknown variant {variant!r}")


def theorem1_bounds(n: int, m: int, variant: str = "tdepth1") -> ResourceBounds:
    _check(n, m, variant)
    half = 1 << (n - 1)
    levels = ceil_log2(n)
    ancilla = half * (3 * n - 2) - 3 * n + m + 1
    t_count = (1 << (n + 1)) * (n - 2) + 4
    cnot_count = half * (11 * n + 2 * m - 18) - 4 * n - m + 9
    cnot_depth = (1 << n) + 2 * n + 9 * levels - 3
    t_depth = levels
    if variant == "logical-and":
        ancilla -= half * (n - 2) + 1
        cnot_count -= 3 * half * (n - 2) + 3
        cnot_depth = (1 << n) + 2 * n + 6 * levels - 3
        t_depth += 1
    return ResourceBounds(n, m, variant, ancilla, t_count, cnot_count, cnot_depth, t_depth, "closed-form")


def summation_bounds(n: int, m: int, variant: str = "tdepth1", max_degree: Optional[int] = None) -> ResourceBounds:
    """Raw per-degree sums over monomial degrees 2..max_degree"""
    _check(n, m, variant)
    top = n if max_degree is None else min(max_degree, n)
    ancilla_per, cnot_per, layer_cost = ACCOUNTING[variant]
    degrees = range(2, top + 1)
    storage = sum(comb(n, k) for k in degrees)
    copies = sum(k * comb(n, k) for k in degrees) - n if top >= 2 else 0
    toffolis = sum((k - 1) * comb(n, k) for k in degrees)
    occurrences = sum(comb(n - 1, k - 1) for k in degrees)
    levels = ceil_log2(top)
    breakdown = {
        "copies": copies,
        "storage": storage,
        "outputs": m,
        "decomposition": ancilla_per * toffolis,
        "fan_out_cnots": 2 * copies,
        "output_cnots": m * (storage + n),
        "gadget_cnots": cnot_per * toffolis,
    }
    return ResourceBounds(
        n, m, variant,
        ancilla=copies + storage + breakdown["decomposition"] + m,
        t_count=4 * toffolis,
        cnot_count=breakdown["fan_out_cnots"] + breakdown["output_cnots"] + breakdown["gadget_cnots"],
        cnot_depth=2 * ceil_log2(occurrences + 1) + storage + n + layer_cost * levels,
        t_depth=levels + (variant == "logical-and"),
        source="summation",
        breakdown=breakdown,
    )


def variable_occurrences(f: MultiOutputFunction) -> List[int]:
    """How many distinct nonlinear monomials read each variable"""
    occurrences = [0] * f.n
    for mono in f.nonlinear_monomials():
        for i in mono.vars:
            occurrences[i] += 1
    return occurrences


def function_specific_estimate(f: MultiOutputFunction, variant: str = "tdepth1") -> ResourceBounds:
    """Accounting over the monomials actually present in f"""
    if variant not in ACCOUNTING:
        raise EstimateDomainError(f"unknown variant {variant!r}")
    ancilla_per, cnot_per, layer_cost = ACCOUNTING[variant]
    census = monomial_census(f)
    monomials = f.nonlinear_monomials()
    occurrences = variable_occurrences(f)
    copies = sum(max(c - 1, 0) for c in occurrences)
    toffolis = sum(mono.degree - 1 for mono in monomials)
    levels = ceil_log2(census.degree) if census.degree >= 2 else 0
    breakdown = {
        "copies": copies,
        "storage": len(monomials),
        "outputs": f.m,
        "decomposition": ancilla_per * toffolis,
        "fan_out_cnots": 2 * copies,
        "output_cnots": census.total_terms,
        "gadget_cnots": cnot_per * toffolis,
    }
    return ResourceBounds(
        f.n, f.m, variant,
        ancilla=copies + len(monomials) + f.m + breakdown["decomposition"],
        t_count=4 * toffolis,
        cnot_count=breakdown["fan_out_cnots"] + census.total_terms + breakdown["gadget_cnots"],
        cnot_depth=2 * ceil_log2(max(occurrences, default=0)) + census.max_terms + layer_cost * levels,
        t_depth=levels + (variant == "logical-and" and levels > 0),
        source="function-specific",
        breakdown=breakdown,
    )


def single_output_bounds(n: int, variant: str = "tdepth1") -> ResourceBounds:
    """Specialization to m = 1"""
    _check(n, 1, variant)
    half = 1 << (n - 1)
    general = theorem1_bounds(n, 1, variant)
    if variant != "tdepth1":
        return general
    return ResourceBounds(n, 1, variant,
                          ancilla=half * (3 * n - 2) - 3 * n + 2,
                          t_count=general.t_count,
                          cnot_count=half * (11 * n - 16) - 4 * n + 8,
                          cnot_depth=general.cnot_depth,
                          t_depth=general.t_depth,
                          source="closed-form")


def sbox_bounds(n: int, variant: str = "tdepth1") -> ResourceBounds:
    """Specialization to n-bit S-boxes (m = n)"""
    _check(n, n, variant)
    half = 1 << (n - 1)
    general = theorem1_bounds(n, n, variant)
    if variant != "tdepth1":
        return general
    return ResourceBounds(n, n, variant,
                          ancilla=half * (3 * n - 2) - 2 * n + 1,
                          t_count=general.t_count,
                          cnot_count=half * (13 * n - 18) - 5 * n + 9,
                          cnot_depth=general.cnot_depth,
                          t_depth=general.t_depth,
                          source="closed-form")


@dataclass(frozen=True)
class Comparison:
    metric: str
    measured: int
    bound: int

    @property
    def delta(self) -> int:
        return self.measured - self.bound

    @property
    def within(self) -> bool:
        return self.measured <= self.bound


def compare(report: Any, bounds: ResourceBounds) -> List[Comparison]:
    """Per-metric measured against bound; report may be a ResourceReport or a plain dict"""
    values = report if isinstance(report, dict) else report.to_dict()
    measured = {
        "ancilla": values.get("ancilla", values.get("ancilla_count")),
        "t_count": values["t_count"],
        "t_depth": values["t_depth"],
        "cnot_count": values["cnot_count"],
        "cnot_depth": values["cnot_depth"],
    }
    return [Comparison(metric, int(measured[metric]), getattr(bounds, metric)) for metric in METRICS]
