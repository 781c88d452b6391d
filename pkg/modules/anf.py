#!/usr/bin/env python3
"""
ANF Module for the T-depth Synthesis Tool
Represents Boolean functions, converts between truth tables and the
Algebraic Normal Form, and reads/writes the textual ANF format
"""

import re
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import config
from modules.errors import AnfFormatError, AnfSyntaxError

logger = logging.getLogger(__name__)

Point = Union[int, Sequence[int]]


@dataclass(frozen=True)
class Monomial:
    """Product of distinct variables; the constant term lives in BooleanFunction.a0"""
    vars: Tuple[int, ...]

    def __post_init__(self):
        if not self.vars:
            raise ValueError("a monomial needs at least one variable")
        if any(b <= a for a, b in zip(self.vars, self.vars[1:])) or self.vars[0] < 0:
            raise ValueError(f"monomial indices must be strictly increasing and non-negative: {self.vars}")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Monomial":
        return cls(tuple(sorted(set(indices))))

    @classmethod
    def from_mask(cls, mask: int) -> "Monomial":
        return cls(tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1))

    @property
    def degree(self) -> int:
        return len(self.vars)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.vars)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.vars), self.vars)

    def __str__(self) -> str:
        return "*".join(f"x{i}" for i in self.vars)


def _canonical(monomials: Iterable[Monomial]) -> Tuple[Monomial, ...]:
    # GF(2) addition: a term survives iff it occurs an odd number of times
    counts = Counter(monomials)
    return tuple(sorted((m for m, c in counts.items() if c % 2), key=Monomial.sort_key))


def mobius_transform(bits: Sequence[int]) -> np.ndarray:
    """Binary Moebius (Reed-Muller) transform; it is its own inverse"""
    coeffs = np.array(bits, dtype=np.uint8).ravel() & 1
    size = coeffs.size
    n = size.bit_length() - 1
    if size == 0 or size != 1 << n:
        raise AnfFormatError(f"truth table length {size} is not a power of two")
    for i in range(n):
        view = coeffs.reshape(-1, 2, 1 << i)
        view[:, 1, :] ^= view[:, 0, :]
    return coeffs


@dataclass(frozen=True)
class BooleanFunction:
    """Single-output Boolean function held in canonical ANF"""
    n: int
    monomials: Tuple[Monomial, ...] = ()
    a0: int = 0
    _table: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise AnfFormatError(f"variable count must be at least 1, got {self.n}")
        if self.a0 not in (0, 1):
            raise AnfFormatError(f"constant term must be 0 or 1, got {self.a0}")
        for mono in self.monomials:
            if mono.vars[-1] >= self.n:
                raise AnfFormatError(f"monomial {mono} uses a variable outside x0..x{self.n - 1}")
        if len(set(self.monomials)) != len(self.monomials):
            raise AnfFormatError("duplicate monomials; build through BooleanFunction.from_anf")

    @classmethod
    def from_anf(cls, n: int, monomials: Iterable[Monomial], a0: int = 0) -> "BooleanFunction":
        """Canonicalizing constructor: duplicate terms cancel in pairs"""
        return cls(n=n, monomials=_canonical(monomials), a0=a0 & 1)

    @cached_property
    def degree(self) -> int:
        return max((m.degree for m in self.monomials), default=0)

    @property
    def linear_terms(self) -> Tuple[int, ...]:
        return tuple(m.vars[0] for m in self.monomials if m.degree == 1)

    @property
    def nonlinear_terms(self) -> Tuple[Monomial, ...]:
        return tuple(m for m in self.monomials if m.degree >= 2)

    @property
    def term_count(self) -> int:
        """Number of nonconstant terms"""
        return len(self.monomials)

    @property
    def truth_table(self) -> np.ndarray:
        if self._table is None:
            table = truth_table_from_anf(self)
            object.__setattr__(self, "_table", table)
        return self._table

    def evaluate(self, x: int) -> int:
        value = self.a0
        for mono in self.monomials:
            mask = mono.mask
            if x & mask == mask:
                value ^= 1
        return value

    def __str__(self) -> str:
        terms = [str(m) for m in self.monomials]
        if self.a0:
            terms.append("1")
        return " + ".join(terms) if terms else "0"


def anf_from_truth_table(table: Sequence[int]) -> BooleanFunction:
    """Recover the ANF of a truth table indexed with x0 as least significant bit"""
    bits = np.array(table, dtype=np.uint8).ravel() & 1
    coeffs = mobius_transform(bits)
    n = max(1, coeffs.size.bit_length() - 1)
    if coeffs.size == 1:
        # a lone value is the constant function on one variable
        bits = np.repeat(bits, 2)
        coeffs = np.array([coeffs[0], 0], dtype=np.uint8)
    monomials = tuple(sorted((Monomial.from_mask(int(i)) for i in np.flatnonzero(coeffs) if i),
                             key=Monomial.sort_key))
    return BooleanFunction(n=n, monomials=monomials, a0=int(coeffs[0]), _table=bits)


def truth_table_from_anf(f: BooleanFunction) -> np.ndarray:
    limit = config.get("truth_table_soft_limit", 24)
    if f.n > limit:
        raise AnfFormatError(f"dense truth tables are limited to n <= {limit}, got n = {f.n}")
    coeffs = np.zeros(1 << f.n, dtype=np.uint8)
    coeffs[0] = f.a0
    for mono in f.monomials:
        coeffs[mono.mask] = 1
    return mobius_transform(coeffs)


def degree(f: BooleanFunction) -> int:
    return f.degree


@dataclass(frozen=True)
class Census:
    """Monomial statistics of a multi-output function"""
    distinct_nonlinear: int
    total_terms: int
    max_terms: int
    degree: int
    term_counts: Tuple[int, ...] = ()

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.distinct_nonlinear, self.total_terms, self.max_terms, self.degree)


@dataclass(frozen=True)
class MultiOutputFunction:
    """m coordinate functions over a shared n-variable input space"""
    n: int
    coords: Tuple[BooleanFunction, ...]

    def __post_init__(self):
        if not self.coords:
            raise AnfFormatError("a function needs at least one coordinate")
        if any(c.n != self.n for c in self.coords):
            raise AnfFormatError("all coordinates must share the same variable count")

    @classmethod
    def of(cls, coords: Sequence[BooleanFunction]) -> "MultiOutputFunction":
        coords = tuple(coords)
        n = max(c.n for c in coords)
        coords = tuple(c if c.n == n else BooleanFunction(n=n, monomials=c.monomials, a0=c.a0) for c in coords)
        return cls(n=n, coords=coords)

    @classmethod
    def from_lookup(cls, values: Sequence[int], n: int, m: int) -> "MultiOutputFunction":
        """Build from a lookup table: values[x] is the m-bit output, coordinate j at bit j"""
        values = np.asarray(values, dtype=np.int64)
        if values.size != 1 << n:
            raise AnfFormatError(f"expected {1 << n} table entries, got {values.size}")
        if values.size and (values.min() < 0 or values.max() >= 1 << m):
            raise AnfFormatError(f"table entries must lie in [0, {1 << m})")
        return cls(n=n, coords=tuple(anf_from_truth_table((values >> j) & 1) for j in range(m)))

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coords)

    def nonlinear_monomials(self) -> Tuple[Monomial, ...]:
        """Deduplicated nonlinear monomials across all coordinates"""
        seen = {m for c in self.coords for m in c.nonlinear_terms}
        return tuple(sorted(seen, key=Monomial.sort_key))

    def lookup_table(self) -> np.ndarray:
        """Output value for every input point, coordinate j at bit j"""
        out = np.zeros(1 << self.n, dtype=np.int64)
        for j, coord in enumerate(self.coords):
            out |= coord.truth_table.astype(np.int64) << j
        return out

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.coords)


def _point_to_int(x: Point) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return sum((int(b) & 1) << i for i, b in enumerate(x))


def evaluate(f: MultiOutputFunction, x: Point) -> int:
    """Evaluate every coordinate at x; coordinate j lands in bit j of the result"""
    point = _point_to_int(x)
    if not 0 <= point < 1 << f.n:
        raise ValueError(f"input point {point} is outside [0, 2^{f.n})")
    return sum(c.evaluate(point) << j for j, c in enumerate(f.coords))


def monomial_census(f: MultiOutputFunction) -> Census:
    counts = tuple(c.term_count for c in f.coords)
    return Census(
        distinct_nonlinear=len(f.nonlinear_monomials()),
        total_terms=sum(counts),
        max_terms=max(counts, default=0),
        degree=f.degree,
        term_counts=counts,
    )


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"\s*(?:(?P<var>x(?P<idx>\d+))|(?P<num>\d+)|(?P<plus>\+|⊕)|(?P<times>\*))")
_HEADER = re.compile(r"^\s*vars\s+(\d+)\s*$")


def _tokenize(text: str, line_no: int) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            column = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise AnfSyntaxError(f"unexpected character {text[column - 1]!r}", line_no, column)
        column = match.start(match.lastgroup) + 1
        kind = match.lastgroup if match.lastgroup != "idx" else "var"
        tokens.append((kind, match.group(match.lastgroup), column))
        pos = match.end()
    return tokens


def _parse_line(text: str, line_no: int, declared_n: Optional[int]) -> Tuple[List[Monomial], int, int]:
    tokens = _tokenize(text, line_no)
    if len(tokens) == 1 and tokens[0][0] == "num" and tokens[0][1] == "0":
        return [], 0, -1
    terms: List[Monomial] = []
    constant = 0
    max_index = -1
    i = 0

    def expect_factor() -> int:
        nonlocal i
        if i >= len(tokens):
            raise AnfSyntaxError("expected a variable", line_no, len(text.rstrip()) + 1)
        kind, value, column = tokens[i]
        if kind != "var":
            raise AnfSyntaxError(f"expected a variable, found {value!r}", line_no, column)
        index = int(value[1:])
        if declared_n is not None and index >= declared_n:
            raise AnfSyntaxError(f"variable x{index} exceeds the declared {declared_n} variables",
                                 line_no, column)
        i += 1
        return index

    while True:
        if i >= len(tokens):
            raise AnfSyntaxError("expected a term", line_no, len(text.rstrip()) + 1)
        kind, value, column = tokens[i]
        if kind == "num":
            if value != "1":
                raise AnfSyntaxError(f"only the constant 1 may appear in a sum, found {value!r}",
                                     line_no, column)
            constant ^= 1
            i += 1
        else:
            factors = [expect_factor()]
            while i < len(tokens) and tokens[i][0] == "times":
                i += 1
                factors.append(expect_factor())
            max_index = max(max_index, *factors)
            terms.append(Monomial.of(factors))
        if i == len(tokens):
            break
        kind, value, column = tokens[i]
        if kind != "plus":
            raise AnfSyntaxError(f"expected '+', found {value!r}", line_no, column)
        i += 1
    return terms, constant, max_index


def parse_anf(text: str) -> MultiOutputFunction:
    """Parse the textual ANF format: one coordinate per line, optional 'vars n' header"""
    declared_n: Optional[int] = None
    parsed = []
    max_index = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        header = _HEADER.match(line)
        if header:
            if parsed or declared_n is not None:
                raise AnfSyntaxError("the 'vars' header must come first", line_no, 1)
            declared_n = int(header.group(1))
            if declared_n < 1:
                raise AnfSyntaxError("the 'vars' header needs at least one variable", line_no, 1)
            continue
        terms, constant, line_max = _parse_line(line, line_no, declared_n)
        max_index = max(max_index, line_max)
        parsed.append((terms, constant))
    if not parsed:
        raise AnfSyntaxError("no coordinate lines found", 1, 1)
    n = declared_n if declared_n is not None else max(1, max_index + 1)
    coords = tuple(BooleanFunction.from_anf(n, terms, constant) for terms, constant in parsed)
    logger.debug("parsed %d coordinate(s) over %d variable(s)", len(coords), n)
    return MultiOutputFunction(n=n, coords=coords)


def serialize_anf(f: MultiOutputFunction) -> str:
    """Canonical text: header, then one line per coordinate"""
    return "\n".join([f"vars {f.n}"] + [str(c) for c in f.coords]) + "\n"


# --------------------------------------------------------- truth-table format

_TABLE_HEADER = re.compile(r"^\s*vars\s+(\d+)\s+outs\s+(\d+)\s*$")
_VARS_HEADER = re.compile(r"^\s*vars\s+(\d+)\s*$")


def _hex_to_bits(digits: str, line_no: int) -> np.ndarray:
    try:
        value = int(digits, 16)
    except ValueError:
        raise AnfFormatError(f"line {line_no}: {digits!r} is neither a binary nor a hex table")
    size = len(digits) * 4
    return np.array([(value >> i) & 1 for i in range(size)], dtype=np.uint8)


def parse_truth_table(text: str) -> MultiOutputFunction:
    """
    Parse binary/hex coordinate lines or a 'vars n outs m' integer lookup table.

    A line of only 0/1 digits is read as binary unless it carries the 0x
    prefix, so hex tables such as "10" need "0x10". An optional 'vars n'
    first line fixes the table length and reads unprefixed lines of the
    wrong binary length as hex.
    """
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise AnfFormatError("empty truth table")
    header = _TABLE_HEADER.match(lines[0][1])
    if header:
        n, m = int(header.group(1)), int(header.group(2))
        try:
            values = [int(tok) for _, line in lines[1:] for tok in line.split()]
        except ValueError as exc:
            raise AnfFormatError(f"lookup entries must be integers: {exc}")
        return MultiOutputFunction.from_lookup(values, n, m)

    size = None
    vars_only = _VARS_HEADER.match(lines[0][1])
    if vars_only:
        size = 1 << int(vars_only.group(1))
        lines = lines[1:]
        if not lines:
            raise AnfFormatError("truth table has a header but no coordinates")
    coords = []
    for line_no, line in lines:
        if line.lower().startswith("0x"):
            bits = _hex_to_bits(line[2:], line_no)
        elif set(line) <= {"0", "1"} and (size is None or len(line) == size):
            bits = np.array([int(ch) for ch in line], dtype=np.uint8)
        else:
            bits = _hex_to_bits(line, line_no)
        if size is not None and bits.size != size:
            raise AnfFormatError(f"line {line_no}: expected {size} table entries, got {bits.size}")
        coords.append(anf_from_truth_table(bits))
    if len({c.n for c in coords}) != 1:
        raise AnfFormatError("all coordinate tables must have the same length")
    return MultiOutputFunction(n=coords[0].n, coords=tuple(coords))


def read_text(path: str) -> str:
    """File contents as UTF-8 text; undecodable bytes are a format error"""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except UnicodeDecodeError as exc:
        raise AnfFormatError(f"{path}: byte {exc.start} is not valid UTF-8") from exc


def load_function(path: str) -> MultiOutputFunction:
    """Read a function file; '.tt' and '.table' files use the truth-table format"""
    text = read_text(path)
    if path.endswith((".tt", ".table")):
        return parse_truth_table(text)
    return parse_anf(text)
