"""
Exact evaluation of sigma_s on finite windows.

`InducedLocalMap` precomputes, for a window E, where every cell of E reads its
neighbourhood inside the input support E+M and which rule table it uses, so a
batch of inputs is evaluated with a single gather and table lookup.
`PeriodizedMap` does the same on the periodic lift of a box K.
"""

import logging
import re
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..exceptions import InvalidRuleException, PatternFormatException, SupportMismatchException
from ..rules import LocalRule, RuleConfig
from ..universe import Box, Cell, CellLike, CellSet, add, as_cell, box_reduce, minkowski, translate
from .enumeration import check_cap, iter_space, ranks_of, space_size

logger = logging.getLogger(__name__)

PACKED_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class Pattern:
    """A finite pattern x|_E: symbols aligned with the canonical order of `support`."""

    __slots__ = ("support", "symbols")

    def __init__(self, support: CellSet, symbols: Union[Sequence[int], np.ndarray]):
        symbols = np.asarray(symbols, dtype=np.uint8).reshape(-1).copy()
        if symbols.shape[0] != len(support):
            raise SupportMismatchException(f"{symbols.shape[0]} symbols for a support of {len(support)} cells")
        symbols.setflags(write=False)
        self.support = support
        self.symbols = symbols

    @classmethod
    def from_mapping(cls, values: Mapping[CellLike, int], dim: Optional[int] = None) -> "Pattern":
        cells = {as_cell(c): int(a) for c, a in values.items()}
        support = CellSet(cells, dim=dim)
        return cls(support, [cells[c] for c in support.cells])

    @classmethod
    def constant(cls, support: CellSet, symbol: int) -> "Pattern":
        return cls(support, np.full(len(support), symbol, dtype=np.uint8))

    @classmethod
    def from_packed(cls, text: str, box: Box, alphabet: Optional[int] = None) -> "Pattern":
        """Packed base-q digit string over the cells of `box` in canonical order."""
        text = text.strip()
        if len(text) != box.volume:
            raise PatternFormatException(f"Packed pattern has {len(text)} symbols, box {box} has {box.volume} cells")
        symbols = []
        for ch in text.lower():
            digit = PACKED_DIGITS.find(ch)
            if digit < 0 or (alphabet is not None and digit >= alphabet):
                raise PatternFormatException(f"Invalid symbol {ch!r} in packed pattern {text!r}")
            symbols.append(digit)
        return cls(box.cells(), symbols)

    @classmethod
    def from_pairs(cls, text: str, alphabet: Optional[int] = None) -> "Pattern":
        """Parse `cell=symbol` pairs: ``-1=0 0=1`` or ``0,1=1;1,1=0``."""
        values: Dict[Cell, int] = {}
        for item in re.split(r"[;\s]+", text.strip()):
            if not item:
                continue
            match = re.fullmatch(r"(-?\d+(?:,-?\d+)*)=([0-9a-zA-Z])", item)
            if match is None:
                raise PatternFormatException(f"Invalid pattern entry {item!r}, expected cell=symbol")
            cell = as_cell(int(c) for c in match.group(1).split(","))
            symbol = PACKED_DIGITS.find(match.group(2).lower())
            if alphabet is not None and symbol >= alphabet:
                raise PatternFormatException(f"Symbol {match.group(2)!r} out of range for alphabet {alphabet}")
            if cell in values:
                raise PatternFormatException(f"Cell {cell} assigned twice")
            values[cell] = symbol
        if not values:
            raise PatternFormatException("Empty pattern")
        try:
            return cls.from_mapping(values)
        except ValueError as ex:
            raise PatternFormatException(str(ex))

    @classmethod
    def parse(cls, text: str, box: Optional[Box] = None, alphabet: Optional[int] = None) -> "Pattern":
        if "=" in text:
            return cls.from_pairs(text, alphabet)
        if box is None:
            raise PatternFormatException("A packed pattern needs a window")
        return cls.from_packed(text, box, alphabet)

    @classmethod
    def from_json(cls, data: Mapping) -> "Pattern":
        if "packed" in data:
            return cls.from_packed(data["packed"], Box.parse(data["box"]))
        return cls.from_pairs(data["pairs"])

    @property
    def dim(self) -> int:
        return self.support.dim

    def box(self) -> Optional[Box]:
        """The box whose cells are exactly the support, if any."""
        bounds = self.support.bounding_box()
        if bounds is not None and bounds.volume == len(self.support):
            return bounds
        return None

    def to_packed(self) -> str:
        return "".join(PACKED_DIGITS[int(a)] for a in self.symbols)

    def to_pairs(self) -> str:
        separator = " " if self.dim == 1 else ";"
        return separator.join(
            f"{','.join(str(c) for c in cell)}={PACKED_DIGITS[int(a)]}" for cell, a in zip(self.support.cells, self.symbols)
        )

    def to_json(self) -> dict:
        box = self.box()
        if box is not None:
            return {"box": str(box), "packed": self.to_packed()}
        return {"pairs": self.to_pairs()}

    def __getitem__(self, cell: CellLike) -> int:
        return int(self.symbols[self.support.index(cell)])

    def as_dict(self) -> Dict[Cell, int]:
        return {cell: int(a) for cell, a in zip(self.support.cells, self.symbols)}

    def translate(self, g: CellLike) -> "Pattern":
        # translation preserves the canonical order
        return Pattern(translate(self.support, g), self.symbols)

    def restrict(self, E: CellSet) -> "Pattern":
        if not E.issubset(self.support):
            raise SupportMismatchException(f"{E} is not contained in the pattern support")
        positions = self.support.positions()
        return Pattern(E, self.symbols[[positions[c] for c in E.cells]])

    def with_symbol(self, cell: CellLike, symbol: int) -> "Pattern":
        symbols = self.symbols.copy()
        symbols[self.support.index(cell)] = symbol
        return Pattern(self.support, symbols)

    def extend(self, support: CellSet, background: int) -> "Pattern":
        """Fill `support` from this pattern, using `background` where it is undefined."""
        positions = self.support.positions()
        symbols = [int(self.symbols[positions[c]]) if c in positions else background for c in support.cells]
        return Pattern(support, symbols)

    def differing_cells(self, other: "Pattern") -> List[Cell]:
        if self.support != other.support:
            raise SupportMismatchException("Patterns over different supports")
        return [self.support.cells[i] for i in np.flatnonzero(self.symbols != other.symbols)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pattern) and self.support == other.support and np.array_equal(self.symbols, other.symbols)
        )

    def __hash__(self) -> int:
        return hash((self.support, self.symbols.tobytes()))

    def __repr__(self) -> str:
        box = self.box()
        if box is not None:
            return f"Pattern({box}: {self.to_packed()})"
        return f"Pattern({self.to_pairs()})"


class _CellwiseEvaluator:
    """Evaluates one rule table per output cell over neighbourhoods gathered from an input row."""

    def __init__(self, rules: Sequence[LocalRule], gather: np.ndarray, alphabet: int):
        unique: Dict[tuple, int] = {}
        tables, rule_index = [], []
        for rule in rules:
            if rule.key not in unique:
                unique[rule.key] = len(tables)
                tables.append(rule.table)
            rule_index.append(unique[rule.key])
        self.tables = np.stack(tables) if tables else np.zeros((0, 1), dtype=np.uint8)
        self.rule_index = np.asarray(rule_index, dtype=np.intp)
        self.gather = gather
        self.weights = alphabet ** np.arange(gather.shape[1], dtype=np.int64)

    def indices(self, inputs: np.ndarray) -> np.ndarray:
        return (inputs[:, self.gather].astype(np.int64) * self.weights).sum(axis=2)

    def apply_batch(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.atleast_2d(inputs)
        return self.tables[self.rule_index[None, :], self.indices(inputs)]


class InducedLocalMap(_CellwiseEvaluator):
    """f+_{E, s|E}: A^{E+M} -> A^E."""

    def __init__(self, s: RuleConfig, window: CellSet, rules: Optional[Sequence[LocalRule]] = None):
        self.config = s
        self.window = window
        self.input_support = minkowski(window, s.memory)
        positions = self.input_support.positions()
        gather = np.array(
            [[positions[add(e, m)] for m in s.memory.cells] for e in window.cells], dtype=np.intp
        ).reshape(len(window), len(s.memory))
        if rules is None:
            rules = [s.rule_at(e) for e in window.cells]
        super().__init__(rules, gather, s.alphabet)

    def __call__(self, x: Pattern) -> Pattern:
        if x.support != self.input_support:
            raise SupportMismatchException(
                f"Input support must be exactly E+M ({len(self.input_support)} cells), got {len(x.support)} cells"
            )
        return Pattern(self.window, self.apply_batch(x.symbols[None, :])[0])


def check_symbol(s: RuleConfig, symbol: int) -> int:
    if not 0 <= symbol < s.alphabet:
        raise InvalidRuleException(f"Background symbol {symbol} out of range 0..{s.alphabet - 1}")
    return symbol


def apply_window(s: RuleConfig, E: CellSet, x: Pattern) -> Pattern:
    """sigma_s(x)|_E computed from x|_{E+M}; x must be given exactly on E+M."""
    return InducedLocalMap(s, E)(x)


def apply_window_padded(s: RuleConfig, E: CellSet, known: Pattern, background: int = 0) -> Pattern:
    """`apply_window` with the cells of E+M missing from `known` set to `background`."""
    check_symbol(s, background)
    return apply_window(s, E, known.extend(minkowski(E, s.memory), background))


def lift_eval(x: Pattern, g: CellLike) -> int:
    """x~(g) = x(k_g) for the periodic lift of a pattern over a box."""
    box = x.box()
    if box is None:
        raise SupportMismatchException("Periodic lift needs a pattern over a box")
    return x[box_reduce(g, box)]


class PeriodizedMap(_CellwiseEvaluator):
    """
    Psi_{K,s}: A^K -> A^K, sigma_s evaluated on the K-periodic lift and restricted to K.

    `rules` overrides the rule used at each cell of K (canonical order); the
    residue-class checks of the collision search evaluate alternate layers this way.
    """

    def __init__(self, s: RuleConfig, box: Box, rules: Optional[Sequence[LocalRule]] = None):
        self.config = s
        self.box = box
        self.cells = box.cells()
        self.forward_table: Optional[np.ndarray] = None
        positions = self.cells.positions()
        gather = np.array(
            [[positions[box_reduce(add(k, m), box)] for m in s.memory.cells] for k in self.cells.cells], dtype=np.intp
        ).reshape(len(self.cells), len(s.memory))
        if rules is None:
            rules = [s.rule_at(k) for k in self.cells.cells]
        super().__init__(rules, gather, s.alphabet)

    @property
    def size(self) -> int:
        return space_size(len(self.cells), self.config.alphabet)

    def __call__(self, x: Pattern) -> Pattern:
        if x.support != self.cells:
            raise SupportMismatchException(f"Periodized input must be a pattern over {self.box}")
        return Pattern(self.cells, self.apply_batch(x.symbols[None, :])[0])

    def materialize(self, cap: Optional[int] = None) -> np.ndarray:
        """Forward table: rank of Psi(x) for every rank of x (first cell most significant)."""
        if self.forward_table is None:
            check_cap(f"Psi table over {self.box}", self.size, cap, kind="materialization")
            q = self.config.alphabet
            table = np.empty(self.size, dtype=np.int64)
            for start, rows in iter_space(len(self.cells), q):
                table[start:start + rows.shape[0]] = ranks_of(self.apply_batch(rows), q)
            table.setflags(write=False)
            self.forward_table = table
            logger.debug("materialized Psi over %s (%d entries)", self.box, self.size)
        return self.forward_table

    def is_bijective(self, cap: Optional[int] = None) -> bool:
        table = self.materialize(cap)
        return np.unique(table).shape[0] == table.shape[0]

    def inverse_table(self, cap: Optional[int] = None) -> Optional[np.ndarray]:
        table = self.materialize(cap)
        if not self.is_bijective(cap):
            return None
        inverse = np.empty_like(table)
        inverse[table] = np.arange(table.shape[0], dtype=np.int64)
        return inverse

    def pattern_of_rank(self, rank: int) -> Pattern:
        q = self.config.alphabet
        n = len(self.cells)
        return Pattern(self.cells, [(rank // q ** (n - 1 - i)) % q for i in range(n)])


def apply_periodized(s: RuleConfig, K: Box, x: Pattern) -> Pattern:
    return PeriodizedMap(s, K)(x)


def simulate(s: RuleConfig, box: Box, x: Pattern, steps: int, background: int = 0) -> List[Pattern]:
    """Iterate sigma_s on a box, extending each state by `background` outside the box."""
    cells = box.cells()
    if x.support != cells:
        raise SupportMismatchException(f"Initial state must be a pattern over {box}")
    check_symbol(s, background)
    local_map = InducedLocalMap(s, cells)
    history = [x]
    for _ in range(steps):
        history.append(local_map(history[-1].extend(local_map.input_support, background)))
    return history


from .compose import compose, compose_rules  # noqa: E402

__all__ = [
    "InducedLocalMap",
    "PACKED_DIGITS",
    "Pattern",
    "PeriodizedMap",
    "apply_periodized",
    "apply_window",
    "apply_window_padded",
    "check_symbol",
    "compose",
    "compose_rules",
    "lift_eval",
    "simulate",
]
