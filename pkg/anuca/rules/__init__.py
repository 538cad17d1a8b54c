"""
Local rules and finitely-described configurations of local defining maps.

A `LocalRule` is a dense lookup table A^M -> A. The table index of a
neighbourhood pattern is sum_i digit_i * q**i where digit_i is the symbol read
at the i-th memory offset in canonical (lexicographic) order.

A `RuleConfig` assigns a rule to every cell of Z^d. Only finitely-described
variants exist: `Constant`, `Patched`, `TwoSided1D` and `BoxList`. All rules of
one configuration share the memory set and the alphabet.
"""

import hashlib
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import DimensionMismatchException, InvalidRuleException, UnsupportedVariantException
from ..universe import Box, Cell, CellLike, CellSet, add, as_cell, neg, origin


def all_digits(n: int, q: int) -> np.ndarray:
    """Every pattern over n ordered cells, row k holding the digits of table index k
    (cell 0 least significant)."""
    codes = np.arange(q ** n, dtype=np.int64)
    powers = q ** np.arange(n, dtype=np.int64)
    return ((codes[:, None] // powers[None, :]) % q).astype(np.uint8)


class LocalRule:
    """
    A total lookup table A^M -> A.

    Equality and hashing are structural (alphabet, memory, table); the optional
    `name` is only a label used when writing rule files and reports.
    """

    __slots__ = ("memory", "alphabet", "table", "name", "_key")

    def __init__(self, memory: CellSet, alphabet: int, table: Sequence[int], name: Optional[str] = None):
        if alphabet < 2:
            raise InvalidRuleException(f"Alphabet size must be at least 2, got {alphabet}")
        if len(memory) == 0:
            raise InvalidRuleException("Memory set must not be empty")
        table = np.asarray(table, dtype=np.int64)
        expected = alphabet ** len(memory)
        if table.ndim != 1 or table.shape[0] != expected:
            raise InvalidRuleException(
                f"Rule {name or '<anonymous>'}: table has {table.size} entries, expected {expected}"
            )
        if table.size and (table.min() < 0 or table.max() >= alphabet):
            raise InvalidRuleException(f"Rule {name or '<anonymous>'}: symbol out of range 0..{alphabet - 1}")
        table = table.astype(np.uint8)
        table.setflags(write=False)
        self.memory = memory
        self.alphabet = alphabet
        self.table = table
        self.name = name
        self._key = (alphabet, memory.cells, table.tobytes())

    @classmethod
    def from_function(cls, memory: CellSet, alphabet: int, function: Callable[..., int], name: Optional[str] = None) -> "LocalRule":
        """Tabulate `function(*symbols)` where symbols follow the canonical memory order."""
        table = [
            int(function(*digits)) % alphabet
            for digits in (tuple(int(d) for d in row) for row in all_digits(len(memory), alphabet))
        ]
        return cls(memory, alphabet, table, name=name)

    @classmethod
    def from_digits(cls, memory: CellSet, alphabet: int, digits: str, name: Optional[str] = None) -> "LocalRule":
        try:
            table = [int(ch, 36) for ch in digits]
        except ValueError:
            raise InvalidRuleException(f"Rule {name or '<anonymous>'}: invalid digit string {digits!r}")
        return cls(memory, alphabet, table, name=name)

    @classmethod
    def identity(cls, memory: CellSet, alphabet: int, name: Optional[str] = None) -> "LocalRule":
        """Copy the symbol at offset 0 (must belong to memory)."""
        i = memory.index(origin(memory.dim))
        return cls.from_function(memory, alphabet, lambda *u: u[i], name=name)

    @classmethod
    def read(cls, memory: CellSet, alphabet: int, offset: CellLike, permutation: Optional[Sequence[int]] = None, name: Optional[str] = None) -> "LocalRule":
        """Copy the symbol at `offset`, optionally through a permutation of the alphabet."""
        i = memory.index(offset)
        permutation = list(range(alphabet)) if permutation is None else list(permutation)
        return cls.from_function(memory, alphabet, lambda *u: permutation[u[i]], name=name)

    def to_digits(self) -> str:
        return "".join(np.base_repr(int(v), 36).lower() for v in self.table)

    @property
    def key(self) -> tuple:
        return self._key

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.alphabet, self.memory.cells)).encode())
        h.update(self.table.tobytes())
        return h.hexdigest()

    def index_of(self, neighbourhood: Sequence[int]) -> int:
        index = 0
        for i, symbol in enumerate(neighbourhood):
            index += int(symbol) * self.alphabet ** i
        return index

    def evaluate(self, neighbourhood: Sequence[int]) -> int:
        if len(neighbourhood) != len(self.memory):
            raise InvalidRuleException(f"Expected {len(self.memory)} symbols, got {len(neighbourhood)}")
        return int(self.table[self.index_of(neighbourhood)])

    def __call__(self, *symbols: int) -> int:
        return self.evaluate(symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalRule) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        label = self.name or self.digest()[:8]
        return f"LocalRule({label}, q={self.alphabet}, |M|={len(self.memory)})"

    def with_name(self, name: Optional[str]) -> "LocalRule":
        return LocalRule(self.memory, self.alphabet, self.table, name=name)

    def _cube(self) -> np.ndarray:
        # axis j of the cube is the digit of memory offset n-1-j
        return self.table.reshape((self.alphabet,) * len(self.memory))

    def essential_offsets(self) -> CellSet:
        """Offsets the table actually depends on."""
        n = len(self.memory)
        cube = self._cube()
        essential = []
        for i, offset in enumerate(self.memory.cells):
            axis = n - 1 - i
            first = np.take(cube, [0], axis=axis)
            if not np.all(cube == first):
                essential.append(offset)
        return CellSet(essential, dim=self.memory.dim)

    def restrict(self, memory: CellSet) -> "LocalRule":
        """Re-express the rule over a subset of its memory it does not depend outside of."""
        if not memory.issubset(self.memory):
            raise InvalidRuleException(f"{memory} is not a subset of {self.memory}")
        if not self.essential_offsets().issubset(memory):
            raise InvalidRuleException(f"Rule depends on offsets outside {memory}")
        n = len(self.memory)
        index = [slice(None)] * n
        for i, offset in enumerate(self.memory.cells):
            if offset not in memory:
                index[n - 1 - i] = 0
        table = self._cube()[tuple(index)].reshape(-1)
        return LocalRule(memory, self.alphabet, table, name=self.name)

    def extend(self, memory: CellSet) -> "LocalRule":
        """Re-express the rule over a superset of its memory (extra offsets ignored)."""
        if not self.memory.issubset(memory):
            raise InvalidRuleException(f"{self.memory} is not a subset of {memory}")
        positions = [memory.index(offset) for offset in self.memory.cells]
        digits = all_digits(len(memory), self.alphabet)
        powers = self.alphabet ** np.arange(len(self.memory), dtype=np.int64)
        index = (digits[:, positions].astype(np.int64) * powers).sum(axis=1)
        return LocalRule(memory, self.alphabet, self.table[index], name=self.name)


class RuleConfig(ABC):
    """A configuration s of local defining maps on Z^d, finitely described."""

    variant: str = None

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @property
    @abstractmethod
    def reference_rule(self) -> LocalRule:
        ...

    @property
    def memory(self) -> CellSet:
        return self.reference_rule.memory

    @property
    def alphabet(self) -> int:
        return self.reference_rule.alphabet

    @property
    def memory_radius(self) -> int:
        return self.memory.radius()

    @abstractmethod
    def rule_at(self, g: CellLike) -> LocalRule:
        ...

    @abstractmethod
    def translate(self, g: CellLike) -> "RuleConfig":
        """Left translate gs: (gs)(h) = s(h - g)."""
        ...

    @abstractmethod
    def rules(self) -> List[LocalRule]:
        """Every rule occurring in the configuration, first occurrence order."""
        ...

    @abstractmethod
    def irregular_box(self) -> Optional[Box]:
        """Box outside of which s equals its far field (see `far_rule_at`); None if constant."""
        ...

    def far_rule_at(self, g: CellLike) -> LocalRule:
        """Rule the configuration converges to around g, ignoring any finite irregularity."""
        return self.reference_rule

    def describe(self) -> str:
        labels = ",".join(rule.name or rule.digest()[:8] for rule in self.rules())
        return f"{self.variant}(d={self.dim}, q={self.alphabet}, |M|={len(self.memory)}, rules={labels})"

    def _validate_rules(self, rules: Iterable[LocalRule], dim: int) -> None:
        reference = self.reference_rule
        if reference.memory.dim != dim:
            raise DimensionMismatchException(f"Memory dimension {reference.memory.dim} differs from configuration dimension {dim}")
        for rule in rules:
            if rule.memory != reference.memory or rule.alphabet != reference.alphabet:
                raise InvalidRuleException(
                    f"All rules of a configuration must share memory and alphabet: {rule!r} vs {reference!r}"
                )


Patch = Tuple[Tuple[Cell, LocalRule], ...]


def normalize_patch(patch, dim: int) -> Patch:
    """Sorted tuple of (cell, rule) from a mapping or an iterable of pairs."""
    items = patch.items() if isinstance(patch, Mapping) else patch
    normalized: Dict[Cell, LocalRule] = {}
    for cell, rule in items:
        cell = as_cell(cell)
        if len(cell) != dim:
            raise DimensionMismatchException(f"Patch cell {cell} does not have dimension {dim}")
        normalized[cell] = rule
    return tuple(sorted(normalized.items(), key=lambda item: item[0]))


def _shift_patch(patch: Patch, g: Cell) -> Patch:
    return tuple((add(cell, g), rule) for cell, rule in patch)


def _unique_rules(rules: Iterable[LocalRule]) -> List[LocalRule]:
    seen, unique = set(), []
    for rule in rules:
        if rule not in seen:
            seen.add(rule)
            unique.append(rule)
    return unique


@dataclass(frozen=True)
class Constant(RuleConfig):
    rule: LocalRule
    dim_: Optional[int] = None

    variant = "constant"

    def __post_init__(self):
        object.__setattr__(self, "dim_", self.rule.memory.dim if self.dim_ is None else self.dim_)
        self._validate_rules([self.rule], self.dim_)

    @property
    def dim(self) -> int:
        return self.dim_

    @property
    def reference_rule(self) -> LocalRule:
        return self.rule

    def rule_at(self, g: CellLike) -> LocalRule:
        return self.rule

    def translate(self, g: CellLike) -> "Constant":
        return self

    def rules(self) -> List[LocalRule]:
        return [self.rule]

    def irregular_box(self) -> Optional[Box]:
        return None


@dataclass(frozen=True)
class Patched(RuleConfig):
    """Constant `background` except on the finitely many cells of `patch`."""

    background: LocalRule
    patch: Patch = ()

    variant = "patched"

    def __post_init__(self):
        object.__setattr__(self, "patch", normalize_patch(self.patch, self.background.memory.dim))
        object.__setattr__(self, "_patch_map", dict(self.patch))
        self._validate_rules([rule for _, rule in self.patch], self.dim)

    @property
    def dim(self) -> int:
        return self.background.memory.dim

    @property
    def reference_rule(self) -> LocalRule:
        return self.background

    @property
    def patch_map(self) -> Dict[Cell, LocalRule]:
        return dict(self.patch)

    def rule_at(self, g: CellLike) -> LocalRule:
        return self._patch_map.get(as_cell(g), self.background)

    def translate(self, g: CellLike) -> "Patched":
        return Patched(self.background, _shift_patch(self.patch, as_cell(g)))

    def rules(self) -> List[LocalRule]:
        return _unique_rules([self.background] + [rule for _, rule in self.patch])

    def irregular_box(self) -> Optional[Box]:
        if not self.patch:
            return None
        return CellSet((cell for cell, _ in self.patch), dim=self.dim).bounding_box()


@dataclass(frozen=True)
class TwoSided1D(RuleConfig):
    """d = 1: `left` on n <= cut, `right` on n > cut, overridden on `patch`."""

    left: LocalRule
    right: LocalRule
    cut: int = 0
    patch: Patch = ()

    variant = "two_sided"

    def __post_init__(self):
        if self.left.memory.dim != 1:
            raise DimensionMismatchException("TwoSided1D configurations live on Z (d = 1)")
        object.__setattr__(self, "cut", int(self.cut))
        object.__setattr__(self, "patch", normalize_patch(self.patch, 1))
        object.__setattr__(self, "_patch_map", dict(self.patch))
        self._validate_rules([self.right] + [rule for _, rule in self.patch], 1)

    @property
    def dim(self) -> int:
        return 1

    @property
    def reference_rule(self) -> LocalRule:
        return self.left

    def rule_at(self, g: CellLike) -> LocalRule:
        g = as_cell(g)
        patched = self._patch_map.get(g)
        if patched is not None:
            return patched
        return self.left if g[0] <= self.cut else self.right

    def translate(self, g: CellLike) -> "TwoSided1D":
        g = as_cell(g)
        return TwoSided1D(self.left, self.right, self.cut + g[0], _shift_patch(self.patch, g))

    def rules(self) -> List[LocalRule]:
        return _unique_rules([self.left, self.right] + [rule for _, rule in self.patch])

    def irregular_box(self) -> Optional[Box]:
        cells = [self.cut, self.cut + 1] + [cell[0] for cell, _ in self.patch]
        return Box.interval(min(cells), max(cells))

    def far_rule_at(self, g: CellLike) -> LocalRule:
        return self.left if as_cell(g)[0] <= self.cut else self.right


@dataclass(frozen=True)
class BoxList(RuleConfig):
    """
    `background` except on listed boxes (first matching box wins) and on `patch`
    (which overrides boxes). `truncated` marks a materialized prefix of an
    infinite family of boxes.
    """

    background: LocalRule
    boxes: Tuple[Tuple[Box, LocalRule], ...] = ()
    patch: Patch = ()
    truncated: bool = False

    variant = "box_list"

    def __post_init__(self):
        dim = self.background.memory.dim
        boxes = tuple((box, rule) for box, rule in self.boxes)
        for box, _ in boxes:
            if box.dim != dim:
                raise DimensionMismatchException(f"Box {box} does not have dimension {dim}")
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "patch", normalize_patch(self.patch, dim))
        object.__setattr__(self, "_patch_map", dict(self.patch))
        self._validate_rules([rule for _, rule in boxes] + [rule for _, rule in self.patch], dim)

    @property
    def dim(self) -> int:
        return self.background.memory.dim

    @property
    def reference_rule(self) -> LocalRule:
        return self.background

    def rule_at(self, g: CellLike) -> LocalRule:
        g = as_cell(g)
        patched = self._patch_map.get(g)
        if patched is not None:
            return patched
        for box, rule in self.boxes:
            if box.contains(g):
                return rule
        return self.background

    def translate(self, g: CellLike) -> "BoxList":
        g = as_cell(g)
        return BoxList(
            self.background,
            tuple((box.translate(g), rule) for box, rule in self.boxes),
            _shift_patch(self.patch, g),
            self.truncated,
        )

    def rules(self) -> List[LocalRule]:
        return _unique_rules([self.background] + [rule for _, rule in self.boxes] + [rule for _, rule in self.patch])

    def irregular_box(self) -> Optional[Box]:
        hull = None
        for box, _ in self.boxes:
            hull = box if hull is None else hull.hull(box)
        if self.patch:
            patch_box = CellSet((cell for cell, _ in self.patch), dim=self.dim).bounding_box()
            hull = patch_box if hull is None else hull.hull(patch_box)
        return hull


def rule_at(s: RuleConfig, g: CellLike) -> LocalRule:
    g = as_cell(g)
    if len(g) != s.dim:
        raise DimensionMismatchException(f"Cell {g} does not have dimension {s.dim}")
    return s.rule_at(g)


def translate_config(s: RuleConfig, g: CellLike) -> RuleConfig:
    g = as_cell(g)
    if len(g) != s.dim:
        raise DimensionMismatchException(f"Cannot translate a {s.dim}-dimensional configuration by {g}")
    return s.translate(g)


def invert_permutation_rule(rule: LocalRule, read_offset: CellLike, memory: CellSet) -> LocalRule:
    """Inverse of a rule that applies a permutation to the symbol at `read_offset`,
    expressed as a rule reading offset -read_offset over `memory`."""
    i = rule.memory.index(read_offset)
    q = rule.alphabet
    neighbourhood = [0] * len(rule.memory)
    permutation = []
    for a in range(q):
        neighbourhood[i] = a
        permutation.append(rule.evaluate(neighbourhood))
    if sorted(permutation) != list(range(q)):
        raise InvalidRuleException(f"{rule!r} is not a permutation of the symbol at {read_offset}")
    inverse = [0] * q
    for a, b in enumerate(permutation):
        inverse[b] = a
    return LocalRule.read(memory, q, neg(as_cell(read_offset)), inverse)


def map_rules(s: RuleConfig, transform: Callable[[LocalRule], LocalRule]) -> RuleConfig:
    """The same configuration shape with every rule replaced by `transform(rule)`."""
    cache: Dict[tuple, LocalRule] = {}

    def apply(rule: LocalRule) -> LocalRule:
        if rule.key not in cache:
            cache[rule.key] = transform(rule)
        return cache[rule.key]

    def patch_of(patch: Patch) -> Patch:
        return tuple((cell, apply(rule)) for cell, rule in patch)

    if isinstance(s, Constant):
        return Constant(apply(s.rule), s.dim_)
    if isinstance(s, Patched):
        return Patched(apply(s.background), patch_of(s.patch))
    if isinstance(s, TwoSided1D):
        return TwoSided1D(apply(s.left), apply(s.right), s.cut, patch_of(s.patch))
    if isinstance(s, BoxList):
        return BoxList(apply(s.background), tuple((box, apply(rule)) for box, rule in s.boxes), patch_of(s.patch), s.truncated)
    raise UnsupportedVariantException(f"Unsupported configuration {type(s).__name__}")


__all__ = [
    "BoxList",
    "Constant",
    "LocalRule",
    "Patch",
    "Patched",
    "RuleConfig",
    "TwoSided1D",
    "all_digits",
    "invert_permutation_rule",
    "map_rules",
    "normalize_patch",
    "rule_at",
    "translate_config",
]
