"""
Geometry of the universe Z^d: cells, finite cell sets, boxes, Minkowski sums,
boundary sets and reduction modulo a box.

Everything here is an immutable value. Cell sets are kept sorted
lexicographically; pattern encodings elsewhere depend on that order.
"""

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

from .exceptions import (
    CoordinateOverflowException,
    DimensionMismatchException,
    EmptyBoxException,
    PatternFormatException,
)

Cell = Tuple[int, ...]
CellLike = Union[int, Sequence[int]]

MAX_COORDINATE = 2 ** 31 - 1


def as_cell(value: CellLike) -> Cell:
    """Normalize an int (d=1) or a coordinate sequence to a cell tuple."""
    if isinstance(value, int):
        cell = (int(value),)
    else:
        cell = tuple(int(c) for c in value)
    if not cell:
        raise DimensionMismatchException("A cell needs at least one coordinate")
    for c in cell:
        if abs(c) > MAX_COORDINATE:
            raise CoordinateOverflowException(f"Coordinate {c} out of range in cell {cell}")
    return cell


def origin(dim: int) -> Cell:
    return (0,) * dim


def _check_dims(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionMismatchException(f"Dimension mismatch: {tuple(a)} vs {tuple(b)}")


def add(g: Cell, h: Cell) -> Cell:
    _check_dims(g, h)
    return as_cell(a + b for a, b in zip(g, h))


def sub(g: Cell, h: Cell) -> Cell:
    _check_dims(g, h)
    return as_cell(a - b for a, b in zip(g, h))


def neg(g: Cell) -> Cell:
    return tuple(-c for c in g)


def chebyshev(g: Cell) -> int:
    return max(abs(c) for c in g)


class CellSet:
    """A finite, duplicate-free, lexicographically sorted set of cells of one dimension."""

    __slots__ = ("cells", "dim", "_positions")

    def __init__(self, cells: Iterable[CellLike] = (), dim: Optional[int] = None):
        normalized = sorted({as_cell(c) for c in cells})
        if dim is None:
            if not normalized:
                raise DimensionMismatchException("An empty cell set needs an explicit dimension")
            dim = len(normalized[0])
        for cell in normalized:
            if len(cell) != dim:
                raise DimensionMismatchException(f"Cell {cell} does not have dimension {dim}")
        self.cells: Tuple[Cell, ...] = tuple(normalized)
        self.dim: int = dim
        self._positions: Optional[Dict[Cell, int]] = None

    @classmethod
    def of(cls, *cells: CellLike) -> "CellSet":
        return cls(cells)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "CellSet":
        return cls(range(lo, hi + 1), dim=1)

    def positions(self) -> Dict[Cell, int]:
        if self._positions is None:
            self._positions = {cell: i for i, cell in enumerate(self.cells)}
        return self._positions

    def index(self, cell: CellLike) -> int:
        return self.positions()[as_cell(cell)]

    def __contains__(self, cell) -> bool:
        return as_cell(cell) in self.positions()

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, i: int) -> Cell:
        return self.cells[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, CellSet) and self.dim == other.dim and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((self.dim, self.cells))

    def __repr__(self) -> str:
        if self.dim == 1:
            return f"CellSet({[c[0] for c in self.cells]})"
        return f"CellSet({list(self.cells)})"

    def _check(self, other: "CellSet") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchException(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def union(self, other: "CellSet") -> "CellSet":
        self._check(other)
        return CellSet(self.cells + other.cells, dim=self.dim)

    def difference(self, other: "CellSet") -> "CellSet":
        self._check(other)
        other_positions = other.positions()
        return CellSet((c for c in self.cells if c not in other_positions), dim=self.dim)

    def intersection(self, other: "CellSet") -> "CellSet":
        self._check(other)
        other_positions = other.positions()
        return CellSet((c for c in self.cells if c in other_positions), dim=self.dim)

    def issubset(self, other: "CellSet") -> bool:
        self._check(other)
        other_positions = other.positions()
        return all(c in other_positions for c in self.cells)

    def negate(self) -> "CellSet":
        return CellSet((neg(c) for c in self.cells), dim=self.dim)

    def radius(self) -> int:
        """Chebyshev radius: max |coordinate| over the set (0 when empty)."""
        return max((chebyshev(c) for c in self.cells), default=0)

    def bounding_box(self) -> Optional["Box"]:
        if not self.cells:
            return None
        lo = tuple(min(c[j] for c in self.cells) for j in range(self.dim))
        hi = tuple(max(c[j] for c in self.cells) for j in range(self.dim))
        return Box(lo, hi)


@dataclass(frozen=True)
class Box:
    """Box prod_j [lo_j, hi_j] with inclusive bounds."""

    lo: Cell
    hi: Cell

    def __post_init__(self):
        lo, hi = as_cell(self.lo), as_cell(self.hi)
        _check_dims(lo, hi)
        if any(a > b for a, b in zip(lo, hi)):
            raise EmptyBoxException(f"Empty box: lo={lo} hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, radius: int, dim: int) -> "Box":
        """The box [-radius, radius]^dim."""
        return cls((-radius,) * dim, (radius,) * dim)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Box":
        return cls((lo,), (hi,))

    @classmethod
    def parse(cls, text: str) -> "Box":
        """Parse ``lo..hi`` per dimension, comma-separated (``-4..4`` or ``-1..1,0..2``)."""
        lo, hi = [], []
        for part in text.split(","):
            match = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", part)
            if match is None:
                raise PatternFormatException(f"Invalid window syntax {text!r}, expected lo..hi[,lo..hi]")
            lo.append(int(match.group(1)))
            hi.append(int(match.group(2)))
        try:
            return cls(tuple(lo), tuple(hi))
        except ValueError as ex:
            raise PatternFormatException(str(ex))

    def __str__(self) -> str:
        return ",".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sides(self) -> Cell:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> int:
        volume = 1
        for side in self.sides:
            volume *= side
        return volume

    def contains(self, g: CellLike) -> bool:
        g = as_cell(g)
        _check_dims(g, self.lo)
        return all(a <= c <= b for a, c, b in zip(self.lo, g, self.hi))

    def cells(self) -> CellSet:
        ranges = [range(a, b + 1) for a, b in zip(self.lo, self.hi)]
        return CellSet(itertools.product(*ranges), dim=self.dim)

    def translate(self, g: CellLike) -> "Box":
        g = as_cell(g)
        return Box(add(self.lo, g), add(self.hi, g))

    def expand(self, margin: int) -> "Box":
        return Box(tuple(a - margin for a in self.lo), tuple(b + margin for b in self.hi))

    def hull(self, other: "Box") -> "Box":
        _check_dims(self.lo, other.lo)
        return Box(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(max(a, b) for a, b in zip(self.hi, other.hi)),
        )

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


class BoundarySets(NamedTuple):
    interior: CellSet
    exterior: CellSet
    boundary: CellSet


def translate(E: CellSet, g: CellLike) -> CellSet:
    """{g + e : e in E}."""
    g = as_cell(g)
    if len(g) != E.dim:
        raise DimensionMismatchException(f"Cannot translate a {E.dim}-dimensional set by {g}")
    return CellSet((add(e, g) for e in E.cells), dim=E.dim)


def minkowski(E: CellSet, M: CellSet) -> CellSet:
    """Sumset {e + m : e in E, m in M}."""
    if E.dim != M.dim:
        raise DimensionMismatchException(f"Dimension mismatch: {E.dim} vs {M.dim}")
    return CellSet((add(e, m) for e in E.cells for m in M.cells), dim=E.dim)


def boundary_sets(K: CellSet, M: CellSet) -> BoundarySets:
    """M-interior, M-exterior and M-boundary of K."""
    if K.dim != M.dim:
        raise DimensionMismatchException(f"Dimension mismatch: {K.dim} vs {M.dim}")
    positions = K.positions()
    interior = CellSet((g for g in K.cells if all(add(g, m) in positions for m in M.cells)), dim=K.dim)
    exterior = minkowski(K, M).difference(K)
    boundary = exterior.union(K.difference(interior))
    return BoundarySets(interior, exterior, boundary)


def box_reduce(g: CellLike, K: Box) -> Cell:
    """The unique k in K with k_j = g_j modulo the j-th side length of K."""
    g = as_cell(g)
    _check_dims(g, K.lo)
    return tuple(a + (c - a) % side for c, a, side in zip(g, K.lo, K.sides))


__all__ = [
    "Box",
    "BoundarySets",
    "Cell",
    "CellLike",
    "CellSet",
    "MAX_COORDINATE",
    "add",
    "as_cell",
    "boundary_sets",
    "box_reduce",
    "chebyshev",
    "minkowski",
    "neg",
    "origin",
    "sub",
    "translate",
]
