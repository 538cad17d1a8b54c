"""
Local views of configurations and the finite bookkeeping built on them.

A local view is the restriction of a translate of s to a window E. Because a
finitely-described configuration equals its far field outside a bounded box,
only finitely many views occur among all translates; `distinct_view_classes`
enumerates one representative per view, which is what makes every
translation-uniform check below a finite computation.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from ..exceptions import DimensionMismatchException, UnsupportedVariantException
from ..universe import Box, Cell, CellLike, CellSet, add, as_cell, origin
from . import BoxList, Constant, LocalRule, Patched, RuleConfig, TwoSided1D

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalView:
    """s|_E as a tuple of rules aligned with the canonical order of E."""

    window: CellSet
    rules: Tuple[LocalRule, ...]

    @property
    def key(self) -> tuple:
        return (self.window.cells, tuple(rule.key for rule in self.rules))

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.window.cells).encode())
        for rule in self.rules:
            h.update(rule.digest().encode())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalView) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


@dataclass(frozen=True)
class ViewClass:
    representative: Cell
    view: LocalView


@dataclass(frozen=True)
class OrbitClosure:
    """Sigma(s): translates of s plus finitely many limit points."""

    translates_hint: str
    limit_points: Tuple[RuleConfig, ...]


def local_view(s: RuleConfig, E: CellSet) -> LocalView:
    if E.dim != s.dim:
        raise DimensionMismatchException(f"Window dimension {E.dim} differs from configuration dimension {s.dim}")
    return LocalView(E, tuple(s.rule_at(e) for e in E.cells))


def _view_at(s: RuleConfig, g: Cell, E: CellSet) -> LocalView:
    # view of (-g)s on E, i.e. h -> s(g + h)
    return LocalView(E, tuple(s.rule_at(add(g, e)) for e in E.cells))


def candidate_region(parts: Sequence[Tuple[RuleConfig, CellSet]]) -> Optional[Box]:
    """
    Box R such that, for every g outside R, the joint view of all parts at g
    equals the joint view at some cell of R's outer layer. None when every part
    is constant.
    """
    region = None
    for s, E in parts:
        irregular = s.irregular_box()
        if irregular is None:
            continue
        bounds = E.bounding_box()
        # {g : (g + E) meets irregular} lies in [irregular.lo - E.hi, irregular.hi - E.lo]
        box = Box(
            tuple(a - b for a, b in zip(irregular.lo, bounds.hi)),
            tuple(a - b for a, b in zip(irregular.hi, bounds.lo)),
        )
        region = box if region is None else region.hull(box)
    return None if region is None else region.expand(1)


def distinct_view_classes(s: RuleConfig, E: CellSet) -> List[ViewClass]:
    """One representative g (lexicographically first) per distinct view of (-g)s on E."""
    if not isinstance(s, (Constant, Patched, TwoSided1D, BoxList)):
        raise UnsupportedVariantException(f"Unsupported configuration {type(s).__name__}")
    if E.dim != s.dim:
        raise DimensionMismatchException(f"Window dimension {E.dim} differs from configuration dimension {s.dim}")
    region = candidate_region([(s, E)])
    candidates = [origin(s.dim)] if region is None else region.cells().cells
    classes: Dict[tuple, ViewClass] = {}
    for g in candidates:
        view = _view_at(s, g, E)
        if view.key not in classes:
            classes[view.key] = ViewClass(g, view)
    logger.debug("%d view classes over %d candidates", len(classes), len(candidates))
    return list(classes.values())


def orbit_closure(s: RuleConfig) -> OrbitClosure:
    if isinstance(s, Constant):
        return OrbitClosure("{s}", (s,))
    if isinstance(s, Patched) or (isinstance(s, BoxList) and not s.truncated):
        return OrbitClosure("{gs : g in Z^d}", (Constant(s.background),))
    if isinstance(s, TwoSided1D):
        limits = [Constant(s.left)]
        if s.right != s.left:
            limits.append(Constant(s.right))
        return OrbitClosure("{s_k : k in Z}", tuple(limits))
    raise UnsupportedVariantException(
        f"Orbit closure is only computed for constant, patched, two-sided and finite box-list configurations, got {s.describe()}"
    )


def far_rules(s: RuleConfig) -> List[LocalRule]:
    """Rules s takes on infinitely many cells (its constant limits)."""
    irregular = s.irregular_box()
    if irregular is None:
        return s.rules()
    region = irregular.expand(1)
    rules = []
    for corner in (region.lo, region.hi):
        rule = s.far_rule_at(corner)
        if rule not in rules:
            rules.append(rule)
    return rules


def limit_pairs(s: RuleConfig, t: RuleConfig) -> List[Tuple[RuleConfig, RuleConfig]]:
    """
    Limits of the joint translates (gs, gt) as g leaves every bounded set, as
    pairs of constant configurations (one per direction with a distinct pair).
    """
    for config in (s, t):
        if isinstance(config, BoxList) and config.truncated:
            raise UnsupportedVariantException("Limits of a truncated box list are not determined by its description")
    if s.dim != t.dim:
        raise DimensionMismatchException("Both configurations must share one dimension")
    region = candidate_region([(s, CellSet([origin(s.dim)])), (t, CellSet([origin(t.dim)]))])
    if region is None:
        return []
    pairs = []
    for corner in (region.lo, region.hi):
        pair = (Constant(s.far_rule_at(corner)), Constant(t.far_rule_at(corner)))
        if pair not in pairs:
            pairs.append(pair)
    return pairs


def joint_view_key(parts: Sequence[Tuple[RuleConfig, CellSet]], g: Cell) -> tuple:
    return tuple(_view_at(s, g, E).key for s, E in parts)


def assemble_config(parts: Sequence[Tuple[RuleConfig, CellSet]], build: Callable[[Cell], LocalRule]) -> RuleConfig:
    """
    Package a cellwise rule assignment as a finitely-described configuration.

    `build(g)` must depend only on the joint view of `parts` at g. The result is
    Constant when every part is constant, TwoSided1D when any part is two-sided,
    and Patched otherwise.
    """
    if not parts:
        raise ValueError("assemble_config needs at least one part")
    dim = parts[0][0].dim
    for s, E in parts:
        if s.dim != dim or E.dim != dim:
            raise DimensionMismatchException("All parts must share one dimension")

    region = candidate_region(parts)
    if region is None:
        return Constant(build(origin(dim)))

    if any(isinstance(s, TwoSided1D) for s, _ in parts):
        lo, hi = region.lo[0], region.hi[0]
        left, right = build((lo,)), build((hi,))
        patch = {}
        for n in range(lo + 1, hi):
            rule = build((n,))
            if rule != left:
                patch[(n,)] = rule
        return TwoSided1D(left, right, hi - 1, patch)

    background = build(region.lo)
    patch = {}
    for g in region.cells():
        rule = build(g)
        if rule != background:
            patch[g] = rule
    return Patched(background, patch)


class ViewMemo:
    """Memoizes a per-view computation over the joint views of `parts`."""

    def __init__(self, parts: Sequence[Tuple[RuleConfig, CellSet]], compute: Callable[[Cell], LocalRule]):
        self.parts = parts
        self.compute = compute
        self.cache: Dict[Hashable, LocalRule] = {}

    def __call__(self, g: CellLike) -> LocalRule:
        g = as_cell(g)
        key = joint_view_key(self.parts, g)
        rule = self.cache.get(key)
        if rule is None:
            rule = self.compute(g)
            self.cache[key] = rule
        return rule


__all__ = [
    "LocalView",
    "OrbitClosure",
    "ViewClass",
    "ViewMemo",
    "assemble_config",
    "candidate_region",
    "distinct_view_classes",
    "far_rules",
    "joint_view_key",
    "limit_pairs",
    "local_view",
    "orbit_closure",
]
