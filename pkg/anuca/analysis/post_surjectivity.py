"""
Post-surjectivity checks.

Given x and y = sigma_s(x), flipping y at g must be reachable by a z that
differs from x only on g+E. Only the cells C = (g+E) - M can see g+E, so the
check is exact on C for every background-extended x; the sampled check draws x at random.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from ..config import get_config
from ..engine import InducedLocalMap, Pattern, check_symbol
from ..engine.enumeration import check_cap, rank_digits, space_size
from ..rules import RuleConfig
from ..rules.views import distinct_view_classes, orbit_closure
from ..universe import Box, CellLike, CellSet, as_cell, chebyshev, minkowski, sub, translate
from . import Certificate, CertificateKind, ClosureReport, RepresentativeResult

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 20


class LiftProblem:
    """Exhaustive lift search for one (s, g, E)."""

    def __init__(self, s: RuleConfig, g: CellLike, E: CellSet, cap: Optional[int] = None):
        self.config = s
        self.cell = as_cell(g)
        self.region = translate(E, self.cell)
        self.checked = minkowski(self.region, s.memory.negate())
        self.local_map = InducedLocalMap(s, self.checked)
        support = self.local_map.input_support
        q = s.alphabet
        check_cap(f"lifts over {len(self.region)} cells", space_size(len(self.region), q), cap)
        self.variable = np.array([support.index(c) for c in self.region.cells], dtype=np.intp)
        self.variants = rank_digits(0, space_size(len(self.region), q), len(self.region), q)
        self.flip_position = self.checked.index(self.cell) if self.cell in self.checked else None

    @property
    def support(self) -> CellSet:
        return self.local_map.input_support

    def image(self, x: Pattern) -> Pattern:
        return self.local_map(x)

    def target(self, x: Pattern, symbol: int) -> Optional[Pattern]:
        """sigma_s(x) on the checked cells with the value at g replaced by `symbol`."""
        if self.flip_position is None:
            return None
        return self.image(x).with_symbol(self.cell, symbol)

    def search(self, x: Pattern, symbol: int) -> Optional[Pattern]:
        """First z (in rank order over g+E) agreeing with x elsewhere whose image hits the target."""
        target = self.target(x, symbol)
        if target is None:
            return None
        inputs = np.repeat(x.symbols[None, :], self.variants.shape[0], axis=0)
        inputs[:, self.variable] = self.variants
        hits = np.flatnonzero(np.all(self.local_map.apply_batch(inputs) == target.symbols[None, :], axis=1))
        if hits.size == 0:
            return None
        return Pattern(self.support, inputs[int(hits[0])])


def post_surjectivity_lift(s: RuleConfig, g: CellLike, E: CellSet, trials: int = DEFAULT_TRIALS,
                           window_radius: Optional[int] = None, background: int = 0,
                           seed: Optional[int] = None, cap: Optional[int] = None) -> Certificate:
    """
    For `trials` random x (uniform on g + [-window_radius, window_radius]^d,
    `background` elsewhere), every flip of sigma_s(x) at g must lift to a change
    of x on g+E only.
    """
    check_symbol(s, background)
    problem = LiftProblem(s, g, E, cap)
    g = problem.cell
    q = s.alphabet
    if window_radius is None:
        window_radius = max(chebyshev(sub(c, g)) for c in problem.support.cells)
    window = translate(Box.cube(window_radius, s.dim).cells(), g)
    covered = problem.support.issubset(window)
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    base = {
        "cell": list(g),
        "E": [list(c) for c in E.cells],
        "window_radius": window_radius,
        "background": background,
        "window_covers_neighbourhood": covered,
    }

    witness = None
    for trial in range(trials):
        random_part = Pattern(window, rng.integers(0, q, size=len(window), dtype=np.uint8))
        x = random_part.restrict(problem.support.intersection(window)).extend(problem.support, background)
        current = problem.image(x)[g] if problem.flip_position is not None else None
        for symbol in range(q):
            if symbol == current:
                continue
            z = problem.search(x, symbol)
            if z is None:
                logger.debug("lift fails at %s for trial %d, symbol %d", g, trial, symbol)
                return Certificate(
                    CertificateKind.LIFT_FAILURE,
                    {**base, "trial": trial, "x": x.to_json(), "symbol": symbol},
                    {"x": x},
                )
            if witness is None:
                witness = {"x": x.to_json(), "z": z.to_json(), "symbol": symbol}
    return Certificate(CertificateKind.LIFT_WITNESS, {**base, "trials": trials, "witness": witness})


def uniform_post_surjectivity_radius(s: RuleConfig, cells: Optional[Sequence[CellLike]] = None, max_radius: int = 3,
                                     trials: int = DEFAULT_TRIALS, background: int = 0,
                                     seed: Optional[int] = None, cap: Optional[int] = None) -> Optional[int]:
    """
    Smallest r such that the lift probe with E = B_r succeeds at every listed cell.
    Cells default to one representative per view class of s around the checked region.
    """
    if cells is None:
        reach = minkowski(Box.cube(max_radius, s.dim).cells(), s.memory.negate())
        cells = [view_class.representative for view_class in distinct_view_classes(s, reach)]
    for r in range(max_radius + 1):
        E = Box.cube(r, s.dim).cells()
        if all(
            post_surjectivity_lift(s, g, E, trials, None, background, seed, cap).kind == CertificateKind.LIFT_WITNESS
            for g in cells
        ):
            return r
    return None


def stable_post_surjectivity_probe(s: RuleConfig, max_radius: int = 3, trials: int = DEFAULT_TRIALS,
                                   background: int = 0, seed: Optional[int] = None,
                                   cap: Optional[int] = None) -> ClosureReport:
    """Uniform post-surjectivity radius of s and of each limit point of its orbit closure."""
    closure = orbit_closure(s)
    representatives = [("s", s)] + [(f"limit[{i}]", p) for i, p in enumerate(closure.limit_points) if p != s]
    results: List[RepresentativeResult] = []
    for label, config in representatives:
        radius = uniform_post_surjectivity_radius(config, None, max_radius, trials, background, seed, cap)
        results.append(RepresentativeResult(label, config.describe(), value=radius, config=config))
    verdict = "unrefuted" if all(r.value is not None for r in results) else "inconclusive"
    return ClosureReport("stable-post-surjectivity", verdict, max_radius, results)


__all__ = ["post_surjectivity_lift", "stable_post_surjectivity_probe", "uniform_post_surjectivity_radius"]
