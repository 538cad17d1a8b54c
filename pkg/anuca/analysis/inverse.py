"""
Inverse synthesis.

sigma_s is reversible when x(g) is a function of y|_{g+N} for one finite N and
every g. For a finitely-described s that function only depends on the view of s
on g+N, so it is computed once per view class and packaged as a configuration q
with sigma_q o sigma_s = Id. Off the image, q(g) returns symbol 0.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..config import get_config
from ..engine import InducedLocalMap, compose
from ..engine.enumeration import check_cap, map_space, space_size
from ..exceptions import CapExceededException, InverseVerificationException
from ..rules import LocalRule, RuleConfig, map_rules
from ..rules.rule_file import config_to_dict
from ..rules.views import assemble_config, candidate_region, distinct_view_classes, joint_view_key, limit_pairs
from ..universe import Box, Cell, CellLike, CellSet, as_cell, origin, translate
from . import Certificate, CertificateKind, ClosureReport, RepresentativeResult

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 100
DEFAULT_WINDOW_RADIUS = 4


def _preimage_bounds(s: RuleConfig, g: Cell, N: CellSet, cap: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    For every y over g+N (indexed like a rule table over N), the min and max of
    x(g) over inputs x on g+N+M with f+(x) = y. Unseen images have max -1.
    """
    q = s.alphabet
    window = translate(N, g)
    local_map = InducedLocalMap(s, window)
    n = len(local_map.input_support)
    check_cap(f"preimages over {n} cells", space_size(n, q), cap)
    position = local_map.input_support.index(g)
    weights = q ** np.arange(len(N), dtype=np.int64)

    def codes(start: int, rows: np.ndarray) -> np.ndarray:
        index = (local_map.apply_batch(rows).astype(np.int64) * weights).sum(axis=1)
        return np.unique(index * q + rows[:, position])

    joint = np.unique(np.concatenate(map_space(codes, n, q)))
    index, symbol = joint // q, (joint % q).astype(np.int16)
    size = space_size(len(N), q)
    lo = np.full(size, q, dtype=np.int16)
    hi = np.full(size, -1, dtype=np.int16)
    np.minimum.at(lo, index, symbol)
    np.maximum.at(hi, index, symbol)
    return lo, hi


def _determined(lo: np.ndarray, hi: np.ndarray) -> bool:
    seen = hi >= 0
    return bool(np.all(lo[seen] == hi[seen]))


def min_determining_radius(s: RuleConfig, g: CellLike, max_radius: int, cap: Optional[int] = None) -> Optional[int]:
    """Smallest r such that sigma_s(x)|_{g+B_r} determines x(g), or None up to max_radius."""
    g = as_cell(g)
    for r in range(max_radius + 1):
        try:
            lo, hi = _preimage_bounds(s, g, Box.cube(r, s.dim).cells(), cap)
        except CapExceededException as ex:
            ex.partial = {"cell": list(g), "checked_radius": r - 1}
            raise
        if _determined(lo, hi):
            return r
    return None


def verify_left_inverse(t: RuleConfig, s: RuleConfig, trials: int = DEFAULT_TRIALS,
                        window_radius: int = DEFAULT_WINDOW_RADIUS, seed: Optional[int] = None,
                        cap: Optional[int] = None) -> bool:
    """sigma_t o sigma_s acts as the identity on `trials` random windows of the given radius."""
    composite = compose(t, s, cap)
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    q, d = s.alphabet, s.dim
    cube = Box.cube(window_radius, d).cells()
    region = candidate_region([(composite, CellSet([origin(d)]))])
    if region is None:
        centers = [origin(d)] * trials
    else:
        span = region.expand(window_radius)
        centers = [
            tuple(int(c) for c in rng.integers(span.lo, np.asarray(span.hi) + 1)) for _ in range(trials)
        ]
    maps: Dict[Cell, InducedLocalMap] = {}
    for center in centers:
        if center not in maps:
            maps[center] = InducedLocalMap(composite, translate(cube, center))
        local_map = maps[center]
        x = rng.integers(0, q, size=len(local_map.input_support), dtype=np.uint8)
        positions = [local_map.input_support.index(c) for c in local_map.window.cells]
        if not np.array_equal(local_map.apply_batch(x[None, :])[0], x[positions]):
            logger.debug("left inverse fails on the window around %s", center)
            return False
    return True


def synthesize_inverse(s: RuleConfig, max_radius: int, trials: int = DEFAULT_TRIALS,
                       window_radius: int = DEFAULT_WINDOW_RADIUS, seed: Optional[int] = None,
                       cap: Optional[int] = None) -> Certificate:
    """Smallest N = B_r (pruned to the offsets actually read) with a left inverse q over N."""
    q, d = s.alphabet, s.dim
    for r in range(max_radius + 1):
        N = Box.cube(r, d).cells()
        classes = distinct_view_classes(s, N)
        tables: Dict[tuple, LocalRule] = {}
        try:
            for view_class in classes:
                lo, hi = _preimage_bounds(s, view_class.representative, N, cap)
                if not _determined(lo, hi):
                    logger.debug("radius %d: x(g) undetermined at %s", r, view_class.representative)
                    break
                tables[view_class.view.key] = LocalRule(N, q, np.where(hi >= 0, lo, 0))
        except CapExceededException as ex:
            ex.partial = Certificate.inconclusive("inverse", r - 1).to_dict()
            raise
        if len(tables) < len(classes):
            continue

        parts = [(s, N)]
        inverse = assemble_config(parts, lambda g: tables[joint_view_key(parts, g)[0]])
        essential = CellSet([], dim=d)
        for rule in inverse.rules():
            essential = essential.union(rule.essential_offsets())
        if not len(essential):
            essential = CellSet([origin(d)])
        inverse = map_rules(inverse, lambda rule: rule.restrict(essential))

        if not verify_left_inverse(inverse, s, trials, window_radius, seed, cap):
            raise InverseVerificationException(f"Synthesized inverse at radius {r} fails its own verification")
        logger.debug("inverse found at radius %d over %d view classes", r, len(classes))
        return Certificate(
            CertificateKind.INVERSE_SYNTHESIZED,
            {
                "radius": r,
                "memory": [list(c) for c in essential.cells],
                "view_classes": len(classes),
                "inverse": config_to_dict(inverse),
                "trials": trials,
                "window_radius": window_radius,
            },
            {"inverse": inverse},
        )
    return Certificate.inconclusive("inverse", max_radius)


def invertibility_check(s: RuleConfig, max_radius: int, trials: int = DEFAULT_TRIALS,
                        window_radius: int = DEFAULT_WINDOW_RADIUS, seed: Optional[int] = None,
                        cap: Optional[int] = None) -> Certificate:
    """Synthesized left inverse q, plus whether it is also a right inverse (sigma_s o sigma_q = Id)."""
    certificate = synthesize_inverse(s, max_radius, trials, window_radius, seed, cap)
    if certificate.is_inconclusive:
        return Certificate.inconclusive("invertibility", max_radius)
    inverse = certificate.artifacts["inverse"]
    two_sided = verify_left_inverse(s, inverse, trials, window_radius, seed, cap)
    return Certificate(
        CertificateKind.INVERSE_SYNTHESIZED,
        {**certificate.payload, "two_sided": two_sided},
        certificate.artifacts,
    )


def stable_reversibility_check(t: RuleConfig, s: RuleConfig, trials: int = DEFAULT_TRIALS,
                               window_radius: int = DEFAULT_WINDOW_RADIUS, seed: Optional[int] = None,
                               cap: Optional[int] = None) -> ClosureReport:
    """sigma_t o sigma_s = Id, and the same for every joint limit (p, q) of translates of (s, t)."""
    pairs = [("s", s, t)] + [(f"limit[{i}]", p, q) for i, (p, q) in enumerate(limit_pairs(s, t))]
    results = []
    for label, p, q in pairs:
        holds = verify_left_inverse(q, p, trials, window_radius, seed, cap)
        results.append(RepresentativeResult(label, f"{p.describe()} <- {q.describe()}", value=holds, config=p))
    verdict = "verified" if all(r.value for r in results) else "refuted"
    return ClosureReport("stable-reversibility", verdict, window_radius, results)


__all__ = [
    "invertibility_check",
    "min_determining_radius",
    "stable_reversibility_check",
    "synthesize_inverse",
    "verify_left_inverse",
]
