import logging
from typing import List, Optional, Sequence

import numpy as np

from ..engine import InducedLocalMap, Pattern
from ..engine.enumeration import check_cap, first_collision, map_space, rank_digits, row_keys, space_size
from ..exceptions import CapExceededException, InvalidRuleException
from ..rules import RuleConfig
from ..rules.views import orbit_closure
from ..universe import Box
from . import Certificate, CertificateKind, ClosureReport, RepresentativeResult
from .periodic import lift_collision, wrap_compatibility

logger = logging.getLogger(__name__)


def _asymptotic_collision(s: RuleConfig, radius: int, background: int, cap: Optional[int]) -> Optional[Certificate]:
    """Two patterns on [-r, r]^d, background elsewhere, whose images agree everywhere."""
    q, d = s.alphabet, s.dim
    varying_box = Box.cube(radius, d)
    window_box = Box.cube(radius + s.memory_radius, d)
    varying = varying_box.cells()
    local_map = InducedLocalMap(s, window_box.cells())
    support = local_map.input_support
    check_cap(f"asymptotic pairs on {varying_box}", space_size(len(varying), q), cap)

    base = np.full(len(support), background, dtype=np.uint8)
    positions = np.array([support.index(c) for c in varying.cells], dtype=np.intp)

    def image_keys(start: int, rows: np.ndarray) -> np.ndarray:
        inputs = np.repeat(base[None, :], rows.shape[0], axis=0)
        inputs[:, positions] = rows
        return row_keys(local_map.apply_batch(inputs), q)

    keys = np.concatenate(map_space(image_keys, len(varying), q))
    pair = first_collision(keys)
    if pair is None:
        return None

    def lifted(rank: int) -> Pattern:
        symbols = base.copy()
        symbols[positions] = rank_digits(rank, rank + 1, len(varying), q)[0]
        return Pattern(support, symbols)

    x, y = lifted(pair[0]), lifted(pair[1])
    image = local_map(x)
    return Certificate(
        CertificateKind.COLLISION_ASYMPTOTIC,
        {
            "radius": radius,
            "background": background,
            "varying": str(varying_box),
            "window": str(window_box),
            "x": x.to_json(),
            "y": y.to_json(),
            "image": image.to_json(),
            "differ_at": list(x.differing_cells(y)[0]),
        },
        {"x": x, "y": y},
    )


def _periodic_boxes(radius: int, dim: int) -> List[Box]:
    boxes = [Box((0,) * dim, (radius,) * dim)]
    if radius > 0:
        boxes.append(Box.cube(radius, dim))
    return boxes


def collision_search(s: RuleConfig, max_radius: int, backgrounds: Optional[Sequence[int]] = None,
                     cap: Optional[int] = None) -> Certificate:
    """
    Radius by radius: asymptotic pairs over every background symbol, then
    K-periodic pairs on wrap-compatible boxes. The first certificate found is
    the lexicographically first one of that search order.
    """
    backgrounds = list(range(s.alphabet)) if backgrounds is None else [int(b) for b in backgrounds]
    for b in backgrounds:
        if not 0 <= b < s.alphabet:
            raise InvalidRuleException(f"Background symbol {b} out of range 0..{s.alphabet - 1}")

    for r in range(max_radius + 1):
        try:
            for b in backgrounds:
                certificate = _asymptotic_collision(s, r, b, cap)
                if certificate is not None:
                    return certificate
            for K in _periodic_boxes(r, s.dim):
                if not wrap_compatibility(s, K):
                    continue
                found = lift_collision(s, K, cap)
                if found is not None:
                    return Certificate(CertificateKind.COLLISION_PERIODIC, {"radius": r, **found})
        except CapExceededException as ex:
            ex.partial = Certificate.inconclusive("collisions", r - 1).to_dict()
            raise
        logger.debug("no collision up to radius %d", r)
    return Certificate.inconclusive("collisions", max_radius)


def stable_injectivity_check(s: RuleConfig, max_radius: int, backgrounds: Optional[Sequence[int]] = None,
                             cap: Optional[int] = None) -> ClosureReport:
    """Collision search on s and on every limit point of its orbit closure."""
    closure = orbit_closure(s)
    representatives = [("s", s)] + [
        (f"limit[{i}]", p) for i, p in enumerate(closure.limit_points) if p != s
    ]
    results = []
    for label, config in representatives:
        certificate = collision_search(config, max_radius, backgrounds, cap)
        results.append(RepresentativeResult(label, config.describe(), certificate, config=config))
    refuted = any(r.certificate.is_refutation for r in results)
    return ClosureReport("stable-injectivity", "refuted" if refuted else "unrefuted", max_radius, results)


__all__ = ["collision_search", "stable_injectivity_check"]
