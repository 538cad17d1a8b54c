import logging
from typing import Optional

import numpy as np

from ..engine import InducedLocalMap
from ..engine.enumeration import check_cap, map_space, space_size
from ..exceptions import CapExceededException
from ..rules import RuleConfig
from ..universe import Box, CellSet
from . import Certificate, CertificateKind, ImageWindow

logger = logging.getLogger(__name__)


def image_window(s: RuleConfig, omega: CellSet, cap: Optional[int] = None) -> ImageWindow:
    """Gamma_Omega = f+(A^{Omega+M}), by exhaustive enumeration."""
    local_map = InducedLocalMap(s, omega)
    n, q = len(local_map.input_support), s.alphabet
    check_cap(f"image over {len(omega)} cells", space_size(n, q), cap)

    def distinct_images(start: int, rows: np.ndarray) -> np.ndarray:
        return np.unique(local_map.apply_batch(rows), axis=0)

    blocks = map_space(distinct_images, n, q)
    rows = np.unique(np.concatenate(blocks, axis=0), axis=0)
    return ImageWindow(omega, q, rows)


def surjectivity_deficit(s: RuleConfig, max_radius: int, cap: Optional[int] = None) -> Certificate:
    """
    Scan Omega = [-r, r]^d for r = 0..max_radius and report the first missing
    image pattern. Never certifies surjectivity.
    """
    for r in range(max_radius + 1):
        box = Box.cube(r, s.dim)
        try:
            image = image_window(s, box.cells(), cap)
        except CapExceededException as ex:
            ex.partial = Certificate.inconclusive("surjectivity", r - 1).to_dict()
            raise
        logger.debug("radius %d: %d of %d patterns in the image", r, image.size, image.space_size)
        if not image.is_full():
            missing = image.first_missing()
            return Certificate(
                CertificateKind.MISSING_IMAGE_PATTERN,
                {
                    "radius": r,
                    "window": str(box),
                    "pattern": missing.to_json(),
                    "image_size": image.size,
                    "space_size": image.space_size,
                },
                {"pattern": missing},
            )
    return Certificate.inconclusive("surjectivity", max_radius)


__all__ = ["image_window", "surjectivity_deficit"]
