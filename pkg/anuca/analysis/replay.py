"""Independent re-verification of certificates from their JSON payload."""

import hashlib
import logging
from typing import Callable, Dict, Optional

from ..engine import PeriodizedMap, Pattern, apply_window
from ..rules import RuleConfig
from ..rules.rule_file import from_dict
from ..universe import Box, CellSet, minkowski
from . import Certificate, CertificateKind
from .images import image_window
from .inverse import verify_left_inverse
from .periodic import residue_rule_layers
from .post_surjectivity import LiftProblem

logger = logging.getLogger(__name__)


def _collision_asymptotic(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    p = c.payload
    x, y = Pattern.from_json(p["x"]), Pattern.from_json(p["y"])
    window = Box.parse(p["window"]).cells()
    varying = Box.parse(p["varying"]).cells()
    if x.support != minkowski(window, s.memory) or y.support != x.support or x == y:
        return False
    if not minkowski(varying, s.memory.negate()).issubset(window):
        return False
    outside = x.support.difference(varying)
    background = int(p["background"])
    if any(x[c] != background or y[c] != background for c in outside.cells):
        return False
    image = apply_window(s, window, x)
    return image == apply_window(s, window, y) and image == Pattern.from_json(p["image"])


def _collision_periodic(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    p = c.payload
    K = Box.parse(p["box"])
    x, y = Pattern.from_packed(p["x"], K), Pattern.from_packed(p["y"], K)
    if x == y:
        return False
    return all(
        PeriodizedMap(s, K, layer)(x) == PeriodizedMap(s, K, layer)(y) for layer in residue_rule_layers(s, K)
    )


def _missing_image_pattern(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    pattern = Pattern.from_json(c.payload["pattern"])
    return pattern not in image_window(s, Box.parse(c.payload["window"]).cells(), cap)


def _inverse_synthesized(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    p = c.payload
    inverse = from_dict(p["inverse"])
    if not verify_left_inverse(inverse, s, p["trials"], p["window_radius"], cap=cap):
        return False
    if "two_sided" in p:
        return verify_left_inverse(s, inverse, p["trials"], p["window_radius"], cap=cap) == p["two_sided"]
    return True


def _psi_bijection(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    psi = PeriodizedMap(s, Box.parse(c.payload["box"]))
    forward = psi.materialize(cap)
    inverse = psi.inverse_table(cap)
    return (
        inverse is not None
        and hashlib.sha256(forward.tobytes()).hexdigest() == c.payload["forward_sha256"]
        and hashlib.sha256(inverse.tobytes()).hexdigest() == c.payload["inverse_sha256"]
    )


def _psi_collision(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    p = c.payload
    K = Box.parse(p["box"])
    psi = PeriodizedMap(s, K)
    x, y = Pattern.from_packed(p["x"], K), Pattern.from_packed(p["y"], K)
    return x != y and psi(x) == psi(y) == Pattern.from_packed(p["image"], K)


def _lift_problem(c: Certificate, s: RuleConfig, cap: Optional[int]) -> LiftProblem:
    return LiftProblem(s, tuple(c.payload["cell"]), CellSet(c.payload["E"], dim=s.dim), cap)


def _lift_witness(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    witness = c.payload.get("witness")
    if witness is None:
        return True
    problem = _lift_problem(c, s, cap)
    x, z = Pattern.from_json(witness["x"]), Pattern.from_json(witness["z"])
    outside = problem.support.difference(problem.region)
    if any(x[cell] != z[cell] for cell in outside.cells):
        return False
    target = problem.target(x, int(witness["symbol"]))
    return target is not None and problem.image(z) == target


def _lift_failure(c: Certificate, s: RuleConfig, cap: Optional[int]) -> bool:
    problem = _lift_problem(c, s, cap)
    return problem.search(Pattern.from_json(c.payload["x"]), int(c.payload["symbol"])) is None


REPLAYERS: Dict[CertificateKind, Callable[[Certificate, RuleConfig, Optional[int]], bool]] = {
    CertificateKind.COLLISION_ASYMPTOTIC: _collision_asymptotic,
    CertificateKind.COLLISION_PERIODIC: _collision_periodic,
    CertificateKind.MISSING_IMAGE_PATTERN: _missing_image_pattern,
    CertificateKind.INVERSE_SYNTHESIZED: _inverse_synthesized,
    CertificateKind.PSI_BIJECTION: _psi_bijection,
    CertificateKind.PSI_COLLISION: _psi_collision,
    CertificateKind.LIFT_WITNESS: _lift_witness,
    CertificateKind.LIFT_FAILURE: _lift_failure,
    CertificateKind.INCONCLUSIVE: lambda c, s, cap: True,
}


def replay(certificate: Certificate, s: RuleConfig, cap: Optional[int] = None) -> bool:
    """Re-run the engine checks behind `certificate` for configuration s."""
    ok = REPLAYERS[certificate.kind](certificate, s, cap)
    logger.debug("replay of %s: %s", certificate.kind.value, "ok" if ok else "FAILED")
    return bool(ok)


__all__ = ["REPLAYERS", "replay"]
