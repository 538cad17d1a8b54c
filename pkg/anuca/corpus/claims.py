"""Re-running the expected verdicts attached to builtin examples."""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..analysis import (
    Certificate,
    collision_search,
    invertibility_check,
    post_surjectivity_lift,
    stable_injectivity_check,
    surjectivity_deficit,
    synthesize_inverse,
    uniform_post_surjectivity_radius,
)
from ..rules import RuleConfig
from ..universe import Box, origin
from . import Expectation, NamedExample

logger = logging.getLogger(__name__)

DEFAULT_BOUND = 3


@dataclass
class ClaimResult:
    example: str
    operation: str
    expected: str
    observed: str
    holds: bool
    detail: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "example": self.example,
            "operation": self.operation,
            "expected": self.expected,
            "observed": self.observed,
            "holds": self.holds,
            "detail": self.detail,
        }


def _bound(expectation: Expectation) -> int:
    return expectation.value if isinstance(expectation.value, int) else DEFAULT_BOUND


def _payload_matches(certificate: Certificate, expected: Any) -> bool:
    if not isinstance(expected, dict):
        return True
    payload = certificate.payload
    for key, value in expected.items():
        if key == "packed":
            observed = payload.get("pattern", {}).get("packed")
        else:
            observed = payload.get(key)
        if observed != value:
            return False
    return True


Check = Callable[[RuleConfig, Expectation, Optional[int]], Tuple[str, bool, Dict[str, Any]]]


def _certificate_check(run: Callable[[RuleConfig, int, Optional[int]], Certificate]) -> Check:
    def check(s: RuleConfig, expectation: Expectation, cap: Optional[int]) -> Tuple[str, bool, Dict[str, Any]]:
        certificate = run(s, _bound(expectation), cap)
        observed = certificate.kind.value
        holds = observed == expectation.verdict and _payload_matches(certificate, expectation.value)
        return observed, holds, certificate.to_dict()

    return check


def _stable_injectivity(s: RuleConfig, expectation: Expectation, cap: Optional[int]) -> Tuple[str, bool, Dict[str, Any]]:
    report = stable_injectivity_check(s, _bound(expectation), cap=cap)
    return report.verdict, report.verdict == expectation.verdict, report.to_dict()


def _inverse(s: RuleConfig, expectation: Expectation, cap: Optional[int]) -> Tuple[str, bool, Dict[str, Any]]:
    certificate = synthesize_inverse(s, _bound(expectation), cap=cap)
    observed = certificate.kind.value
    holds = observed == expectation.verdict
    if holds and isinstance(expectation.value, list):
        holds = certificate.payload["memory"] == expectation.value
    return observed, holds, certificate.to_dict()


def _post_surjectivity_radius(s: RuleConfig, expectation: Expectation, cap: Optional[int]) -> Tuple[str, bool, Dict[str, Any]]:
    radius = uniform_post_surjectivity_radius(s, max_radius=DEFAULT_BOUND, cap=cap)
    return "value", radius == expectation.value, {"radius": radius}


CLAIM_CHECKS: Dict[str, Check] = {
    "collision_search": _certificate_check(lambda s, bound, cap: collision_search(s, bound, cap=cap)),
    "stable_injectivity_check": _stable_injectivity,
    "surjectivity_deficit": _certificate_check(lambda s, bound, cap: surjectivity_deficit(s, bound, cap=cap)),
    "synthesize_inverse": _inverse,
    "invertibility_check": _certificate_check(lambda s, bound, cap: invertibility_check(s, bound, cap=cap)),
    "uniform_post_surjectivity_radius": _post_surjectivity_radius,
    "post_surjectivity_lift": _certificate_check(
        lambda s, bound, cap: post_surjectivity_lift(s, origin(s.dim), Box.cube(1, s.dim).cells(), cap=cap)
    ),
}


def check_example(example: NamedExample, cap: Optional[int] = None) -> List[ClaimResult]:
    results = []
    for operation, expectation in example.expected.items():
        observed, holds, detail = CLAIM_CHECKS[operation](example.config, expectation, cap)
        if not holds:
            logger.warning("%s: %s gave %s, expected %s", example.name, operation, observed, expectation.verdict)
        results.append(ClaimResult(example.name, operation, expectation.verdict, observed, holds, detail))
    return results


__all__ = ["CLAIM_CHECKS", "ClaimResult", "check_example"]
