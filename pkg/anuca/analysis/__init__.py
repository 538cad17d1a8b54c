"""
Finite checks of injectivity, surjectivity, reversibility and post-surjectivity.

Every check returns a `Certificate`: a JSON-ready payload that `replay` can
re-verify from scratch with the engine. Semi-decisions that exhaust their
search bound return an `inconclusive` certificate carrying the bound.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from ..engine import Pattern
from ..engine.enumeration import MAX_CODE_SPACE, rank_digits, ranks_of, space_size
from ..universe import CellSet


class CertificateKind(str, Enum):
    COLLISION_ASYMPTOTIC = "collision-asymptotic"
    COLLISION_PERIODIC = "collision-periodic"
    MISSING_IMAGE_PATTERN = "missing-image-pattern"
    INVERSE_SYNTHESIZED = "inverse-synthesized"
    PSI_BIJECTION = "psi-bijection"
    PSI_COLLISION = "psi-collision"
    LIFT_WITNESS = "lift-witness"
    LIFT_FAILURE = "lift-failure"
    INCONCLUSIVE = "inconclusive"


# kinds that refute injectivity, surjectivity or post-surjectivity
REFUTATION_KINDS = frozenset({
    CertificateKind.COLLISION_ASYMPTOTIC,
    CertificateKind.COLLISION_PERIODIC,
    CertificateKind.MISSING_IMAGE_PATTERN,
    CertificateKind.PSI_COLLISION,
    CertificateKind.LIFT_FAILURE,
})


@dataclass
class Certificate:
    """
    `payload` holds only JSON values (patterns as packed strings, boxes in
    ``lo..hi`` form). `artifacts` keeps in-process objects such as the
    synthesized inverse configuration; it is never serialized.
    """

    kind: CertificateKind
    payload: Dict[str, Any] = field(default_factory=dict)
    artifacts: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def inconclusive(cls, check: str, bound: int, **payload) -> "Certificate":
        return cls(CertificateKind.INCONCLUSIVE, {"check": check, "bound": bound, **payload})

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        data = dict(data)
        return cls(CertificateKind(data.pop("kind")), data)

    @property
    def is_refutation(self) -> bool:
        return self.kind in REFUTATION_KINDS

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == CertificateKind.INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, **self.payload}


@dataclass
class ImageWindow:
    """Gamma_Omega: the exact set of images over Omega, stored as sorted distinct rows."""

    window: CellSet
    alphabet: int
    rows: np.ndarray

    @property
    def size(self) -> int:
        return int(self.rows.shape[0])

    @property
    def space_size(self) -> int:
        return space_size(len(self.window), self.alphabet)

    def is_full(self) -> bool:
        return self.size == self.space_size

    def ranks(self) -> np.ndarray:
        return ranks_of(self.rows, self.alphabet)

    def __contains__(self, pattern: Pattern) -> bool:
        if pattern.support != self.window:
            return False
        return bool(np.any(np.all(self.rows == pattern.symbols[None, :], axis=1)))

    def patterns(self) -> Iterator[Pattern]:
        for row in self.rows:
            yield Pattern(self.window, row)

    def first_missing(self) -> Optional[Pattern]:
        """Lexicographically first pattern of A^Omega outside the image."""
        if self.is_full():
            return None
        if self.space_size >= MAX_CODE_SPACE:
            raise OverflowError("Pattern space too large to rank")
        ranks = self.ranks()
        gaps = np.flatnonzero(ranks != np.arange(ranks.shape[0], dtype=np.int64))
        missing = int(gaps[0]) if gaps.size else self.size
        return Pattern(self.window, rank_digits(missing, missing + 1, len(self.window), self.alphabet)[0])


@dataclass
class RepresentativeResult:
    label: str
    description: str
    certificate: Optional[Certificate] = None
    value: Any = None
    config: Any = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "config": self.description}
        if self.certificate is not None:
            data["certificate"] = self.certificate.to_dict()
        if self.value is not None:
            data["value"] = self.value
        return data


@dataclass
class ClosureReport:
    """Outcome of a check run over s and the limit points of its orbit closure."""

    check: str
    verdict: str
    bound: Optional[int]
    results: List[RepresentativeResult] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.verdict == "refuted"

    def certificates(self) -> List[Certificate]:
        return [r.certificate for r in self.results if r.certificate is not None]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "bound": self.bound,
            "results": [r.to_dict() for r in self.results],
        }


from .images import image_window, surjectivity_deficit  # noqa: E402
from .collisions import collision_search, stable_injectivity_check  # noqa: E402
from .periodic import psi_invertibility_check, psi_left_inverse_holds, residue_rule_layers, wrap_compatibility  # noqa: E402
from .inverse import (  # noqa: E402
    invertibility_check,
    min_determining_radius,
    stable_reversibility_check,
    synthesize_inverse,
    verify_left_inverse,
)
from .post_surjectivity import (  # noqa: E402
    post_surjectivity_lift,
    stable_post_surjectivity_probe,
    uniform_post_surjectivity_radius,
)
from .pair_automaton import EventuallyPeriodicPair, InjectivityVerdict, constant_injectivity_1d  # noqa: E402
from .replay import replay  # noqa: E402

__all__ = [
    "Certificate",
    "CertificateKind",
    "ClosureReport",
    "EventuallyPeriodicPair",
    "ImageWindow",
    "InjectivityVerdict",
    "REFUTATION_KINDS",
    "RepresentativeResult",
    "collision_search",
    "constant_injectivity_1d",
    "image_window",
    "invertibility_check",
    "min_determining_radius",
    "post_surjectivity_lift",
    "psi_invertibility_check",
    "psi_left_inverse_holds",
    "replay",
    "residue_rule_layers",
    "stable_injectivity_check",
    "stable_post_surjectivity_probe",
    "stable_reversibility_check",
    "surjectivity_deficit",
    "synthesize_inverse",
    "uniform_post_surjectivity_radius",
    "verify_left_inverse",
    "wrap_compatibility",
]
