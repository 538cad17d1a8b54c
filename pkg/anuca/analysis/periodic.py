"""
Periodization checks on a box K.

A K-periodic lift x~ of x in A^K is a genuine configuration of Z^d, so a
collision of Psi_{K,s} is a collision of sigma_s only when the lifted pair also
collides at every translate k + side*v of each k in K, i.e. under every rule
that s takes on the residue class of k. `residue_rule_layers` lists those
rules as Psi layers.
"""

import hashlib
import logging
from typing import Dict, List, Optional

import numpy as np

from ..engine import PeriodizedMap
from ..engine.enumeration import check_cap, first_collision, space_size
from ..rules import LocalRule, RuleConfig
from ..rules.views import far_rules
from ..universe import Box, CellSet, box_reduce, minkowski
from . import Certificate, CertificateKind

logger = logging.getLogger(__name__)


def wrap_compatibility(s: RuleConfig, K: Box, E: Optional[CellSet] = None) -> bool:
    """s(g) = s(k_g) on the exterior boundary (K+E) minus K; E defaults to the memory of s."""
    E = s.memory if E is None else E
    cells = K.cells()
    exterior = minkowski(cells, E).difference(cells)
    return all(s.rule_at(g) == s.rule_at(box_reduce(g, K)) for g in exterior.cells)


def residue_rule_layers(s: RuleConfig, K: Box) -> List[List[LocalRule]]:
    """
    Layers of per-cell rules over the cells of K; layer 0 is s restricted to K and
    together the layers cover every rule s takes on each residue class mod K.
    """
    cells = K.cells()
    classes: Dict[tuple, List[LocalRule]] = {k: [s.rule_at(k)] for k in cells.cells}
    extra = list(far_rules(s))
    irregular = s.irregular_box()
    if irregular is not None:
        for g in irregular.cells():
            classes[box_reduce(g, K)].append(s.rule_at(g))
    for k in cells.cells:
        unique: List[LocalRule] = []
        for rule in classes[k] + extra:
            if rule not in unique:
                unique.append(rule)
        classes[k] = unique
    depth = max(len(rules) for rules in classes.values())
    return [[classes[k][min(j, len(classes[k]) - 1)] for k in cells.cells] for j in range(depth)]


def _lift_keys(s: RuleConfig, K: Box, cap: Optional[int]) -> np.ndarray:
    """Per pattern of A^K, the Psi image ranks under every residue layer (one column per layer)."""
    layers = residue_rule_layers(s, K)
    tables = [PeriodizedMap(s, K, layer).materialize(cap) for layer in layers]
    return np.stack(tables, axis=1)


def lift_collision(s: RuleConfig, K: Box, cap: Optional[int] = None) -> Optional[Dict[str, object]]:
    """Lexicographically first pair of distinct K-periodic configurations with equal sigma_s images."""
    size = space_size(K.volume, s.alphabet)
    check_cap(f"periodic patterns over {K}", size, cap)
    keys = _lift_keys(s, K, cap)
    if keys.shape[1] == 1:
        pair = first_collision(keys[:, 0])
    else:
        _, labels = np.unique(keys, axis=0, return_inverse=True)
        pair = first_collision(labels.reshape(-1))
    if pair is None:
        return None
    psi = PeriodizedMap(s, K)
    x, y = psi.pattern_of_rank(pair[0]), psi.pattern_of_rank(pair[1])
    return {"box": str(K), "x": x.to_packed(), "y": y.to_packed(), "image": psi(x).to_packed(), "layers": int(keys.shape[1])}


def psi_invertibility_check(s: RuleConfig, K: Box, cap: Optional[int] = None) -> Certificate:
    """Materialize Psi_{K,s}: psi-bijection with its inverse table, or the first Psi collision."""
    psi = PeriodizedMap(s, K)
    forward = psi.materialize(cap)
    inverse = psi.inverse_table(cap)
    if inverse is not None:
        return Certificate(
            CertificateKind.PSI_BIJECTION,
            {
                "box": str(K),
                "entries": int(forward.shape[0]),
                "forward_sha256": hashlib.sha256(forward.tobytes()).hexdigest(),
                "inverse_sha256": hashlib.sha256(inverse.tobytes()).hexdigest(),
            },
            {"forward_table": forward, "inverse_table": inverse},
        )
    i, j = first_collision(forward)
    x, y = psi.pattern_of_rank(i), psi.pattern_of_rank(j)
    logger.debug("Psi over %s collides on ranks %d and %d", K, i, j)
    return Certificate(
        CertificateKind.PSI_COLLISION,
        {"box": str(K), "x": x.to_packed(), "y": y.to_packed(), "image": psi(x).to_packed()},
    )


def psi_left_inverse_holds(t: RuleConfig, s: RuleConfig, K: Box, cap: Optional[int] = None) -> bool:
    """Psi_{K,t} o Psi_{K,s} = Id on all of A^K."""
    forward_s = PeriodizedMap(s, K).materialize(cap)
    forward_t = PeriodizedMap(t, K).materialize(cap)
    return bool(np.array_equal(forward_t[forward_s], np.arange(forward_s.shape[0], dtype=np.int64)))


__all__ = [
    "lift_collision",
    "psi_invertibility_check",
    "psi_left_inverse_holds",
    "residue_rule_layers",
    "wrap_compatibility",
]
