"""Composition sigma_s o sigma_t = sigma_q with q over the memory M+N."""

import logging
from typing import Optional, Sequence

import numpy as np

from ..exceptions import DimensionMismatchException, InvalidRuleException
from ..rules import LocalRule, RuleConfig, all_digits
from ..rules.views import ViewMemo, assemble_config
from ..universe import CellSet, add, minkowski, origin
from .enumeration import check_cap, space_size

logger = logging.getLogger(__name__)


def compose_rules(outer: LocalRule, inner: Sequence[LocalRule], cap: Optional[int] = None) -> LocalRule:
    """
    The rule over M+N computing outer((inner_i(y|_{m_i+N}))_i), where inner[i]
    is the rule of the inner configuration at offset m_i of outer's memory.
    """
    M = outer.memory
    if len(inner) != len(M):
        raise InvalidRuleException(f"Expected {len(M)} inner rules, got {len(inner)}")
    N = inner[0].memory
    q = outer.alphabet
    joint = minkowski(M, N)
    check_cap(f"composite table over {len(joint)} offsets", space_size(len(joint), q), cap, kind="compose")

    digits = all_digits(len(joint), q).astype(np.int64)
    positions = joint.positions()
    inner_weights = q ** np.arange(len(N), dtype=np.int64)
    outer_index = np.zeros(digits.shape[0], dtype=np.int64)
    for i, (m, rule) in enumerate(zip(M.cells, inner)):
        gather = [positions[add(m, n)] for n in N.cells]
        values = rule.table[(digits[:, gather] * inner_weights).sum(axis=1)].astype(np.int64)
        outer_index += values * q ** i
    return LocalRule(joint, q, outer.table[outer_index])


def compose(s: RuleConfig, t: RuleConfig, cap: Optional[int] = None) -> RuleConfig:
    """q with sigma_q = sigma_s o sigma_t (s applied last)."""
    if s.dim != t.dim:
        raise DimensionMismatchException(f"Cannot compose a {s.dim}-dimensional with a {t.dim}-dimensional configuration")
    if s.alphabet != t.alphabet:
        raise InvalidRuleException(f"Alphabet mismatch: {s.alphabet} vs {t.alphabet}")
    M = s.memory
    check_cap(
        f"composite table over {len(minkowski(M, t.memory))} offsets",
        space_size(len(minkowski(M, t.memory)), s.alphabet),
        cap,
        kind="compose",
    )
    parts = [(s, CellSet([origin(s.dim)])), (t, M)]
    build = ViewMemo(parts, lambda g: compose_rules(s.rule_at(g), [t.rule_at(add(g, m)) for m in M.cells], cap))
    composite = assemble_config(parts, build)
    logger.debug("composed %s with %s: %d distinct composite rules", s.describe(), t.describe(), len(build.cache))
    return composite


__all__ = ["compose", "compose_rules"]
