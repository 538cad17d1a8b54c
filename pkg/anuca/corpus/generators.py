"""
Parametric configurations with bounded singularity.

For increasing sequences g(n) <= f(n) with f(n) < g(n+1) and f(n) - g(n)
increasing, the ring R_n = {a : g(n) <= |a| <= f(n)}^d is a union of 2^d boxes,
one per sign pattern. The configuration is `ring_rule` on every materialized
ring and `gap_rule` elsewhere. A cube [-m, m]^d whose memory boundary stays
inside the thickness of ring n wraps onto cells of the same ring, so it is
wrap-compatible.
"""

import itertools
from typing import List, Sequence, Tuple

from ..exceptions import SequenceConstraintException
from ..rules import BoxList, LocalRule
from ..universe import Box


def _check_sequences(g_seq: Sequence[int], f_seq: Sequence[int], n_boxes: int) -> None:
    if n_boxes < 1:
        raise SequenceConstraintException(f"Need at least one ring, got n_boxes={n_boxes}")
    if len(g_seq) < n_boxes or len(f_seq) < n_boxes:
        raise SequenceConstraintException(
            f"Sequences of length {len(g_seq)} and {len(f_seq)} cannot describe {n_boxes} rings"
        )
    g, f = list(g_seq[:n_boxes]), list(f_seq[:n_boxes])
    if g[0] < 0:
        raise SequenceConstraintException(f"g(0)={g[0]} must be non-negative")
    for n in range(n_boxes):
        if g[n] > f[n]:
            raise SequenceConstraintException(f"g({n})={g[n]} exceeds f({n})={f[n]}")
    for n in range(n_boxes - 1):
        if not g[n] < g[n + 1] or not f[n] < f[n + 1]:
            raise SequenceConstraintException(f"Sequences must be strictly increasing (index {n})")
        if not f[n] < g[n + 1]:
            raise SequenceConstraintException(f"Ring {n} overlaps ring {n + 1}: f({n})={f[n]} >= g({n + 1})={g[n + 1]}")
        if not f[n] - g[n] < f[n + 1] - g[n + 1]:
            raise SequenceConstraintException(f"Ring thickness must grow: f-g at {n} is not below f-g at {n + 1}")


def _ring_boxes(g: int, f: int, d: int) -> List[Box]:
    intervals: List[Tuple[int, int]] = [(-f, -g), (g, f)] if g > 0 else [(-f, f)]
    return [
        Box(tuple(lo for lo, _ in choice), tuple(hi for _, hi in choice))
        for choice in itertools.product(intervals, repeat=d)
    ]


def bounded_singularity_config(d: int, f_seq: Sequence[int], g_seq: Sequence[int], ring_rule: LocalRule,
                               gap_rule: LocalRule, n_boxes: int) -> BoxList:
    """
    Materialize the first `n_boxes` rings. The result is flagged as truncated:
    it is a finite prefix of an infinite family, so orbit-closure checks refuse it.
    """
    _check_sequences(g_seq, f_seq, n_boxes)
    boxes = []
    for n in range(n_boxes):
        for box in _ring_boxes(int(g_seq[n]), int(f_seq[n]), d):
            boxes.append((box, ring_rule))
    return BoxList(gap_rule, tuple(boxes), (), truncated=True)


def ring_box(g_seq: Sequence[int], f_seq: Sequence[int], n: int, d: int, margin: int) -> Box:
    """The cube [-m, m]^d with m = g(n) + margin - 1; needs m <= f(n) - margin."""
    if not 0 <= n < min(len(g_seq), len(f_seq)):
        raise SequenceConstraintException(f"Ring index {n} out of range")
    if margin < 1:
        raise SequenceConstraintException(f"Margin must be positive, got {margin}")
    m = g_seq[n] + margin - 1
    if m > f_seq[n] - margin:
        raise SequenceConstraintException(
            f"Ring {n} is too thin for margin {margin}: m={m} > f({n})-margin={f_seq[n] - margin}"
        )
    return Box.cube(m, d)


__all__ = ["bounded_singularity_config", "ring_box"]
