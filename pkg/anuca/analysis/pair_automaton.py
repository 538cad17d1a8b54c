"""
Exact injectivity decision for constant one-dimensional rules.

Nodes of the pair graph are pairs (u, v) of words of length w-1 (w the width of
the memory span); an edge appends symbols (a, b) when the rule gives the same
output on u+a and v+b. Bi-infinite paths are pairs of configurations with equal
images, so sigma is non-injective exactly when some edge with a != b leaves a
node reachable from a cycle and enters a node that reaches a cycle.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..engine.enumeration import check_cap
from ..exceptions import DimensionMismatchException
from ..rules import Constant, LocalRule, RuleConfig
from ..universe import CellSet

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Node = Tuple[Word, Word]


def _word_text(word: Sequence[int]) -> str:
    return "".join(np.base_repr(a, 36).lower() for a in word)


@dataclass(frozen=True)
class EventuallyPeriodicPair:
    """x = ...L_x L_x C_x R_x R_x..., y likewise; both periods have equal lengths."""

    left_x: Word
    left_y: Word
    centre_x: Word
    centre_y: Word
    right_x: Word
    right_y: Word

    def words(self, repeats: int) -> Tuple[Word, Word]:
        x = self.left_x * repeats + self.centre_x + self.right_x * repeats
        y = self.left_y * repeats + self.centre_y + self.right_y * repeats
        return x, y

    def replays(self, rule: LocalRule) -> bool:
        """Both configurations have equal images on every fully determined cell of a long window, and differ."""
        full, width = _contiguous(rule)
        x, y = self.words(width + 1)
        if x == y:
            return False
        q = rule.alphabet
        weights = q ** np.arange(width, dtype=np.int64)

        def image(word: Word) -> np.ndarray:
            windows = np.lib.stride_tricks.sliding_window_view(np.asarray(word, dtype=np.int64), width)
            return full.table[(windows * weights).sum(axis=1)]

        return bool(np.array_equal(image(x), image(y)))

    def to_dict(self) -> Dict[str, str]:
        return {
            "left_x": _word_text(self.left_x),
            "left_y": _word_text(self.left_y),
            "centre_x": _word_text(self.centre_x),
            "centre_y": _word_text(self.centre_y),
            "right_x": _word_text(self.right_x),
            "right_y": _word_text(self.right_y),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> "EventuallyPeriodicPair":
        return cls(**{key: tuple(int(ch, 36) for ch in data[key]) for key in (
            "left_x", "left_y", "centre_x", "centre_y", "right_x", "right_y")})


@dataclass
class InjectivityVerdict:
    injective: bool
    witness: Optional[EventuallyPeriodicPair]
    nodes: int
    edges: int

    def to_dict(self) -> dict:
        return {
            "injective": self.injective,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "nodes": self.nodes,
            "edges": self.edges,
        }


def _contiguous(rule: LocalRule) -> Tuple[LocalRule, int]:
    if rule.memory.dim != 1:
        raise DimensionMismatchException("The pair automaton decides one-dimensional rules only")
    lo, hi = rule.memory.cells[0][0], rule.memory.cells[-1][0]
    return rule.extend(CellSet.interval(lo, hi)), hi - lo + 1


def pair_graph(rule: LocalRule, cap: Optional[int] = None) -> nx.DiGraph:
    full, width = _contiguous(rule)
    q = rule.alphabet
    words = list(itertools.product(range(q), repeat=width - 1))
    check_cap("pair graph edges", len(words) ** 2 * q * q, cap)
    weights = [q ** i for i in range(width)]

    def output(word: Word) -> int:
        return int(full.table[sum(a * p for a, p in zip(word, weights))])

    graph = nx.DiGraph()
    for u, v in itertools.product(words, repeat=2):
        graph.add_node((u, v))
        for a, b in itertools.product(range(q), repeat=2):
            if output(u + (a,)) != output(v + (b,)):
                continue
            target = ((u + (a,))[1:], (v + (b,))[1:])
            if graph.has_edge((u, v), target):
                graph[(u, v)][target]["labels"].append((a, b))
            else:
                graph.add_edge((u, v), target, labels=[(a, b)])
    return graph


def _cycle_nodes(graph: nx.DiGraph) -> set:
    nodes = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            nodes |= component
        else:
            node = next(iter(component))
            if graph.has_edge(node, node):
                nodes.add(node)
    return nodes


def _cycle_through(graph: nx.DiGraph, node: Node) -> List[Node]:
    if graph.has_edge(node, node):
        return [node, node]
    successor = min(n for n in graph.successors(node) if nx.has_path(graph, n, node))
    return [node] + nx.shortest_path(graph, successor, node)


def _nearest(paths: Dict[Node, List[Node]], targets: set) -> List[Node]:
    candidates = [n for n in paths if n in targets]
    best = min(candidates, key=lambda n: (len(paths[n]), n))
    return paths[best]


def _labels(graph: nx.DiGraph, path: Sequence[Node]) -> List[Tuple[int, int]]:
    return [graph[a][b]["labels"][0] for a, b in zip(path, path[1:])]


def constant_injectivity_1d(rule: Union[LocalRule, RuleConfig], cap: Optional[int] = None) -> InjectivityVerdict:
    if isinstance(rule, RuleConfig):
        if not isinstance(rule, Constant):
            raise DimensionMismatchException("Only constant configurations are decided by the pair automaton")
        rule = rule.rule
    graph = pair_graph(rule, cap)
    cycles = _cycle_nodes(graph)
    forward = set(cycles)
    backward = set(cycles)
    for node in cycles:
        forward |= nx.descendants(graph, node)
        backward |= nx.ancestors(graph, node)

    for source, target in sorted(graph.edges()):
        if source not in forward or target not in backward:
            continue
        for a, b in graph[source][target]["labels"]:
            if a == b:
                continue
            head = list(reversed(_nearest(nx.single_source_shortest_path(graph.reverse(copy=False), source), cycles)))
            tail = _nearest(nx.single_source_shortest_path(graph, target), cycles)
            left = _labels(graph, _cycle_through(graph, head[0]))
            right = _labels(graph, _cycle_through(graph, tail[-1]))
            centre = _labels(graph, head) + [(a, b)] + _labels(graph, tail)
            witness = EventuallyPeriodicPair(
                tuple(p[0] for p in left), tuple(p[1] for p in left),
                tuple(p[0] for p in centre), tuple(p[1] for p in centre),
                tuple(p[0] for p in right), tuple(p[1] for p in right),
            )
            logger.debug("non-injective: differing edge %s -> %s labelled %s", source, target, (a, b))
            return InjectivityVerdict(False, witness, graph.number_of_nodes(), graph.number_of_edges())
    return InjectivityVerdict(True, None, graph.number_of_nodes(), graph.number_of_edges())


__all__ = ["EventuallyPeriodicPair", "InjectivityVerdict", "constant_injectivity_1d", "pair_graph"]
