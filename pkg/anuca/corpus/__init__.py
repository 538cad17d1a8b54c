"""
Built-in rule configurations used as golden fixtures.

Rule tables are written out as digit strings (index = sum_i digit_i * 2**i over
the canonical memory order, offset -1 first). For M = {-1, 0, 1} the index of a
neighbourhood (u, v, w) is u + 2v + 4w; for M = {-1, 0} it is u + 2v.
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..config import get_config
from ..exceptions import UnknownExampleException
from ..rules import Constant, LocalRule, RuleConfig, TwoSided1D
from ..rules.rule_file import dump_rule_file
from ..universe import CellSet

logger = logging.getLogger(__name__)

M3 = CellSet.interval(-1, 1)
M2 = CellSet.interval(-1, 0)

# f(u,v,w) = w
READ_RIGHT = LocalRule.from_digits(M3, 2, "00001111", name="f")
# g(u,v,w) = u + v mod 2
XOR_LEFT = LocalRule.from_digits(M3, 2, "01100110", name="g")
# h(u,v,w) = v
CENTRE = LocalRule.from_digits(M3, 2, "00110011", name="h")
# g(u,v,w) = u
READ_LEFT = LocalRule.from_digits(M3, 2, "01010101", name="g")
MAJORITY = LocalRule.from_digits(M3, 2, "00010111", name="majority")
IDENTITY = LocalRule.from_digits(CellSet.of(0), 2, "01", name="id")
# over M = {-1, 0}: f(u,v) = v, g(u,v) = u + v mod 2
COPY_2 = LocalRule.from_digits(M2, 2, "0011", name="f")
XOR_2 = LocalRule.from_digits(M2, 2, "0110", name="g")


@dataclass(frozen=True)
class Expectation:
    """Expected outcome of one analysis operation, with the argument backing it."""

    verdict: str
    note: str
    value: Optional[object] = None


@dataclass(frozen=True)
class NamedExample:
    name: str
    config: RuleConfig
    description: str
    expected: Dict[str, Expectation] = field(default_factory=dict)


def _examples() -> Dict[str, NamedExample]:
    ex1_s = TwoSided1D(READ_RIGHT, XOR_LEFT, 0)
    ex2_s = TwoSided1D(COPY_2, XOR_2, 0)
    ex3_s = TwoSided1D(READ_RIGHT, READ_LEFT, 0, {0: CENTRE})
    examples = [
        NamedExample(
            "ex1_s", ex1_s,
            "f(u,v,w)=w on n <= 0, g(u,v,w)=u+v on n >= 1",
            {
                "collision_search": Expectation(
                    "inconclusive", "injective: x(n)=y(n-1) for n <= 1, then x(n+1)=x(n)+y(n+1) for n >= 1", 6),
                "stable_injectivity_check": Expectation(
                    "refuted", "the right limit q=g is not injective: sigma_q(0)=sigma_q(1)=0"),
                "surjectivity_deficit": Expectation(
                    "missing-image-pattern", "every image satisfies y(1)=y(0)+y(-1) mod 2", {"radius": 1, "packed": "001"}),
                "synthesize_inverse": Expectation(
                    "inconclusive", "x(n) depends on y(n), ..., y(-1): no finite memory inverse", 5),
            },
        ),
        NamedExample(
            "ex1_p", Constant(READ_RIGHT), "constant f(u,v,w)=w (left limit of ex1_s)",
            {
                "collision_search": Expectation("inconclusive", "a shift is injective", 4),
                "synthesize_inverse": Expectation("inverse-synthesized", "x(n)=y(n-1)", [[-1]]),
            },
        ),
        NamedExample(
            "ex1_q", Constant(XOR_LEFT), "constant g(u,v,w)=u+v (right limit of ex1_s)",
            {
                "collision_search": Expectation(
                    "collision-periodic", "constant configurations 0 and 1 share the image 0", {"box": "0..0"}),
            },
        ),
        NamedExample(
            "ex2_s", ex2_s,
            "f(u,v)=v on n <= 0, g(u,v)=u+v on n >= 1, memory {-1,0}",
            {
                "collision_search": Expectation(
                    "inconclusive", "bijective: x(n)=y(n) for n <= 0, x(n)=y(n)-y(n-1)+...+(-1)^n y(0) for n >= 1", 6),
                "stable_injectivity_check": Expectation(
                    "refuted", "the right limit g is not injective: sigma_g(0)=sigma_g(1)=0"),
                "synthesize_inverse": Expectation(
                    "inconclusive", "x(n) depends on y(0), ..., y(n): not reversible", 5),
            },
        ),
        NamedExample(
            "ex2_s_k", Constant(XOR_2), "constant g(u,v)=u+v (right limit of ex2_s)",
            {
                "collision_search": Expectation(
                    "collision-periodic", "constant configurations 0 and 1 share the image 0", {"box": "0..0"}),
            },
        ),
        NamedExample(
            "ex3_s", ex3_s,
            "f(u,v,w)=w on n <= -1, h(u,v,w)=v at 0, g(u,v,w)=u on n >= 1",
            {
                "stable_injectivity_check": Expectation(
                    "unrefuted", "the orbit closure is {translates of s, p=f, q=g}, all injective", 6),
                "surjectivity_deficit": Expectation(
                    "missing-image-pattern", "the image is {y : y(-1)=y(0)=y(1)}", {"radius": 1, "packed": "001"}),
                "synthesize_inverse": Expectation(
                    "inverse-synthesized", "x(n)=y(n-1) for n <= 0 and x(n)=y(n+1) for n >= 0; off-image defaults read all of B_1",
                    [[-1], [0], [1]]),
                "invertibility_check": Expectation(
                    "inverse-synthesized", "left inverse only: sigma_s is not surjective", {"two_sided": False}),
            },
        ),
        NamedExample(
            "ex3_p", Constant(READ_RIGHT), "constant f(u,v,w)=w (left limit of ex3_s)",
            {"collision_search": Expectation("inconclusive", "a shift is injective", 4)},
        ),
        NamedExample(
            "ex3_q", Constant(READ_LEFT), "constant g(u,v,w)=u (right limit of ex3_s)",
            {"collision_search": Expectation("inconclusive", "a shift is injective", 4)},
        ),
        NamedExample(
            "shift", Constant(READ_RIGHT.with_name("shift")), "left shift y(n)=x(n+1)",
            {
                "surjectivity_deficit": Expectation("inconclusive", "a shift is surjective", 3),
                "synthesize_inverse": Expectation("inverse-synthesized", "x(n)=y(n-1)", [[-1]]),
                "uniform_post_surjectivity_radius": Expectation("value", "flipping y(g) flips x(g+1)", 1),
            },
        ),
        NamedExample(
            "identity", Constant(IDENTITY), "identity rule over memory {0}",
            {
                "collision_search": Expectation("inconclusive", "the identity is injective", 4),
                "synthesize_inverse": Expectation("inverse-synthesized", "x(n)=y(n)", [[0]]),
                "uniform_post_surjectivity_radius": Expectation("value", "flipping y(g) flips x(g)", 0),
            },
        ),
        NamedExample(
            "xor2", Constant(XOR_2.with_name("xor")), "XOR rule g(u,v)=u+v over memory {-1,0}",
            {
                "collision_search": Expectation(
                    "collision-periodic", "constant configurations 0 and 1 share the image 0", {"box": "0..0"}),
                "post_surjectivity_lift": Expectation(
                    "lift-failure", "a single flip of the image forces a one-sided infinite change of the input"),
            },
        ),
        NamedExample(
            "majority3", Constant(MAJORITY), "majority of three neighbours",
            {
                "collision_search": Expectation(
                    "collision-asymptotic", "the all-0 configuration and a single 1 both map to all-0", {"radius": 0}),
            },
        ),
    ]
    return {example.name: example for example in examples}


EXAMPLES: Dict[str, NamedExample] = _examples()
BUILTIN_NAMES: List[str] = list(EXAMPLES)


def builtin(name: str) -> NamedExample:
    if name not in EXAMPLES:
        raise UnknownExampleException(f"Unknown builtin {name!r}, available: {', '.join(BUILTIN_NAMES)}")
    return EXAMPLES[name]


def export_fixtures(directory: Optional[Union[str, os.PathLike]] = None) -> List[Path]:
    """Write every builtin as `<name>.json` into `directory` (default: the configured fixtures directory)."""
    directory = Path(directory) if directory is not None else get_config().fixtures_directory
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, example in EXAMPLES.items():
        path = directory / f"{name}.json"
        dump_rule_file(example.config, path)
        written.append(path)
    logger.debug("exported %d fixtures to %s", len(written), directory)
    return written


from .generators import bounded_singularity_config, ring_box  # noqa: E402
from .claims import CLAIM_CHECKS, ClaimResult, check_example  # noqa: E402

__all__ = [
    "BUILTIN_NAMES",
    "CLAIM_CHECKS",
    "ClaimResult",
    "EXAMPLES",
    "Expectation",
    "NamedExample",
    "bounded_singularity_config",
    "builtin",
    "check_example",
    "export_fixtures",
    "ring_box",
]
