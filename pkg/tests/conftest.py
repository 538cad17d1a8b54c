import numpy as np
import pytest

from anuca import get_config
from anuca.corpus import EXAMPLES
from anuca.rules import Constant, LocalRule, Patched
from anuca.universe import Box, CellSet


@pytest.fixture(autouse=True)
def restore_config():
    config = get_config()
    saved = (config.seed, config.threads, config.enumeration_cap, config.compose_cap,
             config.materialization_cap, config.chunk_size)
    yield config
    (config.seed, config.threads, config.enumeration_cap, config.compose_cap,
     config.materialization_cap, config.chunk_size) = saved


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def examples():
    return {name: example.config for name, example in EXAMPLES.items()}


@pytest.fixture
def random_rule(rng):
    """Factory of random rules: alphabet 2..3, |M| <= 3, dimension 1 or 2."""

    def make(dim: int = 1, alphabet: int = None, size: int = None) -> LocalRule:
        q = alphabet or int(rng.integers(2, 4))
        n = size or int(rng.integers(1, 4))
        offsets = Box.cube(1, dim).cells().cells
        chosen = rng.choice(len(offsets), size=min(n, len(offsets)), replace=False)
        memory = CellSet([offsets[int(i)] for i in chosen], dim=dim)
        return LocalRule(memory, q, rng.integers(0, q, size=q ** len(memory)))

    return make


@pytest.fixture
def random_patched(rng, random_rule):
    """Factory of random patched configurations sharing one memory and alphabet."""

    def make(dim: int = 1, cells: int = 2) -> Patched:
        background = random_rule(dim)
        patch = {}
        for _ in range(cells):
            cell = tuple(int(c) for c in rng.integers(-2, 3, size=dim))
            patch[cell] = LocalRule(background.memory, background.alphabet,
                                    rng.integers(0, background.alphabet, size=background.table.shape[0]))
        return Patched(background, patch)

    return make


@pytest.fixture
def flip_rule():
    return LocalRule.read(CellSet.of(0), 2, 0, [1, 0], name="flip")


@pytest.fixture
def shift():
    return Constant(EXAMPLES["shift"].config.rule)
