import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import composite, integers, lists, permutations, sampled_from, tuples

from anuca.analysis import psi_left_inverse_holds, wrap_compatibility
from anuca.engine import Pattern, apply_window, compose
from anuca.rules import BoxList, Constant, LocalRule, Patched, TwoSided1D, translate_config
from anuca.universe import Box, CellSet, add, minkowski, translate


def _cells(dim, lo, hi):
    return tuples(*[integers(lo, hi)] * dim)


def _random_config(draw, dim, q):
    ball = Box.cube(1, dim).cells().cells
    memory = CellSet(draw(lists(sampled_from(ball), min_size=1, max_size=3, unique=True)))
    rng = np.random.default_rng(draw(integers(0, 2 ** 32 - 1)))

    def rule():
        return LocalRule(memory, q, rng.integers(0, q, size=q ** len(memory)))

    variants = ["constant", "patched", "box_list"] + (["two_sided"] if dim == 1 else [])
    variant = draw(sampled_from(variants))
    patch = {cell: rule() for cell in draw(lists(_cells(dim, -2, 2), max_size=3, unique=True))}
    if variant == "constant":
        return Constant(rule())
    if variant == "patched":
        return Patched(rule(), patch)
    if variant == "two_sided":
        return TwoSided1D(rule(), rule(), draw(integers(-2, 2)), patch)
    lo = draw(_cells(dim, -2, 2))
    hi = tuple(a + draw(integers(0, 2)) for a in lo)
    return BoxList(rule(), ((Box(lo, hi), rule()),), patch)


@composite
def configs(draw):
    return _random_config(draw, draw(sampled_from([1, 2])), draw(integers(2, 3)))


@composite
def config_pairs(draw):
    dim, q = draw(sampled_from([1, 2])), draw(integers(2, 3))
    return _random_config(draw, dim, q), _random_config(draw, dim, q)


def _inverse_permutation(permutation):
    return [int(i) for i in np.argsort(permutation)]


@composite
def cellwise_permutations(draw):
    """
    A configuration reading one common offset m through a per-cell permutation,
    its inverse (reading -m), and a box K. Patch cells sit strictly inside K or
    outside K+B_1, so the pair is wrap compatible over K.
    """
    dim = draw(sampled_from([1, 2]))
    radius = draw(integers(1, 3)) if dim == 1 else 1
    q = draw(integers(2, 3)) if dim == 1 else 2
    memory = Box.cube(1, dim).cells()
    m = draw(sampled_from(memory.cells))
    back = tuple(-a for a in m)
    patch_cells = draw(lists(
        _cells(dim, -radius - 3, radius + 3).filter(lambda c: max(map(abs, c)) < radius or max(map(abs, c)) >= radius + 2),
        max_size=4,
        unique=True,
    ))
    background = draw(permutations(range(q)))
    patch = {cell: draw(permutations(range(q))) for cell in patch_cells}
    s = Patched(
        LocalRule.read(memory, q, m, background),
        {cell: LocalRule.read(memory, q, m, permutation) for cell, permutation in patch.items()},
    )
    t = Patched(
        LocalRule.read(memory, q, back, _inverse_permutation(background)),
        {add(cell, m): LocalRule.read(memory, q, back, _inverse_permutation(p)) for cell, p in patch.items()},
    )
    return s, t, Box.cube(radius, dim)


def _random_pattern(support, q, seed):
    return Pattern(support, np.random.default_rng(seed).integers(0, q, size=len(support)))


@given(s=configs(), seed=integers(0, 2 ** 32 - 1))
@settings(deadline=None, max_examples=1000)
def test_locality(s, seed):
    E, F = Box.cube(1, s.dim).cells(), Box.cube(2, s.dim).cells()
    x = _random_pattern(minkowski(F, s.memory), s.alphabet, seed)
    assert apply_window(s, F, x).restrict(E) == apply_window(s, E, x.restrict(minkowski(E, s.memory)))


@given(s=configs(), g=_cells(2, -5, 5), seed=integers(0, 2 ** 32 - 1))
@settings(deadline=None, max_examples=1000)
def test_translation_conjugates_images(s, g, seed):
    g = g[:s.dim]
    E = Box.cube(1, s.dim).cells()
    x = _random_pattern(minkowski(E, s.memory), s.alphabet, seed)
    moved = apply_window(translate_config(s, g), translate(E, g), x.translate(g))
    assert moved == apply_window(s, E, x).translate(g)


@given(pair=config_pairs(), seed=integers(0, 2 ** 32 - 1))
@settings(deadline=None, max_examples=1000)
def test_composition_is_sequential_application(pair, seed):
    s, t = pair
    composite = compose(s, t)
    E = Box.cube(2, s.dim).cells()
    middle_support = minkowski(E, s.memory)
    x = _random_pattern(minkowski(middle_support, t.memory), s.alphabet, seed)
    middle = apply_window(t, middle_support, x)
    assert apply_window(composite, E, x.restrict(minkowski(E, composite.memory))) == apply_window(s, E, middle)


@given(case=cellwise_permutations(), seed=integers(0, 2 ** 32 - 1))
@settings(deadline=None, max_examples=1000)
def test_inverse_periodizes_to_left_inverse(case, seed):
    s, t, K = case
    E = Box.cube(2, s.dim).cells()
    middle_support = minkowski(E, t.memory)
    x = _random_pattern(minkowski(middle_support, s.memory), s.alphabet, seed)
    assert apply_window(t, E, apply_window(s, middle_support, x)) == x.restrict(E)
    assert wrap_compatibility(s, K, t.memory)
    assert psi_left_inverse_holds(t, s, K)
