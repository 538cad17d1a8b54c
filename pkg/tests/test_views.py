import pytest

from anuca.corpus import CENTRE, READ_LEFT, READ_RIGHT, XOR_LEFT
from anuca.corpus.generators import bounded_singularity_config
from anuca.exceptions import DimensionMismatchException, UnsupportedVariantException
from anuca.rules import Constant, LocalRule, Patched
from anuca.rules.views import (
    assemble_config,
    distinct_view_classes,
    far_rules,
    limit_pairs,
    local_view,
    orbit_closure,
)
from anuca.universe import Box, CellSet, origin


def test_local_view(examples):
    view = local_view(examples["ex3_s"], CellSet.interval(-1, 1))
    assert view.rules == (READ_RIGHT, CENTRE, READ_LEFT)
    with pytest.raises(DimensionMismatchException):
        local_view(examples["ex3_s"], CellSet([(0, 0)]))


def test_view_classes_of_two_sided(examples):
    classes = distinct_view_classes(examples["ex3_s"], CellSet.interval(-1, 1))
    assert [c.representative for c in classes] == [(-2,), (-1,), (0,), (1,), (2,)]
    assert classes[2].view.rules == (READ_RIGHT, CENTRE, READ_LEFT)


def test_view_classes_of_constant(examples):
    classes = distinct_view_classes(examples["shift"], Box.cube(2, 1).cells())
    assert len(classes) == 1
    assert classes[0].representative == (0,)


def test_view_classes_cover_every_translate(random_patched):
    s = random_patched(dim=2, cells=3)
    E = Box.cube(1, 2).cells()
    keys = {c.view.key for c in distinct_view_classes(s, E)}
    for g in Box.cube(6, 2).cells():
        assert local_view(s.translate(tuple(-c for c in g)), E).key in keys


def test_equal_views_share_digest(examples):
    s = examples["ex3_s"]
    E = CellSet.interval(-1, 1)
    assert local_view(s.translate(3), E).digest() == local_view(s.translate(5), E).digest()
    assert local_view(s.translate(3), E).digest() != local_view(s, E).digest()


class TestOrbitClosure:
    def test_two_sided_limits(self, examples):
        closure = orbit_closure(examples["ex3_s"])
        assert closure.limit_points == (Constant(READ_RIGHT), Constant(READ_LEFT))

    def test_patched_limit(self):
        closure = orbit_closure(Patched(READ_RIGHT, {0: CENTRE}))
        assert closure.limit_points == (Constant(READ_RIGHT),)

    def test_constant(self, examples):
        assert orbit_closure(examples["shift"]).limit_points == (examples["shift"],)

    def test_truncated_box_list_refused(self, flip_rule):
        identity = LocalRule.identity(CellSet.of(0), 2)
        s = bounded_singularity_config(1, (4, 10), (2, 6), flip_rule, identity, 2)
        with pytest.raises(UnsupportedVariantException):
            orbit_closure(s)


def test_far_rules(examples):
    assert far_rules(examples["ex1_s"]) == [READ_RIGHT, XOR_LEFT]
    assert far_rules(examples["shift"]) == [READ_RIGHT]


def test_limit_pairs(examples):
    s = examples["ex3_s"]
    pairs = limit_pairs(s, s)
    assert pairs == [(Constant(READ_RIGHT), Constant(READ_RIGHT)), (Constant(READ_LEFT), Constant(READ_LEFT))]
    assert limit_pairs(examples["shift"], examples["shift"]) == []


def test_assemble_config_reproduces_patched(random_patched):
    s = random_patched(dim=1, cells=2)
    parts = [(s, CellSet([origin(1)]))]
    rebuilt = assemble_config(parts, lambda g: s.rule_at(g))
    for g in range(-8, 9):
        assert rebuilt.rule_at(g) == s.rule_at(g)


def test_assemble_config_two_sided(examples):
    s = examples["ex3_s"]
    rebuilt = assemble_config([(s, CellSet([origin(1)]))], lambda g: s.rule_at(g))
    for g in range(-8, 9):
        assert rebuilt.rule_at(g) == s.rule_at(g)
