import pytest

from anuca.corpus import (
    BUILTIN_NAMES,
    CLAIM_CHECKS,
    EXAMPLES,
    READ_RIGHT,
    bounded_singularity_config,
    builtin,
    check_example,
    export_fixtures,
    ring_box,
)
from anuca.exceptions import SequenceConstraintException, UnknownExampleException
from anuca.rules import BoxList, LocalRule
from anuca.rules.rule_file import parse_rule_file
from anuca.universe import Box, CellSet

PLANE_RULE = LocalRule.identity(CellSet([(0, 0), (1, 0)]), 2)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_claims_hold(name):
    results = check_example(builtin(name))
    assert results
    assert all(r.holds for r in results), [r.to_dict() for r in results if not r.holds]


def test_every_expectation_has_a_check():
    operations = {op for example in EXAMPLES.values() for op in example.expected}
    assert operations <= set(CLAIM_CHECKS)


def test_unknown_builtin():
    with pytest.raises(UnknownExampleException, match="available"):
        builtin("ex4_s")


def test_export_fixtures(tmp_path):
    written = export_fixtures(tmp_path / "out")
    assert sorted(p.stem for p in written) == sorted(BUILTIN_NAMES)
    for path in written:
        assert parse_rule_file(path) == EXAMPLES[path.stem].config


class TestBoundedSingularity:
    def test_rings(self):
        s = bounded_singularity_config(1, (5, 10, 18), (2, 6, 12), READ_RIGHT, READ_RIGHT.with_name("gap"), 2)
        assert isinstance(s, BoxList)
        assert s.truncated
        assert [box for box, _ in s.boxes] == [
            Box.interval(-5, -2), Box.interval(2, 5), Box.interval(-10, -6), Box.interval(6, 10)
        ]

    def test_ring_at_origin_is_one_box(self):
        s = bounded_singularity_config(2, (1, 4), (0, 2), PLANE_RULE, PLANE_RULE, 1)
        assert [box for box, _ in s.boxes] == [Box.cube(1, 2)]

    def test_two_dimensional_ring_has_four_boxes(self):
        s = bounded_singularity_config(2, (2, 6), (1, 4), PLANE_RULE, PLANE_RULE, 1)
        assert len(s.boxes) == 4

    @pytest.mark.parametrize("f_seq, g_seq, n_boxes", [
        ((5, 10), (2, 6), 0),
        ((5,), (2,), 2),
        ((5, 10), (-1, 6), 2),
        ((1, 10), (2, 6), 2),
        ((5, 10), (2, 5), 2),
        ((5, 7), (2, 6), 2),
        ((5, 9), (3, 7), 2),
    ])
    def test_sequence_constraints(self, f_seq, g_seq, n_boxes):
        with pytest.raises(SequenceConstraintException):
            bounded_singularity_config(1, f_seq, g_seq, READ_RIGHT, READ_RIGHT, n_boxes)

    def test_ring_box(self):
        assert ring_box((2, 6, 12), (5, 10, 18), 0, 1, 2) == Box.interval(-3, 3)
        assert ring_box((1, 4, 9), (2, 6, 12), 0, 2, 1) == Box.cube(1, 2)
        with pytest.raises(SequenceConstraintException):
            ring_box((1, 4, 9), (2, 6, 12), 0, 1, 2)
        with pytest.raises(SequenceConstraintException):
            ring_box((2,), (5,), 1, 1, 1)
        with pytest.raises(SequenceConstraintException):
            ring_box((2,), (5,), 0, 1, 0)


