import numpy as np
import pytest

from anuca.corpus import CENTRE, COPY_2, M2, M3, MAJORITY, READ_LEFT, READ_RIGHT, XOR_2, XOR_LEFT
from anuca.exceptions import DimensionMismatchException, InvalidRuleException
from anuca.rules import (
    BoxList,
    Constant,
    LocalRule,
    Patched,
    TwoSided1D,
    invert_permutation_rule,
    map_rules,
    rule_at,
    translate_config,
)
from anuca.universe import Box, CellSet


@pytest.mark.parametrize(
    "rule, memory, function",
    [
        (READ_RIGHT, M3, lambda u, v, w: w),
        (XOR_LEFT, M3, lambda u, v, w: u + v),
        (CENTRE, M3, lambda u, v, w: v),
        (READ_LEFT, M3, lambda u, v, w: u),
        (MAJORITY, M3, lambda u, v, w: int(u + v + w >= 2)),
        (COPY_2, M2, lambda u, v: v),
        (XOR_2, M2, lambda u, v: u + v),
    ],
)
def test_digit_strings_match_formulas(rule, memory, function):
    assert LocalRule.from_function(memory, 2, function) == rule


class TestLocalRule:
    def test_index_first_offset_least_significant(self):
        # u at -1 has weight 1, w at +1 has weight 4
        assert READ_RIGHT.index_of([0, 0, 1]) == 4
        assert READ_RIGHT(0, 0, 1) == 1
        assert READ_RIGHT(1, 1, 0) == 0

    def test_digits_round_trip(self):
        rule = LocalRule.from_digits(CellSet.of(-1, 0), 3, "012201120")
        assert rule.to_digits() == "012201120"
        assert rule(2, 1) == int("012201120"[2 + 3 * 1])

    @pytest.mark.parametrize("digits", ["011", "01102", "01x0"])
    def test_invalid_tables(self, digits):
        with pytest.raises(InvalidRuleException):
            LocalRule.from_digits(M2, 2, digits)

    def test_alphabet_and_memory_checked(self):
        with pytest.raises(InvalidRuleException):
            LocalRule(M2, 1, [0])
        with pytest.raises(InvalidRuleException):
            LocalRule(CellSet([], dim=1), 2, [0])

    def test_equality_ignores_name(self):
        assert READ_RIGHT.with_name("shift") == READ_RIGHT
        assert hash(READ_RIGHT.with_name("shift")) == hash(READ_RIGHT)
        assert READ_RIGHT != READ_LEFT

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            READ_RIGHT.table[0] = 1

    def test_essential_offsets(self):
        assert READ_RIGHT.essential_offsets() == CellSet.of(1)
        assert XOR_LEFT.essential_offsets() == CellSet.of(-1, 0)
        assert MAJORITY.essential_offsets() == M3

    def test_restrict_and_extend(self):
        small = READ_RIGHT.restrict(CellSet.of(1))
        assert small.to_digits() == "01"
        assert small.extend(M3) == READ_RIGHT
        with pytest.raises(InvalidRuleException):
            XOR_LEFT.restrict(CellSet.of(0))

    def test_extend_two_dimensional(self, random_rule):
        rule = random_rule(dim=2, size=2)
        wide = rule.extend(Box.cube(1, 2).cells())
        assert wide.essential_offsets().issubset(rule.memory)
        assert wide.restrict(rule.memory) == rule

    def test_identity_and_read(self):
        assert LocalRule.identity(M3, 2) == CENTRE
        assert LocalRule.read(M3, 2, 1) == READ_RIGHT
        flip = LocalRule.read(M3, 2, 0, [1, 0])
        assert flip(0, 0, 0) == 1 and flip(1, 1, 1) == 0

    def test_invert_permutation_rule(self):
        rule = LocalRule.read(M3, 3, 1, [2, 0, 1])
        inverse = invert_permutation_rule(rule, 1, M3)
        for a in range(3):
            assert inverse(rule(0, 0, a), 0, 0) == a
        with pytest.raises(InvalidRuleException):
            invert_permutation_rule(MAJORITY, 0, M3)


class TestConfigurations:
    def test_constant(self):
        s = Constant(READ_RIGHT)
        assert s.dim == 1 and s.alphabet == 2 and s.memory == M3
        assert s.rule_at(17) == READ_RIGHT
        assert s.irregular_box() is None
        assert s.translate(3) == s

    def test_patched(self):
        s = Patched(READ_RIGHT, {0: CENTRE, (3,): READ_LEFT})
        assert s.rule_at(0) == CENTRE
        assert s.rule_at(3) == READ_LEFT
        assert s.rule_at(1) == READ_RIGHT
        assert s.irregular_box() == Box.interval(0, 3)
        assert s.rules() == [READ_RIGHT, CENTRE, READ_LEFT]

    def test_two_sided(self, examples):
        s = examples["ex3_s"]
        assert s.rule_at(-5) == READ_RIGHT
        assert s.rule_at(0) == CENTRE
        assert s.rule_at(1) == READ_LEFT
        assert s.far_rule_at(0) == READ_RIGHT
        assert s.irregular_box() == Box.interval(0, 1)

    def test_translate_is_left_action(self, examples):
        # (gs)(h) = s(h - g)
        s = examples["ex3_s"]
        for g in (-2, 3):
            t = translate_config(s, g)
            for h in range(-6, 7):
                assert t.rule_at(h) == s.rule_at(h - g)

    def test_box_list(self):
        s = BoxList(CENTRE, ((Box.interval(2, 4), READ_LEFT), (Box.interval(3, 8), READ_RIGHT)), {3: MAJORITY})
        assert s.rule_at(2) == READ_LEFT
        assert s.rule_at(3) == MAJORITY
        assert s.rule_at(4) == READ_LEFT
        assert s.rule_at(5) == READ_RIGHT
        assert s.rule_at(9) == CENTRE
        assert s.irregular_box() == Box.interval(2, 8)
        assert s.translate(1).rule_at(6) == READ_RIGHT

    def test_rules_must_share_memory(self):
        with pytest.raises(InvalidRuleException):
            Patched(READ_RIGHT, {0: XOR_2})
        with pytest.raises(InvalidRuleException):
            TwoSided1D(COPY_2, READ_LEFT)

    def test_two_sided_needs_dimension_one(self, random_rule):
        rule = random_rule(dim=2)
        with pytest.raises(DimensionMismatchException):
            TwoSided1D(rule, rule)

    def test_rule_at_checks_dimension(self, examples):
        with pytest.raises(DimensionMismatchException):
            rule_at(examples["shift"], (0, 0))

    def test_map_rules_keeps_shape(self, examples):
        s = examples["ex3_s"]
        mapped = map_rules(s, lambda rule: LocalRule(rule.memory, 2, 1 - rule.table.astype(np.int64)))
        assert isinstance(mapped, TwoSided1D)
        assert mapped.cut == s.cut
        assert mapped.rule_at(0)(0, 1, 0) == 0
