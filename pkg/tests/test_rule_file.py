import json
from pathlib import Path

import pytest

from anuca import RULE_CONFIG_VARIANTS, load_rules
from anuca.corpus import BUILTIN_NAMES, CENTRE, READ_LEFT, READ_RIGHT, builtin
from anuca.exceptions import RuleFileSchemaException, UnsupportedVariantException
from anuca.rules import BoxList, Patched
from anuca.rules.rule_file import config_hash, config_to_dict, dump_rule_file, dumps, from_dict, loads, parse_rule_file
from anuca.universe import Box

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

EX3 = {
    "version": 1,
    "dim": 1,
    "alphabet": 2,
    "memory": [[-1], [0], [1]],
    "rules": {"f": "00001111", "g": "01010101", "h": "00110011"},
    "config": {"variant": "two_sided", "left": "f", "right": "g", "cut": 0, "patch": [[[0], "h"]]},
}


def _document(**changes) -> dict:
    data = json.loads(json.dumps(EX3))
    data.update(changes)
    return data


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_fixture_files_match_builtins(name):
    assert parse_rule_file(FIXTURES / f"{name}.json") == builtin(name).config


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_round_trip(name):
    s = builtin(name).config
    assert loads(dumps(s)) == s
    assert loads(dumps(s, as_yaml=True), as_yaml=True) == s
    assert config_hash(loads(dumps(s))) == config_hash(s)


def test_rule_names_survive(tmp_path):
    s = builtin("ex3_s").config
    path = tmp_path / "ex3.json"
    dump_rule_file(s, path)
    assert set(json.loads(path.read_text())["rules"]) == {"f", "g", "h"}


def test_box_list_round_trip(tmp_path):
    s = BoxList(CENTRE, ((Box.interval(-4, -2), READ_LEFT), (Box.interval(2, 4), READ_RIGHT)), {0: READ_LEFT},
                truncated=True)
    path = tmp_path / "rings.yaml"
    dump_rule_file(s, path)
    assert parse_rule_file(path) == s


def test_yaml_suffix(tmp_path):
    path = tmp_path / "ex3.yml"
    path.write_text(dumps(builtin("ex3_s").config, as_yaml=True))
    assert parse_rule_file(path) == builtin("ex3_s").config


def test_unnamed_rules_get_names():
    s = Patched(READ_RIGHT.with_name(None), {0: CENTRE.with_name(None)})
    data = config_to_dict(s)
    assert set(data["rules"]) == {"r0", "r1"}
    assert from_dict(data) == s


def test_hash_depends_on_content():
    assert config_hash(builtin("ex1_p").config) != config_hash(builtin("ex3_q").config)


class TestSchemaErrors:
    def test_wrong_table_length(self):
        data = _document(rules={"f": "0000111", "g": "01010101", "h": "00110011"})
        with pytest.raises(RuleFileSchemaException) as ex:
            from_dict(data)
        assert ex.value.field == "rules.f"

    def test_undefined_rule(self):
        config = dict(EX3["config"], right="z")
        with pytest.raises(RuleFileSchemaException, match="undefined rule"):
            from_dict(_document(config=config))

    def test_unsupported_version(self):
        with pytest.raises(RuleFileSchemaException) as ex:
            from_dict(_document(version=2))
        assert ex.value.field == "version"

    def test_memory_order(self):
        with pytest.raises(RuleFileSchemaException, match="ascending"):
            from_dict(_document(memory=[[0], [-1], [1]]))

    def test_unknown_variant(self):
        with pytest.raises(RuleFileSchemaException):
            from_dict(_document(config={"variant": "spiral", "rule": "f"}))

    def test_extra_key(self):
        with pytest.raises(RuleFileSchemaException):
            from_dict(_document(comment="nope"))

    def test_two_sided_requires_dim_one(self):
        config = dict(EX3["config"], patch=[])
        data = _document(dim=2, memory=[[0, 0], [0, 1]], rules={"f": "0011", "g": "0101", "h": "0110"}, config=config)
        with pytest.raises(RuleFileSchemaException, match="dim 1"):
            from_dict(data)

    def test_not_a_mapping(self):
        with pytest.raises(RuleFileSchemaException):
            loads("[1, 2, 3]")

    def test_invalid_json_reports_line(self):
        with pytest.raises(RuleFileSchemaException) as ex:
            loads('{\n  "dim": 1,\n  "alphabet": \n}', path="bad.json")
        assert ex.value.line == 4
        assert "bad.json" in str(ex.value)

    def test_field_line_located(self):
        text = json.dumps(_document(version=2), indent=2)
        with pytest.raises(RuleFileSchemaException) as ex:
            loads(text)
        assert ex.value.line == 2


class TestLoadRules:
    def test_variant_required(self):
        assert set(RULE_CONFIG_VARIANTS) == {"constant", "patched", "two_sided", "box_list"}
        s = load_rules(FIXTURES / "ex3_s.json", variant="two_sided")
        assert s == builtin("ex3_s").config

    def test_variant_mismatch(self):
        with pytest.raises(UnsupportedVariantException):
            load_rules(FIXTURES / "shift.json", variant="patched")

    def test_unknown_variant(self):
        with pytest.raises(UnsupportedVariantException):
            load_rules(FIXTURES / "shift.json", variant="spiral")
