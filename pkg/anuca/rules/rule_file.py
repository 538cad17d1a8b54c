"""
Rule files: JSON (or YAML) documents describing one finitely-described configuration.

    {"dim": 1, "alphabet": 2, "memory": [[-1], [0], [1]],
     "rules": {"f": "00001111", "g": "01010101"},
     "config": {"variant": "two_sided", "left": "f", "right": "g", "cut": 0, "patch": []}}

Digit-string index i encodes the pattern whose symbol at the j-th memory
offset is the j-th base-q digit of i (offset 0 least significant).
"""

import hashlib
import json
import os
import re
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import AnucaException, RuleFileSchemaException
from ..universe import Box, CellSet
from . import BoxList, Constant, LocalRule, Patched, RuleConfig, TwoSided1D

SUPPORTED_VERSIONS = (1,)
YAML_SUFFIXES = (".yaml", ".yml")

Coordinates = List[int]
PatchEntry = Tuple[Coordinates, str]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConstantModel(_Model):
    variant: Literal["constant"]
    rule: str


class PatchedModel(_Model):
    variant: Literal["patched"]
    background: str
    patch: List[PatchEntry] = Field(default_factory=list)


class TwoSidedModel(_Model):
    variant: Literal["two_sided"]
    left: str
    right: str
    cut: int = 0
    patch: List[PatchEntry] = Field(default_factory=list)


class BoxModel(_Model):
    lo: Coordinates
    hi: Coordinates
    rule: str


class BoxListModel(_Model):
    variant: Literal["box_list"]
    background: str
    boxes: List[BoxModel] = Field(default_factory=list)
    patch: List[PatchEntry] = Field(default_factory=list)
    truncated: bool = False


VariantModel = Annotated[
    Union[ConstantModel, PatchedModel, TwoSidedModel, BoxListModel],
    Field(discriminator="variant"),
]


class RuleFileModel(_Model):
    version: int = 1
    dim: int = Field(ge=1)
    alphabet: int = Field(ge=2, le=36)
    memory: List[Coordinates] = Field(min_length=1)
    rules: Dict[str, str] = Field(min_length=1)
    config: VariantModel

    @field_validator("version")
    @classmethod
    def _supported_version(cls, value: int) -> int:
        if value not in SUPPORTED_VERSIONS:
            raise ValueError(f"unsupported rule file version {value}, expected one of {SUPPORTED_VERSIONS}")
        return value

    @field_validator("memory")
    @classmethod
    def _canonical_memory(cls, value: List[Coordinates]) -> List[Coordinates]:
        cells = [tuple(c) for c in value]
        if cells != sorted(set(cells)):
            raise ValueError("memory offsets must be listed in strictly ascending lexicographic order")
        return value

    @model_validator(mode="after")
    def _consistent(self) -> "RuleFileModel":
        for offset in self.memory:
            if len(offset) != self.dim:
                raise ValueError(f"memory offset {offset} does not have dimension {self.dim}")
        for name in self._referenced_rules():
            if name not in self.rules:
                raise ValueError(f"config references undefined rule '{name}'")
        for cell in self._referenced_cells():
            if len(cell) != self.dim:
                raise ValueError(f"config cell {cell} does not have dimension {self.dim}")
        if isinstance(self.config, TwoSidedModel) and self.dim != 1:
            raise ValueError("two_sided configurations require dim 1")
        return self

    def _referenced_rules(self) -> List[str]:
        c = self.config
        if isinstance(c, ConstantModel):
            return [c.rule]
        names = [c.left, c.right] if isinstance(c, TwoSidedModel) else [c.background]
        if isinstance(c, BoxListModel):
            names += [box.rule for box in c.boxes]
        return names + [name for _, name in c.patch]

    def _referenced_cells(self) -> List[Coordinates]:
        c = self.config
        if isinstance(c, ConstantModel):
            return []
        cells = [cell for cell, _ in c.patch]
        if isinstance(c, BoxListModel):
            for box in c.boxes:
                cells += [box.lo, box.hi]
        return cells


def _locate_line(text: Optional[str], loc: Sequence[Any]) -> Optional[int]:
    """Best-effort line number of the innermost key of `loc` in the source text."""
    if not text:
        return None
    position = 0
    found = None
    for key in loc:
        if not isinstance(key, str):
            continue
        match = re.compile(r"[\"']?" + re.escape(key) + r"[\"']?\s*:").search(text, position)
        if match is None:
            break
        position = match.end()
        found = match.start()
    if found is None:
        return None
    return text.count("\n", 0, found) + 1


def _field_name(loc: Sequence[Any]) -> str:
    # drop discriminator tags pydantic inserts into union locations
    parts = [str(p) for p in loc if p not in ("constant", "patched", "two_sided", "box_list")]
    return ".".join(parts)


def _build(model: RuleFileModel, text: Optional[str], path: Optional[str]) -> RuleConfig:
    memory = CellSet(model.memory, dim=model.dim)
    rules: Dict[str, LocalRule] = {}
    for name, digits in model.rules.items():
        try:
            rules[name] = LocalRule.from_digits(memory, model.alphabet, digits, name=name)
        except AnucaException as ex:
            raise RuleFileSchemaException(str(ex), path=path, field=f"rules.{name}", line=_locate_line(text, ["rules", name]))

    def patch_of(entries: List[PatchEntry]) -> List[tuple]:
        return [(tuple(cell), rules[name]) for cell, name in entries]

    c = model.config
    try:
        if isinstance(c, ConstantModel):
            return Constant(rules[c.rule])
        if isinstance(c, PatchedModel):
            return Patched(rules[c.background], patch_of(c.patch))
        if isinstance(c, TwoSidedModel):
            return TwoSided1D(rules[c.left], rules[c.right], c.cut, patch_of(c.patch))
        boxes = tuple((Box(tuple(b.lo), tuple(b.hi)), rules[b.rule]) for b in c.boxes)
        return BoxList(rules[c.background], boxes, patch_of(c.patch), c.truncated)
    except (AnucaException, ValueError) as ex:
        raise RuleFileSchemaException(str(ex), path=path, field="config", line=_locate_line(text, ["config"]))


def _decode(text: str, path: Optional[str], as_yaml: bool) -> Any:
    if as_yaml:
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as ex:
            mark = getattr(ex, "problem_mark", None)
            raise RuleFileSchemaException(f"invalid YAML: {ex}", path=path, line=mark.line + 1 if mark else None)
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise RuleFileSchemaException(f"invalid JSON: {ex.msg}", path=path, line=ex.lineno)


def from_dict(data: Any, text: Optional[str] = None, path: Optional[str] = None) -> RuleConfig:
    if not isinstance(data, dict):
        raise RuleFileSchemaException("rule file must contain a mapping at top level", path=path, line=1)
    try:
        model = RuleFileModel.model_validate(data)
    except ValidationError as ex:
        error = ex.errors()[0]
        loc = error.get("loc", ())
        raise RuleFileSchemaException(
            error.get("msg", "invalid rule file"),
            path=path,
            field=_field_name(loc) or None,
            line=_locate_line(text, loc),
        )
    return _build(model, text, path)


def loads(text: str, path: Optional[str] = None, as_yaml: bool = False) -> RuleConfig:
    return from_dict(_decode(text, path, as_yaml), text=text, path=path)


def parse_rule_file(path: Union[str, os.PathLike]) -> RuleConfig:
    """Load and validate a rule file; `.yaml`/`.yml` files are read as YAML, anything else as JSON."""
    path = os.fspath(path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return loads(text, path=path, as_yaml=path.lower().endswith(YAML_SUFFIXES))


def _rule_names(s: RuleConfig) -> Dict[tuple, str]:
    names: Dict[tuple, str] = {}
    used = set()
    for i, rule in enumerate(s.rules()):
        name = rule.name if rule.name and rule.name not in used else f"r{i}"
        while name in used:
            name += "_"
        names[rule.key] = name
        used.add(name)
    return names


def config_to_dict(s: RuleConfig) -> Dict[str, Any]:
    names = _rule_names(s)
    rules = {names[rule.key]: rule.to_digits() for rule in s.rules()}

    def patch_of(patch) -> List[list]:
        return [[list(cell), names[rule.key]] for cell, rule in patch]

    if isinstance(s, Constant):
        config = {"variant": "constant", "rule": names[s.rule.key]}
    elif isinstance(s, Patched):
        config = {"variant": "patched", "background": names[s.background.key], "patch": patch_of(s.patch)}
    elif isinstance(s, TwoSided1D):
        config = {
            "variant": "two_sided",
            "left": names[s.left.key],
            "right": names[s.right.key],
            "cut": s.cut,
            "patch": patch_of(s.patch),
        }
    elif isinstance(s, BoxList):
        config = {
            "variant": "box_list",
            "background": names[s.background.key],
            "boxes": [{"lo": list(box.lo), "hi": list(box.hi), "rule": names[rule.key]} for box, rule in s.boxes],
            "patch": patch_of(s.patch),
            "truncated": s.truncated,
        }
    else:
        raise RuleFileSchemaException(f"cannot serialize configuration {type(s).__name__}")

    return {
        "version": 1,
        "dim": s.dim,
        "alphabet": s.alphabet,
        "memory": [list(cell) for cell in s.memory.cells],
        "rules": rules,
        "config": config,
    }


def dumps(s: RuleConfig, as_yaml: bool = False) -> str:
    data = config_to_dict(s)
    if as_yaml:
        return yaml.safe_dump(data, sort_keys=False)
    return json.dumps(data, indent=2) + "\n"


def dump_rule_file(s: RuleConfig, path: Union[str, os.PathLike]) -> None:
    path = os.fspath(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(s, as_yaml=path.lower().endswith(YAML_SUFFIXES)))


def config_hash(s: RuleConfig) -> str:
    """sha256 over the canonical JSON serialization."""
    canonical = json.dumps(config_to_dict(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


__all__ = [
    "RuleFileModel",
    "config_hash",
    "config_to_dict",
    "dump_rule_file",
    "dumps",
    "from_dict",
    "loads",
    "parse_rule_file",
]
