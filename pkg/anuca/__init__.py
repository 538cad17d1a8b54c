from typing import Optional

from .config import AnucaConfig, DEFAULT_CAP, config, get_config
from .exceptions import (
    AnucaException,
    CapExceededException,
    ConfigurationException,
    CoordinateOverflowException,
    DimensionMismatchException,
    InvalidRuleException,
    InverseVerificationException,
    PatternFormatException,
    RuleFileSchemaException,
    SequenceConstraintException,
    SupportMismatchException,
    UnknownExampleException,
    UnsupportedVariantException,
)
from .universe import Box, CellSet, boundary_sets, box_reduce, minkowski, translate
from .rules import BoxList, Constant, LocalRule, Patched, RuleConfig, TwoSided1D, rule_at, translate_config
from .rules.rule_file import config_hash, dump_rule_file, dumps, loads, parse_rule_file
from .rules.views import distinct_view_classes, local_view, orbit_closure
from .engine import (
    InducedLocalMap,
    Pattern,
    PeriodizedMap,
    apply_periodized,
    apply_window,
    apply_window_padded,
    compose,
    simulate,
)
from .analysis import (
    Certificate,
    CertificateKind,
    ClosureReport,
    collision_search,
    constant_injectivity_1d,
    image_window,
    invertibility_check,
    min_determining_radius,
    post_surjectivity_lift,
    psi_invertibility_check,
    replay,
    stable_injectivity_check,
    stable_post_surjectivity_probe,
    stable_reversibility_check,
    surjectivity_deficit,
    synthesize_inverse,
    uniform_post_surjectivity_radius,
    verify_left_inverse,
    wrap_compatibility,
)
from .corpus import BUILTIN_NAMES, NamedExample, bounded_singularity_config, builtin

RULE_CONFIG_VARIANTS = {
    "constant": Constant,
    "patched": Patched,
    "two_sided": TwoSided1D,
    "box_list": BoxList,
}


def load_rules(path, variant: Optional[str] = None) -> RuleConfig:
    """Loads a configuration from a JSON or YAML rule file, optionally requiring a variant."""
    if variant is not None and variant not in RULE_CONFIG_VARIANTS:
        raise UnsupportedVariantException(f"Variant {variant} not found")
    s = parse_rule_file(path)
    if variant is not None and not isinstance(s, RULE_CONFIG_VARIANTS[variant]):
        raise UnsupportedVariantException(f"{path} holds a {s.variant} configuration, expected {variant}")
    return s


def load_builtin(name: str) -> RuleConfig:
    """Loads the configuration of a builtin example by name."""
    return builtin(name).config


__all__ = [
    "AnucaConfig",
    "AnucaException",
    "BUILTIN_NAMES",
    "Box",
    "BoxList",
    "CapExceededException",
    "CellSet",
    "Certificate",
    "CertificateKind",
    "ClosureReport",
    "ConfigurationException",
    "Constant",
    "CoordinateOverflowException",
    "DEFAULT_CAP",
    "DimensionMismatchException",
    "InducedLocalMap",
    "InvalidRuleException",
    "InverseVerificationException",
    "LocalRule",
    "NamedExample",
    "Patched",
    "Pattern",
    "PatternFormatException",
    "PeriodizedMap",
    "RULE_CONFIG_VARIANTS",
    "RuleConfig",
    "RuleFileSchemaException",
    "SequenceConstraintException",
    "SupportMismatchException",
    "TwoSided1D",
    "UnknownExampleException",
    "UnsupportedVariantException",
    "apply_periodized",
    "apply_window",
    "apply_window_padded",
    "boundary_sets",
    "bounded_singularity_config",
    "box_reduce",
    "builtin",
    "collision_search",
    "compose",
    "config",
    "config_hash",
    "constant_injectivity_1d",
    "distinct_view_classes",
    "dump_rule_file",
    "dumps",
    "get_config",
    "image_window",
    "invertibility_check",
    "load_builtin",
    "load_rules",
    "loads",
    "local_view",
    "min_determining_radius",
    "minkowski",
    "orbit_closure",
    "parse_rule_file",
    "post_surjectivity_lift",
    "psi_invertibility_check",
    "replay",
    "rule_at",
    "simulate",
    "stable_injectivity_check",
    "stable_post_surjectivity_probe",
    "stable_reversibility_check",
    "surjectivity_deficit",
    "synthesize_inverse",
    "translate",
    "translate_config",
    "uniform_post_surjectivity_radius",
    "verify_left_inverse",
    "wrap_compatibility",
]
