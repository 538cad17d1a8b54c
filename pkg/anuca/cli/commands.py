from __future__ import annotations

import argparse
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import load_builtin, load_rules
from ..analysis import (
    Certificate,
    ClosureReport,
    collision_search,
    image_window,
    invertibility_check,
    min_determining_radius,
    post_surjectivity_lift,
    psi_invertibility_check,
    stable_injectivity_check,
    stable_post_surjectivity_probe,
    stable_reversibility_check,
    surjectivity_deficit,
    synthesize_inverse,
    uniform_post_surjectivity_radius,
    wrap_compatibility,
)
from ..analysis.inverse import DEFAULT_TRIALS, DEFAULT_WINDOW_RADIUS
from ..config import get_config, parse_cap
from ..exceptions import ConfigurationException
from ..corpus import BUILTIN_NAMES, builtin, check_example, export_fixtures
from ..engine import Pattern, PeriodizedMap, compose, simulate
from ..rules import RuleConfig
from ..rules.rule_file import config_hash, config_to_dict, dump_rule_file
from ..universe import Box, as_cell, origin
from .render import render_space_time


def _parse_cell(text: str) -> tuple:
    return as_cell(int(c) for c in text.split(","))


def _bounded_int(minimum: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"expected an integer >= {minimum}, got {value}")
        return value

    return parse


_TYPES: Dict[str, Callable[[str], Any]] = {
    "string": str,
    "natural": _bounded_int(0),
    "positive": _bounded_int(1),
    "box": Box.parse,
    "cell": _parse_cell,
    "cap": parse_cap,
}


class Argument:
    def __init__(
        self,
        name: str,
        description: str,
        type: str,
        enum: List[str] = None,
        items: str = None,
        required: bool = False,
        default: Any = None,
    ):
        self.name = name
        self.description = description
        self.type = type
        if type == 'array':
            if items is None:
                raise ValueError("items is required for array type")
        self.enum = enum
        self.items = items
        self.required = required
        self.default = default

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")

    def add_to(self, parser: argparse.ArgumentParser) -> None:
        kwargs: Dict[str, Any] = {"dest": self.name, "help": self.description}
        if self.type == "boolean":
            parser.add_argument(self.flag, action="store_true", **kwargs)
            return
        kwargs["type"] = _TYPES[self.items if self.type == "array" else self.type]
        if self.type == "array":
            kwargs["nargs"] = "+"
        if self.enum:
            kwargs["choices"] = self.enum
        if self.required:
            kwargs["required"] = True
        else:
            kwargs["default"] = self.default
        parser.add_argument(self.flag, **kwargs)


@dataclass
class CommandRun:
    """What a command function receives: parsed flags and the loaded configuration."""

    args: argparse.Namespace
    config: Optional[RuleConfig]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(get_config().seed)


@dataclass
class Outcome:
    result: Dict[str, Any]
    # (certificate, configuration it refers to, label)
    certificates: List[Tuple[Certificate, RuleConfig, Optional[str]]] = field(default_factory=list)
    refuted: bool = False
    render: Optional[str] = None

    @classmethod
    def from_certificate(cls, certificate: Certificate, s: RuleConfig, **result) -> "Outcome":
        return cls(
            {**result, "certificate": certificate.to_dict()},
            [(certificate, s, None)],
            refuted=certificate.is_refutation,
        )

    @classmethod
    def from_closure(cls, report: ClosureReport, refuted: bool) -> "Outcome":
        certificates = [(r.certificate, r.config, r.label) for r in report.results if r.certificate is not None]
        return cls({"report": report.to_dict()}, certificates, refuted=refuted)


class Command:
    """
    A CLI sub-command. `function` receives a CommandRun and returns an Outcome;
    `arguments` become the sub-command's flags.
    """
    def __init__(
        self,
        name: str,
        function: Callable[[CommandRun], Outcome],
        description: str,
        arguments: List[Argument] = [],
        needs_rules: bool = True,
    ):
        self.name = name
        self.function = function
        self.description = description
        self.arguments = arguments
        self.needs_rules = needs_rules


def command(func):
    """
    Decorator to mark a method as a command method.
    Methods decorated with @command will be automatically discovered and registered.
    """
    func._is_command = True
    return func


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--rules", help="Rule file (JSON, or YAML with a .yaml/.yml suffix)")
    source.add_argument("--builtin", choices=BUILTIN_NAMES, help="Builtin example configuration")
    parser.add_argument("--seed", type=_TYPES["natural"], default=0, help="Seed of randomized probes")
    parser.add_argument("--threads", type=_TYPES["positive"], default=None, help="Analysis threads")
    parser.add_argument("--cap", type=parse_cap, default=None, help="Enumeration cap, decimal or b**k")
    parser.add_argument("--verify", action="store_true", help="Replay every emitted certificate")
    parser.add_argument("--timings", action="store_true", help="Include wall time and threads in the report")
    parser.add_argument("--verbose", action="store_true", help="Debug logging and per-operation boxes on stderr")


class CommandsContext:
    """
    Collects the methods decorated with @command; each returns a Command.
    `build_parser` turns them into argparse sub-commands sharing the global flags.
    """
    def __init__(self):
        self.commands = [
            getattr(self, attr)() for attr in dir(self)
            if callable(getattr(self, attr)) and hasattr(getattr(self, attr), '_is_command')
        ]
        self.setup_commands()

    def setup_commands(self):
        self.commands_map = {c.name: c for c in self.commands}

    def get_command_names(self) -> List[str]:
        return [c.name for c in self.commands]

    def normalize_argv(self, argv: Sequence[str]) -> List[str]:
        """Glue negative box and cell values to their flag (`--window -4..4` -> `--window=-4..4`);
        argparse would read them as options."""
        flags = {a.flag for c in self.commands for a in c.arguments if a.type in ("box", "cell")}
        normalized: List[str] = []
        i = 0
        while i < len(argv):
            token = argv[i]
            if token in flags and i + 1 < len(argv) and re.match(r"^-\d", argv[i + 1]):
                normalized.append(f"{token}={argv[i + 1]}")
                i += 2
                continue
            normalized.append(token)
            i += 1
        return normalized

    def build_parser(self, prog: str = "anuca") -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
        common = argparse.ArgumentParser(add_help=False)
        _add_global_flags(common)
        parser = argparse.ArgumentParser(prog=prog, description="Finite analysis of non-uniform cellular automata")
        sub = parser.add_subparsers(dest="command", required=True)
        subparsers = {}
        for c in self.commands:
            p = sub.add_parser(c.name, parents=[common], help=c.description, description=c.description)
            for argument in c.arguments:
                argument.add_to(p)
            subparsers[c.name] = p
        return parser, subparsers


def load_config(path: Optional[str], name: Optional[str]) -> Optional[RuleConfig]:
    if path:
        return load_rules(path)
    if name:
        return load_builtin(name)
    return None


def _max_radius(default: int) -> Argument:
    return Argument("max_radius", f"Largest radius searched (default {default})", "natural", default=default)


def _trials() -> List[Argument]:
    return [
        Argument("trials", f"Random windows checked (default {DEFAULT_TRIALS})", "positive", default=DEFAULT_TRIALS),
        Argument("window_radius", f"Radius of checked windows (default {DEFAULT_WINDOW_RADIUS})", "natural",
                 default=DEFAULT_WINDOW_RADIUS),
    ]


def _initial_state(run: CommandRun, box: Box) -> Pattern:
    s = run.config
    if run.args.input:
        return Pattern.parse(run.args.input, box, s.alphabet)
    return Pattern(box.cells(), run.rng().integers(0, s.alphabet, size=box.volume))


class AnucaCommands(CommandsContext):

    @command
    def simulate_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            box = run.args.window
            history = simulate(run.config, box, _initial_state(run, box), run.args.steps, run.args.background)
            result = {
                "window": str(box),
                "steps": run.args.steps,
                "background": run.args.background,
                "input": history[0].to_packed(),
                "output": history[-1].to_packed(),
                "states": [state.to_packed() for state in history],
            }
            return Outcome(result, render=render_space_time(history) if run.args.render else None)

        return Command(
            name="simulate",
            function=fun,
            description="Iterate sigma_s on a window, extending each state by a background symbol",
            arguments=[
                Argument("window", "Window lo..hi per dimension", "box", required=True),
                Argument("input", "Initial state: packed string over the window or cell=symbol pairs (random if omitted)", "string"),
                Argument("steps", "Number of steps (default 1)", "natural", default=1),
                Argument("background", "Symbol outside the window (default 0)", "natural", default=0),
                Argument("render", "Print a space-time diagram on stderr", "boolean"),
            ],
        )

    @command
    def compose_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            inner = load_config(run.args.inner_rules, run.args.inner_builtin)
            if inner is None:
                raise ConfigurationException("compose needs --inner-rules or --inner-builtin")
            composite = compose(run.config, inner)
            if run.args.output:
                dump_rule_file(composite, run.args.output)
            return Outcome({"composite": config_to_dict(composite), "composite_hash": config_hash(composite)})

        return Command(
            name="compose",
            function=fun,
            description="Rule configuration of sigma_s o sigma_t, with t given by --inner-rules/--inner-builtin",
            arguments=[
                Argument("inner_rules", "Rule file of the inner configuration t", "string"),
                Argument("inner_builtin", "Builtin inner configuration t", "string", enum=BUILTIN_NAMES),
                Argument("output", "Write the composite as a rule file", "string"),
            ],
        )

    @command
    def image_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            image = image_window(run.config, run.args.window.cells())
            missing = image.first_missing()
            result = {
                "window": str(run.args.window),
                "size": image.size,
                "space_size": image.space_size,
                "full": image.is_full(),
                "first_missing": None if missing is None else missing.to_packed(),
            }
            if run.args.list:
                result["patterns"] = [p.to_packed() for p in image.patterns()]
            return Outcome(result)

        return Command(
            name="image",
            function=fun,
            description="Exact set of images over a window",
            arguments=[
                Argument("window", "Window lo..hi per dimension", "box", required=True),
                Argument("list", "List every image pattern", "boolean"),
            ],
        )

    @command
    def surjectivity_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            return Outcome.from_certificate(surjectivity_deficit(run.config, run.args.max_radius), run.config)

        return Command(
            name="surjectivity",
            function=fun,
            description="First missing image pattern on growing cubes",
            arguments=[_max_radius(3)],
        )

    @command
    def collisions_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            certificate = collision_search(run.config, run.args.max_radius, run.args.backgrounds)
            return Outcome.from_certificate(certificate, run.config)

        return Command(
            name="collisions",
            function=fun,
            description="Asymptotic and periodic collision search",
            arguments=[_max_radius(3), Argument("backgrounds", "Background symbols (default all)", "array", items="natural")],
        )

    @command
    def stable_injectivity_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            report = stable_injectivity_check(run.config, run.args.max_radius, run.args.backgrounds)
            return Outcome.from_closure(report, report.refuted)

        return Command(
            name="stable-injectivity",
            function=fun,
            description="Collision search on s and on every limit point of its orbit closure",
            arguments=[_max_radius(3), Argument("backgrounds", "Background symbols (default all)", "array", items="natural")],
        )

    @command
    def inverse_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            certificate = synthesize_inverse(run.config, run.args.max_radius, run.args.trials, run.args.window_radius)
            if run.args.output and not certificate.is_inconclusive:
                dump_rule_file(certificate.artifacts["inverse"], run.args.output)
            return Outcome.from_certificate(certificate, run.config)

        return Command(
            name="inverse",
            function=fun,
            description="Synthesize and verify a finite-memory left inverse",
            arguments=[_max_radius(3), *_trials(), Argument("output", "Write the inverse as a rule file", "string")],
        )

    @command
    def invertibility_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            certificate = invertibility_check(run.config, run.args.max_radius, run.args.trials, run.args.window_radius)
            return Outcome.from_certificate(certificate, run.config)

        return Command(
            name="invertibility",
            function=fun,
            description="Synthesized inverse plus a check that it is also a right inverse",
            arguments=[_max_radius(3), *_trials()],
        )

    @command
    def determining_radius_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            cell = run.args.cell
            radius = min_determining_radius(run.config, cell, run.args.max_radius)
            return Outcome({"cell": list(cell), "max_radius": run.args.max_radius, "radius": radius})

        return Command(
            name="determining-radius",
            function=fun,
            description="Smallest radius r such that the image on g+B_r determines x(g)",
            arguments=[Argument("cell", "Cell g, comma-separated coordinates", "cell", required=True), _max_radius(6)],
        )

    @command
    def periodize_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            box = run.args.box
            x = _initial_state(run, box)
            return Outcome({"box": str(box), "input": x.to_packed(), "output": PeriodizedMap(run.config, box)(x).to_packed()})

        return Command(
            name="periodize",
            function=fun,
            description="Apply Psi_{K,s} to a pattern over the box K",
            arguments=[
                Argument("box", "Box K, lo..hi per dimension", "box", required=True),
                Argument("input", "Pattern over K: packed string or cell=symbol pairs (random if omitted)", "string"),
            ],
        )

    @command
    def psi_check_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            return Outcome.from_certificate(psi_invertibility_check(run.config, run.args.box), run.config)

        return Command(
            name="psi-check",
            function=fun,
            description="Materialize Psi_{K,s} and decide whether it is a bijection",
            arguments=[Argument("box", "Box K, lo..hi per dimension", "box", required=True)],
        )

    @command
    def wrap_check_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            box = run.args.box
            return Outcome({"box": str(box), "wrap_compatible": wrap_compatibility(run.config, box)})

        return Command(
            name="wrap-check",
            function=fun,
            description="Whether rules on the memory boundary of K agree with their wrap representatives",
            arguments=[Argument("box", "Box K, lo..hi per dimension", "box", required=True)],
        )

    @command
    def post_surjectivity_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            s, args = run.config, run.args
            if args.mode == "uniform":
                radius = uniform_post_surjectivity_radius(
                    s, max_radius=args.max_radius, trials=args.trials, background=args.background)
                return Outcome({"max_radius": args.max_radius, "radius": radius})
            if args.mode == "stable":
                report = stable_post_surjectivity_probe(s, args.max_radius, args.trials, args.background)
                return Outcome.from_closure(report, refuted=False)
            cell = origin(s.dim) if args.cell is None else args.cell
            E = Box.cube(args.lift_radius, s.dim).cells()
            certificate = post_surjectivity_lift(s, cell, E, args.trials, args.window_radius, args.background)
            return Outcome.from_certificate(certificate, s)

        return Command(
            name="post-surjectivity",
            function=fun,
            description="Lift probes: one cell (lift), the uniform radius, or over the orbit closure (stable)",
            arguments=[
                Argument("mode", "Probe to run (default lift)", "string", enum=["lift", "uniform", "stable"], default="lift"),
                Argument("cell", "Cell g for the lift probe (default origin)", "cell"),
                Argument("lift_radius", "E = B_r for the lift probe (default 1)", "natural", default=1),
                Argument("trials", "Random inputs per probe (default 20)", "positive", default=20),
                Argument("window_radius", "Radius of the random part of x (default: the whole neighbourhood)", "natural"),
                Argument("background", "Symbol outside the random window (default 0)", "natural", default=0),
                _max_radius(3),
            ],
        )

    @command
    def stable_reversibility_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            s, args = run.config, run.args
            inverse = load_config(args.inverse_rules, args.inverse_builtin)
            certificates = []
            if inverse is None:
                certificate = synthesize_inverse(s, args.max_radius, args.trials, args.window_radius)
                certificates.append((certificate, s, "synthesized"))
                if certificate.is_inconclusive:
                    return Outcome({"verdict": "inconclusive", "certificate": certificate.to_dict()}, certificates)
                inverse = certificate.artifacts["inverse"]
            report = stable_reversibility_check(inverse, s, args.trials, args.window_radius)
            return Outcome({"report": report.to_dict()}, certificates, refuted=report.verdict == "refuted")

        return Command(
            name="stable-reversibility",
            function=fun,
            description="Check sigma_t o sigma_s = Id on s and on every joint limit; t is synthesized unless given",
            arguments=[
                Argument("inverse_rules", "Rule file of the candidate inverse t", "string"),
                Argument("inverse_builtin", "Builtin candidate inverse t", "string", enum=BUILTIN_NAMES),
                _max_radius(3),
                *_trials(),
            ],
        )

    @command
    def corpus_command(self) -> Command:
        def fun(run: CommandRun) -> Outcome:
            names = run.args.names or BUILTIN_NAMES
            result: Dict[str, Any] = {}
            if run.args.export:
                written = export_fixtures(run.args.export)
                result["exported"] = sorted(os.path.basename(p) for p in written)
            if run.args.no_check:
                return Outcome(result)
            claims = {name: [c.to_dict() for c in check_example(builtin(name))] for name in names}
            holds = all(c["holds"] for results in claims.values() for c in results)
            result.update({"claims": claims, "all_hold": holds})
            return Outcome(result, refuted=not holds)

        return Command(
            name="corpus",
            function=fun,
            description="Re-check the expected verdicts of the builtin examples, or export them as rule files",
            arguments=[
                Argument("names", "Builtins to check (default all)", "array", items="string", enum=BUILTIN_NAMES),
                Argument("export", "Directory to write every builtin as a rule file", "string"),
                Argument("no_check", "Skip re-checking expected verdicts", "boolean"),
            ],
            needs_rules=False,
        )


__all__ = ["AnucaCommands", "Argument", "Command", "CommandRun", "CommandsContext", "Outcome", "command", "load_config"]
