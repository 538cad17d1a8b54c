"""
Command-line front end.

JSON reports go to stdout, human summaries and errors to stderr. Exit codes:
0 success or inconclusive, 1 refutation, 2 usage/schema/library error,
3 certificate replay failure under --verify.
"""

import logging
import sys
from contextlib import contextmanager
from typing import Dict, Iterator, Optional, Sequence

from ..analysis import replay
from ..config import AnucaConfig, get_config
from ..exceptions import AnucaException, CapExceededException
from ..rules.rule_file import config_hash
from .commands import AnucaCommands, CommandRun, Outcome, load_config
from .render import RunVisualizer
from .report import RunReport, RunTracker

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2
EXIT_VERIFY_FAILED = 3

_HANDLER_FLAG = "_anuca_cli"


def _setup_logging(verbose: bool) -> None:
    logger = logging.getLogger("anuca")
    if not any(getattr(h, _HANDLER_FLAG, False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        setattr(handler, _HANDLER_FLAG, True)
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


@contextmanager
def _overrides(config: AnucaConfig, args) -> Iterator[None]:
    """Apply --seed/--threads/--cap for the duration of one run."""
    saved = (config.seed, config.threads, config.enumeration_cap, config.compose_cap, config.materialization_cap)
    try:
        config.seed = args.seed
        if args.threads is not None:
            config.threads = args.threads
        if args.cap is not None:
            config.enumeration_cap = args.cap
            config.compose_cap = args.cap
            config.materialization_cap = args.cap
        yield
    finally:
        config.seed = saved[0]
        config.threads = saved[1]
        config.enumeration_cap = saved[2]
        config.compose_cap = saved[3]
        config.materialization_cap = saved[4]


def _verify(outcome: Outcome) -> bool:
    return all(replay(certificate, s) for certificate, s, _ in outcome.certificates)


def _caps(config: AnucaConfig) -> Dict[str, int]:
    return {
        "enumeration": config.enumeration_cap,
        "compose": config.compose_cap,
        "materialization": config.materialization_cap,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    context = AnucaCommands()
    parser, subparsers = context.build_parser()
    args = parser.parse_args(context.normalize_argv(argv))
    command = context.commands_map[args.command]
    if command.needs_rules and not (args.rules or args.builtin):
        subparsers[command.name].error("one of --rules or --builtin is required")

    _setup_logging(args.verbose)
    config = get_config()
    visualizer = RunVisualizer()
    tracker = RunTracker(command.name, verbose=args.verbose, visualizer=visualizer)

    report = RunReport(command=argv, seed=args.seed, caps=_caps(config))
    threads = config.threads
    try:
        with _overrides(config, args):
            report.seed = config.seed
            report.caps = _caps(config)
            threads = config.threads
            s = None
            if command.needs_rules:
                s = load_config(args.rules, args.builtin)
                report.config_hash = config_hash(s)
            tracker.add_operation(command.name, {k: str(v) for k, v in sorted(vars(args).items()) if v is not None})
            outcome = command.function(CommandRun(args, s))
            for certificate, _, label in outcome.certificates:
                tracker.add_certificate(certificate, label)
            report.result = outcome.result
            report.certificates = [certificate.to_dict() for certificate, _, _ in outcome.certificates]
            exit_code = EXIT_REFUTED if outcome.refuted else EXIT_OK
            if args.verify:
                report.verified = _verify(outcome)
                if not report.verified:
                    tracker.signal_error("certificate replay failed")
                    exit_code = EXIT_VERIFY_FAILED
            if outcome.render is not None:
                visualizer.print_render(outcome.render)
    except CapExceededException as ex:
        tracker.signal_error(str(ex))
        report.error = str(ex)
        report.partial = ex.partial
        exit_code = EXIT_ERROR
    except (AnucaException, OSError) as ex:
        tracker.signal_error(str(ex))
        report.error = str(ex)
        exit_code = EXIT_ERROR

    tracker.finish(exit_code)
    report.exit_code = exit_code
    if args.timings:
        report.wall_time_s = round(tracker.wall_time(), 6)
        report.threads = threads
    print(report.to_json())
    tracker.print_summary()
    return exit_code


__all__ = ["EXIT_ERROR", "EXIT_OK", "EXIT_REFUTED", "EXIT_VERIFY_FAILED", "main"]
