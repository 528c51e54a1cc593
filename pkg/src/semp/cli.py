# -*- coding: utf-8 -*-
"""
``semp check|run|eval|dual``

Exit codes: 0 ok, 1 diagnostics (or any other error), 2 deadlock,
3 step limit or fuel exhausted.
"""

# stdlib
import argparse
import json
import logging
import os
import sys
from typing import List
from typing import Optional

# pypi
from pyramid.exceptions import ConfigurationError

# local
from . import __VERSION__
from . import check_expression
from . import check_source
from . import options_from_settings
from . import read_source
from .diagnostics import Diagnostic
from .evaluator import Blocked
from .evaluator import eval_pure
from .evaluator import FuelExhausted
from .exceptions import InvalidProgram
from .exceptions import RuntimeFault
from .exceptions import UnsupportedDuality
from .parser import parse_program
from .parser import parse_type
from .parser import SourceProgram
from .pretty import display
from .pretty import pretty
from .resolve import AliasFolder
from .resolve import resolve_types
from .resolve import TypeResolver
from .runtime import boot
from .runtime import Deadlock
from .runtime import Done
from .runtime import JsonTraceSink
from .runtime import LowestIdScheduler
from .runtime import RandomizedScheduler
from .runtime import run
from .runtime import TextTraceSink
from .types import dualize
from .types import is_session


# ==============================================================================


log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_DEADLOCK = 2
EXIT_LIMIT = 3

BLOCKED_MESSAGE = "term requires a channel context"


class _Output(object):
    """where and how results and diagnostics are written"""

    def __init__(self, stdout, stderr, options):
        self.stdout = stdout
        self.stderr = stderr
        self.json = options["json"]
        self.color = options["color"] and getattr(stderr, "isatty", lambda: False)()

    def result(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def record(self, **kw) -> None:
        self.stdout.write(json.dumps(kw, sort_keys=True) + "\n")

    def error(self, text: str) -> None:
        self.stderr.write(text + "\n")

    def diagnostics(self, diagnostics: List[Diagnostic], filename: str) -> int:
        for d in diagnostics:
            if self.json:
                self.stdout.write(d.as_json(filename) + "\n")
            else:
                self.error(d.render(filename, color=self.color))
        return EXIT_DIAGNOSTICS


def _checked(source: str, filename: str, out: _Output):
    """(CheckedProgram, None) or (None, exit status)"""
    try:
        program = check_source(source)
    except InvalidProgram as e:
        return (None, out.diagnostics([e.diagnostic], filename))
    if not program.ok:
        return (None, out.diagnostics(program.diagnostics, filename))
    return (program, None)


def _declarations(path: Optional[str]) -> SourceProgram:
    if path is None:
        return SourceProgram()
    (_filename, source) = read_source(path)
    return parse_program(source)


# ------------------------------------------------------------------------------


def cmd_check(args, options, out: _Output) -> int:
    (filename, source) = read_source(args.input)
    (program, status) = _checked(source, filename, out)
    if program is None:
        return status
    folder = AliasFolder(program.program.type_decls)
    for d in program.declarations:
        t = pretty(folder.fold(d.type))
        if out.json:
            out.record(name=d.name, type=t)
        else:
            out.result("%s : %s" % (d.name, t))
    return EXIT_OK


def cmd_run(args, options, out: _Output) -> int:
    (filename, source) = read_source(args.input)
    (program, status) = _checked(source, filename, out)
    if program is None:
        return status
    if options["randomize"]:
        scheduler = RandomizedScheduler(options["seed"])
    else:
        scheduler = LowestIdScheduler()
    c = boot(program, scheduler)
    if args.trace_json or (options["trace"] and out.json):
        c.sinks.append(JsonTraceSink(out.stdout))
    elif options["trace"]:
        c.sinks.append(TextTraceSink(out.stdout))
    try:
        outcome = run(
            c, options["max_steps"], check_errors=options["check_errors"]
        )
    except RuntimeFault as e:
        out.error("runtime fault: %s" % e)
        return EXIT_DIAGNOSTICS
    folder = AliasFolder(program.program.type_decls)
    if isinstance(outcome, Done):
        value = pretty(display(outcome.main, folder.fold))
        if out.json:
            out.record(outcome="done", value=value, steps=c.steps)
        else:
            out.result("Done: %s" % value)
        return EXIT_OK
    if isinstance(outcome, Deadlock):
        if out.json:
            out.record(
                outcome="deadlock",
                steps=c.steps,
                wait_for={"t%d" % k: v for (k, v) in outcome.report.wait_for.items()},
            )
        else:
            out.result(outcome.report.render())
        return EXIT_DEADLOCK
    if out.json:
        out.record(outcome="step-limit", steps=outcome.steps)
    else:
        out.result("StepLimit: no result after %d steps" % outcome.steps)
    return EXIT_LIMIT


def cmd_eval(args, options, out: _Output) -> int:
    if os.path.isfile(args.input):
        (filename, term_source) = read_source(args.input)
    else:
        (filename, term_source) = ("<term>", args.input)
    declarations = _declarations(args.with_file)
    try:
        program = check_expression(term_source, declarations)
    except InvalidProgram as e:
        return out.diagnostics([e.diagnostic], filename)
    if not program.ok:
        return out.diagnostics(program.diagnostics, filename)
    outcome = eval_pure(program.main, options["fuel"])
    if isinstance(outcome, Blocked):
        out.error(BLOCKED_MESSAGE)
        return EXIT_DIAGNOSTICS
    if isinstance(outcome, FuelExhausted):
        out.error("fuel exhausted after %d steps" % outcome.steps)
        return EXIT_LIMIT
    folder = AliasFolder(resolve_types(declarations).type_decls)
    value = pretty(display(outcome.term, folder.fold))
    if out.json:
        out.record(value=value, type=pretty(folder.fold(program.main_type)))
    else:
        out.result(value)
    return EXIT_OK


def cmd_dual(args, options, out: _Output) -> int:
    declarations = _declarations(args.with_file)
    t = parse_type(args.input)
    t = TypeResolver(declarations.type_decls).resolve(t)
    if not is_session(t):
        out.error("%s is not a session type" % pretty(t))
        return EXIT_DIAGNOSTICS
    try:
        d = dualize(t)
    except UnsupportedDuality as e:
        out.error(str(e))
        return EXIT_DIAGNOSTICS
    folder = AliasFolder(resolve_types(declarations).type_decls)
    out.result(pretty(folder.fold(d, outer=False)))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "eval": cmd_eval,
    "dual": cmd_dual,
}


# ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semp",
        description="type checker and interpreter for session-typed metaprograms",
    )
    parser.add_argument("--version", action="version", version=__VERSION__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument(
        "input",
        help="a program file or bundled corpus name; a term for eval, a type for dual",
    )
    parser.add_argument("--json", action="store_true", default=None)
    parser.add_argument("--trace", action="store_true", default=None)
    parser.add_argument("--trace-json", action="store_true", default=False)
    parser.add_argument("--max-steps", type=int, default=None)
    parser.add_argument("--fuel", type=int, default=None)
    parser.add_argument("--randomize", action="store_true", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--check-errors", action="store_true", default=None)
    parser.add_argument(
        "--with",
        dest="with_file",
        default=None,
        help="declarations in scope for eval and dual",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _settings(args) -> dict:
    settings = {}
    for key in (
        "json",
        "trace",
        "max_steps",
        "fuel",
        "randomize",
        "seed",
        "check_errors",
    ):
        value = getattr(args, key)
        if value is not None:
            settings["semp.%s" % key] = value
    return settings


def main(argv=None, stdout=None, stderr=None, environ=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            stream=stderr,
        )
    try:
        options = options_from_settings(_settings(args), environ)
    except ConfigurationError as e:
        stderr.write("semp: %s\n" % e)
        return EXIT_DIAGNOSTICS
    out = _Output(stdout, stderr, options)
    try:
        return COMMANDS[args.command](args, options, out)
    except IOError as e:
        out.error("semp: %s" % e)
        return EXIT_DIAGNOSTICS
    except InvalidProgram as e:
        return out.diagnostics([e.diagnostic], args.input)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
