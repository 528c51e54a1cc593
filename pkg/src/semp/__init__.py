# -*- coding: utf-8 -*-
# stdlib
import logging
import os
import re

# local
from .parser import parse_program
from .parser import parse_term
from .parser import SourceProgram
from .parser import TermDecl
from .resolve import resolve_types
from .terms import free_vars
from .typechecker import check_program
from .typechecker import CheckedProgram
from .util import _parse_settings
from .util import settings_from_environ


__VERSION__ = "0.1.0"


# ==============================================================================


log = logging.getLogger(__name__)

CORPUS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
EXTENSION = ".semp"
EXPRESSION = "it"

_EXPECT = re.compile(r"^--\s*expect:\s*([a-z-]+)\s*$", re.MULTILINE)


def corpus_path(name):
    """
    Path of a bundled corpus program. `name` may omit the extension and may
    be prefixed with ``negative/``.
    """
    if not name.endswith(EXTENSION):
        name += EXTENSION
    path = os.path.join(CORPUS_DIR, *name.split("/"))
    if not os.path.isfile(path):
        raise IOError("no corpus program %s" % name)
    return path


def corpus_names(negative=False):
    folder = os.path.join(CORPUS_DIR, "negative") if negative else CORPUS_DIR
    names = sorted(
        f[: -len(EXTENSION)] for f in os.listdir(folder) if f.endswith(EXTENSION)
    )
    if negative:
        names = ["negative/%s" % n for n in names]
    return names


def read_source(path_or_name):
    """
    (filename, text) for a file on disk, falling back to the bundled corpus.
    """
    if os.path.isfile(path_or_name):
        path = path_or_name
    else:
        path = corpus_path(path_or_name)
    with open(path, encoding="utf-8") as f:
        return (path, f.read())


def expected_code(source):
    """the diagnostic code a negative corpus program announces in its header"""
    m = _EXPECT.search(source)
    return m.group(1) if m else None


def load_program(source):
    """
    Parse and resolve program text.

    :raises InvalidProgram: on lexical, syntax and type resolution errors
    """
    return resolve_types(parse_program(source))


def check_source(source):
    """
    :returns: :class:`semp.typechecker.CheckedProgram`
    """
    return check_program(load_program(source))


def with_expression(program, term_source, name=EXPRESSION):
    """
    A copy of the unresolved `program` whose main declaration is the term
    `term_source`, keeping only the declarations it needs.
    """
    body = parse_term(term_source)
    needed = set()
    pending = set(free_vars(body))
    while pending:
        n = pending.pop()
        if n in needed:
            continue
        d = program.decl(n)
        if d is None or n == name:
            continue
        needed.add(n)
        pending |= free_vars(d.body) - set(d.params)
    decls = tuple(d for d in program.term_decls if d.name in needed)
    expression = TermDecl(name, None, (), body, body.span)
    return SourceProgram(program.type_decls, decls + (expression,), name)


def check_expression(term_source, program=None):
    """check `term_source` with the declarations of `program` in scope"""
    program = program or SourceProgram()
    return check_program(resolve_types(with_expression(program, term_source)))


def options_from_settings(settings, environ=None):
    """
    Runtime options from a flat `semp.*` mapping; environment variables
    fill in what `settings` does not set.
    """
    merged = settings_from_environ(environ)
    merged.update(settings)
    return _parse_settings(merged)
