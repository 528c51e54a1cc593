# -*- coding: utf-8 -*-

# stdlib
from dataclasses import dataclass
import logging
from typing import Iterable
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

# pypi
from lark import Lark
from lark import Token as LarkToken
from lark import Transformer
from lark import v_args
from lark.exceptions import UnexpectedCharacters
from lark.exceptions import UnexpectedEOF
from lark.exceptions import UnexpectedInput
from lark.exceptions import VisitError

# local
from .diagnostics import Diagnostic
from .diagnostics import LEXICAL_ERROR
from .diagnostics import Span
from .diagnostics import SYNTAX_ERROR
from .exceptions import InvalidProgram_Lexical
from .exceptions import InvalidProgram_Syntax
from .terms import App
from .terms import BinOp
from .terms import Box
from .terms import Const
from .terms import ContextualValue
from .terms import If
from .terms import Lam
from .terms import Let
from .terms import LetBox
from .terms import Lit
from .terms import Match
from .terms import MatchBranch
from .terms import PairIntro
from .terms import PairSplit
from .terms import Term
from .terms import VarApp
from .types import BOOL
from .types import Branch
from .types import BoxTy
from .types import CLOSE
from .types import ContextualType
from .types import ctx0
from .types import Dual
from .types import Fun
from .types import In
from .types import INT
from .types import Mult
from .types import Out
from .types import Pair
from .types import Rec
from .types import Select
from .types import Type
from .types import TypeName
from .types import UNIT
from .types import Var
from .types import WAIT


# ==============================================================================


log = logging.getLogger(__name__)

GRAMMAR_FILE = "grammar.lark"

MAIN = "main"

KEYWORDS = frozenset(
    (
        "type", "let", "in", "box", "select", "match", "close", "wait", "send",
        "receive", "new", "fork", "fix", "lambda", "lambda1", "if", "then",
        "else", "true", "false", "unit", "rec", "oplus", "Dual", "Unit", "Int",
        "Bool", "Close", "Wait",
    )
)  # fmt: skip

KIND_KEYWORD = "keyword"
KIND_IDENTIFIER = "identifier"
KIND_LABEL = "label"
KIND_INTEGER = "integer-literal"
KIND_SYMBOL = "symbol"


@dataclass(frozen=True)
class Token(object):
    kind: str
    lexeme: str
    span: Span


@dataclass(frozen=True)
class TypeDecl(object):
    name: str
    type: Type
    span: Span


@dataclass(frozen=True)
class TermDecl(object):
    name: str
    signature: Optional[Type]
    params: Tuple[str, ...]
    body: Term
    span: Span


@dataclass(frozen=True)
class SourceProgram(object):
    type_decls: Tuple[TypeDecl, ...] = ()
    term_decls: Tuple[TermDecl, ...] = ()
    main: str = MAIN

    def decl(self, name: str) -> Optional[TermDecl]:
        for d in self.term_decls:
            if d.name == name:
                return d
        return None


# ------------------------------------------------------------------------------


class LayoutSeparator(object):
    """
    lark post-lexer: a token in column 1 starts a new declaration, so a
    `_SEP` is emitted before it (but not before the first token).
    """

    always_accept = ()

    def process(self, stream):
        first = True
        for tok in stream:
            if tok.column == 1 and not first:
                yield LarkToken.new_borrow_pos("_SEP", "", tok)
            first = False
            yield tok


_parser = None


def get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark.open(
            GRAMMAR_FILE,
            rel_to=__file__,
            parser="earley",
            lexer="basic",
            postlex=LayoutSeparator(),
            propagate_positions=True,
            maybe_placeholders=True,
        )
    return _parser


def _token_span(tok) -> Span:
    return Span(
        tok.line,
        tok.column,
        tok.end_line or tok.line,
        tok.end_column or tok.column + len(tok),
        tok.start_pos or 0,
        tok.end_pos or 0,
    )


def _meta_span(meta) -> Optional[Span]:
    if getattr(meta, "empty", True):
        return None
    return Span(
        meta.line,
        meta.column,
        meta.end_line,
        meta.end_column,
        meta.start_pos,
        meta.end_pos,
    )


def _present(children) -> list:
    return [c for c in children if c is not None]


def _level(turnstile: str) -> int:
    digits = turnstile[2:]
    return int(digits) if digits else 1


@v_args(meta=True)
class _ToAst(Transformer):
    """parse tree -> SourceProgram declarations, types and terms"""

    # declarations

    def start(self, meta, c):
        return _present(c)

    def type_decl(self, meta, c):
        return ("type", str(c[0]), c[1], _meta_span(meta))

    def signature(self, meta, c):
        return ("signature", str(c[0]), c[1], _meta_span(meta))

    def term_decl(self, meta, c):
        params = tuple(str(p) for p in c[1:-1])
        if len(set(params)) != len(params):
            raise ValueError("duplicate parameter in %s" % c[0])
        return ("term", str(c[0]), params, c[-1], _meta_span(meta))

    # types

    def fun_un(self, meta, c):
        return Fun(c[0], Mult.UN, c[1])

    def fun_lin(self, meta, c):
        return Fun(c[0], Mult.LIN, c[1])

    def out_t(self, meta, c):
        return Out(c[0], c[1])

    def in_t(self, meta, c):
        return In(c[0], c[1])

    def rec_t(self, meta, c):
        return Rec(str(c[0]), c[1])

    def dual_t(self, meta, c):
        return Dual(c[0])

    def unit_t(self, meta, c):
        return UNIT

    def int_t(self, meta, c):
        return INT

    def bool_t(self, meta, c):
        return BOOL

    def close_t(self, meta, c):
        return CLOSE

    def wait_t(self, meta, c):
        return WAIT

    def type_name(self, meta, c):
        return TypeName(str(c[0]))

    def type_var(self, meta, c):
        return Var(str(c[0]))

    def select_t(self, meta, c):
        return Select(tuple(c))

    def branch_t(self, meta, c):
        return Branch(tuple(c))

    def box_t(self, meta, c):
        return BoxTy(c[0])

    def pair_t(self, meta, c):
        return Pair(c[0], c[1])

    def choice(self, meta, c):
        return (str(c[0]), c[1])

    def ctype(self, meta, c):
        c = _present(c)
        return ContextualType(tuple(c[:-2]), _level(str(c[-2])), c[-1])

    def param_plain(self, meta, c):
        return ctx0(c[0])

    # terms

    def let(self, meta, c):
        return Let(str(c[0]), c[1], c[2], span=_meta_span(meta))

    def pair_split(self, meta, c):
        if str(c[0]) == str(c[1]):
            raise ValueError("both components of the pair are bound to %s" % c[0])
        return PairSplit(str(c[0]), str(c[1]), c[2], c[3], span=_meta_span(meta))

    def let_box(self, meta, c):
        return LetBox(str(c[0]), c[1], c[2], span=_meta_span(meta))

    def lam_un(self, meta, c):
        return Lam(str(c[0]), c[2], c[1], Mult.UN, span=_meta_span(meta))

    def lam_lin(self, meta, c):
        return Lam(str(c[0]), c[2], c[1], Mult.LIN, span=_meta_span(meta))

    def lam_plain(self, meta, c):
        return Lam(str(c[0]), c[1], span=_meta_span(meta))

    def if_term(self, meta, c):
        return If(c[0], c[1], c[2], span=_meta_span(meta))

    def seq(self, meta, c):
        return Let("_", c[0], c[1], span=_meta_span(meta))

    def _binop(op):
        def method(self, meta, c):
            return BinOp(op, c[0], c[1], span=_meta_span(meta))

        return method

    eq = _binop("==")
    lt = _binop("<")
    add = _binop("+")
    sub = _binop("-")
    times = _binop("*")
    del _binop

    def apply(self, meta, c):
        return App(c[0], c[1], span=_meta_span(meta))

    def int_lit(self, meta, c):
        return Lit(int(c[0]), span=_meta_span(meta))

    def neg_lit(self, meta, c):
        return Lit(-int(c[0]), span=_meta_span(meta))

    def true_lit(self, meta, c):
        return Lit(True, span=_meta_span(meta))

    def false_lit(self, meta, c):
        return Lit(False, span=_meta_span(meta))

    def unit_lit(self, meta, c):
        annotation = c[0] if c else None
        return Const("unit", annotation=annotation, span=_meta_span(meta))

    def var(self, meta, c):
        return VarApp(str(c[0]), (), span=_meta_span(meta))

    def var_app(self, meta, c):
        return VarApp(str(c[0]), tuple(c[1:]), span=_meta_span(meta))

    def const_kw(self, meta, c):
        return str(c[0])

    def const(self, meta, c):
        return Const(c[0], annotation=c[1], span=_meta_span(meta))

    def select(self, meta, c):
        return Const("select", str(c[0]), c[1], span=_meta_span(meta))

    def pair(self, meta, c):
        return PairIntro(c[0], c[1], span=_meta_span(meta))

    def box(self, meta, c):
        return Box(c[0], span=_meta_span(meta))

    def match(self, meta, c):
        return Match(c[0], tuple(c[1:]), span=_meta_span(meta))

    def branch(self, meta, c):
        return MatchBranch(str(c[0]), str(c[1]), c[2], span=_meta_span(meta))

    # contextual values

    def ctx_annotated(self, meta, c):
        binders = c[:-2]
        return ContextualValue(
            tuple(name for (name, _t) in binders),
            c[-1],
            tuple(t for (_name, t) in binders),
            int(c[-2]),
            span=_meta_span(meta),
        )

    def ctx_plain(self, meta, c):
        return ContextualValue(
            tuple(str(z) for z in c[:-1]), c[-1], span=_meta_span(meta)
        )

    def ctx_bare(self, meta, c):
        return ContextualValue((), c[0], span=_meta_span(meta))

    def binder_ann(self, meta, c):
        return (str(c[0]), c[1])


# ------------------------------------------------------------------------------


def _classify(toks: List[LarkToken], i: int) -> str:
    tok = toks[i]
    if tok.type == "LNAME":
        return KIND_KEYWORD if str(tok) in KEYWORDS else KIND_IDENTIFIER
    if tok.type == "UNAME":
        prev = str(toks[i - 1]) if i > 0 else None
        after = toks[i + 1] if i + 1 < len(toks) else None
        if prev == "select":
            return KIND_LABEL
        if after is not None and str(after) == ":":
            return KIND_LABEL
        if prev in ("{", ",") and after is not None and after.type == "LNAME":
            return KIND_LABEL
        return KIND_IDENTIFIER
    if tok.type == "INT":
        return KIND_INTEGER
    if str(tok) in KEYWORDS:
        return KIND_KEYWORD
    return KIND_SYMBOL


def _lexical_error(source: str, e: UnexpectedCharacters) -> InvalidProgram_Lexical:
    pos = e.pos_in_stream or 0
    char = source[pos] if pos < len(source) else ""
    span = Span(e.line, e.column, e.line, e.column + 1, pos, pos + 1)
    return InvalidProgram_Lexical(
        Diagnostic(LEXICAL_ERROR, span, "illegal character %r" % char)
    )


def lex(source: str) -> List[Token]:
    """
    The token stream of `source`, comments stripped, every token with a span.
    """
    try:
        raw = [t for t in get_parser().lex(source) if t.type != "_SEP"]
    except UnexpectedCharacters as e:
        raise _lexical_error(source, e)
    return [Token(_classify(raw, i), str(t), _token_span(t)) for (i, t) in enumerate(raw)]


def untokenize(tokens: Iterable[Token]) -> str:
    """source text placing every token at its span"""
    lines: List[str] = []
    for tok in tokens:
        while len(lines) < tok.span.line:
            lines.append("")
        line = lines[tok.span.line - 1]
        pad = tok.span.column - 1 - len(line)
        lines[tok.span.line - 1] = line + " " * max(pad, 0) + tok.lexeme
    return "\n".join(lines)


def _describe_expected(expected) -> List[str]:
    parser = get_parser()
    out = []
    for name in sorted(expected or ()):
        if name == "_SEP":
            out.append("a new declaration")
            continue
        try:
            pattern = parser.get_terminal(name).pattern
            out.append(repr(pattern.value) if pattern.type == "str" else name)
        except KeyError:
            out.append(name)
    return out


def _syntax_error(source: str, e: UnexpectedInput) -> InvalidProgram_Syntax:
    expected = getattr(e, "expected", None) or getattr(e, "allowed", None) or ()
    if isinstance(e, UnexpectedEOF) or getattr(e, "line", -1) in (-1, None):
        lines = source.split("\n")
        (line, column) = (len(lines), len(lines[-1]) + 1)
        span = Span(line, column, line, column, len(source), len(source))
        message = "unexpected end of input"
    else:
        token = getattr(e, "token", None)
        if token is not None and token.type == "_SEP":
            span = _token_span(token)
            message = "declaration ends too early"
        elif token is not None:
            span = _token_span(token)
            message = "unexpected %r" % str(token)
        else:
            span = Span(e.line, e.column, e.line, e.column + 1)
            message = "unexpected input"
    described = _describe_expected(expected)
    if described:
        message = "%s, expected one of: %s" % (message, ", ".join(described))
    return InvalidProgram_Syntax(Diagnostic(SYNTAX_ERROR, span, message), expected)


def _duplicate(name: str, what: str, span: Optional[Span]) -> InvalidProgram_Syntax:
    return InvalidProgram_Syntax(
        Diagnostic(SYNTAX_ERROR, span or Span(1, 1, 1, 1), "duplicate %s %s" % (what, name))
    )


def _assemble(items) -> SourceProgram:
    type_decls = []
    signatures = {}
    defs = []
    seen_types = set()
    for item in items:
        kind = item[0]
        if kind == "type":
            (_k, name, t, span) = item
            if name in seen_types:
                raise _duplicate(name, "type", span)
            seen_types.add(name)
            type_decls.append(TypeDecl(name, t, span))
        elif kind == "signature":
            (_k, name, t, span) = item
            if name in signatures:
                raise _duplicate(name, "signature for", span)
            signatures[name] = (t, span)
        else:
            defs.append(item)
    term_decls = []
    seen = set()
    for (_k, name, params, body, span) in defs:
        if name in seen:
            raise _duplicate(name, "declaration", span)
        seen.add(name)
        signature = signatures.get(name, (None, None))[0]
        term_decls.append(TermDecl(name, signature, params, body, span))
    for (name, (_t, span)) in signatures.items():
        if name not in seen:
            raise InvalidProgram_Syntax(
                Diagnostic(SYNTAX_ERROR, span, "signature for %s has no definition" % name)
            )
    return SourceProgram(tuple(type_decls), tuple(term_decls))


def parse_program(source: Union[str, List[Token]]) -> SourceProgram:
    """
    Parse a whole program. `source` is program text or the output of
    :func:`lex`.
    """
    if not isinstance(source, str):
        source = untokenize(source)
    try:
        tree = get_parser().parse(source)
    except UnexpectedCharacters as e:
        raise _lexical_error(source, e)
    except UnexpectedInput as e:
        raise _syntax_error(source, e)
    try:
        items = _ToAst().transform(tree)
    except VisitError as e:
        span = _meta_span(getattr(e.obj, "meta", None)) or Span(1, 1, 1, 1)
        raise InvalidProgram_Syntax(Diagnostic(SYNTAX_ERROR, span, str(e.orig_exc)))
    program = _assemble(items)
    log.debug(
        "parsed %d type and %d term declarations",
        len(program.type_decls),
        len(program.term_decls),
    )
    return program


def parse_type(source: str) -> Type:
    """a single (unresolved) type, e.g. for the command line"""
    program = parse_program("it : %s\nit = unit" % _indented(source))
    return program.term_decls[0].signature


def _indented(source: str) -> str:
    return "\n".join(
        line if i == 0 else " " + line for (i, line) in enumerate(source.split("\n"))
    )


def parse_term(source: str) -> Term:
    """a single term; continuation lines need no indentation"""
    program = parse_program("it = %s" % _indented(source))
    return program.term_decls[0].body
