# -*- coding: utf-8 -*-

# stdlib
from dataclasses import replace
import logging
from typing import Dict
from typing import Optional
from typing import Set
from typing import Tuple

# local
from .diagnostics import Diagnostic
from .diagnostics import DUALITY_MISMATCH
from .diagnostics import ILL_FORMED_TYPE
from .diagnostics import Span
from .diagnostics import UNKNOWN_SPAN
from .diagnostics import UNKNOWN_TYPE
from .exceptions import InvalidProgram_TypeResolution
from .exceptions import UnsupportedDuality
from .parser import SourceProgram
from .parser import TypeDecl
from .terms import map_types
from .types import Branch
from .types import BoxTy
from .types import ContextualType
from .types import Dual
from .types import dualize
from .types import equal
from .types import free_type_vars
from .types import Fun
from .types import In
from .types import is_contractive
from .types import is_session
from .types import Out
from .types import Pair
from .types import Rec
from .types import Select
from .types import Type
from .types import TypeName
from .types import Var


# ==============================================================================


log = logging.getLogger(__name__)


def _ref(alias: str) -> str:
    """recursion variable standing for a self-referential alias"""
    return "_" + alias[0].lower() + alias[1:]


class TypeResolver(object):
    """
    Expands `type` aliases and `Dual`. Errors carry the span of the
    declaration being resolved.
    """

    def __init__(self, type_decls=()):
        self.aliases: Dict[str, Type] = {d.name: d.type for d in type_decls}
        self._hits: Set[str] = set()
        self._span: Span = UNKNOWN_SPAN

    def _fail(self, code: str, message: str, t: Optional[Type] = None):
        raise InvalidProgram_TypeResolution(
            Diagnostic(code, self._span, message, actual=t)
        )

    def resolve(self, t: Type, span: Optional[Span] = None) -> Type:
        self._span = span or UNKNOWN_SPAN
        self._hits = set()
        r = self._walk(t, ())
        if not is_contractive(r):
            self._fail(ILL_FORMED_TYPE, "recursive type is not contractive", r)
        return r

    def _expand(self, name: str, stack: Tuple[str, ...]) -> Type:
        if name in stack:
            self._hits.add(name)
            return Var(_ref(name))
        if name not in self.aliases:
            self._fail(UNKNOWN_TYPE, "unknown type %s" % name)
        body = self._walk(self.aliases[name], stack + (name,))
        if name in self._hits:
            self._hits.discard(name)
            if not is_session(body):
                self._fail(
                    ILL_FORMED_TYPE, "recursive type %s must be a session type" % name
                )
            return Rec(_ref(name), body)
        return body

    def _dual(self, inner: Type) -> Type:
        if free_type_vars(inner):
            self._fail(
                DUALITY_MISMATCH,
                "Dual of an open recursive reference %s"
                % ", ".join(sorted(free_type_vars(inner))),
                inner,
            )
        if not is_session(inner):
            self._fail(DUALITY_MISMATCH, "Dual of a non-session type", inner)
        try:
            return dualize(inner)
        except UnsupportedDuality as e:
            self._fail(DUALITY_MISMATCH, str(e), inner)

    def _walk(self, t, stack):
        walk = lambda k: self._walk(k, stack)  # noqa: E731
        if isinstance(t, TypeName):
            return self._expand(t.name, stack)
        if isinstance(t, Dual):
            return self._dual(walk(t.inner))
        if isinstance(t, Out):
            return Out(walk(t.payload), walk(t.cont))
        if isinstance(t, In):
            return In(walk(t.payload), walk(t.cont))
        if isinstance(t, Select):
            return Select(tuple((l, walk(s)) for (l, s) in t.branches))
        if isinstance(t, Branch):
            return Branch(tuple((l, walk(s)) for (l, s) in t.branches))
        if isinstance(t, Rec):
            return Rec(t.ref, walk(t.body))
        if isinstance(t, Fun):
            return Fun(walk(t.arg), t.mult, walk(t.res))
        if isinstance(t, Pair):
            return Pair(walk(t.left), walk(t.right))
        if isinstance(t, BoxTy):
            return BoxTy(self._walk_ctype(t.inner, stack))
        return t

    def _walk_ctype(self, ct, stack):
        return ContextualType(
            tuple(self._walk_ctype(p, stack) for p in ct.params),
            ct.level,
            self._walk(ct.body, stack),
        )


def resolve_types(p: SourceProgram) -> SourceProgram:
    """
    Replace aliases and `Dual` in every signature and annotation. Resolving
    a resolved program returns an equal program.
    """
    resolver = TypeResolver(p.type_decls)
    type_decls = tuple(
        TypeDecl(d.name, resolver.resolve(d.type, d.span), d.span)
        for d in p.type_decls
    )
    term_decls = []
    for d in p.term_decls:
        signature = None
        if d.signature is not None:
            signature = resolver.resolve(d.signature, d.span)
        body = map_types(d.body, lambda t, span=d.span: resolver.resolve(t, span))
        term_decls.append(replace(d, signature=signature, body=body))
    log.debug("resolved %d type aliases", len(type_decls))
    return SourceProgram(type_decls, tuple(term_decls), p.main)


class AliasFolder(object):
    """
    The inverse of resolution, for display: subterms equal to a declared
    alias (or to the dual of a session alias) are printed by name.
    """

    def __init__(self, type_decls=()):
        self.known = []
        for d in type_decls:
            if free_type_vars(d.type):
                continue
            self.known.append((TypeName(d.name), d.type))
            if is_session(d.type):
                try:
                    self.known.append((Dual(TypeName(d.name)), dualize(d.type)))
                except UnsupportedDuality:
                    pass

    def fold(self, t, outer: bool = True):
        """with `outer` False, `t` itself is never replaced by a name"""
        if isinstance(t, ContextualType):
            return ContextualType(
                tuple(self.fold(p) for p in t.params), t.level, self.fold(t.body)
            )
        if outer and not free_type_vars(t):
            for (name, resolved) in self.known:
                if equal(t, resolved):
                    return name
        if isinstance(t, Out):
            return Out(self.fold(t.payload), self.fold(t.cont))
        if isinstance(t, In):
            return In(self.fold(t.payload), self.fold(t.cont))
        if isinstance(t, Select):
            return Select(tuple((l, self.fold(s)) for (l, s) in t.branches))
        if isinstance(t, Branch):
            return Branch(tuple((l, self.fold(s)) for (l, s) in t.branches))
        if isinstance(t, Fun):
            return Fun(self.fold(t.arg), t.mult, self.fold(t.res))
        if isinstance(t, Pair):
            return Pair(self.fold(t.left), self.fold(t.right))
        if isinstance(t, BoxTy):
            return BoxTy(self.fold(t.inner))
        return t
