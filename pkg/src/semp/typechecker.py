# -*- coding: utf-8 -*-
"""
The algorithmic type system.

`synth(Γ, M)` returns the type of `M`, the residual context (what `M` did
not consume) and the elaborated term. The first failing rule raises
:class:`semp.exceptions.TypeCheckFailure`.
"""

# stdlib
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
import logging
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

# pypi
from pyramid.decorator import reify

# local
from .constants import constant_scheme
from .constants import instance_bindings
from .constants import instantiate
from .constants import LIBRARY_NAMES
from .context import EMPTY
from .context import TypingContext
from .diagnostics import Diagnostic
from .diagnostics import DUALITY_MISMATCH
from .diagnostics import ILL_FORMED_TYPE
from .diagnostics import LEVEL_VIOLATION
from .diagnostics import LINEAR_ESCAPES
from .diagnostics import LINEAR_UNUSED
from .diagnostics import Span
from .diagnostics import TYPE_MISMATCH
from .diagnostics import UNKNOWN_SPAN
from .diagnostics import UNKNOWN_VARIABLE
from .diagnostics import UNRESOLVED_SCHEME
from .exceptions import IllFormedType
from .exceptions import TypeCheckFailure
from .exceptions import UnknownConstant
from .exceptions import UnsupportedDuality
from .library import expand
from .parser import SourceProgram
from .parser import TermDecl
from .pretty import pretty
from .substitution import NameSupply
from .terms import App
from .terms import apply_spine
from .terms import BinOp
from .terms import Box
from .terms import Const
from .terms import ContextualValue
from .terms import free_vars
from .terms import If
from .terms import Lam
from .terms import Let
from .terms import LetBox
from .terms import Lit
from .terms import map_children
from .terms import Match
from .terms import MatchBranch
from .terms import PairIntro
from .terms import PairSplit
from .terms import spine
from .terms import Term
from .terms import VarApp
from .types import BOOL
from .types import Branch
from .types import BoxTy
from .types import check_type
from .types import ContextualType
from .types import ctx0
from .types import equal
from .types import equal_ctype
from .types import Fun
from .types import INT
from .types import is_dual
from .types import is_session
from .types import is_unrestricted
from .types import Mult
from .types import Pair
from .types import Type
from .types import unfold_all
from .types import UNIT
from .types import well_formed


# ==============================================================================


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthesisResult(object):
    type: Type
    residual: TypingContext
    term: Term
    diagnostics: Tuple[Diagnostic, ...] = ()


def _fail(code: str, span: Optional[Span], message: str, expected=None, actual=None):
    raise TypeCheckFailure(
        Diagnostic(code, span or UNKNOWN_SPAN, message, expected, actual)
    )


def _mismatch(span, message, expected=None, actual=None):
    _fail(TYPE_MISMATCH, span, message, expected, actual)


def _where(span: Optional[Span]) -> str:
    if span is None:
        return "an earlier binder"
    return "%d:%d" % (span.line, span.column)


# ------------------------------------------------------------------------------


def eta_expand(x: str, t: ContextualType, supply: Optional[NameSupply] = None):
    """
    The contextual value standing for the variable `x : t`:
    `(y1:τ1, ..., yk:τk)^n. x[eta(y1), ..., eta(yk)]`.
    """
    if t.level == 0 and not t.params:
        return ContextualValue((), VarApp(x), (), 0)
    supply = supply or NameSupply()
    ys = tuple(supply.fresh("y") for _p in t.params)
    inner = tuple(eta_expand(y, p, supply) for (y, p) in zip(ys, t.params))
    return ContextualValue(ys, VarApp(x, inner), t.params, t.level)


def erase(m):
    """strip every annotation; erase(erase(m)) == erase(m)"""
    m = map_children(m, erase)
    if isinstance(m, Const) and m.annotation is not None:
        return replace(m, annotation=None)
    if isinstance(m, Lam) and (m.binder_type is not None or m.mult is not None):
        return replace(m, binder_type=None, mult=None)
    if isinstance(m, ContextualValue) and m.annotated:
        return replace(m, binder_types=None, level=None)
    return m


# ------------------------------------------------------------------------------


class Checker(object):
    """
    One checker per program. It remembers binder sites, consumed linear
    variables and the variables hidden by contextual values so failures
    can be reported with a precise code.
    """

    def __init__(self):
        self.supply = NameSupply()
        self.binder_sites: Dict[str, Optional[Span]] = {}
        self.consumed: Dict[str, Optional[Span]] = {}
        self.stripped: List[Tuple[int, Dict[str, int]]] = []

    # --- contexts

    def _unbound(self, name: str, span: Optional[Span]):
        for (level, hidden) in reversed(self.stripped):
            if name in hidden:
                _fail(
                    LEVEL_VIOLATION,
                    span,
                    "%s (level %d) cannot be used inside a level-%d contextual value"
                    % (name, hidden[name], level),
                )
        if name in self.consumed:
            _fail(
                LINEAR_ESCAPES,
                span,
                "linear variable %s was already used at %s"
                % (name, _where(self.consumed[name])),
            )
        if name in self.binder_sites:
            _fail(
                UNKNOWN_VARIABLE,
                span,
                "%s is used outside the scope of its binder at %s"
                % (name, _where(self.binder_sites[name])),
            )
        _fail(UNKNOWN_VARIABLE, span, "unknown variable %s" % name)

    def _bind(self, g: TypingContext, binders, body: Term, span: Optional[Span]):
        """
        Check `body` under `g` extended with `binders`, then remove the
        binders from the residual. Shadowed bindings are restored.
        """
        saved = []
        inner = g
        for (name, _t) in binders:
            t = inner.lookup(name)
            if t is not None:
                saved.append((name, t))
                inner = inner.remove(name)
        for (name, t) in binders:
            self.binder_sites[name] = span
            self.consumed.pop(name, None)
        inner = inner.extend_many(binders)
        (t, residual, body) = self.synth(inner, body)
        for (name, _t) in binders:
            residual = residual.difference(name, span)
        return (t, residual.extend_many(saved), body)

    # --- contextual values

    def check_ctx(self, g: TypingContext, sigma: ContextualValue, t: ContextualType):
        """check σ against an expected contextual type; (residual, σ')"""
        if not sigma.annotated:
            body = sigma.body
            if (
                not sigma.binders
                and t.params
                and isinstance(body, VarApp)
                and not body.subst
            ):
                bound = g.lookup(body.name)
                if bound is not None and equal_ctype(bound, t):
                    sigma = replace(
                        eta_expand(body.name, bound, self.supply), span=sigma.span
                    )
            if not sigma.annotated:
                if len(sigma.binders) != len(t.params):
                    _mismatch(
                        sigma.span,
                        "contextual value binds %d variable(s), expected %d"
                        % (len(sigma.binders), len(t.params)),
                        expected=t,
                    )
                sigma = replace(sigma, binder_types=t.params, level=t.level)
        (ct, residual, sigma) = self.synth_ctx(g, sigma)
        if not equal_ctype(ct, t):
            _mismatch(
                sigma.span,
                "contextual value has type %s, expected %s" % (pretty(ct), pretty(t)),
                expected=t,
                actual=ct,
            )
        return (residual, sigma)

    def synth_ctx(self, g: TypingContext, sigma: ContextualValue):
        if not sigma.annotated:
            _fail(
                UNRESOLVED_SCHEME,
                sigma.span,
                "binders %s of a contextual value need type annotations"
                % ", ".join(sigma.binders),
            )
        n = sigma.level
        try:
            well_formed(ContextualType(sigma.binder_types, n, UNIT))
        except IllFormedType as e:
            _fail(ILL_FORMED_TYPE, sigma.span, str(e))
        (outer, rest) = g.divide(n)
        self.stripped.append((n, {name: t.level for (name, t) in rest}))
        try:
            (t, residual, body) = self._bind(
                outer,
                tuple(zip(sigma.binders, sigma.binder_types)),
                sigma.body,
                sigma.span,
            )
        finally:
            self.stripped.pop()
        ct = ContextualType(sigma.binder_types, n, t)
        return (ct, residual.merge(rest), replace(sigma, body=body))

    # --- constants

    def resolve_constant(
        self, c: Const, arg_types: Sequence[Type], span: Optional[Span] = None
    ) -> Type:
        """
        The instance type of constant `c` applied to arguments of the given
        types. An explicit annotation wins and must be an instance.
        """
        span = span or c.span
        try:
            scheme = constant_scheme(c.name, c.label)
        except UnknownConstant as e:
            _fail(UNKNOWN_VARIABLE, span, str(e))
        if c.annotation is not None:
            return self._annotated_instance(scheme, c, span)
        bindings: dict = {}
        t = scheme.skeleton
        for (i, actual) in enumerate(arg_types):
            if not isinstance(t, Fun):
                break
            if not scheme.match(t.arg, actual, bindings):
                _mismatch(
                    span,
                    "argument %d of %s has type %s, which does not fit %s"
                    % (i + 1, _name(c), pretty(actual), pretty(scheme.skeleton)),
                    actual=actual,
                )
            t = t.res
        missing = scheme.unbound(bindings)
        if missing:
            _fail(
                UNRESOLVED_SCHEME,
                span,
                "cannot determine %s for %s; annotate it as %s@T"
                % (", ".join(missing), _name(c), c.name),
            )
        try:
            return instantiate(scheme, bindings)
        except UnsupportedDuality as e:
            _fail(DUALITY_MISMATCH, span, str(e))
        except IllFormedType as e:
            _mismatch(span, "%s: %s" % (_name(c), e))

    def _annotated_instance(self, scheme, c: Const, span) -> Type:
        ann = c.annotation
        try:
            check_type(ann)
        except IllFormedType as e:
            _fail(ILL_FORMED_TYPE, span, str(e))
        if c.name == "new":
            if is_session(ann):
                try:
                    return instantiate(scheme, {"S": ann})
                except UnsupportedDuality as e:
                    _fail(DUALITY_MISMATCH, span, str(e))
            if (
                isinstance(ann, Fun)
                and isinstance(ann.res, Pair)
                and is_session(ann.res.left)
                and is_session(ann.res.right)
                and not is_dual(ann.res.left, ann.res.right)
            ):
                _fail(
                    DUALITY_MISMATCH,
                    span,
                    "the endpoints of new have types %s and %s, which are not dual"
                    % (pretty(ann.res.left), pretty(ann.res.right)),
                    actual=ann,
                )
        try:
            bindings = instance_bindings(scheme, ann)
        except UnsupportedDuality as e:
            _fail(DUALITY_MISMATCH, span, str(e))
        if bindings is None:
            _mismatch(
                span,
                "%s is not an instance of %s : %s"
                % (pretty(ann), _name(c), pretty(scheme.skeleton)),
                actual=ann,
            )
        return ann

    def _constant_spine(self, g, head, args, m):
        cur = g
        arg_types = []
        elaborated = []
        for a in args:
            (t, cur, a) = self.synth(cur, a)
            arg_types.append(t)
            elaborated.append(a)
        if isinstance(head, Const):
            inst = self.resolve_constant(head, arg_types, m.span)
            new_head = replace(head, annotation=inst)
        else:
            inst = self.resolve_constant(
                Const(head.name, span=head.span), arg_types, m.span
            )
            new_head = expand(head.name, inst, head.span)
        t = inst
        for (i, (actual, a)) in enumerate(zip(arg_types, args)):
            if not isinstance(t, Fun):
                _mismatch(
                    m.span,
                    "%s is applied to too many arguments" % _name(head),
                    actual=inst,
                )
            if not equal(t.arg, actual):
                _mismatch(
                    a.span or m.span,
                    "argument %d of %s has type %s, expected %s"
                    % (i + 1, _name(head), pretty(actual), pretty(t.arg)),
                    expected=t.arg,
                    actual=actual,
                )
            t = t.res
        return (t, cur, apply_spine(new_head, elaborated, m.span))

    def _is_library(self, g, head) -> bool:
        return (
            isinstance(head, VarApp)
            and head.name in LIBRARY_NAMES
            and not head.subst
            and head.name not in g
        )

    # --- terms

    def synth(self, g: TypingContext, m: Term):
        """(type, residual, elaborated term)"""
        if isinstance(m, Lit):
            return (BOOL if isinstance(m.value, bool) else INT, g, m)

        if isinstance(m, Const):
            inst = self.resolve_constant(m, ())
            return (inst, g, replace(m, annotation=inst))

        if isinstance(m, VarApp):
            return self._var(g, m)

        if isinstance(m, Lam):
            return self._lambda(g, m)

        if isinstance(m, App):
            (head, args) = spine(m)
            if isinstance(head, Const) or self._is_library(g, head):
                return self._constant_spine(g, head, args, m)
            (f, g1, fn) = self.synth(g, m.fn)
            if not isinstance(f, Fun):
                _mismatch(
                    m.fn.span or m.span,
                    "%s is applied but has type %s" % (pretty(m.fn), pretty(f)),
                    actual=f,
                )
            (a, g2, arg) = self.synth(g1, m.arg)
            if not equal(f.arg, a):
                _mismatch(
                    m.arg.span or m.span,
                    "argument has type %s, expected %s" % (pretty(a), pretty(f.arg)),
                    expected=f.arg,
                    actual=a,
                )
            return (f.res, g2, replace(m, fn=fn, arg=arg))

        if isinstance(m, PairIntro):
            (a, g1, left) = self.synth(g, m.left)
            (b, g2, right) = self.synth(g1, m.right)
            return (Pair(a, b), g2, replace(m, left=left, right=right))

        if isinstance(m, PairSplit):
            (p, g1, scrutinee) = self.synth(g, m.scrutinee)
            if not isinstance(p, Pair):
                _mismatch(
                    m.scrutinee.span or m.span,
                    "a pair was expected, got %s" % pretty(p),
                    actual=p,
                )
            (t, g2, body) = self._bind(
                g1, ((m.left, ctx0(p.left)), (m.right, ctx0(p.right))), m.body, m.span
            )
            return (t, g2, replace(m, scrutinee=scrutinee, body=body))

        if isinstance(m, Box):
            sigma = m.value
            if not sigma.annotated:
                if sigma.binders:
                    _fail(
                        UNRESOLVED_SCHEME,
                        sigma.span or m.span,
                        "binders %s of a boxed value need type annotations"
                        % ", ".join(sigma.binders),
                    )
                sigma = replace(sigma, binder_types=(), level=1)
            if sigma.level < 1:
                _fail(
                    ILL_FORMED_TYPE,
                    m.span,
                    "boxed contextual values have a level of at least 1",
                )
            (ct, residual, sigma) = self.synth_ctx(g, sigma)
            if residual != g:
                _fail(LINEAR_ESCAPES, m.span, "a box cannot consume linear variables")
            return (BoxTy(ct), g, replace(m, value=sigma))

        if isinstance(m, LetBox):
            (b, g1, scrutinee) = self.synth(g, m.scrutinee)
            if not isinstance(b, BoxTy):
                _mismatch(
                    m.scrutinee.span or m.span,
                    "a box was expected, got %s" % pretty(b),
                    actual=b,
                )
            (t, g2, body) = self._bind(g1, ((m.binder, b.inner),), m.body, m.span)
            return (t, g2, replace(m, scrutinee=scrutinee, body=body))

        if isinstance(m, Match):
            return self._match(g, m)

        if isinstance(m, Let):
            (t, g1, bound) = self.synth(g, m.bound)
            (u, g2, body) = self._bind(g1, ((m.binder, ctx0(t)),), m.body, m.span)
            return (u, g2, replace(m, bound=bound, body=body))

        if isinstance(m, BinOp):
            return self._binop(g, m)

        if isinstance(m, If):
            (c, g1, cond) = self.synth(g, m.cond)
            if not equal(c, BOOL):
                _mismatch(
                    m.cond.span or m.span,
                    "condition has type %s, expected Bool" % pretty(c),
                    expected=BOOL,
                    actual=c,
                )
            (t, g2, then) = self.synth(g1, m.then)
            (u, g3, orelse) = self.synth(g1, m.orelse)
            if not equal(t, u):
                _mismatch(
                    m.span,
                    "the branches of if have types %s and %s" % (pretty(t), pretty(u)),
                    expected=t,
                    actual=u,
                )
            self._same_residual(g2, g3, m.span, "if")
            return (t, g2, replace(m, cond=cond, then=then, orelse=orelse))

        raise TypeError("not a term: %r" % (m,))

    def _var(self, g: TypingContext, m: VarApp):
        t = g.lookup(m.name)
        if t is None:
            if self._is_library(g, m):
                _fail(
                    UNRESOLVED_SCHEME,
                    m.span,
                    "%s needs an argument to determine its type" % m.name,
                )
            self._unbound(m.name, m.span)
        if len(m.subst) != len(t.params):
            _mismatch(
                m.span,
                "%s takes %d explicit substitution(s), %d given"
                % (m.name, len(t.params), len(m.subst)),
                expected=t,
            )
        if not m.subst:
            if is_unrestricted(t):
                return (t.body, g, m)
            self.consumed[m.name] = m.span
            return (t.body, g.remove(m.name), m)
        cur = g
        subst = []
        for (sigma, param) in zip(m.subst, t.params):
            (cur, sigma) = self.check_ctx(cur, sigma, param)
            subst.append(sigma)
        return (t.body, cur, replace(m, subst=tuple(subst)))

    def _lambda(self, g: TypingContext, m: Lam):
        if m.binder_type is None or m.mult is None:
            _fail(
                UNRESOLVED_SCHEME,
                m.span,
                "the binder %s of lambda needs a type annotation" % m.binder,
            )
        try:
            check_type(m.binder_type)
        except IllFormedType as e:
            _fail(ILL_FORMED_TYPE, m.span, str(e))
        (u, residual, body) = self._bind(
            g, ((m.binder, ctx0(m.binder_type)),), m.body, m.span
        )
        if m.mult is Mult.UN:
            used = [n for n in g.lin_part().names() if n not in residual]
            if used:
                _fail(
                    LINEAR_ESCAPES,
                    m.span,
                    "an unrestricted lambda cannot capture linear variable(s) %s"
                    % ", ".join(used),
                )
        return (Fun(m.binder_type, m.mult, u), residual, replace(m, body=body))

    def _match(self, g: TypingContext, m: Match):
        (s, g1, scrutinee) = self.synth(g, m.scrutinee)
        choice = unfold_all(s) if is_session(s) else s
        if not isinstance(choice, Branch):
            _mismatch(
                m.scrutinee.span or m.span,
                "match needs an external choice, got %s" % pretty(s),
                actual=s,
            )
        offered = choice.branch_map()
        labels = [b.label for b in m.branches]
        if set(labels) != set(offered):
            _mismatch(
                m.span,
                "match covers labels %s but the choice offers %s"
                % (", ".join(sorted(labels)), ", ".join(sorted(offered))),
                actual=s,
            )
        result = None
        residual = None
        branches = []
        for b in m.branches:
            (t, g2, body) = self._bind(
                g1, ((b.binder, ctx0(offered[b.label])),), b.body, b.span or m.span
            )
            if result is None:
                (result, residual) = (t, g2)
            else:
                if not equal(result, t):
                    _mismatch(
                        b.span or m.span,
                        "branch %s has type %s, expected %s"
                        % (b.label, pretty(t), pretty(result)),
                        expected=result,
                        actual=t,
                    )
                self._same_residual(residual, g2, b.span or m.span, "match")
            branches.append(MatchBranch(b.label, b.binder, body, span=b.span))
        return (
            result,
            residual,
            replace(m, scrutinee=scrutinee, branches=tuple(branches)),
        )

    def _same_residual(self, a: TypingContext, b: TypingContext, span, what):
        if a == b:
            return
        differ = sorted(set(a.names()) ^ set(b.names()))
        _fail(
            LINEAR_UNUSED,
            span,
            "the branches of %s use linear variables differently: %s"
            % (what, ", ".join(differ) or "types differ"),
        )

    def _binop(self, g: TypingContext, m: BinOp):
        (a, g1, left) = self.synth(g, m.left)
        (b, g2, right) = self.synth(g1, m.right)
        if m.op == "==":
            if not (equal(a, b) and (equal(a, INT) or equal(a, BOOL))):
                _mismatch(
                    m.span,
                    "== compares Int or Bool values of one type, got %s and %s"
                    % (pretty(a), pretty(b)),
                    actual=b,
                )
            result = BOOL
        else:
            for (t, operand) in ((a, m.left), (b, m.right)):
                if not equal(t, INT):
                    _mismatch(
                        operand.span or m.span,
                        "operand of %s has type %s, expected Int" % (m.op, pretty(t)),
                        expected=INT,
                        actual=t,
                    )
            result = BOOL if m.op == "<" else INT
        return (result, g2, replace(m, left=left, right=right))


def _name(c) -> str:
    if isinstance(c, Const):
        return "select %s" % c.label if c.name == "select" else c.name
    return c.name


# ------------------------------------------------------------------------------


def synth(g: TypingContext, m: Term, checker: Optional[Checker] = None) -> SynthesisResult:
    (t, residual, term) = (checker or Checker()).synth(g, m)
    return SynthesisResult(t, residual, term)


def resolve_constant(c: Const, arg_types: Sequence[Type] = ()) -> Type:
    return Checker().resolve_constant(c, arg_types)


def _peel(signature: Type, k: int, d: TermDecl) -> List[Tuple[Type, Mult]]:
    out = []
    t = signature
    for p in d.params:
        if not isinstance(t, Fun):
            _mismatch(
                d.span,
                "%s has %d parameter(s) but its signature %s takes fewer"
                % (d.name, k, pretty(signature)),
                expected=signature,
            )
        out.append((t.arg, t.mult))
        t = t.res
    return out


def desugar_declaration(d: TermDecl) -> Term:
    """
    `f x y = M` with `f : T` becomes nested lambdas, or
    `fix (lambda(f:T). lambda ...)` when `f` refers to itself.
    """
    body = d.body
    if d.params:
        if d.signature is None:
            _fail(
                UNRESOLVED_SCHEME,
                d.span,
                "the parameters of %s need a signature" % d.name,
            )
        params = _peel(d.signature, len(d.params), d)
        for (name, (t, mult)) in reversed(list(zip(d.params, params))):
            body = Lam(name, body, t, mult, span=d.span)
    if d.name in free_vars(body):
        if d.signature is None:
            _fail(
                UNRESOLVED_SCHEME,
                d.span,
                "the recursive declaration %s needs a signature" % d.name,
            )
        if not (isinstance(d.signature, Fun) and d.signature.mult is Mult.UN):
            _mismatch(
                d.span,
                "the recursive declaration %s needs an unrestricted function type"
                % d.name,
                actual=d.signature,
            )
        body = App(
            Const("fix", span=d.span),
            Lam(d.name, body, d.signature, Mult.UN, span=d.span),
            span=d.span,
        )
    return body


@dataclass
class CheckedDeclaration(object):
    name: str
    type: Optional[Type]
    term: Optional[Term]
    span: Optional[Span] = None


@dataclass
class CheckedProgram(object):
    program: SourceProgram
    declarations: List[CheckedDeclaration] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)
    main: Optional[Term] = None
    main_type: Optional[Type] = None

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    @reify
    def _by_name(self) -> Dict[str, CheckedDeclaration]:
        # built on first lookup, once checking is over
        return {d.name: d for d in self.declarations}

    def declaration(self, name: str) -> Optional[CheckedDeclaration]:
        return self._by_name.get(name)

    def environment(self) -> TypingContext:
        """the typing context of all checked declarations"""
        return TypingContext(
            (d.name, ctx0(d.type)) for d in self.declarations if d.type is not None
        )


def check_program(p: SourceProgram) -> CheckedProgram:
    """
    Check the declarations in order; each is typed under the types of the
    previous ones. `main` becomes `let d1 = M1 in ... in main`.
    """
    result = CheckedProgram(p)
    env = EMPTY
    for d in p.term_decls:
        checker = Checker()
        decl_type = None
        term = None
        try:
            body = desugar_declaration(d)
            (decl_type, _residual, term) = checker.synth(env, body)
            if d.signature is not None:
                try:
                    check_type(d.signature)
                except IllFormedType as e:
                    _fail(ILL_FORMED_TYPE, d.span, str(e))
                if not equal(decl_type, d.signature):
                    _mismatch(
                        d.span,
                        "%s has type %s but its signature says %s"
                        % (d.name, pretty(decl_type), pretty(d.signature)),
                        expected=d.signature,
                        actual=decl_type,
                    )
            if not is_unrestricted(decl_type):
                _fail(
                    LINEAR_ESCAPES,
                    d.span,
                    "top-level declaration %s has the linear type %s"
                    % (d.name, pretty(decl_type)),
                    actual=decl_type,
                )
            log.debug("%s : %s", d.name, pretty(decl_type))
        except TypeCheckFailure as e:
            log.debug("%s: %s", d.name, e.diagnostic.message)
            result.diagnostics.append(e.diagnostic.with_declaration(d.name))
            decl_type = d.signature
            term = None
        result.declarations.append(CheckedDeclaration(d.name, decl_type, term, d.span))
        if decl_type is not None:
            env = env.remove(d.name).extend(d.name, ctx0(decl_type))
    _build_main(result, p.main)
    return result


def _build_main(result: CheckedProgram, main: str):
    target = result.declaration(main)
    if target is None:
        result.diagnostics.append(
            Diagnostic(UNKNOWN_VARIABLE, UNKNOWN_SPAN, "no %s declaration" % main)
        )
        return
    if not result.ok:
        return
    term = target.term
    before = result.declarations[: result.declarations.index(target)]
    for d in reversed(before):
        term = Let(d.name, d.term, term, span=d.span)
    result.main = term
    result.main_type = target.type


# ------------------------------------------------------------------------------
# typed processes


@dataclass(frozen=True)
class Process(object):
    pass


@dataclass(frozen=True)
class Thread(Process):
    term: Term
    main: bool = False


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True)
class Restrict(Process):
    """(νx y : R, S) P"""

    x: str
    y: str
    x_type: Type
    y_type: Type
    body: Process


def process_free_vars(p: Process):
    if isinstance(p, Thread):
        return free_vars(p.term)
    if isinstance(p, Par):
        return process_free_vars(p.left) | process_free_vars(p.right)
    return process_free_vars(p.body) - {p.x, p.y}


def _thread_ok(g: TypingContext, t: Thread) -> bool:
    try:
        (ty, residual, _term) = Checker().synth(g, t.term)
    except TypeCheckFailure as e:
        log.debug("thread does not check: %s", e.diagnostic.message)
        return False
    if not residual.is_un():
        return False
    return is_unrestricted(ty) if t.main else equal(ty, UNIT)


def check_process(p: Process, g: TypingContext = EMPTY) -> bool:
    """Γ ⊢ P: every linear binding is used by exactly one thread."""
    if isinstance(p, Thread):
        return _thread_ok(g, p)
    if isinstance(p, Restrict):
        if not is_dual(p.x_type, p.y_type):
            return False
        inner = g.remove(p.x).remove(p.y)
        inner = inner.extend(p.x, ctx0(p.x_type)).extend(p.y, ctx0(p.y_type))
        return check_process(p.body, inner)
    if isinstance(p, Par):
        free_left = process_free_vars(p.left)
        lin = g.lin_part()
        un = g.un_part()
        left = un.extend_many((n, t) for (n, t) in lin if n in free_left)
        right = un.extend_many((n, t) for (n, t) in lin if n not in free_left)
        if check_process(p.left, left) and check_process(p.right, right):
            return True
        for (g1, g2) in g.enumerate_splits():
            if (g1, g2) == (left, right):
                continue
            if check_process(p.left, g1) and check_process(p.right, g2):
                return True
        return False
    raise TypeError("not a process: %r" % (p,))
