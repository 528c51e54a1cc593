# -*- coding: utf-8 -*-
"""
Terms of the calculus.

A single node family serves both as the explicitly annotated language the
checker reads and as the plain language the evaluator runs: annotation
fields are optional, and :func:`semp.typechecker.erase` clears them.
Spans never take part in equality.
"""
# stdlib
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
from dataclasses import replace
from typing import FrozenSet
from typing import Optional
from typing import Tuple
from typing import Union

# local
from .diagnostics import Span
from .types import ContextualType
from .types import Mult
from .types import Type


# ==============================================================================


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Term(object):
    pass


@dataclass(frozen=True)
class Const(Term):
    """`close`, `send`, `select L`, ... optionally annotated with an instance type"""

    name: str
    label: Optional[str] = None
    annotation: Optional[Type] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lit(Term):
    value: Union[int, bool]
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ContextualValue(object):
    """(x̄:τ̄)ⁿ.M; `binder_types` and `level` are None when unannotated"""

    binders: Tuple[str, ...]
    body: Term
    binder_types: Optional[Tuple[ContextualType, ...]] = None
    level: Optional[int] = None
    span: Optional[Span] = _span()

    def __post_init__(self):
        if len(set(self.binders)) != len(self.binders):
            raise ValueError("duplicate binder in %r" % (self.binders,))
        if self.binder_types is not None and len(self.binder_types) != len(
            self.binders
        ):
            raise ValueError("binder annotations do not match binders")

    @property
    def annotated(self) -> bool:
        return self.level is not None


@dataclass(frozen=True)
class VarApp(Term):
    """x[σ̄]; a plain variable has an empty substitution"""

    name: str
    subst: Tuple[ContextualValue, ...] = ()
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lam(Term):
    binder: str
    body: Term
    binder_type: Optional[Type] = None
    mult: Optional[Mult] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PairIntro(Term):
    left: Term
    right: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class PairSplit(Term):
    """let (x, y) = M in N"""

    left: str
    right: str
    scrutinee: Term
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Box(Term):
    value: ContextualValue
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class LetBox(Term):
    binder: str
    scrutinee: Term
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class MatchBranch(object):
    label: str
    binder: str
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Match(Term):
    scrutinee: Term
    branches: Tuple[MatchBranch, ...]
    span: Optional[Span] = _span()

    def __post_init__(self):
        labels = [b.label for b in self.branches]
        if not labels or len(set(labels)) != len(labels):
            raise ValueError("match needs distinct labels, got %r" % (labels,))

    def branch(self, label: str) -> Optional[MatchBranch]:
        for b in self.branches:
            if b.label == label:
                return b
        return None


@dataclass(frozen=True)
class Let(Term):
    binder: str
    bound: Term
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BinOp(Term):
    op: str
    left: Term
    right: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class If(Term):
    cond: Term
    then: Term
    orelse: Term
    span: Optional[Span] = _span()


BINARY_OPERATORS = ("+", "-", "*", "==", "<")

UNIT_TERM = Const("unit")


# ------------------------------------------------------------------------------


def var(name: str) -> VarApp:
    return VarApp(name, ())


def lift(m: Term) -> ContextualValue:
    """a term as a contextual value with no binders"""
    return ContextualValue((), m, (), 0)


def spine(m: Term) -> Tuple[Term, Tuple[Term, ...]]:
    """(head, args) of an application chain"""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fn
    return (m, tuple(reversed(args)))


def apply_spine(head: Term, args, span: Optional[Span] = None) -> Term:
    m = head
    for a in args:
        m = App(m, a, span=span)
    return m


def free_vars(m) -> FrozenSet[str]:
    """free variable names of a term or a contextual value"""
    if isinstance(m, VarApp):
        acc = frozenset((m.name,))
        for s in m.subst:
            acc |= free_vars(s)
        return acc
    if isinstance(m, ContextualValue):
        return free_vars(m.body) - frozenset(m.binders)
    if isinstance(m, (Const, Lit)):
        return frozenset()
    if isinstance(m, Lam):
        return free_vars(m.body) - {m.binder}
    if isinstance(m, App):
        return free_vars(m.fn) | free_vars(m.arg)
    if isinstance(m, PairIntro):
        return free_vars(m.left) | free_vars(m.right)
    if isinstance(m, PairSplit):
        return free_vars(m.scrutinee) | (free_vars(m.body) - {m.left, m.right})
    if isinstance(m, Box):
        return free_vars(m.value)
    if isinstance(m, LetBox):
        return free_vars(m.scrutinee) | (free_vars(m.body) - {m.binder})
    if isinstance(m, Match):
        acc = free_vars(m.scrutinee)
        for b in m.branches:
            acc |= free_vars(b.body) - {b.binder}
        return acc
    if isinstance(m, Let):
        return free_vars(m.bound) | (free_vars(m.body) - {m.binder})
    if isinstance(m, BinOp):
        return free_vars(m.left) | free_vars(m.right)
    if isinstance(m, If):
        return free_vars(m.cond) | free_vars(m.then) | free_vars(m.orelse)
    raise TypeError("not a term: %r" % (m,))


def count_nodes(m, predicate) -> int:
    """number of sub-terms (including `m`) satisfying `predicate`"""
    n = 1 if predicate(m) else 0
    for child in children(m):
        n += count_nodes(child, predicate)
    return n


def children(m):
    if isinstance(m, VarApp):
        return tuple(s.body for s in m.subst)
    if isinstance(m, ContextualValue):
        return (m.body,)
    if isinstance(m, Lam):
        return (m.body,)
    if isinstance(m, App):
        return (m.fn, m.arg)
    if isinstance(m, PairIntro):
        return (m.left, m.right)
    if isinstance(m, PairSplit):
        return (m.scrutinee, m.body)
    if isinstance(m, Box):
        return (m.value.body,)
    if isinstance(m, LetBox):
        return (m.scrutinee, m.body)
    if isinstance(m, Match):
        return (m.scrutinee,) + tuple(b.body for b in m.branches)
    if isinstance(m, Let):
        return (m.bound, m.body)
    if isinstance(m, BinOp):
        return (m.left, m.right)
    if isinstance(m, If):
        return (m.cond, m.then, m.orelse)
    return ()


def map_children(m, visit):
    """
    Rebuild `m` with `visit` applied to each direct sub-term, contextual
    value and match branch. Leaves are returned unchanged.
    """
    changes = {}
    for f in fields(m):
        if f.name == "span":
            continue
        value = getattr(m, f.name)
        if isinstance(value, (Term, ContextualValue, MatchBranch)):
            changes[f.name] = visit(value)
        elif (
            isinstance(value, tuple)
            and value
            and isinstance(value[0], (ContextualValue, MatchBranch))
        ):
            changes[f.name] = tuple(visit(v) for v in value)
    if not changes:
        return m
    return replace(m, **changes)


def map_types(m, f):
    """apply `f` to every type annotation of a term or contextual value"""

    def ctype(t: ContextualType) -> ContextualType:
        return ContextualType(tuple(ctype(p) for p in t.params), t.level, f(t.body))

    def visit(k):
        k = map_children(k, visit)
        if isinstance(k, Const) and k.annotation is not None:
            return replace(k, annotation=f(k.annotation))
        if isinstance(k, Lam) and k.binder_type is not None:
            return replace(k, binder_type=f(k.binder_type))
        if isinstance(k, ContextualValue) and k.binder_types is not None:
            return replace(k, binder_types=tuple(ctype(t) for t in k.binder_types))
        return k

    return visit(m)
