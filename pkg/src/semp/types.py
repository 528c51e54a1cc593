# -*- coding: utf-8 -*-
"""
Types, session types and contextual types, with the decision procedures the
checker relies on: equi-recursive equality, coinductive duality, level
well-formedness and the unrestricted predicate.

All type nodes are immutable; structural equality of the dataclasses is
syntactic, use :func:`equal` for type equality.
"""
# stdlib
from dataclasses import dataclass
import enum
from typing import Dict
from typing import FrozenSet
from typing import Tuple
from typing import Union

# local
from .exceptions import IllFormedType
from .exceptions import UnsupportedDuality


# ==============================================================================


class Mult(enum.Enum):
    LIN = "1"
    UN = "ω"


@dataclass(frozen=True)
class Type(object):
    pass


@dataclass(frozen=True)
class UnitType(Type):
    pass


@dataclass(frozen=True)
class IntType(Type):
    pass


@dataclass(frozen=True)
class BoolType(Type):
    pass


UNIT = UnitType()
INT = IntType()
BOOL = BoolType()


@dataclass(frozen=True)
class MultVar(object):
    """multiplicity variable, only inside constant schemes"""

    name: str


@dataclass(frozen=True)
class Fun(Type):
    arg: Type
    mult: Union[Mult, MultVar]
    res: Type


@dataclass(frozen=True)
class Pair(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class ContextualType(object):
    params: Tuple["ContextualType", ...]
    level: int
    body: Type


@dataclass(frozen=True)
class BoxTy(Type):
    inner: ContextualType


# ------------------------------------------------------------------------------


@dataclass(frozen=True)
class SessionType(Type):
    pass


@dataclass(frozen=True)
class CloseType(SessionType):
    pass


@dataclass(frozen=True)
class WaitType(SessionType):
    pass


CLOSE = CloseType()
WAIT = WaitType()


@dataclass(frozen=True)
class Out(SessionType):
    payload: Type
    cont: Type


@dataclass(frozen=True)
class In(SessionType):
    payload: Type
    cont: Type


def _check_branches(branches):
    if not branches:
        raise IllFormedType("a choice needs at least one label")
    labels = [label for (label, _s) in branches]
    if len(set(labels)) != len(labels):
        raise IllFormedType("duplicate label in choice: %s" % ", ".join(labels))


@dataclass(frozen=True)
class Select(SessionType):
    branches: Tuple[Tuple[str, Type], ...]

    def __post_init__(self):
        _check_branches(self.branches)

    def branch_map(self) -> Dict[str, Type]:
        return dict(self.branches)


@dataclass(frozen=True)
class Branch(SessionType):
    branches: Tuple[Tuple[str, Type], ...]

    def __post_init__(self):
        _check_branches(self.branches)

    def branch_map(self) -> Dict[str, Type]:
        return dict(self.branches)


@dataclass(frozen=True)
class Var(SessionType):
    ref: str


@dataclass(frozen=True)
class Rec(SessionType):
    ref: str
    body: Type


# surface-only; gone after resolution


@dataclass(frozen=True)
class TypeName(Type):
    name: str


@dataclass(frozen=True)
class Dual(Type):
    inner: Type


# scheme-only


@dataclass(frozen=True)
class SchemeVar(Type):
    name: str


@dataclass(frozen=True)
class SchemeDual(Type):
    name: str


@dataclass(frozen=True)
class SchemeBranch(Type):
    name: str
    label: str


# ------------------------------------------------------------------------------


def ctx0(t: Type) -> ContextualType:
    """the level-0 contextual type with no parameters"""
    return ContextualType((), 0, t)


def is_session(t) -> bool:
    return isinstance(t, SessionType)


def free_type_vars(t) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset((t.ref,))
    if isinstance(t, Rec):
        return free_type_vars(t.body) - {t.ref}
    if isinstance(t, (Out, In)):
        return free_type_vars(t.payload) | free_type_vars(t.cont)
    if isinstance(t, (Select, Branch)):
        acc = frozenset()
        for (_label, s) in t.branches:
            acc |= free_type_vars(s)
        return acc
    if isinstance(t, Fun):
        return free_type_vars(t.arg) | free_type_vars(t.res)
    if isinstance(t, Pair):
        return free_type_vars(t.left) | free_type_vars(t.right)
    if isinstance(t, BoxTy):
        return free_type_vars(t.inner)
    if isinstance(t, ContextualType):
        acc = free_type_vars(t.body)
        for p in t.params:
            acc |= free_type_vars(p)
        return acc
    if isinstance(t, Dual):
        return free_type_vars(t.inner)
    return frozenset()


def subst_type(t, ref: str, replacement: Type):
    """replace the free recursion variable `ref` by a closed `replacement`"""
    if isinstance(t, Var):
        return replacement if t.ref == ref else t
    if isinstance(t, Rec):
        if t.ref == ref:
            return t
        return Rec(t.ref, subst_type(t.body, ref, replacement))
    if isinstance(t, Out):
        return Out(
            subst_type(t.payload, ref, replacement),
            subst_type(t.cont, ref, replacement),
        )
    if isinstance(t, In):
        return In(
            subst_type(t.payload, ref, replacement),
            subst_type(t.cont, ref, replacement),
        )
    if isinstance(t, Select):
        return Select(
            tuple((l, subst_type(s, ref, replacement)) for (l, s) in t.branches)
        )
    if isinstance(t, Branch):
        return Branch(
            tuple((l, subst_type(s, ref, replacement)) for (l, s) in t.branches)
        )
    if isinstance(t, Fun):
        return Fun(
            subst_type(t.arg, ref, replacement),
            t.mult,
            subst_type(t.res, ref, replacement),
        )
    if isinstance(t, Pair):
        return Pair(
            subst_type(t.left, ref, replacement),
            subst_type(t.right, ref, replacement),
        )
    if isinstance(t, BoxTy):
        return BoxTy(subst_type(t.inner, ref, replacement))
    if isinstance(t, ContextualType):
        return ContextualType(
            tuple(subst_type(p, ref, replacement) for p in t.params),
            t.level,
            subst_type(t.body, ref, replacement),
        )
    if isinstance(t, Dual):
        return Dual(subst_type(t.inner, ref, replacement))
    return t


def unfold(s: Type) -> Type:
    """one unfolding step of a top-level `rec`; anything else is returned as is"""
    if isinstance(s, Rec):
        return subst_type(s.body, s.ref, s)
    return s


def unfold_all(s: Type) -> Type:
    """unfold until the head is not a `rec`"""
    seen = 0
    while isinstance(s, Rec):
        s = unfold(s)
        seen += 1
        if seen > 1000:
            raise IllFormedType("non-contractive recursive type")
    return s


def is_contractive(t) -> bool:
    """every `rec` body is guarded by a session constructor"""
    if isinstance(t, Rec):
        body = t.body
        while isinstance(body, Rec):
            body = body.body
        if isinstance(body, Var):
            return False
        return is_contractive(body)
    if isinstance(t, (Out, In)):
        return is_contractive(t.payload) and is_contractive(t.cont)
    if isinstance(t, (Select, Branch)):
        return all(is_contractive(s) for (_l, s) in t.branches)
    if isinstance(t, Fun):
        return is_contractive(t.arg) and is_contractive(t.res)
    if isinstance(t, Pair):
        return is_contractive(t.left) and is_contractive(t.right)
    if isinstance(t, BoxTy):
        return is_contractive(t.inner)
    if isinstance(t, ContextualType):
        return is_contractive(t.body) and all(is_contractive(p) for p in t.params)
    return True


# ------------------------------------------------------------------------------


def check_type(t: Type) -> None:
    """
    Raise :class:`IllFormedType` unless `t` is a closed, contractive, fully
    resolved type whose box types are well formed at level 1 or above.
    """
    if free_type_vars(t):
        raise IllFormedType(
            "unbound recursion variable %s" % ", ".join(sorted(free_type_vars(t)))
        )
    if not is_contractive(t):
        raise IllFormedType("non-contractive recursive type")
    _check_nodes(t)


def _check_nodes(t):
    if isinstance(t, (TypeName, Dual, SchemeVar, SchemeDual, SchemeBranch)):
        raise IllFormedType("unresolved type node %r" % (t,))
    if isinstance(t, Fun):
        if not isinstance(t.mult, Mult):
            raise IllFormedType("unresolved multiplicity %r" % (t.mult,))
        _check_nodes(t.arg)
        _check_nodes(t.res)
    elif isinstance(t, Pair):
        _check_nodes(t.left)
        _check_nodes(t.right)
    elif isinstance(t, BoxTy):
        if well_formed(t.inner) < 1:
            raise IllFormedType("box types are typed at levels starting at 1")
    elif isinstance(t, (Out, In)):
        _check_nodes(t.payload)
        _check_nodes(t.cont)
    elif isinstance(t, (Select, Branch)):
        for (_l, s) in t.branches:
            _check_nodes(s)
    elif isinstance(t, Rec):
        _check_nodes(t.body)


def well_formed(ct: ContextualType) -> int:
    """
    Returns the level of a well formed contextual type.

    Level 0 takes no parameters; level n+1 takes parameters that are
    themselves well formed at level n or below.
    """
    if ct.level < 0:
        raise IllFormedType("negative level %d" % ct.level)
    _check_nodes(ct.body)
    if ct.level == 0:
        if ct.params:
            raise IllFormedType("a level-0 contextual type takes no parameters")
        return 0
    for p in ct.params:
        lvl = well_formed(p)
        if lvl >= ct.level:
            raise IllFormedType(
                "a level-%d parameter cannot appear in a level-%d contextual type"
                % (lvl, ct.level)
            )
    return ct.level


def ctype_at(ct: ContextualType, n: int) -> bool:
    """ctype(ct, n): well formed at level n (levels are monotone)"""
    try:
        return well_formed(ct) <= n
    except IllFormedType:
        return False


def is_unrestricted(x) -> bool:
    if isinstance(x, ContextualType):
        if x.level >= 1:
            return True
        return is_unrestricted(x.body)
    if isinstance(x, (UnitType, IntType, BoolType, BoxTy)):
        return True
    if isinstance(x, Fun):
        return x.mult is Mult.UN
    # sessions, linear arrows, pairs
    return False


def is_linear(x) -> bool:
    return not is_unrestricted(x)


def level_bounds(ct: ContextualType, n: int) -> Tuple[bool, bool]:
    return (ct.level >= n, ct.level < n)


# ------------------------------------------------------------------------------


class _Bisimulation(object):
    """
    Equality of (possibly infinite) regular type trees. Pairs of session types
    are assumed equal while they are being compared.
    """

    def __init__(self):
        self.assumed = set()

    def types(self, t, u) -> bool:
        if t is u:
            return True
        if isinstance(t, SessionType) or isinstance(u, SessionType):
            if not (isinstance(t, SessionType) and isinstance(u, SessionType)):
                return False
            return self.sessions(t, u)
        if type(t) is not type(u):
            return False
        if isinstance(t, Fun):
            return (
                t.mult == u.mult
                and self.types(t.arg, u.arg)
                and self.types(t.res, u.res)
            )
        if isinstance(t, Pair):
            return self.types(t.left, u.left) and self.types(t.right, u.right)
        if isinstance(t, BoxTy):
            return self.ctypes(t.inner, u.inner)
        return t == u

    def ctypes(self, a: ContextualType, b: ContextualType) -> bool:
        if a.level != b.level or len(a.params) != len(b.params):
            return False
        for (p, q) in zip(a.params, b.params):
            if not self.ctypes(p, q):
                return False
        return self.types(a.body, b.body)

    def sessions(self, s, r) -> bool:
        if (s, r) in self.assumed:
            return True
        self.assumed.add((s, r))
        s = unfold_all(s)
        r = unfold_all(r)
        if type(s) is not type(r):
            return False
        if isinstance(s, (Out, In)):
            return self.types(s.payload, r.payload) and self.sessions(s.cont, r.cont)
        if isinstance(s, (Select, Branch)):
            left = s.branch_map()
            right = r.branch_map()
            if set(left) != set(right):
                return False
            return all(self.sessions(left[l], right[l]) for l in left)
        if isinstance(s, Var):
            return s.ref == r.ref
        return True  # Close, Wait


def equal(t, u) -> bool:
    """equi-recursive type equality"""
    return _Bisimulation().types(t, u)


def equal_ctype(a: ContextualType, b: ContextualType) -> bool:
    return _Bisimulation().ctypes(a, b)


def is_dual(r: Type, s: Type) -> bool:
    """
    Greatest fixed point of the duality rules, by unfolding with a set of
    visited pairs.
    """
    if not (isinstance(r, SessionType) and isinstance(s, SessionType)):
        return False
    visited = set()
    stack = [(r, s)]
    while stack:
        (a, b) = stack.pop()
        if (a, b) in visited:
            continue
        visited.add((a, b))
        a = unfold_all(a)
        b = unfold_all(b)
        if isinstance(a, CloseType):
            if not isinstance(b, WaitType):
                return False
        elif isinstance(a, WaitType):
            if not isinstance(b, CloseType):
                return False
        elif isinstance(a, Out):
            if not isinstance(b, In) or not equal(a.payload, b.payload):
                return False
            stack.append((a.cont, b.cont))
        elif isinstance(a, In):
            if not isinstance(b, Out) or not equal(a.payload, b.payload):
                return False
            stack.append((a.cont, b.cont))
        elif isinstance(a, (Select, Branch)):
            other = Branch if isinstance(a, Select) else Select
            if not isinstance(b, other):
                return False
            left = a.branch_map()
            right = b.branch_map()
            if set(left) != set(right):
                return False
            for label in left:
                stack.append((left[label], right[label]))
        else:
            return False
    return True


def _check_dualizable(s):
    if isinstance(s, (Out, In)):
        if free_type_vars(s.payload):
            raise UnsupportedDuality(
                "recursion variable %s occurs in a payload"
                % ", ".join(sorted(free_type_vars(s.payload)))
            )
        _check_dualizable(s.cont)
    elif isinstance(s, (Select, Branch)):
        for (_l, k) in s.branches:
            _check_dualizable(k)
    elif isinstance(s, Rec):
        _check_dualizable(s.body)
    elif not isinstance(s, SessionType):
        raise UnsupportedDuality("not a session type")


def _dualize(s):
    if isinstance(s, CloseType):
        return WAIT
    if isinstance(s, WaitType):
        return CLOSE
    if isinstance(s, Out):
        return In(s.payload, _dualize(s.cont))
    if isinstance(s, In):
        return Out(s.payload, _dualize(s.cont))
    if isinstance(s, Select):
        return Branch(tuple((l, _dualize(k)) for (l, k) in s.branches))
    if isinstance(s, Branch):
        return Select(tuple((l, _dualize(k)) for (l, k) in s.branches))
    if isinstance(s, Rec):
        return Rec(s.ref, _dualize(s.body))
    return s  # Var


def dualize(s: Type) -> Type:
    """
    The dual view of a session type. Recursion variables may only occur in
    continuation position.
    """
    _check_dualizable(s)
    return _dualize(s)
