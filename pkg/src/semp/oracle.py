# -*- coding: utf-8 -*-
"""
A brute-force reading of the declarative typing rules, used to test the
algorithmic checker: every rule that splits its context tries every split.

Splits that hand a linear binding to a premise where the variable does not
occur free are skipped; such a premise could never consume it.
"""

# stdlib
import itertools
import logging
from typing import List
from typing import Optional
from typing import Sequence

# local
from .constants import LIBRARY_NAMES
from .context import MAX_SPLIT_LINEAR
from .context import TypingContext
from .exceptions import IllFormedType
from .exceptions import OracleScaleExceeded
from .exceptions import TypeCheckFailure
from .terms import App
from .terms import BinOp
from .terms import Box
from .terms import children
from .terms import Const
from .terms import ContextualValue
from .terms import free_vars
from .terms import If
from .terms import Lam
from .terms import Let
from .terms import LetBox
from .terms import Lit
from .terms import Match
from .terms import PairIntro
from .terms import PairSplit
from .terms import spine
from .terms import Term
from .terms import VarApp
from .typechecker import Checker
from .typechecker import eta_expand
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
from .types import is_session
from .types import is_unrestricted
from .types import Mult
from .types import Pair
from .types import Type
from .types import unfold_all
from .types import well_formed


# ==============================================================================


log = logging.getLogger(__name__)


def _binder_count(m) -> int:
    def binds(k) -> int:
        if isinstance(k, (Lam, Let, LetBox)):
            return 1
        if isinstance(k, PairSplit):
            return 2
        if isinstance(k, Match):
            return len(k.branches)
        if isinstance(k, VarApp):
            return sum(len(s.binders) for s in k.subst)
        if isinstance(k, Box):
            return len(k.value.binders)
        return 0

    return binds(m) + sum(_binder_count(k) for k in children(m))


def _add(found: List[Type], t: Type) -> None:
    if not any(equal(t, u) for u in found):
        found.append(t)


def _distribute(g: TypingContext, parts: Sequence[frozenset]):
    """
    Every way to hand each linear binding of `g` to exactly one part where
    it occurs free. Unrestricted bindings go to every part.
    """
    un = [b for b in g if is_unrestricted(b[1])]
    lin = [b for b in g if not is_unrestricted(b[1])]
    choices = []
    for (name, _t) in lin:
        where = [i for (i, fv) in enumerate(parts) if name in fv]
        if not where:
            return
        choices.append(where)
    for pick in itertools.product(*choices):
        out = []
        for i in range(len(parts)):
            mine = [b for (b, j) in zip(lin, pick) if j == i]
            out.append(TypingContext(un + mine))
        yield out


def _splits(g: TypingContext, left, right):
    """binary splits over enumerate_splits, strengthened"""
    fl = free_vars(left)
    fr = free_vars(right)
    for (g1, g2) in g.enumerate_splits():
        if any(n not in fl for n in g1.lin_part().names()):
            continue
        if any(n not in fr for n in g2.lin_part().names()):
            continue
        yield (g1, g2)


class DeclarativeOracle(object):
    def __init__(self):
        # constant resolution and eta are shared with the checker
        self.checker = Checker()

    def _bind(self, g: TypingContext, binders) -> Optional[TypingContext]:
        for (name, _t) in binders:
            t = g.lookup(name)
            if t is not None:
                if not is_unrestricted(t):
                    return None
                g = g.remove(name)
        return g.extend_many(binders)

    def _under(self, g, binders, body) -> List[Type]:
        inner = self._bind(g, binders)
        if inner is None:
            return []
        return self.derivations(inner, body)

    def _resolve(self, c: Const, arg_types) -> Optional[Type]:
        try:
            return self.checker.resolve_constant(c, arg_types)
        except TypeCheckFailure:
            return None

    # ---

    def ctx_derivations(
        self,
        g: TypingContext,
        sigma: ContextualValue,
        expected: Optional[ContextualType] = None,
    ) -> List[ContextualType]:
        if not sigma.annotated:
            if expected is None:
                return []
            body = sigma.body
            if (
                not sigma.binders
                and expected.params
                and isinstance(body, VarApp)
                and not body.subst
            ):
                bound = g.lookup(body.name)
                if bound is not None and equal_ctype(bound, expected):
                    sigma = eta_expand(body.name, bound, self.checker.supply)
            if not sigma.annotated:
                if len(sigma.binders) != len(expected.params):
                    return []
                sigma = ContextualValue(
                    sigma.binders, sigma.body, expected.params, expected.level
                )
        n = sigma.level
        try:
            well_formed(ContextualType(sigma.binder_types, n, INT))
        except IllFormedType:
            return []
        (outer, rest) = g.divide(n)
        if not rest.is_un():
            return []
        types = self._under(outer, tuple(zip(sigma.binders, sigma.binder_types)), sigma.body)
        return [ContextualType(sigma.binder_types, n, t) for t in types]

    def derivations(self, g: TypingContext, m: Term) -> List[Type]:
        """every T with Γ ⊢ M : T"""
        found: List[Type] = []

        if isinstance(m, Lit):
            if g.is_un():
                found.append(BOOL if isinstance(m.value, bool) else INT)
            return found

        if isinstance(m, Const):
            if g.is_un():
                t = self._resolve(m, ())
                if t is not None:
                    found.append(t)
            return found

        if isinstance(m, VarApp):
            return self._var(g, m)

        if isinstance(m, Lam):
            if m.binder_type is None or m.mult is None:
                return found
            try:
                check_type(m.binder_type)
            except IllFormedType:
                return found
            if m.mult is Mult.UN and not g.is_un():
                return found
            for u in self._under(g, ((m.binder, ctx0(m.binder_type)),), m.body):
                _add(found, Fun(m.binder_type, m.mult, u))
            return found

        if isinstance(m, App):
            (head, args) = spine(m)
            if isinstance(head, Const) or (
                isinstance(head, VarApp)
                and head.name in LIBRARY_NAMES
                and not head.subst
                and head.name not in g
            ):
                return self._constant_spine(g, head, args)
            for (g1, g2) in _splits(g, m.fn, m.arg):
                for f in self.derivations(g1, m.fn):
                    if not isinstance(f, Fun):
                        continue
                    for a in self.derivations(g2, m.arg):
                        if equal(f.arg, a):
                            _add(found, f.res)
            return found

        if isinstance(m, PairIntro):
            for (g1, g2) in _splits(g, m.left, m.right):
                for a in self.derivations(g1, m.left):
                    for b in self.derivations(g2, m.right):
                        _add(found, Pair(a, b))
            return found

        if isinstance(m, PairSplit):
            body = Lam(m.left, Lam(m.right, m.body))
            for (g1, g2) in _splits(g, m.scrutinee, body):
                for p in self.derivations(g1, m.scrutinee):
                    if not isinstance(p, Pair):
                        continue
                    binders = ((m.left, ctx0(p.left)), (m.right, ctx0(p.right)))
                    for t in self._under(g2, binders, m.body):
                        _add(found, t)
            return found

        if isinstance(m, Let):
            body = Lam(m.binder, m.body)
            for (g1, g2) in _splits(g, m.bound, body):
                for t in self.derivations(g1, m.bound):
                    for u in self._under(g2, ((m.binder, ctx0(t)),), m.body):
                        _add(found, u)
            return found

        if isinstance(m, Box):
            if not g.is_un():
                return found
            sigma = m.value
            if not sigma.annotated:
                if sigma.binders:
                    return found
                sigma = ContextualValue((), sigma.body, (), 1)
            if sigma.level < 1:
                return found
            for ct in self.ctx_derivations(g, sigma):
                _add(found, BoxTy(ct))
            return found

        if isinstance(m, LetBox):
            body = Lam(m.binder, m.body)
            for (g1, g2) in _splits(g, m.scrutinee, body):
                for b in self.derivations(g1, m.scrutinee):
                    if not isinstance(b, BoxTy):
                        continue
                    for t in self._under(g2, ((m.binder, b.inner),), m.body):
                        _add(found, t)
            return found

        if isinstance(m, Match):
            return self._match(g, m)

        if isinstance(m, BinOp):
            for (g1, g2) in _splits(g, m.left, m.right):
                for a in self.derivations(g1, m.left):
                    for b in self.derivations(g2, m.right):
                        if m.op == "==":
                            if equal(a, b) and (equal(a, INT) or equal(a, BOOL)):
                                _add(found, BOOL)
                        elif equal(a, INT) and equal(b, INT):
                            _add(found, BOOL if m.op == "<" else INT)
            return found

        if isinstance(m, If):
            branches = PairIntro(m.then, m.orelse)
            for (g1, g2) in _splits(g, m.cond, branches):
                if not any(equal(c, BOOL) for c in self.derivations(g1, m.cond)):
                    continue
                for t in self.derivations(g2, m.then):
                    if any(equal(t, u) for u in self.derivations(g2, m.orelse)):
                        _add(found, t)
            return found

        raise TypeError("not a term: %r" % (m,))

    def _var(self, g: TypingContext, m: VarApp) -> List[Type]:
        t = g.lookup(m.name)
        if t is None or len(m.subst) != len(t.params):
            return []
        if not m.subst:
            return [t.body] if g.remove(m.name).is_un() else []
        if not is_unrestricted(t):
            return []
        parts = [free_vars(s) for s in m.subst]
        for contexts in _distribute(g, parts):
            if all(
                any(
                    equal_ctype(ct, param)
                    for ct in self.ctx_derivations(gi, sigma, param)
                )
                for (gi, sigma, param) in zip(contexts, m.subst, t.params)
            ):
                return [t.body]
        return []

    def _constant_spine(self, g: TypingContext, head, args) -> List[Type]:
        found: List[Type] = []
        if isinstance(head, VarApp):
            head = Const(head.name)
        parts = [free_vars(a) for a in args]
        for contexts in _distribute(g, parts):
            per_arg = [self.derivations(gi, a) for (gi, a) in zip(contexts, args)]
            for arg_types in itertools.product(*per_arg):
                inst = self._resolve(head, arg_types)
                if inst is None:
                    continue
                t = inst
                ok = True
                for actual in arg_types:
                    if not isinstance(t, Fun) or not equal(t.arg, actual):
                        ok = False
                        break
                    t = t.res
                if ok:
                    _add(found, t)
        return found

    def _match(self, g: TypingContext, m: Match) -> List[Type]:
        found: List[Type] = []
        bodies = frozenset()
        for b in m.branches:
            bodies |= free_vars(b.body) - {b.binder}
        for (g1, g2) in g.enumerate_splits():
            if any(n not in free_vars(m.scrutinee) for n in g1.lin_part().names()):
                continue
            if any(n not in bodies for n in g2.lin_part().names()):
                continue
            for s in self.derivations(g1, m.scrutinee):
                choice = unfold_all(s) if is_session(s) else s
                if not isinstance(choice, Branch):
                    continue
                offered = choice.branch_map()
                if set(offered) != {b.label for b in m.branches}:
                    continue
                common = None
                for b in m.branches:
                    types = self._under(
                        g2, ((b.binder, ctx0(offered[b.label])),), b.body
                    )
                    if common is None:
                        common = types
                    else:
                        common = [t for t in common if any(equal(t, u) for u in types)]
                for t in common or ():
                    _add(found, t)
        return found


def _check_scale(g: TypingContext, m: Term) -> None:
    size = len(g.lin_part()) + _binder_count(m)
    if size > MAX_SPLIT_LINEAR:
        raise OracleScaleExceeded(
            "%d linear bindings and binders exceed the oracle cap of %d"
            % (size, MAX_SPLIT_LINEAR)
        )


def derivations(g: TypingContext, m: Term) -> List[Type]:
    _check_scale(g, m)
    return DeclarativeOracle().derivations(g, m)


def declarative_typable(g: TypingContext, m: Term, t: Optional[Type] = None) -> bool:
    """Γ ⊢ M : T by exhaustive search; any T when `t` is None."""
    found = derivations(g, m)
    if t is None:
        return bool(found)
    return any(equal(t, u) for u in found)
