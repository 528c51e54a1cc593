# -*- coding: utf-8 -*-

# stdlib
import itertools
from typing import Dict
from typing import Optional
from typing import Sequence

# local
from .exceptions import RuntimeFault
from .terms import App
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
from .terms import Match
from .terms import MatchBranch
from .terms import PairIntro
from .terms import PairSplit
from .terms import Term
from .terms import VarApp


# ==============================================================================


FRESH_MARK = "%"


class NameSupply(object):
    """
    Fresh names `x%n` from a monotone counter. One supply per evaluation
    keeps renamings reproducible.
    """

    def __init__(self):
        self._counter = itertools.count(1)

    def fresh(self, base: str) -> str:
        stem = base.split(FRESH_MARK)[0] or "v"
        return "%s%s%d" % (stem, FRESH_MARK, next(self._counter))


def rename(m, old: str, new: str):
    """rename the free occurrences of `old`; `new` must be fresh"""
    return _Renaming({old: new}).visit(m)


class _Renaming(object):
    def __init__(self, mapping: Dict[str, str]):
        self.mapping = mapping

    def _without(self, *names):
        if not any(n in self.mapping for n in names):
            return self
        return _Renaming({k: v for (k, v) in self.mapping.items() if k not in names})

    def visit(self, m):
        if not self.mapping:
            return m
        if isinstance(m, VarApp):
            return VarApp(
                self.mapping.get(m.name, m.name),
                tuple(self.visit(s) for s in m.subst),
                span=m.span,
            )
        if isinstance(m, ContextualValue):
            inner = self._without(*m.binders)
            return ContextualValue(
                m.binders, inner.visit(m.body), m.binder_types, m.level, span=m.span
            )
        if isinstance(m, (Const, Lit)):
            return m
        if isinstance(m, Lam):
            return Lam(
                m.binder,
                self._without(m.binder).visit(m.body),
                m.binder_type,
                m.mult,
                span=m.span,
            )
        if isinstance(m, PairSplit):
            return PairSplit(
                m.left,
                m.right,
                self.visit(m.scrutinee),
                self._without(m.left, m.right).visit(m.body),
                span=m.span,
            )
        if isinstance(m, LetBox):
            return LetBox(
                m.binder,
                self.visit(m.scrutinee),
                self._without(m.binder).visit(m.body),
                span=m.span,
            )
        if isinstance(m, Let):
            return Let(
                m.binder,
                self.visit(m.bound),
                self._without(m.binder).visit(m.body),
                span=m.span,
            )
        if isinstance(m, Match):
            return Match(
                self.visit(m.scrutinee),
                tuple(
                    MatchBranch(
                        b.label,
                        b.binder,
                        self._without(b.binder).visit(b.body),
                        span=b.span,
                    )
                    for b in m.branches
                ),
                span=m.span,
            )
        return _rebuild(m, self.visit)


def _rebuild(m, visit):
    """homomorphic cases without binders"""
    if isinstance(m, App):
        return App(visit(m.fn), visit(m.arg), span=m.span)
    if isinstance(m, PairIntro):
        return PairIntro(visit(m.left), visit(m.right), span=m.span)
    if isinstance(m, Box):
        return Box(visit(m.value), span=m.span)
    if isinstance(m, BinOp):
        return BinOp(m.op, visit(m.left), visit(m.right), span=m.span)
    if isinstance(m, If):
        return If(visit(m.cond), visit(m.then), visit(m.orelse), span=m.span)
    raise TypeError("not a term: %r" % (m,))


# ------------------------------------------------------------------------------


class _Substitution(object):
    """[σ/x] on terms and contextual values"""

    def __init__(self, sigma: ContextualValue, x: str, supply: NameSupply):
        self.sigma = sigma
        self.x = x
        self.supply = supply
        self.avoid = free_vars(sigma)

    def _binder(self, name: str, body):
        """freshen a binder that would capture a free variable of σ"""
        if name in self.avoid:
            new = self.supply.fresh(name)
            return (new, rename(body, name, new))
        return (name, body)

    def visit(self, m):
        x = self.x
        if isinstance(m, VarApp):
            rhos = tuple(self.visit(s) for s in m.subst)
            if m.name == x:
                return instantiate_value(self.sigma, rhos, self.supply)
            return VarApp(m.name, rhos, span=m.span)
        if isinstance(m, ContextualValue):
            if x in m.binders:
                return m
            binders = []
            body = m.body
            for z in m.binders:
                (z, body) = self._binder(z, body)
                binders.append(z)
            return ContextualValue(
                tuple(binders), self.visit(body), m.binder_types, m.level, span=m.span
            )
        if isinstance(m, (Const, Lit)):
            return m
        if isinstance(m, Lam):
            if m.binder == x:
                return m
            (y, body) = self._binder(m.binder, m.body)
            return Lam(y, self.visit(body), m.binder_type, m.mult, span=m.span)
        if isinstance(m, PairSplit):
            scrutinee = self.visit(m.scrutinee)
            if x in (m.left, m.right):
                return PairSplit(m.left, m.right, scrutinee, m.body, span=m.span)
            (a, body) = self._binder(m.left, m.body)
            (b, body) = self._binder(m.right, body)
            return PairSplit(a, b, scrutinee, self.visit(body), span=m.span)
        if isinstance(m, LetBox):
            scrutinee = self.visit(m.scrutinee)
            if m.binder == x:
                return LetBox(m.binder, scrutinee, m.body, span=m.span)
            (u, body) = self._binder(m.binder, m.body)
            return LetBox(u, scrutinee, self.visit(body), span=m.span)
        if isinstance(m, Let):
            bound = self.visit(m.bound)
            if m.binder == x:
                return Let(m.binder, bound, m.body, span=m.span)
            (y, body) = self._binder(m.binder, m.body)
            return Let(y, bound, self.visit(body), span=m.span)
        if isinstance(m, Match):
            branches = []
            for b in m.branches:
                if b.binder == x:
                    branches.append(b)
                    continue
                (y, body) = self._binder(b.binder, b.body)
                branches.append(MatchBranch(b.label, y, self.visit(body), span=b.span))
            return Match(self.visit(m.scrutinee), tuple(branches), span=m.span)
        return _rebuild(m, self.visit)


def instantiate_value(
    sigma: ContextualValue,
    rhos: Sequence[ContextualValue],
    supply: Optional[NameSupply] = None,
) -> Term:
    """
    [ρ̄/z̄]N for σ = ⟨z̄⟩.N, a simultaneous substitution.
    """
    if len(rhos) != len(sigma.binders):
        raise RuntimeFault(
            "explicit substitution of length %d for %d binders"
            % (len(rhos), len(sigma.binders))
        )
    supply = supply or NameSupply()
    body = sigma.body
    binders = list(sigma.binders)
    clashing = frozenset()
    for r in rhos:
        clashing |= free_vars(r)
    for (i, z) in enumerate(binders):
        if z in clashing:
            new = supply.fresh(z)
            body = rename(body, z, new)
            binders[i] = new
    for (z, r) in zip(binders, rhos):
        body = _Substitution(r, z, supply).visit(body)
    return body


def substitute(
    sigma: ContextualValue, x: str, m, supply: Optional[NameSupply] = None
):
    """
    [σ/x]m for a term or a contextual value `m`.

    At an applied occurrence x[ρ̄] the substitution first goes into ρ̄ and
    then instantiates σ's binders with the result.
    """
    return _Substitution(sigma, x, supply or NameSupply()).visit(m)


# ------------------------------------------------------------------------------


def canonical(m):
    """rename every binder to a positional name; used for alpha-equivalence"""
    return _Canonical().visit(m, {})


class _Canonical(object):
    def __init__(self):
        self.counter = itertools.count()

    def _name(self):
        return "%%b%d" % next(self.counter)

    def visit(self, m, env):
        if isinstance(m, VarApp):
            return VarApp(
                env.get(m.name, m.name), tuple(self.visit(s, env) for s in m.subst)
            )
        if isinstance(m, ContextualValue):
            names = tuple(self._name() for _z in m.binders)
            inner = dict(env)
            inner.update(zip(m.binders, names))
            return ContextualValue(
                names, self.visit(m.body, inner), m.binder_types, m.level
            )
        if isinstance(m, Const):
            return Const(m.name, m.label, m.annotation)
        if isinstance(m, Lit):
            return Lit(m.value)
        if isinstance(m, Lam):
            y = self._name()
            return Lam(
                y, self.visit(m.body, dict(env, **{m.binder: y})), m.binder_type, m.mult
            )
        if isinstance(m, PairSplit):
            (a, b) = (self._name(), self._name())
            inner = dict(env)
            inner[m.left] = a
            inner[m.right] = b
            return PairSplit(a, b, self.visit(m.scrutinee, env), self.visit(m.body, inner))
        if isinstance(m, LetBox):
            u = self._name()
            return LetBox(
                u, self.visit(m.scrutinee, env), self.visit(m.body, dict(env, **{m.binder: u}))
            )
        if isinstance(m, Let):
            y = self._name()
            return Let(
                y, self.visit(m.bound, env), self.visit(m.body, dict(env, **{m.binder: y}))
            )
        if isinstance(m, Match):
            branches = []
            for b in m.branches:
                y = self._name()
                branches.append(
                    MatchBranch(b.label, y, self.visit(b.body, dict(env, **{b.binder: y})))
                )
            return Match(self.visit(m.scrutinee, env), tuple(branches))
        return _rebuild(m, lambda k: self.visit(k, env))


def alpha_equivalent(m, n) -> bool:
    return canonical(m) == canonical(n)
