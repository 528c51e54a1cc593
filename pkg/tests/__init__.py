# -*- coding: utf-8 -*-

# stdlib
import itertools

# pypi
from zope.interface import implementer

# local
from semp import check_source
from semp import read_source
from semp.interfaces import IScheduler
from semp.terms import App
from semp.terms import BinOp
from semp.terms import Box
from semp.terms import Const
from semp.terms import ContextualValue
from semp.terms import If
from semp.terms import Lam
from semp.terms import Let
from semp.terms import LetBox
from semp.terms import Lit
from semp.terms import Match
from semp.terms import MatchBranch
from semp.terms import PairIntro
from semp.terms import PairSplit
from semp.terms import UNIT_TERM
from semp.terms import var
from semp.terms import VarApp
from semp.types import BOOL
from semp.types import Branch
from semp.types import BoxTy
from semp.types import CLOSE
from semp.types import ContextualType
from semp.types import ctx0
from semp.types import equal
from semp.types import Fun
from semp.types import In
from semp.types import INT
from semp.types import Mult
from semp.types import Out
from semp.types import Pair
from semp.types import Rec
from semp.types import Select
from semp.types import UNIT
from semp.types import Var
from semp.types import WAIT


# ==============================================================================


STREAM_DECL = "type Stream = oplus{More: !Int.Stream, Done: Close}\n"


def load_corpus(name):
    """the checked corpus program `name`"""
    (_filename, source) = read_source(name)
    return check_source(source)


def corpus_source(name):
    return read_source(name)[1]


@implementer(IScheduler)
class DummyScheduler(object):
    """highest id first, and remembers what it was asked"""

    def __init__(self):
        self.calls = []

    def order(self, thread_ids):
        self.calls.append(list(thread_ids))
        return sorted(thread_ids, reverse=True)


class DummyStream(object):
    def __init__(self):
        self.written = []

    def write(self, text):
        self.written.append(text)

    def getvalue(self):
        return "".join(self.written)

    def lines(self):
        return self.getvalue().splitlines()


# ------------------------------------------------------------------------------
# random types


PAYLOADS = (INT, BOOL, UNIT)
LABELS = ("A", "B", "C")


def random_session_type(rng, depth=3, refs=(), guarded=False):
    """
    A closed session type whose recursion variables only occur in
    continuation position.
    """
    leaves = [CLOSE, WAIT]
    if refs and not guarded:
        leaves.extend(Var(r) for r in refs)
    if depth <= 0:
        return rng.choice(leaves)
    kind = rng.randrange(6 if not guarded else 4)
    if kind == 0:
        return Out(rng.choice(PAYLOADS), random_session_type(rng, depth - 1, refs))
    if kind == 1:
        return In(rng.choice(PAYLOADS), random_session_type(rng, depth - 1, refs))
    if kind in (2, 3):
        labels = rng.sample(LABELS, rng.randint(1, len(LABELS)))
        branches = tuple(
            (label, random_session_type(rng, depth - 1, refs)) for label in labels
        )
        return Select(branches) if kind == 2 else Branch(branches)
    if kind == 4:
        ref = "r%d" % len(refs)
        return Rec(ref, random_session_type(rng, depth - 1, refs + (ref,), True))
    return rng.choice(leaves)


def random_ctype(rng, level):
    """a well formed contextual type of exactly `level`"""
    body = rng.choice((INT, UNIT, CLOSE, Out(INT, CLOSE)))
    if level == 0:
        return ctx0(body)
    params = tuple(
        random_ctype(rng, rng.randrange(level)) for _i in range(rng.randint(0, 2))
    )
    return ContextualType(params, level, body)


# ------------------------------------------------------------------------------
# random terms


class TermGenerator(object):
    """
    Small terms over a context of linear variables, most of them ill typed.
    Binders are always fresh, so nothing is shadowed.
    """

    BINDER_TYPES = (INT, UNIT, CLOSE, WAIT)

    def __init__(self, rng, free=()):
        self.rng = rng
        self.free = tuple(free)
        self.counter = itertools.count()

    def fresh(self):
        return "v%d" % next(self.counter)

    def term(self, depth, scope=()):
        rng = self.rng
        names = self.free + tuple(scope)
        if depth <= 0:
            kind = rng.randrange(4)
            if kind == 0 or not names:
                return Lit(rng.randint(0, 9))
            if kind == 1:
                return UNIT_TERM
            return var(rng.choice(names))
        kind = rng.randrange(9)
        if kind == 0 and names:
            return App(Const(rng.choice(("close", "wait"))), var(rng.choice(names)))
        if kind == 1:
            return PairIntro(self.term(depth - 1, scope), self.term(depth - 1, scope))
        if kind == 2:
            (a, b) = (self.fresh(), self.fresh())
            return PairSplit(
                a,
                b,
                self.term(depth - 1, scope),
                self.term(depth - 1, tuple(scope) + (a, b)),
            )
        if kind == 3:
            x = self.fresh()
            return Let(
                x, self.term(depth - 1, scope), self.term(depth - 1, tuple(scope) + (x,))
            )
        if kind == 4:
            x = self.fresh()
            return Lam(
                x,
                self.term(depth - 1, tuple(scope) + (x,)),
                rng.choice(self.BINDER_TYPES),
                rng.choice((Mult.LIN, Mult.UN)),
            )
        if kind == 5:
            return App(self.term(depth - 1, scope), self.term(depth - 1, scope))
        if kind == 6:
            return If(
                Lit(rng.choice((True, False))),
                self.term(depth - 1, scope),
                self.term(depth - 1, scope),
            )
        if kind == 7:
            return BinOp("+", self.term(depth - 1, scope), self.term(depth - 1, scope))
        return self.term(0, scope)


PURE_TYPES = (
    INT,
    BOOL,
    UNIT,
    Fun(INT, Mult.UN, INT),
    BoxTy(ContextualType((), 1, INT)),
    BoxTy(ContextualType((ctx0(INT),), 1, INT)),
)


class TypedTermGenerator(object):
    """
    Closed, well typed, annotated terms without channels; `env` maps names
    to contextual types.
    """

    box_types = PURE_TYPES[-2:]
    box_weight = 1

    def __init__(self, rng):
        self.rng = rng
        self.counter = itertools.count()

    def fresh(self, base="x"):
        return "%s%d" % (base, next(self.counter))

    def _uses(self, t, env):
        """the variables of `env` whose use has type `t`"""
        return [(name, ct) for (name, ct) in env.items() if equal(ct.body, t)]

    def _ctxval(self, p, depth, env):
        """a contextual value for parameter `p`"""
        if not p.params and p.level == 0:
            return ContextualValue((), self.term(p.body, depth, env))
        inner = {n: c for (n, c) in env.items() if c.level >= p.level}
        binders = tuple(self.fresh("k") for _q in p.params)
        inner.update(zip(binders, p.params))
        body = self.term(p.body, depth, inner)
        return ContextualValue(binders, body, p.params, p.level)

    def _use(self, name, ct, depth, env):
        if not ct.params:
            return var(name)
        d = max(depth - 1, 0)
        return VarApp(name, tuple(self._ctxval(p, d, env) for p in ct.params))

    def term(self, t, depth, env=None):
        env = env or {}
        rng = self.rng
        uses = self._uses(t, env)
        if uses and rng.random() < 0.3:
            (name, ct) = rng.choice(uses)
            return self._use(name, ct, depth, env)
        if depth > 0 and rng.random() < 0.5:
            return self._elim(t, depth, env)
        return self._intro(t, depth, env)

    def _intro(self, t, depth, env):
        rng = self.rng
        d = max(depth - 1, 0)
        if equal(t, INT):
            if depth > 0 and rng.random() < 0.5:
                return BinOp(
                    rng.choice("+-*"), self.term(INT, d, env), self.term(INT, d, env)
                )
            return Lit(rng.randint(-5, 9))
        if equal(t, BOOL):
            if depth > 0 and rng.random() < 0.5:
                return BinOp(
                    rng.choice(("==", "<")),
                    self.term(INT, d, env),
                    self.term(INT, d, env),
                )
            return Lit(rng.choice((True, False)))
        if equal(t, UNIT):
            return UNIT_TERM
        if isinstance(t, Fun):
            x = self.fresh()
            inner = dict(env)
            inner[x] = ctx0(t.arg)
            return Lam(x, self.term(t.res, d, inner), t.arg, t.mult)
        if isinstance(t, Pair):
            return PairIntro(self.term(t.left, d, env), self.term(t.right, d, env))
        if isinstance(t, BoxTy):
            ct = t.inner
            inner = {n: c for (n, c) in env.items() if c.level >= ct.level}
            binders = tuple(self.fresh("k") for _p in ct.params)
            for (k, p) in zip(binders, ct.params):
                inner[k] = p
            body = self.term(ct.body, d, inner)
            return Box(ContextualValue(binders, body, ct.params, ct.level))
        raise TypeError(t)

    def _let_box(self, depth, env):
        """(u, scrutinee, env with u bound)"""
        box = self.rng.choice(self.box_types)
        u = self.fresh("u")
        inner = dict(env)
        inner[u] = box.inner
        return (u, self.term(box, depth, env), inner)

    def _elim(self, t, depth, env):
        rng = self.rng
        d = depth - 1
        kind = rng.randrange(4 + self.box_weight)
        a = rng.choice(PURE_TYPES)
        if kind == 0:
            x = self.fresh()
            inner = dict(env)
            inner[x] = ctx0(a)
            return Let(x, self.term(a, d, env), self.term(t, d, inner))
        if kind == 1:
            return App(self.term(Fun(a, Mult.UN, t), d, env), self.term(a, d, env))
        if kind == 2:
            return If(self.term(BOOL, d, env), self.term(t, d, env), self.term(t, d, env))
        if kind == 3:
            (x, y) = (self.fresh(), self.fresh())
            inner = dict(env)
            inner[x] = ctx0(INT)
            inner[y] = ctx0(BOOL)
            return PairSplit(x, y, self.term(Pair(INT, BOOL), d, env), self.term(t, d, inner))
        (u, scrutinee, inner) = self._let_box(d, env)
        return LetBox(u, scrutinee, self.term(t, d, inner))


BOX_TYPES = PURE_TYPES[-2:] + (
    BoxTy(ContextualType((ctx0(INT), ctx0(BOOL)), 1, INT)),
    BoxTy(ContextualType((ContextualType((ctx0(INT),), 1, INT),), 2, INT)),
    BoxTy(ContextualType((ContextualType((), 1, BOOL),), 2, BOOL)),
)

ENDPOINT_TYPES = (
    CLOSE,
    WAIT,
    Branch((("A", CLOSE), ("B", WAIT))),
    Select((("A", CLOSE), ("B", CLOSE))),
)


class LinearTermGenerator(TypedTermGenerator):
    """
    Well typed terms that consume each endpoint of `linear` exactly once,
    leaning on boxes, let-box and substitutions for the pure parts.
    """

    box_types = BOX_TYPES
    box_weight = 4

    def __init__(self, rng, linear=()):
        TypedTermGenerator.__init__(self, rng)
        self.linear = dict(linear)

    def consume(self, name):
        """a term of type Unit that uses endpoint `name` once"""
        t = self.linear[name]
        if equal(t, CLOSE):
            return App(Const("close"), var(name))
        if equal(t, WAIT):
            return App(Const("wait"), var(name))
        if isinstance(t, Branch):
            branches = []
            for (label, cont) in t.branches:
                x = self.fresh("c")
                self.linear[x] = cont
                branches.append(MatchBranch(label, x, self.consume(x)))
            return Match(var(name), tuple(branches))
        (label, cont) = self.rng.choice(t.branches)
        x = self.fresh("c")
        self.linear[x] = cont
        selected = App(Const("select", label), var(name))
        return Let(x, selected, self.consume(x))

    def linear_term(self, t, depth, env, names):
        """a term of type `t` using every endpoint in `names` once"""
        if not names:
            return self.term(t, depth, env)
        rng = self.rng
        d = max(depth - 1, 0)
        kind = rng.randrange(6)
        if kind == 0 and isinstance(t, Pair):
            shuffled = rng.sample(names, len(names))
            k = rng.randint(0, len(shuffled))
            return PairIntro(
                self.linear_term(t.left, d, env, tuple(shuffled[:k])),
                self.linear_term(t.right, d, env, tuple(shuffled[k:])),
            )
        if kind == 1:
            return If(
                self.term(BOOL, d, env),
                self.linear_term(t, d, env, names),
                self.linear_term(t, d, env, names),
            )
        if kind == 2:
            (u, scrutinee, inner) = self._let_box(d, env)
            return LetBox(u, scrutinee, self.linear_term(t, d, inner, names))
        (name, rest) = (names[0], tuple(names[1:]))
        endpoint = self.linear[name]
        if kind == 3 and isinstance(endpoint, Branch):
            branches = []
            for (label, cont) in endpoint.branches:
                x = self.fresh("c")
                self.linear[x] = cont
                body = self.linear_term(t, d, env, (x,) + rest)
                branches.append(MatchBranch(label, x, body))
            return Match(var(name), tuple(branches))
        x = self.fresh()
        if kind == 4:
            fn = Lam(x, self.linear_term(t, d, env, rest), UNIT, Mult.LIN)
            return App(fn, self.consume(name))
        return Let(x, self.consume(name), self.linear_term(t, d, env, rest))
