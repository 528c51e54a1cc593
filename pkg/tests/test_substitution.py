# -*- coding: utf-8 -*-

# stdlib
import itertools
import random
import unittest

# local
from semp.exceptions import RuntimeFault
from semp.parser import parse_term
from semp.substitution import alpha_equivalent
from semp.substitution import canonical
from semp.substitution import instantiate_value
from semp.substitution import NameSupply
from semp.substitution import rename
from semp.substitution import substitute
from semp.terms import ContextualValue
from semp.terms import free_vars
from semp.terms import Lam
from semp.terms import Let
from semp.terms import LetBox
from semp.terms import lift
from semp.terms import map_children
from semp.terms import Match
from semp.terms import MatchBranch
from semp.terms import PairSplit
from semp.terms import var
from semp.terms import VarApp
from semp.types import BOOL
from semp.types import ContextualType
from semp.types import ctx0
from semp.types import INT
from semp.types import UNIT

# local test suite
from . import BOX_TYPES
from . import LinearTermGenerator
from . import TypedTermGenerator


# ==============================================================================


class Test_NameSupply(unittest.TestCase):
    def test_fresh(self):
        supply = NameSupply()
        a = supply.fresh("x")
        b = supply.fresh("x")
        self.assertNotEqual(a, b)
        self.assertTrue(a.startswith("x"))
        self.assertIn("%", a)


class Test_substitute(unittest.TestCase):
    def test_plain_variable(self):
        m = parse_term("close c")
        self.assertEqual(parse_term("close d"), substitute(lift(var("d")), "c", m))

    def test_explicit_substitution(self):
        sigma = ContextualValue(("z1", "z2"), parse_term("send z1 z2"))
        m = parse_term("x[y, 42]")
        self.assertEqual(parse_term("send y 42"), substitute(sigma, "x", m))

    def test_under_box(self):
        sigma = ContextualValue(("z",), parse_term("close (select Done z)"))
        m = parse_term("box(x. u[send 5 (select More x)])")
        expected = parse_term("box(x. close (select Done (send 5 (select More x))))")
        self.assertEqual(expected, substitute(sigma, "u", m))

    def test_nested_applied_occurrences(self):
        sigma = ContextualValue(("y",), parse_term("send 5 (select More y)"))
        m = parse_term("close (select Done u[u[x]])")
        expected = parse_term(
            "close (select Done (send 5 (select More (send 5 (select More x)))))"
        )
        self.assertEqual(expected, substitute(sigma, "u", m))

    def test_shadowed(self):
        m = parse_term("lambda x. x")
        self.assertEqual(m, substitute(lift(var("y")), "x", m))
        m = parse_term("let (a, x) = p in x")
        result = substitute(lift(var("q")), "x", m)
        self.assertEqual(m, result)

    def test_capture_avoiding(self):
        m = parse_term("lambda y. x y")
        result = substitute(lift(var("y")), "x", m)
        self.assertEqual(frozenset(("y",)), free_vars(result))
        self.assertNotEqual("y", result.binder)
        self.assertTrue(alpha_equivalent(parse_term("lambda z. y z"), result))

    def test_binder_of_value_clashes(self):
        sigma = ContextualValue(("y",), parse_term("send y c"))
        m = parse_term("u[y]")
        self.assertEqual(parse_term("send y c"), substitute(sigma, "u", m))

    def test_wrong_length(self):
        sigma = ContextualValue(("a", "b"), parse_term("a"))
        self.assertRaises(RuntimeFault, instantiate_value, sigma, (lift(var("c")),))


class Test_alpha(unittest.TestCase):
    def test_rename(self):
        m = parse_term("lambda x. x y")
        self.assertEqual(parse_term("lambda x. x z"), rename(m, "y", "z"))

    def test_alpha_equivalent(self):
        self.assertTrue(
            alpha_equivalent(
                parse_term("let (a, b) = p in box(x. a[x])"),
                parse_term("let (c, d) = p in box(y. c[y])"),
            )
        )
        self.assertFalse(
            alpha_equivalent(parse_term("lambda x. x"), parse_term("lambda x. y"))
        )

    def test_canonical_is_idempotent(self):
        m = parse_term("let box u = b in lambda x. u[x]")
        self.assertEqual(canonical(m), canonical(canonical(m)))


class _RenamingApart(object):
    """
    [σ/x] done the slow way: every binder of the term, and of every copy of
    σ, is first renamed to a new name, after which nothing can be captured.
    """

    def __init__(self):
        self.counter = itertools.count()

    def _new(self):
        return "n_%d" % next(self.counter)

    def apart(self, m, env=None):
        env = env or {}
        if isinstance(m, VarApp):
            return VarApp(
                env.get(m.name, m.name), tuple(self.apart(s, env) for s in m.subst)
            )
        if isinstance(m, ContextualValue):
            names = tuple(self._new() for _z in m.binders)
            inner = dict(env, **dict(zip(m.binders, names)))
            return ContextualValue(
                names, self.apart(m.body, inner), m.binder_types, m.level
            )
        if isinstance(m, Lam):
            y = self._new()
            body = self.apart(m.body, dict(env, **{m.binder: y}))
            return Lam(y, body, m.binder_type, m.mult)
        if isinstance(m, Let):
            y = self._new()
            body = self.apart(m.body, dict(env, **{m.binder: y}))
            return Let(y, self.apart(m.bound, env), body)
        if isinstance(m, LetBox):
            u = self._new()
            body = self.apart(m.body, dict(env, **{m.binder: u}))
            return LetBox(u, self.apart(m.scrutinee, env), body)
        if isinstance(m, PairSplit):
            (a, b) = (self._new(), self._new())
            body = self.apart(m.body, dict(env, **{m.left: a, m.right: b}))
            return PairSplit(a, b, self.apart(m.scrutinee, env), body)
        if isinstance(m, Match):
            branches = []
            for b in m.branches:
                y = self._new()
                body = self.apart(b.body, dict(env, **{b.binder: y}))
                branches.append(MatchBranch(b.label, y, body))
            return Match(self.apart(m.scrutinee, env), tuple(branches))
        return map_children(m, lambda k: self.apart(k, env))

    def _replace(self, m, x, sigma):
        if isinstance(m, VarApp):
            rhos = tuple(self._replace(s, x, sigma) for s in m.subst)
            if m.name != x:
                return VarApp(m.name, rhos)
            copy = self.apart(sigma)
            body = copy.body
            for (z, rho) in zip(copy.binders, rhos):
                body = self._replace(body, z, rho)
            return body
        return map_children(m, lambda k: self._replace(k, x, sigma))

    def substitute(self, sigma, x, m):
        return self._replace(self.apart(m), x, sigma)


class Test_reference(unittest.TestCase):
    TARGETS = (
        ctx0(INT),
        ctx0(BOOL),
        ContextualType((), 1, INT),
        ContextualType((ctx0(INT),), 1, INT),
        ContextualType((ctx0(INT), ctx0(BOOL)), 1, INT),
        ContextualType((ContextualType((ctx0(INT),), 1, INT),), 2, INT),
    )
    RESULTS = (INT, BOOL, UNIT) + BOX_TYPES

    def test_agrees_with_renaming_apart(self):
        rng = random.Random(9)
        # free variables of σ named like the generated binders, so that
        # capture has to be avoided
        outside = {"x%d" % i: ctx0(INT) for i in range(8)}
        for _i in range(500):
            ct = rng.choice(self.TARGETS)
            generator = LinearTermGenerator(rng)
            m = generator.term(rng.choice(self.RESULTS), rng.randint(1, 3), {"t": ct})
            sigma = TypedTermGenerator(rng)._ctxval(ct, rng.randint(0, 2), outside)
            expected = _RenamingApart().substitute(sigma, "t", m)
            self.assertTrue(
                alpha_equivalent(expected, substitute(sigma, "t", m)), (m, sigma)
            )
