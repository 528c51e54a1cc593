# -*- coding: utf-8 -*-

# stdlib
import itertools
import unittest

# local
from semp.context import EMPTY
from semp.context import MAX_SPLIT_LINEAR
from semp.context import split_is_valid
from semp.context import TypingContext
from semp.diagnostics import LINEAR_UNUSED
from semp.exceptions import OracleScaleExceeded
from semp.exceptions import TypeCheckFailure
from semp.types import CLOSE
from semp.types import ContextualType
from semp.types import ctx0
from semp.types import INT
from semp.types import WAIT


# ==============================================================================


def _pool():
    return [
        ("a", ctx0(INT)),
        ("b", ctx0(CLOSE)),
        ("c", ctx0(WAIT)),
        ("u", ContextualType((ctx0(CLOSE),), 1, CLOSE)),
        ("d", ctx0(CLOSE)),
        ("e", ctx0(WAIT)),
    ]


class Test_TypingContext(unittest.TestCase):
    def _makeOne(self, bindings=None):
        return TypingContext(_pool() if bindings is None else bindings)

    def test_lookup_and_contains(self):
        g = self._makeOne()
        self.assertEqual(ctx0(CLOSE), g.lookup("b"))
        self.assertIsNone(g.lookup("z"))
        self.assertIn("u", g)
        self.assertEqual(6, len(g))

    def test_bound_twice(self):
        self.assertRaises(ValueError, self._makeOne, [("a", ctx0(INT))] * 2)

    def test_equality_ignores_order(self):
        a = self._makeOne()
        b = self._makeOne(list(reversed(_pool())))
        self.assertEqual(a, b)
        self.assertEqual(hash(a), hash(b))
        self.assertNotEqual(a, a.remove("a"))

    def test_un_and_lin_parts(self):
        g = self._makeOne()
        self.assertEqual(["a", "u"], g.un_part().names())
        self.assertEqual(["b", "c", "d", "e"], g.lin_part().names())
        self.assertFalse(g.is_un())
        self.assertTrue(g.un_part().is_un())
        self.assertTrue(EMPTY.is_un())

    def test_divide(self):
        (outer, rest) = self._makeOne().divide(1)
        self.assertEqual(["u"], outer.names())
        self.assertTrue(rest.level_below(1))
        self.assertTrue(outer.level_at_least(1))
        (outer, rest) = self._makeOne().divide(0)
        self.assertEqual(6, len(outer))
        self.assertEqual(0, len(rest))

    def test_difference(self):
        g = self._makeOne()
        self.assertNotIn("a", g.difference("a"))
        self.assertEqual(g, g.difference("z"))
        with self.assertRaises(TypeCheckFailure) as cm:
            g.difference("b")
        self.assertEqual(LINEAR_UNUSED, cm.exception.diagnostic.code)

    def test_merge(self):
        g = self._makeOne()
        left = g.filter(lambda t: t.level == 1)
        right = g.lin_part()
        merged = left.merge(right).merge(left)
        self.assertEqual(["u", "b", "c", "d", "e"], merged.names())
        other = TypingContext((("u", ctx0(INT)),))
        self.assertRaises(ValueError, left.merge, other)


class Test_enumerate_splits(unittest.TestCase):
    def test_counts(self):
        g = TypingContext(_pool())
        splits = g.enumerate_splits()
        self.assertEqual(2 ** 4, len(splits))

    def test_every_split_is_valid(self):
        pool = _pool()
        for size in range(len(pool) + 1):
            for chosen in itertools.combinations(pool, size):
                g = TypingContext(chosen)
                splits = g.enumerate_splits()
                self.assertEqual(2 ** len(g.lin_part()), len(splits))
                for (g1, g2) in splits:
                    self.assertTrue(split_is_valid(g, g1, g2))
                    self.assertTrue(split_is_valid(g, g2, g1))
                    self.assertEqual(g.un_part(), g1.un_part())
                    self.assertEqual(g.un_part(), g2.un_part())
                    self.assertIn((g2, g1), splits)

    def test_split_commutes(self):
        pool = _pool()
        for size in range(len(pool) + 1):
            for chosen in itertools.combinations(pool, size):
                g = TypingContext(chosen)
                for (g1, g2) in g.enumerate_splits():
                    self.assertEqual(g, g1.merge(g2))
                    self.assertEqual(g, g2.merge(g1))
                    self.assertEqual(g1.merge(g2), g2.merge(g1))
                    for n in range(3):
                        (outer, rest) = g.divide(n)
                        self.assertEqual(g, outer.merge(rest))
                        self.assertEqual(g, rest.merge(outer))
                        self.assertFalse(set(outer.names()) & set(rest.names()))

    def test_invalid_splits(self):
        g = TypingContext(_pool())
        # a linear binding on both sides
        self.assertFalse(split_is_valid(g, g, g.un_part().extend("b", ctx0(CLOSE))))
        # a linear binding lost
        self.assertFalse(split_is_valid(g, g.un_part(), g.un_part()))
        # an unrestricted binding missing on one side
        self.assertFalse(split_is_valid(g, g.remove("a"), g.un_part()))

    def test_cap(self):
        g = TypingContext(
            ("x%d" % i, ctx0(CLOSE)) for i in range(MAX_SPLIT_LINEAR + 1)
        )
        self.assertRaises(OracleScaleExceeded, g.enumerate_splits)
