# -*- coding: utf-8 -*-

# stdlib
import collections
import random
import unittest

# local
from semp.context import EMPTY
from semp.context import TypingContext
from semp.exceptions import OracleScaleExceeded
from semp.exceptions import TypeCheckFailure
from semp.oracle import declarative_typable
from semp.oracle import derivations
from semp.parser import parse_term
from semp.terms import Box
from semp.terms import count_nodes
from semp.terms import LetBox
from semp.terms import Match
from semp.terms import VarApp
from semp.typechecker import Checker
from semp.types import CLOSE
from semp.types import ctx0
from semp.types import equal
from semp.types import INT
from semp.types import Pair
from semp.types import UNIT
from semp.types import WAIT

# local test suite
from . import BOX_TYPES
from . import ENDPOINT_TYPES
from . import LinearTermGenerator
from . import TermGenerator


# ==============================================================================


POOL = (("c", ctx0(CLOSE)), ("w", ctx0(WAIT)), ("d", ctx0(CLOSE)), ("e", ctx0(WAIT)))


def _algorithmic(g, m):
    """the type the checker finds for `m` under `g`, or None"""
    try:
        (t, residual, _term) = Checker().synth(g, m)
    except TypeCheckFailure:
        return None
    if not residual.is_un():
        return None
    return t


class Test_derivations(unittest.TestCase):
    def test_closed(self):
        found = derivations(EMPTY, parse_term("1 + 2"))
        self.assertEqual(1, len(found))
        self.assertTrue(equal(INT, found[0]))

    def test_linear_used_once(self):
        g = TypingContext((("c", ctx0(CLOSE)),))
        self.assertTrue(declarative_typable(g, parse_term("close c"), UNIT))
        self.assertFalse(declarative_typable(g, parse_term("unit")))
        self.assertFalse(declarative_typable(g, parse_term("(close c, close c)")))

    def test_split(self):
        g = TypingContext(POOL[:2])
        self.assertTrue(declarative_typable(g, parse_term("(close c, wait w)")))
        self.assertTrue(declarative_typable(g, parse_term("(wait w, close c)")))
        self.assertFalse(declarative_typable(g, parse_term("(close c, close c)")))

    def test_scale(self):
        g = TypingContext(("x%d" % i, ctx0(CLOSE)) for i in range(13))
        self.assertRaises(OracleScaleExceeded, derivations, g, parse_term("unit"))


class Test_agreement(unittest.TestCase):
    """the checker accepts exactly what the exhaustive search derives"""

    def test_random_terms(self):
        rng = random.Random(7)
        compared = 0
        for _i in range(300):
            free = rng.sample(POOL, rng.randint(0, len(POOL)))
            g = TypingContext(free)
            generator = TermGenerator(rng, free=[name for (name, _t) in free])
            m = generator.term(rng.randint(1, 3))
            t = _algorithmic(g, m)
            try:
                if t is None:
                    self.assertFalse(declarative_typable(g, m), m)
                else:
                    self.assertTrue(declarative_typable(g, m, t), m)
            except OracleScaleExceeded:
                continue
            compared += 1
        self.assertTrue(compared > 200)

    def test_typed_terms(self):
        rng = random.Random(11)
        endpoints = tuple(zip(("a", "b", "m", "s"), ENDPOINT_TYPES))
        results = (UNIT, INT, Pair(UNIT, INT)) + BOX_TYPES
        features = {
            "box": lambda k: isinstance(k, Box),
            "let-box": lambda k: isinstance(k, LetBox),
            "substitution": lambda k: isinstance(k, VarApp) and bool(k.subst),
            "match": lambda k: isinstance(k, Match),
        }
        seen = collections.Counter()
        compared = 0
        for _i in range(300):
            linear = rng.sample(endpoints, rng.randint(0, 2))
            generator = LinearTermGenerator(rng, linear)
            t = rng.choice(results)
            names = tuple(name for (name, _t) in linear)
            m = generator.linear_term(t, rng.randint(1, 2), {}, names)
            bindings = [(name, ctx0(e)) for (name, e) in linear]
            spare = rng.random() < 0.2
            if spare:
                # never used, so neither side may accept
                bindings.append(("spare", ctx0(CLOSE)))
            g = TypingContext(bindings)
            found = _algorithmic(g, m)
            if spare:
                self.assertIsNone(found, m)
            else:
                self.assertTrue(found is not None and equal(t, found), m)
            try:
                if found is None:
                    self.assertFalse(declarative_typable(g, m), m)
                else:
                    self.assertTrue(declarative_typable(g, m, found), m)
            except OracleScaleExceeded:
                continue
            compared += 1
            for (feature, predicate) in features.items():
                if count_nodes(m, predicate):
                    seen[feature] += 1
        self.assertGreater(compared, 100)
        for feature in features:
            self.assertTrue(seen[feature] > 0, feature)
