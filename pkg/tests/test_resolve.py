# -*- coding: utf-8 -*-

# stdlib
import unittest

# local
from semp import load_program
from semp.diagnostics import DUALITY_MISMATCH
from semp.diagnostics import ILL_FORMED_TYPE
from semp.diagnostics import UNKNOWN_TYPE
from semp.exceptions import InvalidProgram_TypeResolution
from semp.parser import parse_program
from semp.parser import parse_type
from semp.pretty import pretty
from semp.resolve import AliasFolder
from semp.resolve import resolve_types
from semp.resolve import TypeResolver
from semp.types import Branch
from semp.types import CLOSE
from semp.types import dualize
from semp.types import equal
from semp.types import In
from semp.types import INT
from semp.types import Out
from semp.types import Rec
from semp.types import Select
from semp.types import TypeName
from semp.types import Var
from semp.types import WAIT

# local test suite
from . import corpus_source
from . import STREAM_DECL


# ==============================================================================


STREAM = Rec("s", Select((("More", Out(INT, Var("s"))), ("Done", CLOSE))))


class Test_TypeResolver(unittest.TestCase):
    def _makeOne(self, source=STREAM_DECL + "main = unit"):
        return TypeResolver(parse_program(source).type_decls)

    def test_recursive_alias(self):
        t = self._makeOne().resolve(TypeName("Stream"))
        self.assertIsInstance(t, Rec)
        self.assertTrue(equal(STREAM, t))

    def test_dual(self):
        t = self._makeOne().resolve(parse_type("Dual Stream"))
        self.assertTrue(equal(dualize(STREAM), t))
        self.assertIsInstance(t.body, Branch)

    def test_nested(self):
        t = self._makeOne().resolve(parse_type("?Int.Dual (!Int.Close)"))
        self.assertEqual(In(INT, In(INT, WAIT)), t)

    def test_unknown_type(self):
        with self.assertRaises(InvalidProgram_TypeResolution) as cm:
            self._makeOne().resolve(TypeName("Nope"))
        self.assertEqual(UNKNOWN_TYPE, cm.exception.diagnostic.code)

    def test_dual_of_non_session(self):
        with self.assertRaises(InvalidProgram_TypeResolution) as cm:
            self._makeOne().resolve(parse_type("Dual Int"))
        self.assertEqual(DUALITY_MISMATCH, cm.exception.diagnostic.code)

    def test_recursive_non_session(self):
        resolver = self._makeOne("type L = (Int, L) -> Int\nmain = unit")
        with self.assertRaises(InvalidProgram_TypeResolution) as cm:
            resolver.resolve(TypeName("L"))
        self.assertEqual(ILL_FORMED_TYPE, cm.exception.diagnostic.code)

    def test_not_contractive(self):
        resolver = self._makeOne("type A = B\ntype B = A\nmain = unit")
        self.assertRaises(InvalidProgram_TypeResolution, resolver.resolve, TypeName("A"))

    def test_resolve_is_idempotent(self):
        p = resolve_types(parse_program(corpus_source("main_send_fives")))
        self.assertEqual(p, resolve_types(p))

    def test_signatures_are_resolved(self):
        p = load_program(corpus_source("send_fives"))
        t = p.decl("readInts").signature
        self.assertTrue(equal(dualize(STREAM), t.arg))


class Test_AliasFolder(unittest.TestCase):
    def _makeOne(self, source=STREAM_DECL + "main = unit"):
        return AliasFolder(resolve_types(parse_program(source)).type_decls)

    def test_fold_alias(self):
        folder = self._makeOne()
        self.assertEqual(TypeName("Stream"), folder.fold(STREAM))
        self.assertEqual(TypeName("Stream"), folder.fold(Out(INT, STREAM).cont))

    def test_fold_dual(self):
        folder = self._makeOne()
        self.assertEqual("Dual Stream", pretty(folder.fold(dualize(STREAM))))

    def test_fold_inside(self):
        folder = self._makeOne()
        t = parse_type("[Stream |- Unit]")
        resolved = TypeResolver(parse_program(STREAM_DECL + "main = unit").type_decls).resolve(t)
        self.assertEqual("[Stream |-1 Unit]", pretty(folder.fold(resolved)))

    def test_outer_is_kept(self):
        folder = self._makeOne()
        t = folder.fold(STREAM, outer=False)
        self.assertIsInstance(t, Rec)

    def test_unrelated(self):
        folder = self._makeOne()
        self.assertEqual(Out(INT, CLOSE), folder.fold(Out(INT, CLOSE)))
