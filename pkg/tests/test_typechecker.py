# -*- coding: utf-8 -*-

# stdlib
import random
import unittest

# local
from semp import check_expression
from semp import check_source
from semp import corpus_names
from semp import expected_code
from semp.context import EMPTY
from semp.context import TypingContext
from semp.diagnostics import LEVEL_VIOLATION
from semp.diagnostics import LINEAR_ESCAPES
from semp.diagnostics import LINEAR_UNUSED
from semp.diagnostics import TYPE_MISMATCH
from semp.diagnostics import UNKNOWN_VARIABLE
from semp.diagnostics import UNRESOLVED_SCHEME
from semp.evaluator import step_term
from semp.evaluator import Stepped
from semp.exceptions import InvalidProgram
from semp.exceptions import TypeCheckFailure
from semp.parser import parse_program
from semp.parser import parse_term
from semp.pretty import pretty
from semp.resolve import AliasFolder
from semp.substitution import NameSupply
from semp.substitution import substitute
from semp.terms import Lam
from semp.terms import LetBox
from semp.terms import lift
from semp.terms import var
from semp.typechecker import Checker
from semp.typechecker import desugar_declaration
from semp.types import BoxTy
from semp.types import CLOSE
from semp.types import ctx0
from semp.types import equal
from semp.types import Fun
from semp.types import INT
from semp.types import Mult
from semp.types import Pair
from semp.types import UNIT

# local test suite
from . import BOX_TYPES
from . import corpus_source
from . import ENDPOINT_TYPES
from . import LinearTermGenerator
from . import load_corpus
from . import PURE_TYPES


# ==============================================================================


def _codes(source):
    try:
        program = check_source(source)
    except InvalidProgram as e:
        return [e.diagnostic.code]
    return [d.code for d in program.diagnostics]


class Test_corpus(unittest.TestCase):
    def test_positive(self):
        for name in corpus_names():
            program = load_corpus(name)
            self.assertTrue(program.ok, (name, program.diagnostics))
            self.assertIsNotNone(program.main)

    def test_negative(self):
        for name in corpus_names(negative=True):
            source = corpus_source(name)
            code = expected_code(source)
            self.assertIsNotNone(code, name)
            self.assertIn(code, _codes(source), name)

    def test_send_fives_types(self):
        program = load_corpus("send_fives")
        folder = AliasFolder(program.program.type_decls)
        lines = [
            "%s : %s" % (d.name, pretty(folder.fold(d.type)))
            for d in program.declarations
        ]
        self.assertIn("sendFives : Int -> [Stream |-1 Unit]", lines)
        self.assertIn("send4Fives : Stream -> Unit", lines)
        self.assertIn("readInts : Dual Stream -> Unit", lines)
        self.assertIn("main : Unit", lines)

    def test_environment(self):
        program = load_corpus("send_fives")
        g = program.environment()
        self.assertTrue(g.is_un())
        self.assertIn("sendFives", g)

    def test_diagnostics_name_the_declaration(self):
        source = corpus_source("negative/discard_linear")
        program = check_source(source)
        self.assertEqual(["drop"], [d.declaration for d in program.diagnostics])
        span = program.diagnostics[0].span
        self.assertTrue(span.line > 1)


class Test_check_expression(unittest.TestCase):
    def _codes(self, term_source):
        return [d.code for d in check_expression(term_source).diagnostics]

    def test_ok(self):
        checked = check_expression("(lambda1(x:Unit).x) unit")
        self.assertTrue(checked.ok)
        self.assertTrue(equal(UNIT, checked.main_type))

    def test_linear_unused(self):
        self.assertEqual([LINEAR_UNUSED], self._codes("lambda1(x:Close). unit"))

    def test_omega_lambda_over_linear_binder(self):
        checked = check_expression("lambda(x:Close). close x")
        self.assertTrue(checked.ok)
        self.assertTrue(equal(Fun(CLOSE, Mult.UN, UNIT), checked.main_type))

    def test_type_mismatch(self):
        self.assertEqual([TYPE_MISMATCH], self._codes("(lambda(x:Int). x) true"))

    def test_unknown_variable(self):
        self.assertEqual([UNKNOWN_VARIABLE], self._codes("y + 1"))

    def test_level_violation(self):
        self.assertEqual(
            [LEVEL_VIOLATION], self._codes("lambda(x:Int). box((y:Int)^1. x + y)")
        )

    def test_unannotated_binder(self):
        self.assertEqual([UNRESOLVED_SCHEME], self._codes("box(y. y)"))

    def test_box_without_binders(self):
        checked = check_expression("box(1)")
        self.assertTrue(checked.ok)
        self.assertIsInstance(checked.main_type, BoxTy)
        self.assertEqual(1, checked.main_type.inner.level)

    def test_declarations_in_scope(self):
        program = parse_program(corpus_source("send_fives"))
        checked = check_expression("sendFives 2", program)
        self.assertTrue(checked.ok)
        self.assertIsInstance(checked.main_type, BoxTy)


class Test_Checker(unittest.TestCase):
    def test_consumes_linear(self):
        g = TypingContext((("c", ctx0(CLOSE)), ("n", ctx0(INT))))
        (t, residual, _term) = Checker().synth(g, parse_term("close c"))
        self.assertTrue(equal(UNIT, t))
        self.assertEqual(["n"], residual.names())

    def test_used_twice(self):
        g = TypingContext((("c", ctx0(CLOSE)),))
        with self.assertRaises(TypeCheckFailure) as cm:
            Checker().synth(g, parse_term("(close c, close c)"))
        self.assertEqual(LINEAR_ESCAPES, cm.exception.diagnostic.code)

    def test_omega_capture(self):
        g = TypingContext((("c", ctx0(CLOSE)),))
        with self.assertRaises(TypeCheckFailure) as cm:
            Checker().synth(g, parse_term("lambda(u:Unit). close c"))
        self.assertEqual(LINEAR_ESCAPES, cm.exception.diagnostic.code)

    def test_elaborates_annotations(self):
        (_t, _residual, term) = Checker().synth(EMPTY, parse_term("lambda(x:Int). x"))
        self.assertIsInstance(term, Lam)
        self.assertTrue(equal(INT, term.binder_type))


RESULTS = (UNIT, INT, Pair(UNIT, INT)) + BOX_TYPES
ENDPOINTS = tuple(zip(("a", "b", "m", "s"), ENDPOINT_TYPES))


def _synth(g, m):
    """(type, residual) with every binding of `g` accounted for"""
    (t, residual, _term) = Checker().synth(g, m)
    return (t, residual)


class Test_metatheory(unittest.TestCase):
    def _linear_terms(self, seed, count):
        rng = random.Random(seed)
        for _i in range(count):
            linear = rng.sample(ENDPOINTS, rng.randint(0, 2))
            generator = LinearTermGenerator(rng, linear)
            t = rng.choice(RESULTS)
            names = tuple(name for (name, _e) in linear)
            m = generator.linear_term(t, rng.randint(1, 2), {}, names)
            g = TypingContext((name, ctx0(e)) for (name, e) in linear)
            yield (g, m, t)

    def test_monotonicity(self):
        for (g, m, t) in self._linear_terms(21, 100):
            (found, residual) = _synth(g, m)
            self.assertTrue(equal(t, found))
            self.assertEqual(g.un_part(), residual.un_part())
            self.assertLessEqual(
                set(residual.lin_part().names()), set(g.lin_part().names())
            )

    def test_weakening(self):
        for (g, m, _t) in self._linear_terms(22, 100):
            (found, residual) = _synth(g, m)
            for (name, ct) in (("spare", ctx0(CLOSE)), ("z", ctx0(INT))):
                (wide, wide_residual) = _synth(g.extend(name, ct), m)
                self.assertTrue(equal(found, wide))
                self.assertEqual(residual.extend(name, ct), wide_residual)

    def test_strengthening(self):
        for (g, m, _t) in self._linear_terms(23, 100):
            wide = g.extend("spare", ctx0(CLOSE))
            (found, residual) = _synth(wide, m)
            self.assertIn("spare", residual)
            (narrow, narrow_residual) = _synth(wide.remove("spare"), m)
            self.assertTrue(equal(found, narrow))
            self.assertEqual(residual.remove("spare"), narrow_residual)

    def test_local_soundness(self):
        # let box u = box σ in N re-checks after one step at the same type
        rng = random.Random(24)
        supply = NameSupply()
        for _i in range(100):
            generator = LinearTermGenerator(rng)
            box_type = rng.choice(BOX_TYPES)
            box = generator._intro(box_type, rng.randint(0, 2), {})
            u = generator.fresh("u")
            t = rng.choice(RESULTS)
            body = generator.term(t, rng.randint(1, 2), {u: box_type.inner})
            (found, _residual, redex) = Checker().synth(EMPTY, LetBox(u, box, body))
            self.assertTrue(equal(t, found))
            outcome = step_term(redex, supply)
            self.assertIsInstance(outcome, Stepped)
            (reduct, residual) = _synth(EMPTY, outcome.term)
            self.assertTrue(equal(t, reduct))
            self.assertTrue(residual.is_un())

    def test_substitution_unrestricted(self):
        rng = random.Random(25)
        for _i in range(100):
            generator = LinearTermGenerator(rng)
            a = rng.choice(PURE_TYPES + BOX_TYPES)
            t = rng.choice(RESULTS)
            x = generator.fresh()
            n = generator.term(t, 2, {x: ctx0(a)})
            m = generator.term(a, 1)
            (found, _residual) = _synth(EMPTY.extend(x, ctx0(a)), n)
            self.assertTrue(equal(t, found))
            (after, residual) = _synth(EMPTY, substitute(lift(m), x, n))
            self.assertTrue(equal(t, after))
            self.assertTrue(residual.is_un())

    def test_substitution_contextual(self):
        rng = random.Random(26)
        for _i in range(100):
            generator = LinearTermGenerator(rng)
            ct = rng.choice(BOX_TYPES).inner
            t = rng.choice(RESULTS)
            u = generator.fresh("u")
            n = generator.term(t, 2, {u: ct})
            sigma = generator._intro(BoxTy(ct), 1, {}).value
            (after, residual) = _synth(EMPTY, substitute(sigma, u, n))
            self.assertTrue(equal(t, after))
            self.assertTrue(residual.is_un())

    def test_substitution_linear(self):
        # N uses an endpoint once; putting another endpoint in its place
        # moves the linear binding to the new name
        for (g, n, t) in self._linear_terms(27, 100):
            renamed = []
            for (name, ct) in g:
                other = "%s_renamed" % name
                n = substitute(lift(var(other)), name, n)
                renamed.append((other, ct))
            (after, residual) = _synth(TypingContext(renamed), n)
            self.assertTrue(equal(t, after))
            self.assertTrue(residual.is_un())


class Test_desugar_declaration(unittest.TestCase):
    def test_recursive_becomes_fix(self):
        program = parse_program(corpus_source("send_fives"))
        d = program.decl("sendFives")
        body = desugar_declaration(d)
        self.assertIn("fix", pretty(body))

    def test_plain(self):
        program = parse_program(corpus_source("send_fives"))
        d = program.decl("send4Fives")
        self.assertNotIn("fix", pretty(desugar_declaration(d)))
