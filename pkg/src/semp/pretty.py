# -*- coding: utf-8 -*-
"""
Surface syntax for types, contextual types, terms and contextual values.

The output re-parses to a structurally equal value, except for runtime names
(endpoints `ch1+`, fresh names `x%3`) which are printed verbatim.
"""

# stdlib
from dataclasses import replace

# local
from .terms import App
from .terms import BinOp
from .terms import Box
from .terms import Const
from .terms import ContextualValue
from .terms import If
from .terms import Lam
from .terms import Let
from .terms import LetBox
from .terms import Lit
from .terms import map_children
from .terms import map_types
from .terms import Match
from .terms import PairIntro
from .terms import PairSplit
from .terms import Term
from .terms import VarApp
from .types import BoolType
from .types import BoxTy
from .types import Branch
from .types import CloseType
from .types import ContextualType
from .types import Dual
from .types import Fun
from .types import In
from .types import IntType
from .types import Mult
from .types import Out
from .types import Pair
from .types import Rec
from .types import SchemeBranch
from .types import SchemeDual
from .types import SchemeVar
from .types import Select
from .types import Type
from .types import TypeName
from .types import UnitType
from .types import Var
from .types import WaitType


# ==============================================================================


# type precedences
_T_TYPE = 0  # arrows
_T_B = 1  # prefixes: ! ? rec Dual
_T_ATOM = 2

# term precedences
_TERM = 0
_CMP = 1
_ARITH = 2
_MUL = 3
_APP = 4
_ATOM = 5

_OP_PREC = {"==": _CMP, "<": _CMP, "+": _ARITH, "-": _ARITH, "*": _MUL}


def pretty(x) -> str:
    if isinstance(x, ContextualType):
        return _ctype(x)
    if isinstance(x, ContextualValue):
        return _ctxval(x)
    if isinstance(x, Type):
        return _type(x, _T_TYPE)
    if isinstance(x, Term):
        return _term(x, _TERM)
    if isinstance(x, Mult):
        return x.value
    return str(x)


def display(m, fold=None):
    """
    A term as the user wrote it: constants bare and, when `fold` is given,
    every type annotation passed through it (see :class:`semp.resolve.AliasFolder`).
    """

    def visit(k):
        k = map_children(k, visit)
        if isinstance(k, Const) and k.annotation is not None:
            return replace(k, annotation=None)
        return k

    if fold is not None:
        m = map_types(m, fold)
    return visit(m)


def _paren(s: str, own: int, wanted: int) -> str:
    return "(%s)" % s if own < wanted else s


def _arrow(mult) -> str:
    if mult is Mult.UN:
        return "->"
    if mult is Mult.LIN:
        return "-1>"
    return "-%s>" % mult.name


def _choices(branches) -> str:
    return ", ".join("%s: %s" % (label, _type(s, _T_TYPE)) for (label, s) in branches)


def _type(t, prec: int) -> str:
    if isinstance(t, UnitType):
        return "Unit"
    if isinstance(t, IntType):
        return "Int"
    if isinstance(t, BoolType):
        return "Bool"
    if isinstance(t, CloseType):
        return "Close"
    if isinstance(t, WaitType):
        return "Wait"
    if isinstance(t, (TypeName, SchemeVar)):
        return t.name
    if isinstance(t, Var):
        return t.ref
    if isinstance(t, SchemeBranch):
        return "%s.%s" % (t.name, t.label)
    if isinstance(t, Select):
        return "oplus{%s}" % _choices(t.branches)
    if isinstance(t, Branch):
        return "&{%s}" % _choices(t.branches)
    if isinstance(t, Pair):
        return "(%s, %s)" % (_type(t.left, _T_TYPE), _type(t.right, _T_TYPE))
    if isinstance(t, BoxTy):
        return "[%s]" % _ctype(t.inner, boxed=True)
    if isinstance(t, Out):
        s = "!%s.%s" % (_type(t.payload, _T_ATOM), _type(t.cont, _T_B))
        return _paren(s, _T_B, prec)
    if isinstance(t, In):
        s = "?%s.%s" % (_type(t.payload, _T_ATOM), _type(t.cont, _T_B))
        return _paren(s, _T_B, prec)
    if isinstance(t, Rec):
        return _paren("rec %s. %s" % (t.ref, _type(t.body, _T_B)), _T_B, prec)
    if isinstance(t, Dual):
        return _paren("Dual %s" % _type(t.inner, _T_ATOM), _T_B, prec)
    if isinstance(t, SchemeDual):
        return _paren("Dual %s" % t.name, _T_B, prec)
    if isinstance(t, Fun):
        s = "%s %s %s" % (
            _type(t.arg, _T_B),
            _arrow(t.mult),
            _type(t.res, _T_TYPE),
        )
        return _paren(s, _T_TYPE, prec)
    raise TypeError("not a type: %r" % (t,))


def _param(p: ContextualType) -> str:
    if p.level == 0 and not p.params:
        return _type(p.body, _T_TYPE)
    return "(%s)" % _ctype(p, boxed=True)


def _ctype(ct: ContextualType, boxed: bool = False) -> str:
    if not boxed and ct.level == 0 and not ct.params:
        return _type(ct.body, _T_TYPE)
    params = ", ".join(_param(p) for p in ct.params)
    turnstile = "|-%d %s" % (ct.level, _type(ct.body, _T_TYPE))
    return "%s %s" % (params, turnstile) if params else turnstile


# ------------------------------------------------------------------------------


def _ctxval(v: ContextualValue) -> str:
    body = _term(v.body, _TERM)
    if v.annotated:
        binders = ", ".join(
            "%s:%s" % (z, _param(t)) for (z, t) in zip(v.binders, v.binder_types)
        )
        return "(%s)^%d. %s" % (binders, v.level, body)
    if v.binders:
        return "(%s). %s" % (", ".join(v.binders), body)
    return body


def _const(c: Const) -> str:
    s = "select %s" % c.label if c.name == "select" else c.name
    if c.annotation is not None:
        s = "%s@%s" % (s, _type(c.annotation, _T_ATOM))
    return s


def _term(m, prec: int) -> str:
    if isinstance(m, Lit):
        if m.value is True:
            return "true"
        if m.value is False:
            return "false"
        return "(-%d)" % -m.value if m.value < 0 else str(m.value)
    if isinstance(m, Const):
        return _const(m)
    if isinstance(m, VarApp):
        if not m.subst:
            return m.name
        return "%s[%s]" % (m.name, ", ".join(_ctxval(s) for s in m.subst))
    if isinstance(m, PairIntro):
        return "(%s, %s)" % (_term(m.left, _TERM), _term(m.right, _TERM))
    if isinstance(m, Box):
        return "box(%s)" % _ctxval(m.value)
    if isinstance(m, Match):
        branches = ", ".join(
            "%s %s -> %s" % (b.label, b.binder, _term(b.body, _TERM))
            for b in m.branches
        )
        return "match %s { %s }" % (_term(m.scrutinee, _TERM), branches)
    if isinstance(m, App):
        s = "%s %s" % (_term(m.fn, _APP), _term(m.arg, _ATOM))
        return _paren(s, _APP, prec)
    if isinstance(m, BinOp):
        own = _OP_PREC[m.op]
        if own == _CMP:
            (left, right) = (_ARITH, _ARITH)
        else:
            (left, right) = (own, own + 1)
        s = "%s %s %s" % (_term(m.left, left), m.op, _term(m.right, right))
        return _paren(s, own, prec)
    if isinstance(m, Lam):
        if m.binder_type is None:
            s = "lambda %s. %s" % (m.binder, _term(m.body, _TERM))
        else:
            s = "%s(%s:%s). %s" % (
                "lambda1" if m.mult is Mult.LIN else "lambda",
                m.binder,
                _type(m.binder_type, _T_TYPE),
                _term(m.body, _TERM),
            )
        return _paren(s, _TERM, prec)
    if isinstance(m, Let):
        s = "let %s = %s in %s" % (
            m.binder,
            _term(m.bound, _TERM),
            _term(m.body, _TERM),
        )
        return _paren(s, _TERM, prec)
    if isinstance(m, PairSplit):
        s = "let (%s, %s) = %s in %s" % (
            m.left,
            m.right,
            _term(m.scrutinee, _TERM),
            _term(m.body, _TERM),
        )
        return _paren(s, _TERM, prec)
    if isinstance(m, LetBox):
        s = "let box %s = %s in %s" % (
            m.binder,
            _term(m.scrutinee, _TERM),
            _term(m.body, _TERM),
        )
        return _paren(s, _TERM, prec)
    if isinstance(m, If):
        s = "if %s then %s else %s" % (
            _term(m.cond, _TERM),
            _term(m.then, _TERM),
            _term(m.orelse, _TERM),
        )
        return _paren(s, _TERM, prec)
    raise TypeError("not a term: %r" % (m,))
