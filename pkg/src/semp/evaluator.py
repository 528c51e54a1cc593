# -*- coding: utf-8 -*-
"""
Single-thread call-by-value reduction.

Pure redexes are contracted here; the channel operations surface as
:class:`Blocked` outcomes carrying a request and the evaluation context, and
the runtime decides how to resume them.
"""
# stdlib
from dataclasses import dataclass
import logging
from typing import Callable
from typing import Optional
from typing import Tuple
from typing import Union

# local
from .exceptions import RuntimeFault_Stuck
from .substitution import NameSupply
from .substitution import substitute
from .terms import App
from .terms import BinOp
from .terms import Box
from .terms import Const
from .terms import If
from .terms import Lam
from .terms import Let
from .terms import LetBox
from .terms import lift
from .terms import Lit
from .terms import Match
from .terms import MatchBranch
from .terms import PairIntro
from .terms import PairSplit
from .terms import Term
from .terms import UNIT_TERM
from .terms import VarApp
from .types import Fun
from .types import Mult


log = logging.getLogger(__name__)


# ==============================================================================


# rule names, as they appear in traces
R_BETA = "R-Beta"
R_SPLIT = "R-Split"
R_LETBOX = "R-LetBox"
R_FIX = "R-Fix"
R_PRIM = "R-Prim"
R_IF = "R-If"

DEFAULT_FUEL = 1000000


def is_endpoint(m) -> bool:
    """a free level-0 variable in a closed program can only be an endpoint"""
    return isinstance(m, VarApp) and not m.subst


def is_value(m) -> bool:
    if isinstance(m, (Lit, Lam, Box, Const)):
        return True
    if is_endpoint(m):
        return True
    if isinstance(m, PairIntro):
        return is_value(m.left) and is_value(m.right)
    if isinstance(m, App):
        # send v
        return (
            isinstance(m.fn, Const) and m.fn.name == "send" and is_value(m.arg)
        )
    return False


# ------------------------------------------------------------------------------
# evaluation contexts


@dataclass(frozen=True)
class EvalFrame(object):
    def plug(self, m: Term) -> Term:
        raise NotImplementedError()


@dataclass(frozen=True)
class FnFrame(EvalFrame):
    """□ N"""

    arg: Term
    span: object = None

    def plug(self, m):
        return App(m, self.arg, span=self.span)


@dataclass(frozen=True)
class ArgFrame(EvalFrame):
    """v □"""

    fn: Term
    span: object = None

    def plug(self, m):
        return App(self.fn, m, span=self.span)


@dataclass(frozen=True)
class PairLeftFrame(EvalFrame):
    right: Term
    span: object = None

    def plug(self, m):
        return PairIntro(m, self.right, span=self.span)


@dataclass(frozen=True)
class PairRightFrame(EvalFrame):
    left: Term
    span: object = None

    def plug(self, m):
        return PairIntro(self.left, m, span=self.span)


@dataclass(frozen=True)
class SplitFrame(EvalFrame):
    left: str
    right: str
    body: Term
    span: object = None

    def plug(self, m):
        return PairSplit(self.left, self.right, m, self.body, span=self.span)


@dataclass(frozen=True)
class LetBoxFrame(EvalFrame):
    binder: str
    body: Term
    span: object = None

    def plug(self, m):
        return LetBox(self.binder, m, self.body, span=self.span)


@dataclass(frozen=True)
class LetFrame(EvalFrame):
    binder: str
    body: Term
    span: object = None

    def plug(self, m):
        return Let(self.binder, m, self.body, span=self.span)


@dataclass(frozen=True)
class MatchFrame(EvalFrame):
    branches: Tuple[MatchBranch, ...]
    span: object = None

    def plug(self, m):
        return Match(m, self.branches, span=self.span)


@dataclass(frozen=True)
class BinOpLeftFrame(EvalFrame):
    op: str
    right: Term
    span: object = None

    def plug(self, m):
        return BinOp(self.op, m, self.right, span=self.span)


@dataclass(frozen=True)
class BinOpRightFrame(EvalFrame):
    op: str
    left: Term
    span: object = None

    def plug(self, m):
        return BinOp(self.op, self.left, m, span=self.span)


@dataclass(frozen=True)
class IfFrame(EvalFrame):
    then: Term
    orelse: Term
    span: object = None

    def plug(self, m):
        return If(m, self.then, self.orelse, span=self.span)


EvalContext = Tuple[EvalFrame, ...]


def plug(context: EvalContext, m: Term) -> Term:
    for frame in reversed(context):
        m = frame.plug(m)
    return m


# ------------------------------------------------------------------------------
# channel requests


@dataclass(frozen=True)
class Request(object):
    @property
    def subject(self) -> Optional[str]:
        endpoint = getattr(self, "endpoint", None)
        return endpoint


@dataclass(frozen=True)
class CloseReq(Request):
    endpoint: str


@dataclass(frozen=True)
class WaitReq(Request):
    endpoint: str


@dataclass(frozen=True)
class SendReq(Request):
    value: Term
    endpoint: str


@dataclass(frozen=True)
class ReceiveReq(Request):
    endpoint: str


@dataclass(frozen=True)
class SelectReq(Request):
    label: str
    endpoint: str


@dataclass(frozen=True)
class MatchReq(Request):
    endpoint: str
    branches: Tuple[MatchBranch, ...]


@dataclass(frozen=True)
class NewReq(Request):
    annotation: object = None


@dataclass(frozen=True)
class ForkReq(Request):
    thunk: Term


COMMUNICATION_REQUESTS = (CloseReq, WaitReq, SendReq, ReceiveReq, SelectReq, MatchReq)


# ------------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True)
class Stepped(object):
    term: Term
    rule: str


@dataclass(frozen=True)
class IsValue(object):
    term: Term


@dataclass(frozen=True)
class Blocked(object):
    request: Request
    context: EvalContext

    def resume(self, m: Term) -> Term:
        return plug(self.context, m)


@dataclass(frozen=True)
class FuelExhausted(object):
    term: Term
    steps: int


StepOutcome = Union[Stepped, IsValue, Blocked]


@dataclass(frozen=True)
class Decomposition(object):
    context: EvalContext
    redex: Term
    kind: Union[str, Request]


# ------------------------------------------------------------------------------


def _const(m, name) -> bool:
    return isinstance(m, Const) and m.name == name


def _redex(m) -> Optional[Union[str, Request]]:
    """the rule or request for `m`, whose evaluation positions hold values"""
    if isinstance(m, App):
        fn = m.fn
        arg = m.arg
        if isinstance(fn, Lam):
            return R_BETA
        if isinstance(fn, Const):
            if fn.name == "fix":
                return R_FIX
            if fn.name == "new":
                return NewReq(fn.annotation)
            if fn.name == "fork":
                return ForkReq(arg)
            if is_endpoint(arg):
                if fn.name == "close":
                    return CloseReq(arg.name)
                if fn.name == "wait":
                    return WaitReq(arg.name)
                if fn.name == "receive":
                    return ReceiveReq(arg.name)
                if fn.name == "select":
                    return SelectReq(fn.label, arg.name)
            return None
        if isinstance(fn, App) and _const(fn.fn, "send") and is_endpoint(arg):
            return SendReq(fn.arg, arg.name)
        return None
    if isinstance(m, PairSplit):
        return R_SPLIT if isinstance(m.scrutinee, PairIntro) else None
    if isinstance(m, LetBox):
        return R_LETBOX if isinstance(m.scrutinee, Box) else None
    if isinstance(m, Let):
        return R_BETA
    if isinstance(m, Match):
        if is_endpoint(m.scrutinee):
            return MatchReq(m.scrutinee.name, m.branches)
        return None
    if isinstance(m, BinOp):
        if isinstance(m.left, Lit) and isinstance(m.right, Lit):
            return R_PRIM
        return None
    if isinstance(m, If):
        return R_IF if isinstance(m.cond, Lit) else None
    return None


def _stuck(m):
    from .pretty import pretty

    return RuntimeFault_Stuck("stuck term: %s" % pretty(m))


def decompose(m: Term) -> Optional[Decomposition]:
    """
    Split `m` into an evaluation context and the redex or request in its hole.
    Returns None for values.
    """
    if is_value(m):
        return None
    frames = []
    while True:
        if isinstance(m, App):
            if not is_value(m.fn):
                frames.append(FnFrame(m.arg, m.span))
                m = m.fn
                continue
            if not is_value(m.arg):
                frames.append(ArgFrame(m.fn, m.span))
                m = m.arg
                continue
        elif isinstance(m, PairIntro):
            if not is_value(m.left):
                frames.append(PairLeftFrame(m.right, m.span))
                m = m.left
                continue
            if not is_value(m.right):
                frames.append(PairRightFrame(m.left, m.span))
                m = m.right
                continue
        elif isinstance(m, PairSplit):
            if not is_value(m.scrutinee):
                frames.append(SplitFrame(m.left, m.right, m.body, m.span))
                m = m.scrutinee
                continue
        elif isinstance(m, LetBox):
            if not is_value(m.scrutinee):
                frames.append(LetBoxFrame(m.binder, m.body, m.span))
                m = m.scrutinee
                continue
        elif isinstance(m, Let):
            if not is_value(m.bound):
                frames.append(LetFrame(m.binder, m.body, m.span))
                m = m.bound
                continue
        elif isinstance(m, Match):
            if not is_value(m.scrutinee):
                frames.append(MatchFrame(m.branches, m.span))
                m = m.scrutinee
                continue
        elif isinstance(m, BinOp):
            if not is_value(m.left):
                frames.append(BinOpLeftFrame(m.op, m.right, m.span))
                m = m.left
                continue
            if not is_value(m.right):
                frames.append(BinOpRightFrame(m.op, m.left, m.span))
                m = m.right
                continue
        elif isinstance(m, If):
            if not is_value(m.cond):
                frames.append(IfFrame(m.then, m.orelse, m.span))
                m = m.cond
                continue
        kind = _redex(m)
        if kind is None:
            raise _stuck(m)
        return Decomposition(tuple(frames), m, kind)


def _primitive(m: BinOp) -> Term:
    (a, b) = (m.left.value, m.right.value)
    ints = type(a) is int and type(b) is int
    if m.op == "==" and type(a) is type(b):
        return Lit(a == b, span=m.span)
    if ints:
        if m.op == "+":
            return Lit(a + b, span=m.span)
        if m.op == "-":
            return Lit(a - b, span=m.span)
        if m.op == "*":
            return Lit(a * b, span=m.span)
        if m.op == "<":
            return Lit(a < b, span=m.span)
    raise _stuck(m)


def _fix_argument_type(annotation):
    # ((T→ωU)→ω(T→ωU))→ω(T→ωU)
    if isinstance(annotation, Fun) and isinstance(annotation.res, Fun):
        return annotation.res.arg
    return None


def contract(redex: Term, rule: str, supply: NameSupply) -> Term:
    if rule == R_BETA:
        if isinstance(redex, Let):
            return substitute(lift(redex.bound), redex.binder, redex.body, supply)
        fn = redex.fn
        return substitute(lift(redex.arg), fn.binder, fn.body, supply)
    if rule == R_SPLIT:
        pair = redex.scrutinee
        body = substitute(lift(pair.left), redex.left, redex.body, supply)
        return substitute(lift(pair.right), redex.right, body, supply)
    if rule == R_LETBOX:
        return substitute(redex.scrutinee.value, redex.binder, redex.body, supply)
    if rule == R_FIX:
        # fix v → v (λy. fix v y)
        y = supply.fresh("y")
        arg_type = _fix_argument_type(redex.fn.annotation)
        eta = Lam(
            y,
            App(redex, VarApp(y, ())),
            arg_type,
            Mult.UN if arg_type is not None else None,
        )
        return App(redex.arg, eta, span=redex.span)
    if rule == R_PRIM:
        return _primitive(redex)
    if rule == R_IF:
        if redex.cond.value is True:
            return redex.then
        if redex.cond.value is False:
            return redex.orelse
        raise _stuck(redex)
    raise ValueError("unknown rule %r" % rule)


def step_term(
    m: Term,
    supply: Optional[NameSupply] = None,
    func_on_step: Optional[Callable[[str], None]] = None,
) -> StepOutcome:
    """
    One call-by-value step of a closed term (endpoints may occur free).

    :param func_on_step: called with the rule name after a pure step
    """
    d = decompose(m)
    if d is None:
        return IsValue(m)
    if isinstance(d.kind, Request):
        return Blocked(d.kind, d.context)
    reduct = contract(d.redex, d.kind, supply or NameSupply())
    if func_on_step is not None:
        func_on_step(d.kind)
    return Stepped(plug(d.context, reduct), d.kind)


def eval_pure(
    m: Term,
    fuel: int = DEFAULT_FUEL,
    supply: Optional[NameSupply] = None,
    func_on_step: Optional[Callable[[str], None]] = None,
) -> Union[IsValue, Blocked, FuelExhausted]:
    """
    Iterate :func:`step_term` until a value, the first channel request, or
    until `fuel` steps are spent.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    supply = supply or NameSupply()
    for steps in range(fuel):
        outcome = step_term(m, supply, func_on_step)
        if not isinstance(outcome, Stepped):
            log.debug("eval_pure stopped after %d steps", steps)
            return outcome
        m = outcome.term
    if is_value(m):
        return IsValue(m)
    return FuelExhausted(m, fuel)


def resume_unit(blocked: Blocked) -> Term:
    return blocked.resume(UNIT_TERM)
