# -*- coding: utf-8 -*-
"""
Library definitions that are typed by a scheme, like the constants, and
expanded into core terms once the checker knows their instance.

    forkWith f = let (x, y) = new () in fork (lambda _. f y); x
"""
# stdlib
from typing import Optional

# local
from .diagnostics import Span
from .terms import App
from .terms import Const
from .terms import Lam
from .terms import Let
from .terms import PairSplit
from .terms import Term
from .terms import UNIT_TERM
from .terms import var
from .types import dualize
from .types import Fun
from .types import Mult
from .types import Pair
from .types import Type
from .types import UNIT


# ==============================================================================


def fork_with_term(instance: Type, span: Optional[Span] = None) -> Term:
    """
    :param instance: the resolved `(S -m> Unit) -> Dual S`
    """
    f_type = instance.arg
    s = f_type.arg
    # x is returned to the caller, y goes to the forked thread
    r = dualize(s)
    new_type = Fun(UNIT, Mult.UN, Pair(r, dualize(r)))
    fork_type = Fun(Fun(UNIT, Mult.LIN, UNIT), Mult.UN, UNIT)
    thunk = Lam("_", App(var("f"), var("y")), UNIT, Mult.LIN)
    body = PairSplit(
        "x",
        "y",
        App(Const("new", annotation=new_type), UNIT_TERM),
        Let("_", App(Const("fork", annotation=fork_type), thunk), var("x")),
    )
    return Lam("f", body, f_type, Mult.UN, span=span)


EXPANSIONS = {
    "forkWith": fork_with_term,
}


def expand(name: str, instance: Type, span: Optional[Span] = None) -> Term:
    return EXPANSIONS[name](instance, span)
