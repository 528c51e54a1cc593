# -*- coding: utf-8 -*-

# stdlib
from dataclasses import dataclass
from typing import Dict
from typing import Optional
from typing import Tuple

# local
from .exceptions import IllFormedType
from .exceptions import UnknownConstant
from .types import CLOSE
from .types import check_type
from .types import dualize
from .types import equal
from .types import Fun
from .types import In
from .types import is_session
from .types import Mult
from .types import MultVar
from .types import Out
from .types import Pair
from .types import SchemeBranch
from .types import SchemeDual
from .types import SchemeVar
from .types import Select
from .types import SessionType
from .types import Type
from .types import UNIT
from .types import unfold_all
from .types import WAIT


# ==============================================================================


# sorts of schematic variables
SORT_TYPE = "type"
SORT_SESSION = "session"
SORT_CHOICE = "choice"
SORT_MULT = "mult"

CONSTANT_NAMES = ("unit", "close", "wait", "send", "receive", "select", "new", "fork", "fix")

# library definitions typed by a scheme, see semp.library
LIBRARY_NAMES = ("forkWith",)


_T = SchemeVar("T")
_U = SchemeVar("U")
_S = SchemeVar("S")
_C = SchemeVar("C")
_m = MultVar("m")


@dataclass(frozen=True)
class ConstantScheme(object):
    name: str
    variables: Tuple[Tuple[str, str], ...]
    skeleton: Type
    label: Optional[str] = None

    @property
    def sorts(self) -> Dict[str, str]:
        return dict(self.variables)

    def arity(self) -> int:
        n = 0
        t = self.skeleton
        while isinstance(t, Fun):
            n += 1
            t = t.res
        return n

    def unbound(self, bindings) -> Tuple[str, ...]:
        return tuple(v for (v, _sort) in self.variables if v not in bindings)

    def match(self, skeleton, actual: Type, bindings: dict) -> bool:
        """
        Match one position of the skeleton against an actual type, binding
        schematic variables in place. Returns False on a structural mismatch.
        """
        if isinstance(skeleton, SchemeVar):
            if skeleton.name in bindings:
                return equal(bindings[skeleton.name], actual)
            sort = self.sorts.get(skeleton.name, SORT_TYPE)
            if sort == SORT_SESSION and not is_session(actual):
                return False
            if sort == SORT_CHOICE and not isinstance(_unfold(actual), Select):
                return False
            bindings[skeleton.name] = actual
            return True
        if isinstance(skeleton, (SchemeDual, SchemeBranch)):
            if skeleton.name in bindings:
                try:
                    return equal(_derived(skeleton, bindings), actual)
                except IllFormedType:
                    return False
            # derived positions cannot bind
            return True
        if isinstance(skeleton, Fun):
            if not isinstance(actual, Fun):
                return False
            if isinstance(skeleton.mult, MultVar):
                bound = bindings.get(skeleton.mult.name)
                if bound is None:
                    bindings[skeleton.mult.name] = actual.mult
                elif bound != actual.mult:
                    return False
            elif skeleton.mult != actual.mult:
                return False
            return self.match(skeleton.arg, actual.arg, bindings) and self.match(
                skeleton.res, actual.res, bindings
            )
        if isinstance(skeleton, Pair):
            if not isinstance(actual, Pair):
                return False
            return self.match(skeleton.left, actual.left, bindings) and self.match(
                skeleton.right, actual.right, bindings
            )
        if isinstance(skeleton, (Out, In)):
            actual = _unfold(actual)
            if type(actual) is not type(skeleton):
                return False
            return self.match(skeleton.payload, actual.payload, bindings) and self.match(
                skeleton.cont, actual.cont, bindings
            )
        return equal(skeleton, actual)


def _unfold(t):
    return unfold_all(t) if isinstance(t, SessionType) else t


def _derived(node, bindings):
    bound = bindings[node.name]
    if isinstance(node, SchemeDual):
        return dualize(bound)
    choice = _unfold(bound)
    if not isinstance(choice, Select):
        raise IllFormedType("select needs an internal choice")
    branches = choice.branch_map()
    if node.label not in branches:
        raise IllFormedType("label %s is not offered" % node.label)
    return branches[node.label]


_SCHEMES = {
    "unit": ConstantScheme("unit", (), UNIT),
    "close": ConstantScheme("close", (), Fun(CLOSE, Mult.UN, UNIT)),
    "wait": ConstantScheme("wait", (), Fun(WAIT, Mult.UN, UNIT)),
    "send": ConstantScheme(
        "send",
        (("T", SORT_TYPE), ("S", SORT_SESSION)),
        Fun(_T, Mult.UN, Fun(Out(_T, _S), Mult.LIN, _S)),
    ),
    "receive": ConstantScheme(
        "receive",
        (("T", SORT_TYPE), ("S", SORT_SESSION)),
        Fun(In(_T, _S), Mult.UN, Pair(_T, _S)),
    ),
    "new": ConstantScheme(
        "new",
        (("S", SORT_SESSION),),
        Fun(UNIT, Mult.UN, Pair(_S, SchemeDual("S"))),
    ),
    "fork": ConstantScheme(
        "fork", (("m", SORT_MULT),), Fun(Fun(UNIT, _m, UNIT), Mult.UN, UNIT)
    ),
    "fix": ConstantScheme(
        "fix",
        (("T", SORT_TYPE), ("U", SORT_TYPE)),
        Fun(
            Fun(Fun(_T, Mult.UN, _U), Mult.UN, Fun(_T, Mult.UN, _U)),
            Mult.UN,
            Fun(_T, Mult.UN, _U),
        ),
    ),
    "forkWith": ConstantScheme(
        "forkWith",
        (("S", SORT_SESSION), ("m", SORT_MULT)),
        Fun(Fun(_S, _m, UNIT), Mult.UN, SchemeDual("S")),
    ),
}


def constant_scheme(name: str, label: Optional[str] = None) -> ConstantScheme:
    if name == "select":
        if label is None:
            raise UnknownConstant("select needs a label")
        return ConstantScheme(
            "select",
            (("C", SORT_CHOICE),),
            Fun(_C, Mult.UN, SchemeBranch("C", label)),
            label=label,
        )
    try:
        return _SCHEMES[name]
    except KeyError:
        raise UnknownConstant("unknown constant %r" % name)


def _instantiate(t, bindings):
    if isinstance(t, SchemeVar):
        return bindings[t.name]
    if isinstance(t, (SchemeDual, SchemeBranch)):
        return _derived(t, bindings)
    if isinstance(t, Fun):
        mult = bindings[t.mult.name] if isinstance(t.mult, MultVar) else t.mult
        return Fun(_instantiate(t.arg, bindings), mult, _instantiate(t.res, bindings))
    if isinstance(t, Pair):
        return Pair(_instantiate(t.left, bindings), _instantiate(t.right, bindings))
    if isinstance(t, Out):
        return Out(_instantiate(t.payload, bindings), _instantiate(t.cont, bindings))
    if isinstance(t, In):
        return In(_instantiate(t.payload, bindings), _instantiate(t.cont, bindings))
    return t


def instantiate(scheme: ConstantScheme, bindings: dict) -> Type:
    """
    Substitute the bindings into the skeleton and check the result is a well
    formed type.
    """
    missing = scheme.unbound(bindings)
    if missing:
        raise IllFormedType(
            "unbound scheme variable(s) %s of %s" % (", ".join(missing), scheme.name)
        )
    for (name, sort) in scheme.variables:
        value = bindings[name]
        if sort == SORT_MULT:
            if not isinstance(value, Mult):
                raise IllFormedType("%s must be a multiplicity" % name)
        elif sort == SORT_SESSION and not is_session(value):
            raise IllFormedType("%s must be a session type" % name)
    result = _instantiate(scheme.skeleton, bindings)
    check_type(result)
    return result


def instance_bindings(scheme: ConstantScheme, t: Type) -> Optional[dict]:
    """Bindings making `t` an instance of the scheme, or None."""
    bindings = {}
    if not scheme.match(scheme.skeleton, t, bindings):
        return None
    if scheme.unbound(bindings):
        return None
    try:
        if not equal(instantiate(scheme, bindings), t):
            return None
    except IllFormedType:
        return None
    return bindings
