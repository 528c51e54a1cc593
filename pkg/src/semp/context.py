# -*- coding: utf-8 -*-

# stdlib
import itertools
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Tuple

# pypi
from pyramid.decorator import reify

# local
from .diagnostics import Diagnostic
from .diagnostics import LINEAR_UNUSED
from .diagnostics import Span
from .diagnostics import UNKNOWN_SPAN
from .exceptions import OracleScaleExceeded
from .exceptions import TypeCheckFailure
from .types import ContextualType
from .types import is_unrestricted


# ==============================================================================


# enumerate_splits refuses contexts with more linear bindings than this
MAX_SPLIT_LINEAR = 12


class TypingContext(object):
    """
    An ordered set of bindings `name : contextual type`.

    Instances are immutable. Order is kept for stable messages; equality
    compares the bindings as a map.
    """

    def __init__(self, bindings: Iterable[Tuple[str, ContextualType]] = ()):
        self.bindings = tuple(bindings)
        names = [name for (name, _t) in self.bindings]
        if len(set(names)) != len(names):
            raise ValueError("a variable is bound twice in %r" % (names,))

    @reify
    def _index(self):
        return dict(self.bindings)

    def __repr__(self):
        return "<TypingContext %s>" % ", ".join(n for (n, _t) in self.bindings)

    def __eq__(self, other):
        if not isinstance(other, TypingContext):
            return NotImplemented
        return self._index == other._index

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        return hash(frozenset(self._index.items()))

    def __len__(self):
        return len(self.bindings)

    def __iter__(self) -> Iterator[Tuple[str, ContextualType]]:
        return iter(self.bindings)

    def __contains__(self, name):
        return name in self._index

    def names(self) -> List[str]:
        return [n for (n, _t) in self.bindings]

    def lookup(self, name: str) -> Optional[ContextualType]:
        return self._index.get(name)

    def extend(self, name: str, t: ContextualType) -> "TypingContext":
        return TypingContext(self.bindings + ((name, t),))

    def extend_many(self, bindings) -> "TypingContext":
        return TypingContext(self.bindings + tuple(bindings))

    def remove(self, name: str) -> "TypingContext":
        if name not in self._index:
            return self
        return TypingContext(b for b in self.bindings if b[0] != name)

    def merge(self, other: "TypingContext") -> "TypingContext":
        """union of two contexts; shared names must agree"""
        extra = []
        for (name, t) in other.bindings:
            if name in self._index:
                if self._index[name] != t:
                    raise ValueError("%s bound differently on both sides" % name)
                continue
            extra.append((name, t))
        return TypingContext(self.bindings + tuple(extra))

    def filter(self, predicate) -> "TypingContext":
        return TypingContext(b for b in self.bindings if predicate(b[1]))

    # the predicates

    def is_un(self) -> bool:
        return all(is_unrestricted(t) for (_n, t) in self.bindings)

    def un_part(self) -> "TypingContext":
        return self.filter(is_unrestricted)

    def lin_part(self) -> "TypingContext":
        return self.filter(lambda t: not is_unrestricted(t))

    def level_at_least(self, n: int) -> bool:
        return all(t.level >= n for (_n, t) in self.bindings)

    def level_below(self, n: int) -> bool:
        return all(t.level < n for (_n, t) in self.bindings)

    # the algebras

    def difference(self, name: str, span: Span = UNKNOWN_SPAN) -> "TypingContext":
        """
        Γ ÷ x: removes an unrestricted binding on scope exit.
        Undefined, and reported, when x is still bound to a linear type.
        """
        t = self._index.get(name)
        if t is None:
            return self
        if not is_unrestricted(t):
            raise TypeCheckFailure(
                Diagnostic(
                    LINEAR_UNUSED,
                    span,
                    "linear variable %s is never used" % name,
                    actual=t.body,
                )
            )
        return self.remove(name)

    def divide(self, n: int) -> Tuple["TypingContext", "TypingContext"]:
        """split into the bindings at level n or above, and the rest"""
        outer = TypingContext(b for b in self.bindings if b[1].level >= n)
        rest = TypingContext(b for b in self.bindings if b[1].level < n)
        return (outer, rest)

    def enumerate_splits(self) -> List[Tuple["TypingContext", "TypingContext"]]:
        """
        Every (Γ1, Γ2) with Γ = Γ1 ∘ Γ2: unrestricted bindings go to both
        sides, each linear binding to exactly one.
        """
        un = [b for b in self.bindings if is_unrestricted(b[1])]
        lin = [b for b in self.bindings if not is_unrestricted(b[1])]
        if len(lin) > MAX_SPLIT_LINEAR:
            raise OracleScaleExceeded(
                "%d linear bindings exceed the split cap of %d"
                % (len(lin), MAX_SPLIT_LINEAR)
            )
        splits = []
        for sides in itertools.product((0, 1), repeat=len(lin)):
            left = [b for (b, side) in zip(lin, sides) if side == 0]
            right = [b for (b, side) in zip(lin, sides) if side == 1]
            splits.append((TypingContext(un + left), TypingContext(un + right)))
        return splits


EMPTY = TypingContext()


def un_context(g: TypingContext) -> bool:
    return g.is_un()


def split_is_valid(g: TypingContext, g1: TypingContext, g2: TypingContext) -> bool:
    """Γ = Γ1 ∘ Γ2"""
    un = g.un_part()
    if g1.un_part() != un or g2.un_part() != un:
        return False
    lin1 = set(g1.lin_part().names())
    lin2 = set(g2.lin_part().names())
    if lin1 & lin2:
        return False
    return lin1 | lin2 == set(g.lin_part().names()) and all(
        g.lookup(n) == (g1.lookup(n) or g2.lookup(n)) for n in lin1 | lin2
    )
