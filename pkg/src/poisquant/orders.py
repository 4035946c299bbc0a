"""Monomial orders: lexicographic and degree-reverse-lexicographic.

An order compares exponent tuples through a sort key, so `max(monos,
key=order.key)` picks the leading monomial.  Both orders are total
well-orders compatible with multiplication; the test suite checks those
properties on random triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

Monomial = Tuple[int, ...]

LEX = "lex"
DEGREVLEX = "degrevlex"


@dataclass(frozen=True)
class MonomialOrder:
    """A named order together with a significance permutation of the variables.

    `permutation[0]` is the most significant variable index.  The identity
    permutation gives the textbook orders on x1 > x2 > ... > xn.
    """

    kind: str
    arity: int
    permutation: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in (LEX, DEGREVLEX):
            raise ValueError(f"unknown order kind {self.kind!r}")
        perm = self.permutation or tuple(range(self.arity))
        object.__setattr__(self, "permutation", tuple(perm))
        if sorted(self.permutation) != list(range(self.arity)):
            raise ValueError("permutation must be a bijection on variable indices")

    def key(self, mono: Monomial):
        perm = self.permutation
        if self.kind == LEX:
            return tuple(mono[p] for p in perm)
        # degrevlex: higher total degree wins; ties broken by the smallest
        # exponent at the last position where the permuted vectors differ.
        return (sum(mono), tuple(-mono[perm[i]] for i in range(self.arity - 1, -1, -1)))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def sorted_desc(self, monos: Sequence[Monomial]) -> list:
        return sorted(monos, key=self.key, reverse=True)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "permutation": list(self.permutation)}


def degrevlex(arity: int, permutation: Sequence[int] = ()) -> MonomialOrder:
    return MonomialOrder(DEGREVLEX, arity, tuple(permutation))


def lex(arity: int, permutation: Sequence[int] = ()) -> MonomialOrder:
    return MonomialOrder(LEX, arity, tuple(permutation))
