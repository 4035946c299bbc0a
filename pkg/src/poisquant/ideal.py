"""Groebner-basis calculus: membership, normal forms, dimension.

The basis construction is plain Buchberger with normal pair selection
(smallest lcm degree first) plus the product and chain criteria, followed by
full interreduction.  Reduced monic bases are unique for a fixed monomial
order, which the test suite exploits.

Every basis element carries a combination certificate: basis[i] equals
sum_j certificates[i][j] * generators[j], maintained exactly through
S-polynomial formation and interreduction.

dimension() returns the global affine Krull dimension of R/I, computed from
leading-term independent variable sets.  For non-homogeneous input this is a
statement about the whole affine variety, not about a germ at a point.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .errors import AlgebraError, ArityMismatchError
from .orders import DEGREVLEX, LEX, MonomialOrder, degrevlex, lex  # noqa: F401
from .polyring import (
    Monomial,
    Poly,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


def _divide(
    p: Poly, reducers: Sequence[Poly], order: MonomialOrder
) -> Tuple[Poly, List[Poly]]:
    """Full multivariate division: p = sum quots[i]*reducers[i] + remainder,
    no remainder term divisible by any reducer's leading term."""
    quots = [Poly.zero(p.arity) for _ in reducers]
    leads = [r.leading(order) for r in reducers]
    remainder = Poly.zero(p.arity)
    work = p
    while not work.is_zero():
        wm, wc = work.leading(order)
        for idx, (rm, rc) in enumerate(leads):
            if monomial_divides(rm, wm):
                t = Poly.monomial(monomial_div(wm, rm), wc / rc)
                quots[idx] = quots[idx] + t
                work = work - t * reducers[idx]
                break
        else:
            t = Poly.monomial(wm, wc)
            remainder = remainder + t
            work = work - t
    return remainder, quots


@dataclass
class GroebnerBasis:
    """Reduced monic basis, the originating generators, and the active order.

    certificates[i][j] is the cofactor of generators[j] in basis[i].
    """

    generators: List[Poly]
    basis: List[Poly]
    order: MonomialOrder
    arity: int
    certificates: List[List[Poly]] = field(default_factory=list)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading(self.order)[0] for g in self.basis]

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.basis)


def buchberger(
    gens: Sequence[Poly],
    order: Optional[MonomialOrder] = None,
    track_certificates: bool = True,
) -> GroebnerBasis:
    gens = list(gens)
    if not gens:
        raise AlgebraError("empty generator list")
    arity = gens[0].arity
    for g in gens[1:]:
        if g.arity != arity:
            raise ArityMismatchError(arity, g.arity, "buchberger")
    order = order or degrevlex(arity)

    polys: List[Poly] = []
    cofs: List[List[Poly]] = []
    zero = Poly.zero(arity)

    def unit_cof(j: int, scale: Fraction) -> List[Poly]:
        row = [zero] * len(gens)
        row[j] = Poly.constant(scale, arity)
        return row

    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        c = g.leading(order)[1]
        polys.append(g * (1 / c))
        cofs.append(unit_cof(j, 1 / c) if track_certificates else [])

    lead = [p.leading(order)[0] for p in polys]
    heap: List[Tuple[int, tuple, int, int]] = []
    pending = set()

    def push_pair(i: int, j: int) -> None:
        l = monomial_lcm(lead[i], lead[j])
        heapq.heappush(heap, (monomial_degree(l), order.key(l), i, j))
        pending.add((i, j))

    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            push_pair(i, j)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        li, lj = lead[i], lead[j]
        l = monomial_lcm(li, lj)
        # product criterion: coprime leading monomials reduce to zero
        if l == monomial_mul(li, lj):
            continue
        # chain criterion: a third element divides the lcm and both side
        # pairs have already left the queue
        skip = False
        for k in range(len(polys)):
            if k in (i, j) or not monomial_divides(lead[k], l):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        mi = Poly.monomial(monomial_div(l, li))
        mj = Poly.monomial(monomial_div(l, lj))
        s_poly = mi * polys[i] - mj * polys[j]
        nf, quots = _divide(s_poly, polys, order)
        if nf.is_zero():
            continue
        c = nf.leading(order)[1]
        inv = 1 / c
        if track_certificates:
            new_cof = [mi * a - mj * b for a, b in zip(cofs[i], cofs[j])]
            for q, cof_row in zip(quots, cofs):
                if q.is_zero():
                    continue
                new_cof = [acc - q * cf for acc, cf in zip(new_cof, cof_row)]
            cofs.append([cf * inv for cf in new_cof])
        else:
            cofs.append([])
        polys.append(nf * inv)
        lead.append(polys[-1].leading(order)[0])
        for k in range(len(polys) - 1):
            push_pair(k, len(polys) - 1)

    polys, cofs = _interreduce(polys, cofs, order, arity, len(gens), track_certificates)
    idx = sorted(
        range(len(polys)), key=lambda t: order.key(polys[t].leading(order)[0]), reverse=True
    )
    return GroebnerBasis(
        generators=gens,
        basis=[polys[t] for t in idx],
        order=order,
        arity=arity,
        certificates=[cofs[t] for t in idx],
    )


def _interreduce(polys, cofs, order, arity, ngens, track_certificates=True):
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(polys):
            others = polys[:k] + polys[k + 1 :]
            other_cofs = cofs[:k] + cofs[k + 1 :]
            if not others:
                k += 1
                continue
            nf, quots = _divide(polys[k], others, order)
            if nf == polys[k]:
                k += 1
                continue
            changed = True
            if nf.is_zero():
                del polys[k]
                del cofs[k]
                continue
            c = nf.leading(order)[1]
            inv = 1 / c
            if track_certificates:
                new_cof = list(cofs[k])
                for q, oc in zip(quots, other_cofs):
                    if q.is_zero():
                        continue
                    new_cof = [acc - q * cf for acc, cf in zip(new_cof, oc)]
                cofs[k] = [cf * inv for cf in new_cof]
            polys[k] = nf * inv
            k += 1
    return polys, cofs


def normal_form(p: Poly, G: GroebnerBasis) -> Poly:
    if p.arity != G.arity:
        raise ArityMismatchError(p.arity, G.arity, "normal_form")
    if not G.basis:
        return p
    return _divide(p, G.basis, G.order)[0]


def normal_form_with_quotients(p: Poly, G: GroebnerBasis) -> Tuple[Poly, List[Poly]]:
    """Remainder plus the division witness against G.basis."""
    if p.arity != G.arity:
        raise ArityMismatchError(p.arity, G.arity, "normal_form")
    if not G.basis:
        return p, []
    return _divide(p, G.basis, G.order)


def ideal_member(p: Poly, G: GroebnerBasis) -> bool:
    return normal_form(p, G).is_zero()


def dimension(G: GroebnerBasis) -> int:
    """Affine Krull dimension of R/I via leading-term independent sets."""
    if G.is_unit_ideal():
        raise AlgebraError("empty variety")
    n = G.arity
    supports = []
    for m in G.leading_monomials():
        supports.append(frozenset(i for i, e in enumerate(m) if e))
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    raise AssertionError("unreachable: the empty set is always independent for a proper ideal")


def is_complete_intersection(gens: Sequence[Poly], G: GroebnerBasis) -> bool:
    return dimension(G) == G.arity - len(gens)


@dataclass
class QuotientAlgebra:
    """R/I presented by a Groebner basis; normal forms are the canonical
    residue representatives."""

    ambient_arity: int
    ideal: GroebnerBasis

    def __post_init__(self):
        if self.ambient_arity != self.ideal.arity:
            raise ArityMismatchError(self.ambient_arity, self.ideal.arity, "quotient algebra")

    def reduce(self, p: Poly) -> Poly:
        return normal_form(p, self.ideal)

    def equivalent(self, p: Poly, q: Poly) -> bool:
        return normal_form(p - q, self.ideal).is_zero()
