"""Polydifferential operators on a polynomial ring and their cochain calculus.

A PolyDiffOp of arity k sends k polynomials to one polynomial,
sum of coeff * prod_s d^{alpha_s}(argument s) over its terms.  Built on top:
insertion composition, the bar-resolution differential, the Gerstenhaber
square, the arity-3 Eulerian projector family, signed shuffle sums, star
product truncations with their associativity defects, and an exact solver
for the second correction term of a star product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import AlgebraError, ArityMismatchError
from .ideal import GroebnerBasis, normal_form
from .linalg import solve_sparse_linear
from .orders import Monomial
from .polyring import Poly, monomial_mul

OpKey = Tuple[Monomial, ...]


def _as_poly(value, arity: int) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.constant(value, arity)


class PolyDiffOp:
    """k-linear operator: terms maps a k-tuple of multi-indices to a coefficient."""

    __slots__ = ("arity", "ring_arity", "terms")

    def __init__(self, arity: int, ring_arity: int, terms: Dict[OpKey, Poly]):
        if arity < 1:
            raise AlgebraError("operator arity must be at least 1")
        clean: Dict[OpKey, Poly] = {}
        for key, coeff in terms.items():
            if len(key) != arity:
                raise AlgebraError("operator key length does not match arity")
            for multi in key:
                if len(multi) != ring_arity or any(e < 0 for e in multi):
                    raise AlgebraError("bad multi-index in operator key")
            coeff = _as_poly(coeff, ring_arity)
            if coeff.arity != ring_arity:
                raise ArityMismatchError(coeff.arity, ring_arity, "operator coefficient")
            if not coeff.is_zero():
                clean[key] = coeff
        self.arity = arity
        self.ring_arity = ring_arity
        self.terms = clean

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(arity: int, ring_arity: int) -> "PolyDiffOp":
        return PolyDiffOp(arity, ring_arity, {})

    @staticmethod
    def single(ring_arity: int, key: OpKey, coeff) -> "PolyDiffOp":
        return PolyDiffOp(len(key), ring_arity, {key: _as_poly(coeff, ring_arity)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Largest derivative order placed on any single slot."""
        best = 0
        for key in self.terms:
            for multi in key:
                best = max(best, sum(multi))
        return best

    def max_coeff_degree(self) -> int:
        best = 0
        for coeff in self.terms.values():
            best = max(best, coeff.total_degree())
        return best

    def sorted_terms(self) -> List[Tuple[OpKey, Poly]]:
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyDiffOp):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.ring_arity == other.ring_arity
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"PolyDiffOp(arity={self.arity}, terms={len(self.terms)})"

    # -- linear structure ----------------------------------------------------

    def _check_compatible(self, other: "PolyDiffOp", context: str) -> None:
        if self.arity != other.arity or self.ring_arity != other.ring_arity:
            raise ArityMismatchError(self.arity, other.arity, context)

    def __add__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        self._check_compatible(other, "operator sum")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms.get(key, Poly.zero(self.ring_arity)) + coeff
        return PolyDiffOp(self.arity, self.ring_arity, terms)

    def __neg__(self) -> "PolyDiffOp":
        return PolyDiffOp(
            self.arity, self.ring_arity, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        return self + (-other)

    def __mul__(self, scalar) -> "PolyDiffOp":
        factor = _as_poly(scalar, self.ring_arity)
        return PolyDiffOp(
            self.arity, self.ring_arity, {k: c * factor for k, c in self.terms.items()}
        )

    __rmul__ = __mul__

    # -- action on polynomials ----------------------------------------------

    def apply(self, args: Sequence[Poly]) -> Poly:
        if len(args) != self.arity:
            raise ArityMismatchError(self.arity, len(args), "operator application")
        for a in args:
            if a.arity != self.ring_arity:
                raise ArityMismatchError(a.arity, self.ring_arity, "operator argument")
        total = Poly.zero(self.ring_arity)
        for key, coeff in self.terms.items():
            piece = coeff
            for slot, multi in enumerate(key):
                if piece.is_zero():
                    break
                piece = piece * args[slot].diff_multi(multi)
            total = total + piece
        return total

    def transpose(self) -> "PolyDiffOp":
        """Swap the two inputs of a binary operator."""
        if self.arity != 2:
            raise AlgebraError("transpose requires a binary operator")
        return PolyDiffOp(
            2, self.ring_arity, {(b, a): c for (a, b), c in self.terms.items()}
        )


def multiplication_op(ring_arity: int) -> PolyDiffOp:
    zero = (0,) * ring_arity
    return PolyDiffOp(2, ring_arity, {(zero, zero): Poly.constant(1, ring_arity)})


def from_bivector(q) -> PolyDiffOp:
    """First-order skew operator whose action is the bivector's bracket."""
    n = q.arity
    terms: Dict[OpKey, Poly] = {}
    for (i, j), coeff in q.components.items():
        ei = tuple(1 if t == i else 0 for t in range(n))
        ej = tuple(1 if t == j else 0 for t in range(n))
        terms[(ei, ej)] = terms.get((ei, ej), Poly.zero(n)) + coeff
        terms[(ej, ei)] = terms.get((ej, ei), Poly.zero(n)) - coeff
    return PolyDiffOp(2, n, terms)


# -- insertion composition ----------------------------------------------------


def _compositions(total: int, parts: int):
    """Ordered splits of `total` into `parts` bins with multinomial weights."""
    if parts == 1:
        yield (total,), 1
        return
    for first in range(total + 1):
        w = comb(total, first)
        for rest, wr in _compositions(total - first, parts - 1):
            yield (first,) + rest, w * wr


def _split_multi(alpha: Monomial, parts: int):
    per_var = [list(_compositions(alpha[v], parts)) for v in range(len(alpha))]
    for combo in product(*per_var):
        weight = 1
        for _, w in combo:
            weight *= w
        splits = tuple(
            tuple(combo[v][0][j] for v in range(len(alpha))) for j in range(parts)
        )
        yield splits, weight


def compose_at(outer: PolyDiffOp, slot: int, inner: PolyDiffOp) -> PolyDiffOp:
    """Insert `inner` into input `slot` of `outer`.

    The derivative stack sitting on that slot distributes over the inner
    coefficient and the inner slots by the Leibniz rule, with multinomial
    weights.  Result arity is outer.arity + inner.arity - 1.
    """
    if outer.ring_arity != inner.ring_arity:
        raise ArityMismatchError(outer.ring_arity, inner.ring_arity, "composition")
    if not 0 <= slot < outer.arity:
        raise AlgebraError("composition slot out of range")
    n = outer.ring_arity
    k_in = inner.arity
    acc: Dict[OpKey, Poly] = {}
    for okey, ocoef in outer.terms.items():
        alpha = okey[slot]
        for ikey, icoef in inner.terms.items():
            for splits, weight in _split_multi(alpha, k_in + 1):
                inner_part = icoef.diff_multi(splits[0])
                if inner_part.is_zero():
                    continue
                coeff = ocoef * inner_part
                if weight != 1:
                    coeff = coeff * weight
                new_key = (
                    okey[:slot]
                    + tuple(monomial_mul(ikey[t], splits[t + 1]) for t in range(k_in))
                    + okey[slot + 1 :]
                )
                prev = acc.get(new_key)
                acc[new_key] = coeff if prev is None else prev + coeff
    return PolyDiffOp(outer.arity + k_in - 1, n, acc)


# -- bar differential and Gerstenhaber structure ------------------------------


def bar_differential(op: PolyDiffOp) -> PolyDiffOp:
    """Hochschild differential of a k-cochain; raises arity by one."""
    k = op.arity
    mu = multiplication_op(op.ring_arity)
    total = compose_at(mu, 1, op)
    for i in range(k):
        piece = compose_at(op, i, mu)
        total = total + piece if (i + 1) % 2 == 0 else total - piece
    last = compose_at(mu, 0, op)
    return total + last if (k + 1) % 2 == 0 else total - last


def gerstenhaber_square(p: PolyDiffOp) -> PolyDiffOp:
    """Self-composition defect p(p(a,b),c) - p(a,p(b,c)) of a binary operator."""
    if p.arity != 2:
        raise AlgebraError("square requires a binary operator")
    return compose_at(p, 0, p) - compose_at(p, 1, p)


def cyclic_jacobi_operator(p: PolyDiffOp) -> PolyDiffOp:
    """Sum of p(p(a,b),c) over cyclic rotations of (a,b,c)."""
    if p.arity != 2:
        raise AlgebraError("Jacobi sum requires a binary operator")
    nested = compose_at(p, 0, p)
    return (
        nested
        + permute_inputs(nested, (1, 2, 0))
        + permute_inputs(nested, (2, 0, 1))
    )


def sym_skew_decompose(p: PolyDiffOp) -> Tuple[PolyDiffOp, PolyDiffOp]:
    """Split a binary operator into symmetric and skew parts."""
    t = p.transpose()
    half = Fraction(1, 2)
    return (p + t) * half, (p - t) * half


# -- the symmetric group acting on arity-3 operators ---------------------------

Perm = Tuple[int, ...]

PERMS3: Tuple[Perm, ...] = (
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
)


def compose_perm(s: Perm, p: Perm) -> Perm:
    return tuple(s[p[i]] for i in range(len(p)))


def permute_inputs(op: PolyDiffOp, pi: Perm) -> PolyDiffOp:
    """Operator (a_0,..) -> op(a_{pi(0)}, a_{pi(1)}, ...)."""
    if sorted(pi) != list(range(op.arity)):
        raise AlgebraError("input permutation does not match operator arity")
    inv = [0] * len(pi)
    for src, dst in enumerate(pi):
        inv[dst] = src
    terms = {}
    for key, coeff in op.terms.items():
        new_key = tuple(key[inv[j]] for j in range(len(pi)))
        prev = terms.get(new_key)
        terms[new_key] = coeff if prev is None else prev + coeff
    return PolyDiffOp(op.arity, op.ring_arity, terms)


def convolve_weights(
    w1: Dict[Perm, Fraction], w2: Dict[Perm, Fraction]
) -> Dict[Perm, Fraction]:
    """Product in the group algebra matching nested operator permutation."""
    out: Dict[Perm, Fraction] = {}
    for s, a in w1.items():
        for p, b in w2.items():
            key = compose_perm(s, p)
            out[key] = out.get(key, Fraction(0)) + a * b
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class CochainProjector:
    """Weighted sum of input permutations acting on arity-3 operators."""

    name: str
    weights: Dict[Perm, Fraction] = field(hash=False)

    def apply(self, op: PolyDiffOp) -> PolyDiffOp:
        if op.arity != 3:
            raise AlgebraError("projector acts on arity-3 operators")
        total = PolyDiffOp.zero(3, op.ring_arity)
        for pi, w in self.weights.items():
            total = total + permute_inputs(op, pi) * w
        return total


# Idempotent weight tables: mutually orthogonal, summing to the identity.
_EULERIAN_WEIGHTS: Dict[int, Dict[Perm, Fraction]] = {
    1: {
        (0, 1, 2): Fraction(1, 3),
        (2, 1, 0): Fraction(-1, 3),
        (0, 2, 1): Fraction(1, 6),
        (1, 2, 0): Fraction(-1, 6),
        (1, 0, 2): Fraction(1, 6),
        (2, 0, 1): Fraction(-1, 6),
    },
    2: {
        (0, 1, 2): Fraction(1, 2),
        (2, 1, 0): Fraction(1, 2),
    },
    3: {
        (0, 1, 2): Fraction(1, 6),
        (2, 1, 0): Fraction(-1, 6),
        (0, 2, 1): Fraction(-1, 6),
        (1, 2, 0): Fraction(1, 6),
        (1, 0, 2): Fraction(-1, 6),
        (2, 0, 1): Fraction(1, 6),
    },
}

# Signed interleavings of a 1-block with a 2-block (and the reverse split).
# Convolving either table with the first projector gives zero; the unsigned
# variants fail that identity, which is what pins the sign convention here.
SHUFFLE_WEIGHTS_1_2: Dict[Perm, Fraction] = {
    (0, 1, 2): Fraction(1),
    (1, 0, 2): Fraction(-1),
    (1, 2, 0): Fraction(1),
}
SHUFFLE_WEIGHTS_2_1: Dict[Perm, Fraction] = {
    (0, 1, 2): Fraction(1),
    (0, 2, 1): Fraction(-1),
    (2, 0, 1): Fraction(1),
}


def eulerian_projector(index: int) -> CochainProjector:
    """The three commuting idempotents splitting arity-3 cochains."""
    if index not in _EULERIAN_WEIGHTS:
        raise AlgebraError("projector index must be 1, 2, or 3")
    return CochainProjector(f"e{index}", dict(_EULERIAN_WEIGHTS[index]))


def shuffle_vanishing_check(
    op: PolyDiffOp, basis: Optional[GroebnerBasis] = None
) -> Tuple[bool, bool]:
    """Whether both signed shuffle sums of an arity-3 operator vanish.

    Vanishing is tested coefficientwise, after normal form reduction when a
    Groebner basis is supplied.
    """
    results = []
    for table in (SHUFFLE_WEIGHTS_1_2, SHUFFLE_WEIGHTS_2_1):
        total = PolyDiffOp.zero(3, op.ring_arity)
        for pi, w in table.items():
            total = total + permute_inputs(op, pi) * w
        if basis is None:
            results.append(total.is_zero())
        else:
            results.append(vanishes_mod_ideal(total, basis))
    return results[0], results[1]


def vanishes_mod_ideal(op: PolyDiffOp, basis: GroebnerBasis) -> bool:
    """Coefficientwise membership test; sound because coefficients in the
    ideal force every value of the operator into the ideal."""
    return all(normal_form(c, basis).is_zero() for c in op.terms.values())


# -- star product truncations --------------------------------------------------


@dataclass(frozen=True)
class StarTruncation:
    """Product mu + sum of corrections, graded by formal order."""

    ring_arity: int
    corrections: Tuple[PolyDiffOp, ...]

    def __post_init__(self):
        for c in self.corrections:
            if c.arity != 2:
                raise AlgebraError("star corrections must be binary operators")
            if c.ring_arity != self.ring_arity:
                raise ArityMismatchError(c.ring_arity, self.ring_arity, "star term")

    @property
    def order(self) -> int:
        return len(self.corrections)

    def term(self, power: int) -> Optional[PolyDiffOp]:
        if power == 0:
            return multiplication_op(self.ring_arity)
        if 1 <= power <= self.order:
            return self.corrections[power - 1]
        return None


def star_assoc_defect(star: StarTruncation, power: int) -> PolyDiffOp:
    """Coefficient of the given formal power in (a*b)*c - a*(b*c)."""
    if not 1 <= power <= star.order + 1:
        raise AlgebraError("defect power must lie between 1 and order + 1")
    total = PolyDiffOp.zero(3, star.ring_arity)
    for s in range(power + 1):
        ps = star.term(s)
        pr = star.term(power - s)
        if ps is None or pr is None:
            continue
        total = total + compose_at(ps, 0, pr) - compose_at(ps, 1, pr)
    return total


# -- solving for the second correction term ------------------------------------


@dataclass
class SecondOrderReport:
    """Outcome of the linear solve for the order-two star correction."""

    correction: Optional[PolyDiffOp]
    unknown_count: int
    equation_count: int
    conflicts: List[Tuple[OpKey, Monomial, Fraction]]

    @property
    def solved(self) -> bool:
        return self.correction is not None


def _multi_indices(arity: int, max_total: int) -> List[Monomial]:
    out = [
        m
        for m in product(range(max_total + 1), repeat=arity)
        if sum(m) <= max_total
    ]
    out.sort()
    return out


def solve_p2(
    p1: PolyDiffOp,
    basis: Optional[GroebnerBasis] = None,
    max_order: int = 2,
    max_coeff_degree: Optional[int] = None,
) -> SecondOrderReport:
    """Find a symmetric binary operator whose differential cancels the
    self-composition defect of the first-order term, modulo the ideal.

    A symmetric ansatz loses nothing: the skew part of any solution only
    feeds the component of the equation that already vanishes for skew p1.
    The system is linear because the differential never differentiates the
    unknown coefficient polynomials.
    """
    if p1.arity != 2:
        raise AlgebraError("first-order term must be a binary operator")
    if p1.transpose() != -p1:
        raise AlgebraError("first-order term must be skew")
    n = p1.ring_arity
    if basis is not None and basis.arity != n:
        raise ArityMismatchError(basis.arity, n, "solve_p2")

    def reduce(poly: Poly) -> Poly:
        return poly if basis is None else normal_form(poly, basis)

    cocycle = bar_differential(p1)
    if not all(reduce(c).is_zero() for c in cocycle.terms.values()):
        raise AlgebraError("first-order term is not a cocycle modulo the ideal")
    jacobi = cyclic_jacobi_operator(p1)
    if not all(reduce(c).is_zero() for c in jacobi.terms.values()):
        raise AlgebraError("Jacobi obstruction is nonzero modulo the ideal")

    if max_coeff_degree is None:
        max_coeff_degree = p1.max_coeff_degree() + 2

    multis = _multi_indices(n, max_order)
    pairs: List[Tuple[Monomial, Monomial]] = []
    for i, a in enumerate(multis):
        for b in multis[i:]:
            pairs.append((a, b))
    monos = _multi_indices(n, max_coeff_degree)

    nf_cache: Dict[Monomial, Poly] = {m: reduce(Poly.monomial(m)) for m in monos}

    # Row space is indexed by (operator key, reduced coefficient monomial).
    row_index: Dict[Tuple[OpKey, Monomial], int] = {}
    rows: List[Dict[int, Fraction]] = []
    rhs: List[Fraction] = []
    labels: List[Tuple[OpKey, Monomial]] = []

    def row_for(label: Tuple[OpKey, Monomial]) -> int:
        idx = row_index.get(label)
        if idx is None:
            idx = len(rows)
            row_index[label] = idx
            rows.append({})
            rhs.append(Fraction(0))
            labels.append(label)
        return idx

    differentials: List[PolyDiffOp] = []
    for a, b in pairs:
        terms: Dict[OpKey, Poly] = {(a, b): Poly.constant(1, n)}
        if a != b:
            terms[(b, a)] = Poly.constant(1, n)
        differentials.append(bar_differential(PolyDiffOp(2, n, terms)))

    col = 0
    col_meta: List[Tuple[int, Monomial]] = []
    for s, diff_op in enumerate(differentials):
        for key, coeff in diff_op.terms.items():
            if not coeff.is_constant():
                raise AlgebraError("differential of a unit-coefficient basis operator must have constant coefficients")
        for m in monos:
            reduced = nf_cache[m]
            if reduced.is_zero():
                # Coefficient monomial lies in the ideal; direction acts trivially.
                col_meta.append((s, m))
                col += 1
                continue
            for key, coeff in diff_op.terms.items():
                c = coeff.constant_value()
                for mono2, c2 in reduced.terms.items():
                    idx = row_for((key, mono2))
                    rows[idx][col] = rows[idx].get(col, Fraction(0)) + c * c2
            col_meta.append((s, m))
            col += 1

    target = gerstenhaber_square(p1)
    for key, coeff in target.terms.items():
        reduced = reduce(coeff)
        for mono2, c2 in reduced.terms.items():
            idx = row_for((key, mono2))
            rhs[idx] = rhs[idx] + c2

    solution, raw_conflicts = solve_sparse_linear(rows, rhs, col)
    if solution is None:
        conflicts = [
            (labels[seed][0], labels[seed][1], value)
            for seed, value in raw_conflicts
        ]
        return SecondOrderReport(None, col, len(rows), conflicts)

    terms: Dict[OpKey, Poly] = {}
    for u, value in enumerate(solution):
        if not value:
            continue
        s, m = col_meta[u]
        a, b = pairs[s]
        contrib = Poly.monomial(m) * value
        for key in ({(a, b)} if a == b else {(a, b), (b, a)}):
            terms[key] = terms.get(key, Poly.zero(n)) + contrib
    correction = PolyDiffOp(2, n, terms)

    residual = target - bar_differential(correction)
    for coeff in residual.terms.values():
        if not reduce(coeff).is_zero():
            raise AlgebraError("internal solver error: residual does not vanish")
    return SecondOrderReport(correction, col, len(rows), [])
