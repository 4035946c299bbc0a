"""Bivectors, determinant brackets, the jacobiator, and lifting checks.

A bivector stores the strictly upper components q^{ij} (i < j); q^{ji} is the
implicit negative.  Applying one to a pair of polynomials realizes the skew
biderivation sum_{i<j} q^{ij} (d_i a d_j b - d_j a d_i b).

jacobian_bracket and minor_bracket build the bivectors whose application
reproduces bordered Jacobian determinants: rows are the gradients of the
ideal generators followed by the gradients of the two arguments, columns a
chosen index set.  The minor_bracket sign per component pair comes from
Laplace expansion of that determinant along its last two rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import AlgebraError, ArityMismatchError
from .ideal import GroebnerBasis, normal_form
from .polyring import Poly, PolyMatrix, determinant, jacobian_matrix

Scalar = Union[int, Fraction]


@dataclass
class Bivector:
    """Antisymmetric q^{ij} with polynomial components, i < j stored."""

    arity: int
    components: Dict[Tuple[int, int], Poly] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Tuple[int, int], Poly] = {}
        for (i, j), p in self.components.items():
            if not (0 <= i < j < self.arity):
                raise AlgebraError(f"bivector index pair ({i},{j}) out of range")
            if p.arity != self.arity:
                raise ArityMismatchError(self.arity, p.arity, "bivector component")
            if not p.is_zero():
                clean[(i, j)] = p
        self.components = clean

    def get(self, i: int, j: int) -> Poly:
        """Signed component, valid for any index order; q^{ii} = 0."""
        if i == j:
            return Poly.zero(self.arity)
        if i < j:
            return self.components.get((i, j), Poly.zero(self.arity))
        p = self.components.get((j, i))
        return -p if p is not None else Poly.zero(self.arity)

    def is_zero(self) -> bool:
        return not self.components

    def sorted_items(self):
        return sorted(self.components.items())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Bivector)
            and self.arity == other.arity
            and self.components == other.components
        )


@dataclass
class TriVector:
    """Alternating three-index coefficients, i < j < k stored."""

    arity: int
    components: Dict[Tuple[int, int, int], Poly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j, k), p in self.components.items():
            if not (0 <= i < j < k < self.arity):
                raise AlgebraError(f"trivector index triple ({i},{j},{k}) out of range")
            if not p.is_zero():
                clean[(i, j, k)] = p
        self.components = clean

    def is_zero(self) -> bool:
        return not self.components

    def sorted_items(self):
        return sorted(self.components.items())


def apply_bivector(q: Bivector, a: Poly, b: Poly) -> Poly:
    if a.arity != q.arity or b.arity != q.arity:
        raise ArityMismatchError(q.arity, a.arity if a.arity != q.arity else b.arity,
                                 "apply_bivector")
    da = [a.diff(i) for i in range(q.arity)]
    db = [b.diff(i) for i in range(q.arity)]
    acc = Poly.zero(q.arity)
    for (i, j), comp in q.components.items():
        acc = acc + comp * (da[i] * db[j] - da[j] * db[i])
    return acc


def jacobian_bracket(f: Poly) -> Bivector:
    """Three-variable bracket whose application is det(grad f; grad a; grad b)."""
    if f.arity != 3:
        raise AlgebraError(f"jacobian_bracket needs ring arity 3, got {f.arity}")
    return Bivector(
        3,
        {
            (0, 1): f.diff(2),
            (0, 2): -f.diff(1),
            (1, 2): f.diff(0),
        },
    )


def minor_bracket(fs: Sequence[Poly], K: Sequence[int]) -> Bivector:
    """Bracket from (m+2)x(m+2) bordered-Jacobian minors on the columns K.

    Component q^{ij} (i < j, both in K) is the m x m minor of the generator
    Jacobian on columns K minus {i, j}, times (-1)^(pos(i)+pos(j)+1) with
    positions taken inside sorted K.  Applying the bivector equals expanding
    the full determinant along the two argument-gradient rows, so components
    outside K vanish.
    """
    fs = list(fs)
    if not fs:
        raise AlgebraError("minor_bracket needs at least one generator")
    n = fs[0].arity
    m = len(fs)
    K = sorted(K)
    if len(set(K)) != len(K) or len(K) != m + 2:
        raise AlgebraError(f"index set must have size m+2 = {m + 2}, got {K}")
    if K[0] < 0 or K[-1] >= n:
        raise AlgebraError(f"index set {K} out of range for arity {n}")
    jac = jacobian_matrix(fs)
    comps: Dict[Tuple[int, int], Poly] = {}
    for a_pos in range(len(K)):
        for b_pos in range(a_pos + 1, len(K)):
            i, j = K[a_pos], K[b_pos]
            rest = [c for c in K if c != i and c != j]
            minor = determinant(jac.submatrix(range(m), rest))
            sign = -1 if (a_pos + b_pos) % 2 == 0 else 1
            comps[(i, j)] = minor * sign
    return Bivector(n, comps)


def combine(coeffs: Sequence[Union[Poly, Scalar]], brackets: Sequence[Bivector]) -> Bivector:
    """Componentwise linear combination; polynomial coefficients allowed."""
    if len(coeffs) != len(brackets):
        raise AlgebraError(
            f"combine needs matching lengths, got {len(coeffs)} coefficients "
            f"and {len(brackets)} brackets"
        )
    if not brackets:
        raise AlgebraError("combine of an empty list")
    n = brackets[0].arity
    for q in brackets[1:]:
        if q.arity != n:
            raise ArityMismatchError(n, q.arity, "combine")
    acc: Dict[Tuple[int, int], Poly] = {}
    for c, q in zip(coeffs, brackets):
        if not isinstance(c, Poly):
            c = Poly.constant(c, n)
        elif c.arity != n:
            raise ArityMismatchError(n, c.arity, "combine coefficient")
        for pair, comp in q.components.items():
            prev = acc.get(pair, Poly.zero(n))
            acc[pair] = prev + c * comp
    return Bivector(n, acc)


def jacobiator(q: Bivector) -> TriVector:
    """Component (i,j,k) is sum_l (q^{li} d_l q^{jk} + q^{lj} d_l q^{ki}
    + q^{lk} d_l q^{ij}); equals the cyclic Jacobi sum on (x_i, x_j, x_k)."""
    n = q.arity
    qc = [[q.get(i, j) for j in range(n)] for i in range(n)]
    dq = [[[qc[i][j].diff(l) for l in range(n)] for j in range(n)] for i in range(n)]
    comps: Dict[Tuple[int, int, int], Poly] = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc = Poly.zero(n)
                for l in range(n):
                    acc = acc + qc[l][i] * dq[j][k][l]
                    acc = acc + qc[l][j] * dq[k][i][l]
                    acc = acc + qc[l][k] * dq[i][j][l]
                comps[(i, j, k)] = acc
    return TriVector(n, comps)


def lift_check(q: Bivector, G: GroebnerBasis, gens: Optional[Sequence[Poly]] = None) -> bool:
    """True when contracting the generator gradients with q stays in the ideal,
    so the bracket descends to the quotient."""
    gens = list(gens) if gens is not None else list(G.generators)
    if q.arity != G.arity:
        raise ArityMismatchError(q.arity, G.arity, "lift_check")
    for f in gens:
        grads = [f.diff(j) for j in range(q.arity)]
        for i in range(q.arity):
            acc = Poly.zero(q.arity)
            for j in range(q.arity):
                if i != j:
                    acc = acc + q.get(i, j) * grads[j]
            if not normal_form(acc, G).is_zero():
                return False
    return True


def jacobi_defects(q: Bivector, G: GroebnerBasis) -> Dict[Tuple[int, int, int], Poly]:
    """Nonzero normal forms of the jacobiator components, keyed by triple."""
    out: Dict[Tuple[int, int, int], Poly] = {}
    for triple, comp in jacobiator(q).sorted_items():
        nf = normal_form(comp, G)
        if not nf.is_zero():
            out[triple] = nf
    return out


def is_poisson_mod_ideal(q: Bivector, G: GroebnerBasis) -> bool:
    """All jacobiator components reduce to zero; run lift_check first or the
    verdict says nothing about the quotient.  jacobi_defects names the failing
    triples and their nonzero normal forms."""
    return not jacobi_defects(q, G)


def bordered_determinant(fs: Sequence[Poly], a: Poly, b: Poly,
                         cols: Optional[Sequence[int]] = None) -> Poly:
    """det of rows (grad f_1; ...; grad f_m; grad a; grad b) on the given
    columns; the oracle form of the minor bracket."""
    fs = list(fs)
    n = a.arity
    cols = list(cols) if cols is not None else list(range(n))
    rows = [[f.diff(c) for c in cols] for f in fs]
    rows.append([a.diff(c) for c in cols])
    rows.append([b.diff(c) for c in cols])
    return determinant(PolyMatrix(len(rows), len(cols), rows))
