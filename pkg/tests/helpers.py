"""Seeded generators and independent oracles shared by the test suite.

The oracles are deliberately naive (permutation expansions, term-by-term
recursion, nested bracket values) so that failures in the optimized code
paths cannot hide behind shared machinery.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from typing import List, Sequence

from poisquant import Bivector, Poly, PolyDiffOp, apply_bivector
from poisquant.polyring import PolyMatrix


def rand_fraction(rng: random.Random, span: int = 4) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, 3)
    return Fraction(num, den)


def rand_monomial(rng: random.Random, arity: int, max_degree: int):
    mono = [0] * arity
    budget = rng.randint(0, max_degree)
    for _ in range(budget):
        mono[rng.randrange(arity)] += 1
    return tuple(mono)


def rand_poly(
    rng: random.Random,
    arity: int,
    max_degree: int,
    max_terms: int = 4,
    nonzero: bool = False,
) -> Poly:
    p = Poly.zero(arity)
    for _ in range(rng.randint(0, max_terms)):
        p = p + Poly.monomial(rand_monomial(rng, arity, max_degree), rand_fraction(rng))
    if nonzero and p.is_zero():
        p = Poly.monomial(rand_monomial(rng, arity, max_degree), 1)
    return p


def rand_bivector(rng: random.Random, arity: int, max_degree: int) -> Bivector:
    comps = {}
    for i in range(arity):
        for j in range(i + 1, arity):
            comps[(i, j)] = rand_poly(rng, arity, max_degree)
    return Bivector(arity, comps)


def rand_op(
    rng: random.Random,
    arity: int,
    ring_arity: int,
    max_order: int,
    max_coeff_degree: int,
    max_terms: int = 3,
) -> PolyDiffOp:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        key = tuple(
            rand_monomial(rng, ring_arity, max_order) for _ in range(arity)
        )
        terms[key] = rand_poly(rng, ring_arity, max_coeff_degree, nonzero=True)
    return PolyDiffOp(arity, ring_arity, terms)


# -- oracles ---------------------------------------------------------------


def perm_sign_oracle(word: Sequence[int]) -> int:
    inversions = sum(
        1
        for i in range(len(word))
        for j in range(i + 1, len(word))
        if word[i] > word[j]
    )
    return -1 if inversions % 2 else 1


def det_oracle(matrix: PolyMatrix) -> Poly:
    """Signed permutation expansion; exponential, fine for size <= 6."""
    n = matrix.rows
    assert matrix.cols == n
    total = Poly.zero(matrix.arity)
    for perm in permutations(range(n)):
        prod = Poly.constant(perm_sign_oracle(perm), matrix.arity)
        for i in range(n):
            prod = prod * matrix.entries[i][perm[i]]
        total = total + prod
    return total


def pow_oracle(p: Poly, k: int) -> Poly:
    acc = Poly.constant(1, p.arity)
    for _ in range(k):
        acc = acc * p
    return acc


def diff_oracle(p: Poly, index: int) -> Poly:
    """Term-by-term power rule."""
    out = Poly.zero(p.arity)
    for mono, coeff in p.terms.items():
        e = mono[index]
        if e == 0:
            continue
        lowered = tuple(
            v - 1 if t == index else v for t, v in enumerate(mono)
        )
        out = out + Poly.monomial(lowered, coeff * e)
    return out


def nested_jacobi_oracle(q: Bivector, a: Poly, b: Poly, c: Poly) -> Poly:
    """q(q(a,b),c) + q(q(b,c),a) + q(q(c,a),b), straight from values."""
    return (
        apply_bivector(q, apply_bivector(q, a, b), c)
        + apply_bivector(q, apply_bivector(q, b, c), a)
        + apply_bivector(q, apply_bivector(q, c, a), b)
    )


def op_values_equal(
    left: PolyDiffOp, right: PolyDiffOp, rng: random.Random, trials: int = 4
) -> bool:
    """Compare operators through their action on random arguments.  Weaker
    than term equality but independent of the term bookkeeping."""
    if left.arity != right.arity or left.ring_arity != right.ring_arity:
        return False
    n = left.ring_arity
    for _ in range(trials):
        args = [rand_poly(rng, n, 2, nonzero=True) for _ in range(left.arity)]
        if left.apply(args) != right.apply(args):
            return False
    return True


def variables(arity: int) -> List[Poly]:
    return [Poly.variable(i, arity) for i in range(arity)]
