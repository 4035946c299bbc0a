"""Polynomial layer: arithmetic laws, calculus, determinants, text round trips."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from poisquant import (
    AlgebraError,
    ParseError,
    Poly,
    PolyMatrix,
    determinant,
    degrevlex,
    format_poly,
    jacobian_matrix,
    lex,
    parse_poly,
)
from poisquant.orders import MonomialOrder

from helpers import det_oracle, diff_oracle, pow_oracle, rand_poly, variables

# hypothesis strategy: small exact polynomials in <= 3 variables
def polys(arity):
    monos = st.tuples(*[st.integers(0, 3) for _ in range(arity)])
    coeffs = st.fractions(
        min_value=-5, max_value=5, max_denominator=4
    )
    return st.dictionaries(monos, coeffs, max_size=4).map(
        lambda d: Poly(arity, d)
    )


@settings(max_examples=60, deadline=None)
@given(polys(2), polys(2), polys(2))
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(2)


@settings(max_examples=40, deadline=None)
@given(polys(3), st.integers(0, 4))
def test_pow_matches_repeated_multiplication(p, k):
    assert p ** k == pow_oracle(p, k)


@settings(max_examples=60, deadline=None)
@given(polys(3), st.integers(0, 2))
def test_diff_matches_term_oracle(p, i):
    assert p.diff(i) == diff_oracle(p, i)


@settings(max_examples=40, deadline=None)
@given(polys(3), polys(3), st.integers(0, 2))
def test_diff_leibniz(a, b, i):
    assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_zero_coefficients_never_stored():
    p = Poly(2, {(1, 0): Fraction(2), (0, 1): Fraction(0)})
    assert (0, 1) not in p.terms
    q = p - p
    assert q.terms == {}


def test_scalar_promotion_and_negation():
    x, y = variables(2)
    p = 2 * x + y * Fraction(1, 2)
    assert p.coefficient((1, 0)) == 2
    assert p.coefficient((0, 1)) == Fraction(1, 2)
    assert (-p) + p == Poly.zero(2)


def test_arity_mismatch_rejected():
    with pytest.raises(AlgebraError):
        Poly.variable(0, 2) + Poly.variable(0, 3)


def test_evaluate_specialize_embed():
    x, y, z = variables(3)
    p = x * y ** 2 - z + 3
    assert p.evaluate([1, 2, 5]) == 1 * 4 - 5 + 3
    # set y = 1 and drop it
    q = p.specialize_to_one(1)
    assert q.arity == 2
    assert q == variables(2)[0] - variables(2)[1] + 3
    big = p.embed(5, [0, 2, 4])
    assert big.arity == 5
    assert big.evaluate([1, 7, 2, 7, 5]) == p.evaluate([1, 2, 5])


def test_diff_multi_order_independent():
    rng = random.Random(3)
    p = rand_poly(rng, 3, 4, max_terms=6)
    assert p.diff_multi((2, 1, 0)) == p.diff(0).diff(0).diff(1)
    assert p.diff_multi((2, 1, 0)) == p.diff(1).diff(0).diff(0)


# -- determinants ------------------------------------------------------------


def test_determinant_small_sizes_match_permutation_expansion():
    rng = random.Random(17)
    for n in range(1, 5):
        entries = [
            [rand_poly(rng, 2, 2, max_terms=2) for _ in range(n)] for _ in range(n)
        ]
        m = PolyMatrix(n, n, entries)
        assert determinant(m) == det_oracle(m)


def test_determinant_bareiss_path_matches_oracle():
    # size 6 goes through fraction-free elimination, not cofactor expansion
    rng = random.Random(5)
    entries = [
        [Poly.constant(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), 1) for _ in range(6)]
        for _ in range(6)
    ]
    m = PolyMatrix(6, 6, entries)
    assert determinant(m) == det_oracle(m)


def test_determinant_row_swap_flips_sign():
    rng = random.Random(23)
    entries = [[rand_poly(rng, 2, 1, max_terms=2) for _ in range(3)] for _ in range(3)]
    m = PolyMatrix(3, 3, entries)
    swapped = PolyMatrix(3, 3, [entries[1], entries[0], entries[2]])
    assert determinant(swapped) == -determinant(m)


def test_determinant_repeated_row_is_zero():
    x, y = variables(2)
    row = [x, y]
    m = PolyMatrix(2, 2, [row, row])
    assert determinant(m).is_zero()


def test_determinant_rejects_non_square():
    x, y = variables(2)
    with pytest.raises(AlgebraError):
        determinant(PolyMatrix(1, 2, [[x, y]]))


def test_jacobian_matrix_entries():
    x, y, z = variables(3)
    fs = [x * y, y ** 2 - z]
    jac = jacobian_matrix(fs)
    assert jac.rows == 2 and jac.cols == 3
    assert jac.entries[0][0] == y
    assert jac.entries[0][1] == x
    assert jac.entries[1][2] == Poly.constant(-1, 3)


# -- monomial orders ------------------------------------------------------------


def test_order_keys_disagree_on_classic_example():
    # x*z vs y^2: lex ranks x*z higher, degrevlex ranks y^2 higher
    a, b = (1, 0, 1), (0, 2, 0)
    assert lex(3).greater(a, b)
    assert degrevlex(3).greater(b, a)
    # degrevlex compares total degree first
    assert degrevlex(3).greater((0, 0, 3), (1, 1, 0))
    # same total degree: smaller exponent in the last variable wins
    assert degrevlex(2).greater((2, 1), (1, 2))


def test_degrevlex_permutation_reorders_priority():
    plain = degrevlex(2)
    swapped = MonomialOrder("degrevlex", 2, (1, 0))
    assert plain.greater((2, 1), (1, 2))
    assert swapped.greater((1, 2), (2, 1))


def test_order_rejects_non_permutation():
    with pytest.raises(ValueError):
        MonomialOrder("degrevlex", 2, (0, 0))


# -- parsing and formatting -------------------------------------------------------


def test_parse_frozen_examples():
    names = ["x1", "x2", "x3"]
    x, y, z = variables(3)
    assert parse_poly("x1^2 + 2*x2*x3 - 3/2", names) == x ** 2 + 2 * y * z - Fraction(3, 2)
    assert parse_poly("-x1 + (x2 - x3)^2", names) == -x + (y - z) ** 2
    assert parse_poly("x1 - -x2", names) == x + y
    # unicode minus normalizes
    assert parse_poly("x1 − x2", names) == x - y
    assert parse_poly("7", names) == Poly.constant(7, 3)
    assert parse_poly("x1/2", names) == x * Fraction(1, 2)


def test_parse_errors_carry_positions():
    names = ["x1", "x2"]
    with pytest.raises(ParseError) as err:
        parse_poly("x1 + q", names, line=4)
    assert "line 4" in str(err.value)
    with pytest.raises(ParseError):
        parse_poly("x1^x2", names)
    with pytest.raises(ParseError):
        parse_poly("x1/0", names)
    with pytest.raises(ParseError):
        parse_poly("x1 x2", names)
    with pytest.raises(ParseError):
        parse_poly("(x1 + 2", names)


def test_format_frozen_examples():
    x, y, z = variables(3)
    assert format_poly(Poly.zero(3)) == "0"
    assert format_poly(x ** 2 - y * z * Fraction(1, 3)) == "x1^2 - 1/3*x2*x3"
    assert format_poly(-x) == "-x1"
    assert format_poly(Poly.constant(Fraction(-5, 4), 3)) == "-5/4"


@settings(max_examples=60, deadline=None)
@given(polys(3))
def test_format_parse_round_trip(p):
    names = ["x1", "x2", "x3"]
    assert parse_poly(format_poly(p), names) == p


@settings(max_examples=30, deadline=None)
@given(polys(2))
def test_format_deterministic_under_order(p):
    # same terms, different insertion histories, same string
    q = Poly(2, dict(reversed(list(p.terms.items()))))
    assert format_poly(p) == format_poly(q)
