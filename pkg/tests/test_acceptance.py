"""Acceptance gate: eleven exact criteria, one pass/fail line each.

Every check is exact rational arithmetic; the only tolerances are wall-clock
bounds on the slower criteria.  Lines go to stdout so a plain pytest -s run
reads as a checklist.
"""

import random
import time
from fractions import Fraction
from itertools import combinations, permutations

from poisquant import (
    Poly,
    PolyDiffOp,
    StarTruncation,
    apply_bivector,
    bar_differential,
    buchberger,
    combine,
    cubic_quadric_surface,
    cyclic_jacobi_operator,
    dimension,
    eulerian_projector,
    fermat_quartic,
    from_bivector,
    gerstenhaber_square,
    ideal_member,
    jacobian_bracket,
    jacobiator,
    lift_check,
    minor_bracket,
    multiplication_op,
    normal_form,
    singular_quartic,
    solve_p2,
    star_assoc_defect,
    triple_quadric_surface,
    vanishes_mod_ideal,
    verify_surface,
)
from poisquant.hochschild import PERMS3, convolve_weights

from helpers import rand_bivector, rand_op, rand_poly, variables


def report(number, label, elapsed, bound=None):
    line = f"criterion {number:2d}: PASS - {label} ({elapsed:.2f}s"
    if bound is not None:
        line += f", bound {bound:.0f}s"
    line += ")"
    print(line)


def test_criterion_01_bar_differential_nilpotence():
    started = time.perf_counter()
    rng = random.Random(20260101)
    for trial in range(100):
        ring_arity = 1 + trial % 4
        arity = 1 + trial % 2
        h = rand_op(rng, arity, ring_arity, max_order=2, max_coeff_degree=3)
        assert bar_differential(bar_differential(h)).is_zero()
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    report(1, "d(d(h)) = 0 for 100 seeded operators", elapsed, 30)


def test_criterion_02_projector_identities():
    started = time.perf_counter()
    rng = random.Random(20260202)
    projectors = [eulerian_projector(i) for i in (1, 2, 3)]
    for _ in range(50):
        op = rand_op(rng, 3, 1 + rng.randint(1, 3), max_order=2, max_coeff_degree=2)
        parts = [p.apply(op) for p in projectors]
        assert parts[0] + parts[1] + parts[2] == op
        for i, pi in enumerate(projectors):
            for j, part in enumerate(parts):
                applied = pi.apply(part)
                if i == j:
                    assert applied == part
                else:
                    assert applied.is_zero()
    # once more as a literal 6x6 rational matrix identity
    index = {pi: k for k, pi in enumerate(PERMS3)}

    def matrix(weights):
        m = [[Fraction(0)] * 6 for _ in range(6)]
        for col, basis_perm in enumerate(PERMS3):
            for pi, w in convolve_weights(weights, {basis_perm: Fraction(1)}).items():
                m[index[pi]][col] += w
        return m

    mats = [matrix(p.weights) for p in projectors]
    ident = [[Fraction(int(r == c)) for c in range(6)] for r in range(6)]
    zero = [[Fraction(0)] * 6 for _ in range(6)]
    for i in range(3):
        for j in range(3):
            prod = [
                [sum(mats[i][r][k] * mats[j][k][c] for k in range(6)) for c in range(6)]
                for r in range(6)
            ]
            assert prod == (mats[i] if i == j else zero)
    total = [
        [mats[0][r][c] + mats[1][r][c] + mats[2][r][c] for c in range(6)]
        for r in range(6)
    ]
    assert total == ident
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    report(2, "Eulerian idempotents on 50 operators and as 6x6 matrices", elapsed, 10)


def test_criterion_03_obstruction_decomposition():
    started = time.perf_counter()
    rng = random.Random(20260303)
    e2 = eulerian_projector(2)
    e3 = eulerian_projector(3)
    for trial in range(25):
        n = 2 + trial % 3
        p = from_bivector(rand_bivector(rng, n, 2))
        assert p.transpose() == -p
        square = gerstenhaber_square(p)
        assert e2.apply(square).is_zero()
        assert e3.apply(square) == cyclic_jacobi_operator(p) * Fraction(2, 3)
    elapsed = time.perf_counter() - started
    report(3, "square splits: e2 part 0, e3 part 2/3 of the Jacobi sum, 25 cases", elapsed)


def test_criterion_04_so3_and_cone():
    started = time.perf_counter()
    x, y, z = variables(3)
    # the sign of the quadric travels into exactly one bracket value
    plus = (x ** 2 + y ** 2 + z ** 2) * Fraction(1, 2)
    minus = (x ** 2 + y ** 2 - z ** 2) * Fraction(1, 2)
    for f, xy_value in ((plus, z), (minus, -z)):
        q = jacobian_bracket(f)
        assert apply_bivector(q, x, y) == xy_value
        assert apply_bivector(q, y, z) == x
        assert apply_bivector(q, z, x) == y
        assert jacobiator(q).is_zero()
        assert lift_check(q, buchberger([f]))
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    report(4, "rotation and cone brackets: cyclic values, Jacobi, lifting", elapsed, 1)


def test_criterion_05_minor_bracket_lifting_identity():
    started = time.perf_counter()
    rng = random.Random(20260505)
    for _ in range(20):
        n = rng.randint(3, 6)
        m = rng.randint(1, min(3, n - 2))
        fs = [rand_poly(rng, n, 2, max_terms=3, nonzero=True) for _ in range(m)]
        K = sorted(rng.sample(range(n), m + 2))
        q = minor_bracket(fs, K)
        a = rand_poly(rng, n, 2)
        b = rand_poly(rng, n, 2)
        for f_s in fs:
            lhs = apply_bivector(q, f_s * a, b) - f_s * apply_bivector(q, a, b)
            assert lhs.is_zero()
    elapsed = time.perf_counter() - started
    report(5, "P(f*a, b) = f*P(a, b) identically, 20 random instances", elapsed)


def test_criterion_06_scaled_gradient_brackets_are_poisson():
    started = time.perf_counter()
    rng = random.Random(20260606)
    for _ in range(10):
        f = rand_poly(rng, 3, 3, max_terms=4, nonzero=True)
        f = f - Poly.constant(f.coefficient((0, 0, 0)), 3)
        if f.is_zero():
            f = variables(3)[0] ** 3
        e = rand_poly(rng, 3, 2, max_terms=3, nonzero=True)
        q = combine([e], [jacobian_bracket(f)])
        G = buchberger([f])
        assert all(
            normal_form(comp, G).is_zero()
            for _, comp in jacobiator(q).sorted_items()
        )
    elapsed = time.perf_counter() - started
    report(6, "e-scaled gradient brackets satisfy Jacobi mod (f), 10 pairs", elapsed)


def test_criterion_07_moyal_second_order():
    started = time.perf_counter()
    p1 = PolyDiffOp(
        2,
        2,
        {((1, 0), (0, 1)): Fraction(1), ((0, 1), (1, 0)): Fraction(-1)},
    )
    result = solve_p2(p1, max_order=2, max_coeff_degree=0)
    assert result.solved
    star = StarTruncation(2, (p1, result.correction))
    assert star_assoc_defect(star, 2).is_zero()
    # the textbook term is itself admissible
    explicit = PolyDiffOp(
        2,
        2,
        {
            ((2, 0), (0, 2)): Fraction(1, 2),
            ((0, 2), (2, 0)): Fraction(1, 2),
            ((1, 1), (1, 1)): Fraction(-1),
        },
    )
    star2 = StarTruncation(2, (p1, explicit))
    assert star_assoc_defect(star2, 2).is_zero()
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    report(7, "constant symplectic p2 solved and the explicit term admitted", elapsed, 10)


def test_criterion_08_hypersurface_second_order():
    started = time.perf_counter()
    x, y, z = variables(3)
    f = (x ** 2 + y ** 2 + z ** 2) * Fraction(1, 2)
    G = buchberger([f])
    p1 = from_bivector(jacobian_bracket(f))
    result = solve_p2(p1, basis=G, max_order=2, max_coeff_degree=2)
    assert result.solved
    star = StarTruncation(3, (p1, result.correction))
    defect = star_assoc_defect(star, 2)
    assert vanishes_mod_ideal(defect, G)
    elapsed = time.perf_counter() - started
    assert elapsed < 300.0
    report(8, "rotation bracket p2 mod the sphere: reduced defect 0", elapsed, 300)


def test_criterion_09_k3_surfaces_glue():
    started = time.perf_counter()
    surfaces = [
        ("Fermat quartic", fermat_quartic()),
        ("cubic-quadric intersection", cubic_quadric_surface()),
        ("triple quadric intersection", triple_quadric_surface()),
        ("singular quartic", singular_quartic()),
    ]
    for label, spec in surfaces:
        result = verify_surface(spec)
        assert result["pass"], label
        assert all(c["lift"] and c["poisson"] for c in result["charts"]), label
        assert all(o["verdict"] for o in result["overlaps"]), label
    elapsed = time.perf_counter() - started
    assert elapsed < 600.0
    report(9, "four surface atlases: chart checks and overlap certificates", elapsed, 600)


def test_criterion_10_cross_oracle_consistency():
    started = time.perf_counter()
    rng = random.Random(20261010)
    agree = 0
    for trial in range(50):
        n = rng.randint(3, 4)
        m = rng.randint(1, n - 2)
        gens = [rand_poly(rng, n, 2, max_terms=3, nonzero=True) for _ in range(m)]
        G = buchberger(gens)
        if trial % 2 == 0:
            # constructed to lift: a scaled minor bracket of the generators
            K = sorted(rng.sample(range(n), m + 2))
            e = rand_poly(rng, n, 1, max_terms=2, nonzero=True)
            q = combine([e], [minor_bracket(gens, K)])
        else:
            q = rand_bivector(rng, n, 2)
        verdict = lift_check(q, G)
        xs = [Poly.variable(j, n) for j in range(n)]
        sampled = all(
            ideal_member(apply_bivector(q, f_s, xj), G)
            for f_s in gens
            for xj in xs
        )
        assert verdict == sampled
        if verdict:
            a = rand_poly(rng, n, 2)
            for f_s in gens:
                assert ideal_member(
                    apply_bivector(q, f_s * a, xs[rng.randrange(n)]), G
                )
        agree += 1
    assert agree == 50
    for _ in range(50):
        n = rng.randint(3, 4)
        q = rand_bivector(rng, n, 2)
        j = jacobiator(q)
        xs = [Poly.variable(k, n) for k in range(n)]
        for (a, b, c) in combinations(range(n), 3):
            nested = (
                apply_bivector(q, apply_bivector(q, xs[a], xs[b]), xs[c])
                + apply_bivector(q, apply_bivector(q, xs[b], xs[c]), xs[a])
                + apply_bivector(q, apply_bivector(q, xs[c], xs[a]), xs[b])
            )
            comp = j.components.get((a, b, c), Poly.zero(n))
            assert comp == nested
    elapsed = time.perf_counter() - started
    report(10, "lifting and Jacobi formulas agree with sampled values, 50 + 50", elapsed)


def test_criterion_11_groebner_layer():
    started = time.perf_counter()
    x, y, z = variables(3)
    gens = [x * y - z ** 2, x ** 2 - y * z, y ** 2 - x * z]
    bases = []
    for perm in permutations(gens):
        G = buchberger(list(perm))
        bases.append(sorted(G.basis, key=str))
    assert all(b == bases[0] for b in bases)
    G = buchberger(gens)
    # S-polynomials of the reduced basis reduce to zero
    for f, g in combinations(G.basis, 2):
        (mf, cf), (mg, cg) = f.leading(G.order), g.leading(G.order)
        l = tuple(max(a, b) for a, b in zip(mf, mg))
        sp = Poly.monomial(tuple(a - b for a, b in zip(l, mf)), 1 / cf) * f - Poly.monomial(
            tuple(a - b for a, b in zip(l, mg)), 1 / cg
        ) * g
        assert normal_form(sp, G).is_zero()
    rng = random.Random(20261111)
    for _ in range(10):
        p = rand_poly(rng, 3, 3, max_terms=4)
        assert normal_form(normal_form(p, G), G) == normal_form(p, G)
    assert dimension(buchberger([x])) == 2
    assert dimension(buchberger([x, y])) == 1
    assert dimension(buchberger([x ** 2 + y ** 2 + z ** 2])) == 2
    elapsed = time.perf_counter() - started
    report(11, "basis uniqueness, S-poly reduction, NF idempotence, dimensions", elapsed)
