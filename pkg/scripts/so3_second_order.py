#!/usr/bin/env python3
"""Second-order star correction for the rotation bracket on a quadric.

Solves the linear system for p2 with the defect reduced modulo (f),
2f = x^2 + y^2 + s*z^2, then rechecks the result by assembling the
truncated product and reducing its associativity defect.
"""

import argparse
import time
from fractions import Fraction

from poisquant import (
    Poly,
    StarTruncation,
    buchberger,
    format_poly,
    from_bivector,
    jacobian_bracket,
    solve_p2,
    star_assoc_defect,
    vanishes_mod_ideal,
)

NAMES = ["x", "y", "z"]


def op_str(op):
    if op.is_zero():
        return "0"
    parts = []
    for key, coeff in op.sorted_terms():
        blocks = "|".join(" ".join(str(e) for e in multi) for multi in key)
        parts.append(f"({format_poly(coeff, names=NAMES)})*D[{blocks}]")
    return " + ".join(parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sign", type=int, choices=[1, -1], default=1,
                    help="sign of the z^2 term in the quadric")
    ap.add_argument("--max-coeff-degree", type=int, default=2)
    ap.add_argument("--max-order", type=int, default=2)
    args = ap.parse_args()

    x, y, z = (Poly.variable(i, 3) for i in range(3))
    f = (x ** 2 + y ** 2 + z ** 2 * args.sign) * Fraction(1, 2)
    G = buchberger([f])
    p1 = from_bivector(jacobian_bracket(f))

    t0 = time.perf_counter()
    result = solve_p2(
        p1, basis=G, max_order=args.max_order,
        max_coeff_degree=args.max_coeff_degree,
    )
    dt = time.perf_counter() - t0

    print(f"unknowns {result.unknown_count}, equations {result.equation_count}, {dt:.2f}s")
    if not result.solved:
        print(f"no solution at these bounds; {len(result.conflicts)} conflicting rows")
        for key, mono, value in result.conflicts[:5]:
            print(f"  row {key} x^{mono}: leftover {value}")
        return 1

    print("p2 =", op_str(result.correction))
    star = StarTruncation(3, (p1, result.correction))
    defect = star_assoc_defect(star, 2)
    print("reduced second-order defect vanishes:", vanishes_mod_ideal(defect, G))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
