"""Exact sparse linear algebra over the rationals.

solve_sparse_linear performs fraction-free Gauss-Jordan elimination on
integer-cleared rows with greedy Markowitz-style pivoting.  It returns a
particular solution (free variables set to zero) or, when the system is
inconsistent, the labels of equations that survived elimination as 0 = c.
Each working row remembers the original equation that seeded it, so the
conflict report points at concrete equations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple


def _normalize(coeffs: Dict[int, int], rhs: int) -> Tuple[Dict[int, int], int]:
    g = abs(rhs)
    for v in coeffs.values():
        g = gcd(g, abs(v))
        if g == 1:
            return coeffs, rhs
    if g > 1:
        coeffs = {c: v // g for c, v in coeffs.items()}
        rhs //= g
    return coeffs, rhs


def solve_sparse_linear(
    rows: Sequence[Dict[int, Fraction]],
    rhs: Sequence[Fraction],
    ncols: int,
) -> Tuple[Optional[List[Fraction]], List[Tuple[int, Fraction]]]:
    """Solve A x = b exactly.

    rows[i] maps column -> rational coefficient; returns (solution, conflicts)
    where solution is a length-ncols Fraction vector or None, and conflicts
    lists (seed_row_index, leftover_value) for unsatisfiable equations.
    """
    work: List[Tuple[Dict[int, int], int, int]] = []
    for seed, (row, b) in enumerate(zip(rows, rhs)):
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        denom = denom * b.denominator // gcd(denom, b.denominator)
        coeffs = {c: int(v * denom) for c, v in row.items() if v}
        bi = int(b * denom)
        coeffs, bi = _normalize(coeffs, bi)
        if not coeffs:
            if bi:
                return None, [(seed, Fraction(bi))]
            continue
        work.append((coeffs, bi, seed))

    col_rows: Dict[int, set] = {}
    for rid, (coeffs, _, _) in enumerate(work):
        for c in coeffs:
            col_rows.setdefault(c, set()).add(rid)

    pivot_of_row: Dict[int, int] = {}
    unused = set(range(len(work)))

    while unused:
        rid = min(
            unused,
            key=lambda r: (
                len(work[r][0]),
                min((len(col_rows[c]) for c in work[r][0]), default=0),
                r,
            ),
        )
        unused.discard(rid)
        coeffs, b, seed = work[rid]
        if not coeffs:
            continue
        col = min(coeffs, key=lambda c: (len(col_rows[c]), c))
        p = coeffs[col]
        pivot_of_row[rid] = col
        for other in list(col_rows[col]):
            if other == rid:
                continue
            ocoeffs, ob, oseed = work[other]
            r = ocoeffs[col]
            new: Dict[int, int] = {}
            for c, v in ocoeffs.items():
                nv = p * v
                if c in coeffs:
                    nv -= r * coeffs[c]
                if nv:
                    new[c] = nv
                else:
                    col_rows[c].discard(other)
            for c, v in coeffs.items():
                if c not in ocoeffs:
                    nv = -r * v
                    if nv:
                        new[c] = nv
                        col_rows.setdefault(c, set()).add(other)
            nb = p * ob - r * b
            new, nb = _normalize(new, nb)
            work[other] = (new, nb, oseed)
        col_rows[col] = {rid}

    conflicts: List[Tuple[int, Fraction]] = []
    for rid, (coeffs, b, seed) in enumerate(work):
        if not coeffs and b:
            conflicts.append((seed, Fraction(b)))
    if conflicts:
        conflicts.sort()
        return None, conflicts

    solution = [Fraction(0)] * ncols
    for rid, col in pivot_of_row.items():
        coeffs, b, _ = work[rid]
        if coeffs:
            solution[col] = Fraction(b, coeffs[col])
    return solution, []
