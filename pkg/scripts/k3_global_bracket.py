#!/usr/bin/env python3
"""Gluing certificates for the chart brackets of a quartic or intersection surface.

Checks every affine chart (lifting + Jacobi modulo the chart ideal) and every
chart pair (exact reduction of the cleared bracket difference in the tripled
variable ring), then prints the JSON report.
"""

import argparse
import json
import sys
import time

from poisquant import (
    SurfaceSpec,
    cubic_quadric_surface,
    fermat_quartic,
    parse_poly,
    singular_quartic,
    triple_quadric_surface,
    verify_surface,
)

STOCK = {
    "fermat": fermat_quartic,
    "singular": singular_quartic,
    "x32": cubic_quadric_surface,
    "x222": triple_quadric_surface,
}

FAMILY_VARS = {"X4": 4, "X32": 5, "X222": 6}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("surface", choices=sorted(STOCK) + ["custom"],
                    help="stock surface, or 'custom' with --family/--equation")
    ap.add_argument("--family", choices=sorted(FAMILY_VARS))
    ap.add_argument("--equation", action="append", default=[],
                    help="homogeneous equation in z0..zN, repeatable")
    args = ap.parse_args()

    if args.surface == "custom":
        if not args.family or not args.equation:
            ap.error("custom surfaces need --family and --equation")
        n = FAMILY_VARS[args.family]
        names = [f"z{j}" for j in range(n)]
        eqs = tuple(parse_poly(text, names) for text in args.equation)
        spec = SurfaceSpec(args.family, eqs)
    else:
        spec = STOCK[args.surface]()

    t0 = time.perf_counter()
    report = verify_surface(spec)
    report["elapsed_s"] = round(time.perf_counter() - t0, 3)
    json.dump(report, sys.stdout, indent=2)
    print()
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
