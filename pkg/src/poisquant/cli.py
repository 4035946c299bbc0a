"""Command-line runner for session files.

Reads a session, validates every task against the bindings, executes the
tasks in order, and reports results on stdout (with timings) and optionally
as JSON (without timings, so identical inputs give identical bytes).

Exit codes: 0 all assertion tasks passed, 1 some task failed or errored,
2 the session file itself was rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Dict, List, Optional, Tuple

from .brackets import (
    apply_bivector,
    jacobi_defects,
    jacobiator,
    lift_check,
)
from .errors import AlgebraError, ParseError
from .hochschild import (
    PolyDiffOp,
    bar_differential,
    eulerian_projector,
    gerstenhaber_square,
    shuffle_vanishing_check,
    solve_p2,
    star_assoc_defect,
    vanishes_mod_ideal,
)
from .ideal import dimension, ideal_member, normal_form
from .k3atlas import verify_surface
from .polyring import Poly, format_poly, parse_poly
from .session import CHECK_TASKS, Session, SessionTask, parse_session

_BOOL_TOKENS = {"true": True, "false": False, "solved": True, "unsolved": False}


class TaskError(Exception):
    """Execution-time failure of one task."""


class Runner:
    def __init__(self, session: Session, flags: argparse.Namespace):
        self.session = session
        self.flags = flags

    # -- rendering -------------------------------------------------------------

    def poly_str(self, p) -> str:
        if p.arity == self.session.arity:
            return format_poly(p, self.session.order, self.session.variables)
        return format_poly(p)

    def bivector_str(self, q) -> List[str]:
        return [
            f"({i + 1},{j + 1}): {self.poly_str(c)}"
            for (i, j), c in q.sorted_items()
        ]

    def trivector_str(self, t) -> List[str]:
        return [
            f"({i + 1},{j + 1},{k + 1}): {self.poly_str(c)}"
            for (i, j, k), c in t.sorted_items()
        ]

    def op_str(self, op: PolyDiffOp) -> str:
        if op.is_zero():
            return "0"
        parts = []
        for key, coeff in op.sorted_terms():
            blocks = "|".join(" ".join(str(e) for e in multi) for multi in key)
            parts.append(f"({self.poly_str(coeff)})*D[{blocks}]")
        return " + ".join(parts)

    # -- argument resolution -----------------------------------------------------

    def _get(self, kind: str, name: str, task: SessionTask):
        return self.session.lookup(kind, name, task.line)

    def _parse_poly_arg(self, text: str, task: SessionTask):
        entry = self.session.definitions.get(text)
        if entry is not None:
            if entry[0] != "poly":
                raise ParseError(
                    f"{text!r} is defined as {entry[0]!r}, expected a polynomial",
                    task.line,
                    1,
                )
            return entry[1]
        return parse_poly(text, self.session.variables, line=task.line)

    def _need_args(self, task: SessionTask, low: int, high: Optional[int] = None):
        high = low if high is None else high
        if not low <= len(task.args) <= high:
            raise ParseError(
                f"task {task.name} takes {low}"
                + (f"..{high}" if high != low else "")
                + f" arguments, got {len(task.args)}",
                task.line,
                1,
            )

    def _expect_bool(self, task: SessionTask, default: Optional[bool]):
        if task.expect is None:
            return default
        if task.expect not in _BOOL_TOKENS:
            raise ParseError(
                f"task {task.name} expects true/false, got {task.expect!r}",
                task.line,
                1,
            )
        return _BOOL_TOKENS[task.expect]

    def _expect_zero(self, task: SessionTask) -> Optional[bool]:
        if task.expect is None:
            return None
        if task.expect not in {"zero", "nonzero"}:
            raise ParseError(
                f"task {task.name} expects zero/nonzero, got {task.expect!r}",
                task.line,
                1,
            )
        return task.expect == "zero"

    def _no_expect(self, task: SessionTask) -> None:
        if task.expect is not None:
            raise ParseError(
                f"task {task.name} takes no expect clause", task.line, 1
            )

    # -- validation (resolves names before anything runs) -------------------------

    def validate(self) -> None:
        for task in self.session.tasks:
            getattr(self, "_prep_" + task.name.replace("-", "_"))(task)

    def _prep_groebner(self, task):
        self._need_args(task, 1)
        self._no_expect(task)
        return (self._get("ideal", task.args[0], task),)

    def _prep_nf(self, task):
        self._need_args(task, 2)
        basis = self._get("ideal", task.args[0], task)
        p = self._parse_poly_arg(task.args[1], task)
        expected = (
            None
            if task.expect is None
            else self._parse_poly_arg(task.expect, task)
        )
        return basis, p, expected

    def _prep_member(self, task):
        self._need_args(task, 2)
        basis = self._get("ideal", task.args[0], task)
        p = self._parse_poly_arg(task.args[1], task)
        return basis, p, self._expect_bool(task, None)

    def _prep_dimension(self, task):
        self._need_args(task, 1)
        basis = self._get("ideal", task.args[0], task)
        expected = None
        if task.expect is not None:
            try:
                expected = int(task.expect)
            except ValueError:
                raise ParseError(
                    f"dimension expects an integer, got {task.expect!r}",
                    task.line,
                    1,
                )
        return basis, expected

    def _prep_bracket_of(self, task):
        self._need_args(task, 1)
        self._no_expect(task)
        return (self._get("bivector", task.args[0], task),)

    def _prep_apply(self, task):
        self._need_args(task, 3)
        q = self._get("bivector", task.args[0], task)
        a = self._parse_poly_arg(task.args[1], task)
        b = self._parse_poly_arg(task.args[2], task)
        expected = (
            None
            if task.expect is None
            else self._parse_poly_arg(task.expect, task)
        )
        return q, a, b, expected

    def _prep_jacobiator(self, task):
        self._need_args(task, 1)
        return self._get("bivector", task.args[0], task), self._expect_zero(task)

    def _prep_lift_check(self, task):
        self._need_args(task, 2)
        q = self._get("bivector", task.args[0], task)
        basis = self._get("ideal", task.args[1], task)
        return q, basis, self._expect_bool(task, True)

    def _prep_poisson_check(self, task):
        self._need_args(task, 2)
        q = self._get("bivector", task.args[0], task)
        basis = self._get("ideal", task.args[1], task)
        return q, basis, self._expect_bool(task, True)

    def _prep_decompose3(self, task):
        self._need_args(task, 1)
        self._no_expect(task)
        op = self._get("op", task.args[0], task)
        if op.arity != 3:
            raise ParseError("decompose3 needs an arity-3 operator", task.line, 1)
        return (op,)

    def _prep_cocycle_check(self, task):
        self._need_args(task, 1, 2)
        op = self._get("op", task.args[0], task)
        basis = (
            self._get("ideal", task.args[1], task) if len(task.args) == 2 else None
        )
        return op, basis, self._expect_bool(task, True)

    def _prep_square(self, task):
        self._need_args(task, 1)
        op = self._get("op", task.args[0], task)
        if op.arity != 2:
            raise ParseError("square needs a binary operator", task.line, 1)
        return op, self._expect_zero(task)

    def _prep_assoc_defect(self, task):
        self._need_args(task, 2)
        star = self._get("star", task.args[0], task)
        if not task.args[1].isdigit():
            raise ParseError(
                f"assoc-defect power must be a positive integer, got {task.args[1]!r}",
                task.line,
                1,
            )
        return star, int(task.args[1]), self._expect_zero(task)

    def _prep_solve_p2(self, task):
        args = list(task.args)
        if not args:
            raise ParseError("solve-p2 needs an operator name", task.line, 1)
        op = self._get("op", args.pop(0), task)
        basis = None
        max_order = 2
        max_coeff_degree = None
        while args:
            word = args.pop(0)
            if word == "mod":
                if not args:
                    raise ParseError("mod needs an ideal name", task.line, 1)
                basis = self._get("ideal", args.pop(0), task)
            elif word in {"max-order", "max-coeff-degree"}:
                if not args or not args[0].isdigit():
                    raise ParseError(
                        f"{word} needs a nonnegative integer", task.line, 1
                    )
                value = int(args.pop(0))
                if word == "max-order":
                    max_order = value
                else:
                    max_coeff_degree = value
            else:
                raise ParseError(
                    f"unknown solve-p2 argument {word!r}", task.line, 1
                )
        if self.flags.max_order is not None:
            max_order = self.flags.max_order
        if self.flags.max_coeff_degree is not None:
            max_coeff_degree = self.flags.max_coeff_degree
        return op, basis, max_order, max_coeff_degree, self._expect_bool(task, True)

    def _prep_shuffle_check(self, task):
        self._need_args(task, 1, 2)
        op = self._get("op", task.args[0], task)
        if op.arity != 3:
            raise ParseError("shuffle-check needs an arity-3 operator", task.line, 1)
        basis = (
            self._get("ideal", task.args[1], task) if len(task.args) == 2 else None
        )
        return op, basis, self._expect_bool(task, True)

    def _prep_k3_verify(self, task):
        self._need_args(task, 1)
        spec = self._get("surface", task.args[0], task)
        return spec, self._expect_bool(task, True)

    # -- execution ----------------------------------------------------------------

    def run_task(self, task: SessionTask) -> Tuple[dict, Optional[bool]]:
        payload = getattr(self, "_prep_" + task.name.replace("-", "_"))(task)
        return getattr(self, "_run_" + task.name.replace("-", "_"))(*payload)

    def _run_groebner(self, basis):
        return {"basis": [self.poly_str(p) for p in basis.basis]}, None

    def _run_nf(self, basis, p, expected):
        r = normal_form(p, basis)
        passed = None if expected is None else r == expected
        return {"normal_form": self.poly_str(r)}, passed

    def _run_member(self, basis, p, expected):
        value = ideal_member(p, basis)
        passed = None if expected is None else value == expected
        return {"member": value}, passed

    def _run_dimension(self, basis, expected):
        value = dimension(basis)
        passed = None if expected is None else value == expected
        return {"dimension": value}, passed

    def _run_bracket_of(self, q):
        return {"components": self.bivector_str(q)}, None

    def _run_apply(self, q, a, b, expected):
        value = apply_bivector(q, a, b)
        passed = None if expected is None else value == expected
        return {"value": self.poly_str(value)}, passed

    def _run_jacobiator(self, q, expect_zero):
        t = jacobiator(q)
        is_zero = not t.components
        passed = None if expect_zero is None else is_zero == expect_zero
        return {"components": self.trivector_str(t), "zero": is_zero}, passed

    def _run_lift_check(self, q, basis, expected):
        value = lift_check(q, basis)
        return {"lifts": value}, value == expected

    def _run_poisson_check(self, q, basis, expected):
        defects = jacobi_defects(q, basis)
        value = not defects
        result = {"poisson": value}
        if defects:
            result["defects"] = [
                f"({i + 1},{j + 1},{k + 1}): {self.poly_str(p)}"
                for (i, j, k), p in sorted(defects.items())
            ]
        return result, value == expected

    def _run_decompose3(self, op):
        result = {}
        for idx in (1, 2, 3):
            piece = eulerian_projector(idx).apply(op)
            result[f"e{idx}"] = self.op_str(piece)
        return result, None

    def _run_cocycle_check(self, op, basis, expected):
        d = bar_differential(op)
        value = d.is_zero() if basis is None else vanishes_mod_ideal(d, basis)
        return {"cocycle": value}, value == expected

    def _run_square(self, op, expect_zero):
        sq = gerstenhaber_square(op)
        passed = None if expect_zero is None else sq.is_zero() == expect_zero
        return {"square": self.op_str(sq), "zero": sq.is_zero()}, passed

    def _run_assoc_defect(self, star, power, expect_zero):
        defect = star_assoc_defect(star, power)
        is_zero = defect.is_zero()
        passed = None if expect_zero is None else is_zero == expect_zero
        return (
            {"power": power, "defect": self.op_str(defect), "zero": is_zero},
            passed,
        )

    def _run_solve_p2(self, op, basis, max_order, max_coeff_degree, expected):
        report = solve_p2(op, basis, max_order, max_coeff_degree)
        result = {
            "solved": report.solved,
            "unknowns": report.unknown_count,
            "equations": report.equation_count,
        }
        if report.correction is not None:
            result["correction"] = self.op_str(report.correction)
        if report.conflicts:
            result["conflicts"] = [
                {
                    "key": "|".join(
                        " ".join(str(e) for e in multi) for multi in key
                    ),
                    "monomial": self.poly_str(Poly.monomial(mono)),
                    "value": str(value),
                }
                for key, mono, value in report.conflicts
            ]
        return result, report.solved == expected

    def _run_shuffle_check(self, op, basis, expected):
        first, second = shuffle_vanishing_check(op, basis)
        value = first and second
        return (
            {"shuffle_1_2": first, "shuffle_2_1": second},
            value == expected,
        )

    def _run_k3_verify(self, spec, expected):
        report = verify_surface(spec)
        return report, report["pass"] == expected


def run_session(text: str, flags: argparse.Namespace, out=None):
    """Returns (report dict, exit code)."""
    # resolve stdout at call time so capture harnesses see the output
    out = out if out is not None else sys.stdout
    session = parse_session(text, order_override=flags.order)
    runner = Runner(session, flags)
    runner.validate()

    entries = []
    all_pass = True
    started = time.perf_counter()
    for task in session.tasks:
        t0 = time.perf_counter()
        entry: Dict[str, object] = {"line": task.line, "task": task.text}
        try:
            result, passed = runner.run_task(task)
            if passed is None:
                entry["status"] = "ok"
            else:
                entry["status"] = "ok" if passed else "fail"
            entry["result"] = result
        except AlgebraError as exc:
            entry["status"] = "error"
            entry["message"] = str(exc)
        dt = time.perf_counter() - t0
        entries.append(entry)
        ok = entry["status"] == "ok"
        all_pass = all_pass and ok
        print(
            f"[{entry['status']:>5}] line {task.line}: {task.name} ({dt:.3f}s)",
            file=out,
        )
        if not ok and flags.fail_fast:
            break
    total = time.perf_counter() - started
    report = {"tasks": entries, "pass": all_pass}
    if flags.seed is not None:
        report["seed"] = flags.seed
    print(
        ("PASS" if all_pass else "FAIL") + f" ({len(entries)} tasks, {total:.3f}s)",
        file=out,
    )
    return report, 0 if all_pass else 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="poisquant",
        description="Run a session file of exact Poisson/star-product checks.",
    )
    parser.add_argument("session", help="path to a session file")
    parser.add_argument("--json", metavar="PATH", help="write a JSON report")
    parser.add_argument(
        "--fail-fast",
        action="store_true",
        help="stop at the first failing task",
    )
    parser.add_argument("--max-order", type=int, default=None)
    parser.add_argument("--max-coeff-degree", type=int, default=None)
    parser.add_argument("--order", choices=["lex", "degrevlex"], default=None)
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="recorded in the report so reruns are comparable",
    )
    args = parser.parse_args(argv)

    try:
        with open(args.session, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        report, code = run_session(text, args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
