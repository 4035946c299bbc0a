"""Line-oriented session files: rings, named objects, and task lists.

Grammar (one statement per line, # starts a comment):

    ring <var> <var> ...
    order <lex|degrevlex>
    poly <name> = <polynomial expression>
    ideal <name> = <item>, <item>, ...
    bivector <name> = jacobian <item>
    bivector <name> = minor <item>, ... on <col> <col> ...
    bivector <name> = { (i,j): <expr>; (i,k): <expr>; ... }
    op <name> = <term> + <term> - ...     term: [<coeff> *] D[a b ..|c d ..]
    star <name> = <op name>, <op name>, ...
    surface <name> = <family>: <item>, <item>, ...
    task <task-name> <args...> [expect <value>]

An <item> is either the name of a previously defined polynomial or an inline
expression.  Column indices and bivector component indices are 1-based; the
exponent lists inside D[...] have one entry per ring variable.  Definitions
are built eagerly, so a bad line fails at its own line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .brackets import Bivector, jacobian_bracket, minor_bracket
from .errors import AlgebraError, ParseError
from .hochschild import PolyDiffOp, StarTruncation
from .ideal import GroebnerBasis, buchberger
from .k3atlas import SurfaceSpec
from .orders import DEGREVLEX, LEX, MonomialOrder, degrevlex, lex
from .polyring import Poly, parse_poly

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TASK_NAMES = frozenset(
    {
        "groebner",
        "nf",
        "member",
        "dimension",
        "bracket-of",
        "apply",
        "jacobiator",
        "lift-check",
        "poisson-check",
        "decompose3",
        "cocycle-check",
        "square",
        "assoc-defect",
        "solve-p2",
        "shuffle-check",
        "k3-verify",
    }
)

# Tasks whose boolean outcome is asserted even without an expect clause.
CHECK_TASKS = frozenset(
    {
        "lift-check",
        "poisson-check",
        "cocycle-check",
        "shuffle-check",
        "k3-verify",
        "solve-p2",
    }
)


@dataclass
class SessionTask:
    name: str
    args: List[str]
    expect: Optional[str]
    line: int
    text: str


@dataclass
class Session:
    """Parsed session: variable names, active order, bindings, task list."""

    variables: List[str] = field(default_factory=list)
    order: Optional[MonomialOrder] = None
    definitions: Dict[str, Tuple[str, object]] = field(default_factory=dict)
    tasks: List[SessionTask] = field(default_factory=list)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def lookup(self, kind: str, name: str, line: int) -> object:
        entry = self.definitions.get(name)
        if entry is None:
            raise ParseError(f"undefined name {name!r}", line, 1)
        if entry[0] != kind:
            raise ParseError(
                f"{name!r} is defined as {entry[0]!r}, expected {kind!r}", line, 1
            )
        return entry[1]


def _split_top_level(text: str, sep: str) -> List[str]:
    """Split on a separator character outside (), [], {}."""
    parts: List[str] = []
    depth = 0
    current: List[str] = []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


class SessionParser:
    def __init__(self, text: str, order_override: Optional[str] = None):
        self.text = text
        self.order_override = order_override
        self.session = Session()

    def parse(self) -> Session:
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            self._statement(line, lineno)
        if self.session.order is None and self.session.variables:
            self.session.order = self._make_order(DEGREVLEX)
        return self.session

    # -- statement dispatch --------------------------------------------------

    def _statement(self, line: str, lineno: int) -> None:
        head = line.split(None, 1)[0]
        rest = line[len(head) :].strip()
        if head == "ring":
            self._ring(rest, lineno)
        elif head == "order":
            self._order(rest, lineno)
        elif head in {"poly", "ideal", "bivector", "op", "star", "surface"}:
            if "=" not in rest:
                raise ParseError(f"{head} statement needs '='", lineno, 1)
            name, rhs = rest.split("=", 1)
            name = name.strip()
            rhs = rhs.strip()
            self._check_fresh_name(name, lineno)
            builder = getattr(self, "_def_" + head)
            self.session.definitions[name] = (head, builder(rhs, lineno))
        elif head == "task":
            self._task(rest, lineno, line)
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, 1)

    def _ring(self, rest: str, lineno: int) -> None:
        if self.session.variables:
            raise ParseError("ring is already declared", lineno, 1)
        names = rest.split()
        if not names:
            raise ParseError("ring needs at least one variable", lineno, 1)
        seen = set()
        for n in names:
            if not _NAME_RE.match(n):
                raise ParseError(f"bad variable name {n!r}", lineno, 1)
            if n in seen:
                raise ParseError(f"duplicate variable {n!r}", lineno, 1)
            seen.add(n)
        self.session.variables = names

    def _make_order(self, kind: str) -> MonomialOrder:
        arity = self.session.arity
        return lex(arity) if kind == LEX else degrevlex(arity)

    def _order(self, rest: str, lineno: int) -> None:
        kind = rest.strip()
        if kind not in {LEX, DEGREVLEX}:
            raise ParseError(f"unknown order {kind!r}", lineno, 1)
        self._need_ring(lineno)
        if self.order_override is not None:
            kind = self.order_override
        self.session.order = self._make_order(kind)

    def _need_ring(self, lineno: int) -> None:
        if not self.session.variables:
            raise ParseError("no ring declared yet", lineno, 1)

    def _check_fresh_name(self, name: str, lineno: int) -> None:
        if not _NAME_RE.match(name):
            raise ParseError(f"bad name {name!r}", lineno, 1)
        if name in self.session.definitions or name in self.session.variables:
            raise ParseError(f"name {name!r} is already bound", lineno, 1)

    def _active_order(self) -> MonomialOrder:
        if self.session.order is None:
            self.session.order = self._make_order(
                self.order_override or DEGREVLEX
            )
        return self.session.order

    # -- expression helpers ----------------------------------------------------

    def _poly(self, text: str, lineno: int) -> Poly:
        self._need_ring(lineno)
        return parse_poly(text, self.session.variables, line=lineno)

    def _item(self, text: str, lineno: int) -> Poly:
        text = text.strip()
        entry = self.definitions_get(text)
        if entry is not None:
            kind, value = entry
            if kind != "poly":
                raise ParseError(
                    f"{text!r} is defined as {kind!r}, expected a polynomial",
                    lineno,
                    1,
                )
            return value  # type: ignore[return-value]
        return self._poly(text, lineno)

    def definitions_get(self, name: str):
        if _NAME_RE.match(name):
            return self.session.definitions.get(name)
        return None

    def _items(self, text: str, lineno: int) -> List[Poly]:
        chunks = [c for c in _split_top_level(text, ",")]
        if any(not c.strip() for c in chunks):
            raise ParseError("empty item in list", lineno, 1)
        return [self._item(c, lineno) for c in chunks]

    # -- definition builders -----------------------------------------------------

    def _def_poly(self, rhs: str, lineno: int) -> Poly:
        return self._poly(rhs, lineno)

    def _def_ideal(self, rhs: str, lineno: int) -> GroebnerBasis:
        gens = self._items(rhs, lineno)
        try:
            return buchberger(gens, order=self._active_order())
        except AlgebraError as exc:
            raise ParseError(f"ideal construction failed: {exc}", lineno, 1)

    def _def_bivector(self, rhs: str, lineno: int) -> Bivector:
        if rhs.startswith("jacobian"):
            f = self._item(rhs[len("jacobian") :], lineno)
            try:
                return jacobian_bracket(f)
            except AlgebraError as exc:
                raise ParseError(str(exc), lineno, 1)
        if rhs.startswith("minor"):
            body = rhs[len("minor") :].strip()
            idx = self._find_keyword(body, "on")
            if idx is None:
                raise ParseError("minor bivector needs 'on <columns>'", lineno, 1)
            items_text, cols_text = body[:idx], body[idx + 2 :]
            gens = self._items(items_text, lineno)
            cols = self._indices(cols_text, lineno)
            try:
                return minor_bracket(gens, cols)
            except AlgebraError as exc:
                raise ParseError(str(exc), lineno, 1)
        if rhs.startswith("{") and rhs.endswith("}"):
            return self._component_bivector(rhs[1:-1], lineno)
        raise ParseError(
            "bivector needs 'jacobian', 'minor', or '{ (i,j): expr; ... }'",
            lineno,
            1,
        )

    @staticmethod
    def _find_keyword(text: str, word: str) -> Optional[int]:
        depth = 0
        for i in range(len(text) - len(word) + 1):
            ch = text[i]
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
            if depth == 0 and text[i : i + len(word)] == word:
                before = text[i - 1] if i > 0 else " "
                after = text[i + len(word)] if i + len(word) < len(text) else " "
                if before.isspace() and after.isspace():
                    return i
        return None

    def _indices(self, text: str, lineno: int) -> List[int]:
        self._need_ring(lineno)
        out = []
        for tok in text.split():
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError(f"bad 1-based index {tok!r}", lineno, 1)
            value = int(tok)
            if value > self.session.arity:
                raise ParseError(
                    f"index {value} exceeds the {self.session.arity}-variable ring",
                    lineno,
                    1,
                )
            out.append(value - 1)
        return out

    def _component_bivector(self, body: str, lineno: int) -> Bivector:
        self._need_ring(lineno)
        comps: Dict[Tuple[int, int], Poly] = {}
        for chunk in _split_top_level(body, ";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            m = re.match(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*:(.*)\Z", chunk, re.S)
            if not m:
                raise ParseError(
                    "bivector component must look like (i,j): expr", lineno, 1
                )
            i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
            if not 0 <= i < j < self.session.arity:
                raise ParseError(
                    f"component indices ({m.group(1)},{m.group(2)}) must be "
                    "1-based with i < j inside the ring",
                    lineno,
                    1,
                )
            if (i, j) in comps:
                raise ParseError(
                    f"duplicate component ({m.group(1)},{m.group(2)})", lineno, 1
                )
            comps[(i, j)] = self._poly(m.group(3), lineno)
        return Bivector(self.session.arity, comps)

    def _def_op(self, rhs: str, lineno: int) -> PolyDiffOp:
        self._need_ring(lineno)
        n = self.session.arity
        terms: Dict[Tuple[Tuple[int, ...], ...], Poly] = {}
        arity: Optional[int] = None
        for sign, chunk in self._signed_chunks(rhs, lineno):
            m = re.search(r"D\[([^\]]*)\]\s*\Z", chunk)
            if not m:
                raise ParseError(
                    "operator term must end with D[...]", lineno, 1
                )
            coeff_text = chunk[: m.start()].strip()
            if coeff_text.endswith("*"):
                coeff_text = coeff_text[:-1].strip()
            coeff = (
                Poly.constant(1, n)
                if not coeff_text
                else self._poly(coeff_text, lineno)
            )
            if sign < 0:
                coeff = -coeff
            groups = m.group(1).split("|")
            key = []
            for g in groups:
                toks = g.split()
                if len(toks) != n:
                    raise ParseError(
                        f"each D[...] block needs {n} exponents", lineno, 1
                    )
                if any(not t.isdigit() for t in toks):
                    raise ParseError("exponents must be nonnegative integers", lineno, 1)
                key.append(tuple(int(t) for t in toks))
            if arity is None:
                arity = len(key)
            elif arity != len(key):
                raise ParseError("operator terms disagree on arity", lineno, 1)
            k = tuple(key)
            terms[k] = terms.get(k, Poly.zero(n)) + coeff
        if arity is None:
            raise ParseError("operator needs at least one D[...] term", lineno, 1)
        try:
            return PolyDiffOp(arity, n, terms)
        except AlgebraError as exc:
            raise ParseError(str(exc), lineno, 1)

    @staticmethod
    def _signed_chunks(text: str, lineno: int):
        """Split at top-level + and - into (sign, chunk) pairs.  A minus
        inside a coefficient must be parenthesized; a bare sign before any
        content folds into the next chunk's sign."""
        depth = 0
        sign = 1
        current: List[str] = []
        chunks: List[Tuple[int, str]] = []
        for ch in text:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
            if depth == 0 and ch in "+-":
                if "".join(current).strip():
                    chunks.append((sign, "".join(current)))
                    current = []
                    sign = 1 if ch == "+" else -1
                else:
                    sign = sign if ch == "+" else -sign
            else:
                current.append(ch)
        if "".join(current).strip():
            chunks.append((sign, "".join(current)))
        if not chunks:
            raise ParseError("empty operator expression", lineno, 1)
        return chunks

    def _def_star(self, rhs: str, lineno: int) -> StarTruncation:
        self._need_ring(lineno)
        names = [c.strip() for c in _split_top_level(rhs, ",")]
        corrections = []
        for nm in names:
            op = self.session.lookup("op", nm, lineno)
            corrections.append(op)
        try:
            return StarTruncation(self.session.arity, tuple(corrections))
        except AlgebraError as exc:
            raise ParseError(str(exc), lineno, 1)

    def _def_surface(self, rhs: str, lineno: int) -> SurfaceSpec:
        if ":" not in rhs:
            raise ParseError("surface needs '<family>: <equations>'", lineno, 1)
        family, eqs_text = rhs.split(":", 1)
        eqs = self._items(eqs_text, lineno)
        try:
            return SurfaceSpec(family.strip(), tuple(eqs))
        except AlgebraError as exc:
            raise ParseError(str(exc), lineno, 1)

    # -- tasks ------------------------------------------------------------------

    def _task(self, rest: str, lineno: int, text: str) -> None:
        tokens = rest.split()
        if not tokens:
            raise ParseError("task needs a name", lineno, 1)
        name = tokens[0]
        if name not in _TASK_NAMES:
            raise ParseError(f"unknown task {name!r}", lineno, 1)
        args = tokens[1:]
        expect = None
        if "expect" in args:
            pos = args.index("expect")
            tail = args[pos + 1 :]
            if len(tail) != 1:
                raise ParseError("expect needs exactly one value", lineno, 1)
            expect = tail[0]
            args = args[:pos]
        self.session.tasks.append(SessionTask(name, args, expect, lineno, text))


def parse_session(text: str, order_override: Optional[str] = None) -> Session:
    return SessionParser(text, order_override).parse()
