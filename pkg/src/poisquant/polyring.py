"""Sparse multivariate polynomials over exact rationals.

A polynomial is a map from exponent tuples to nonzero Fractions, tagged with
the ambient variable count.  Everything here is exact and immutable by
convention: operations build new values and never mutate inputs, so sharing
across threads is safe.

The module also provides polynomial matrices, Jacobians, exact determinants
(cofactor expansion up to 5x5, fraction-free elimination above), and the text
grammar used by the CLI: +, -, *, ^, parentheses, integer and rational
literals, declared variable names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import AlgebraError, ArityMismatchError, ParseError
from .orders import Monomial, MonomialOrder, degrevlex

Scalar = Union[int, Fraction]


def _as_fraction(c: Scalar) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_degree(a: Monomial) -> int:
    return sum(a)


class Poly:
    """Exact sparse polynomial in a fixed number of variables."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Optional[Dict[Monomial, Scalar]] = None):
        self.arity = arity
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = _as_fraction(coeff)
                if c:
                    assert len(mono) == arity, "monomial length must equal ring arity"
                    clean[mono] = c
        self.terms = clean

    # construction helpers

    @classmethod
    def zero(cls, arity: int) -> "Poly":
        return cls(arity)

    @classmethod
    def constant(cls, value: Scalar, arity: int) -> "Poly":
        return cls(arity, {(0,) * arity: _as_fraction(value)})

    @classmethod
    def variable(cls, index: int, arity: int) -> "Poly":
        if not 0 <= index < arity:
            raise AlgebraError(f"variable index {index} out of range for arity {arity}")
        mono = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, coeff: Scalar = 1) -> "Poly":
        return cls(len(mono), {tuple(mono): _as_fraction(coeff)})

    # predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(monomial_degree(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise AlgebraError("polynomial is not constant")
        return self.terms.get((0,) * self.arity, Fraction(0))

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as -1."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def leading(self, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: Optional[MonomialOrder] = None):
        order = order or degrevlex(self.arity)
        return [(m, self.terms[m]) for m in sorted(self.terms, key=order.key, reverse=True)]

    # arithmetic

    def _check(self, other: "Poly") -> None:
        if self.arity != other.arity:
            raise ArityMismatchError(self.arity, other.arity, "polynomial arithmetic")

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.arity)
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        p = Poly.__new__(Poly)
        p.arity = self.arity
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.arity = self.arity
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other, self.arity)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return Poly.constant(other, self.arity) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            p = Poly.__new__(Poly)
            p.arity = self.arity
            p.terms = {m: k * c for m, k in self.terms.items()} if c else {}
            return p
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                s = out.get(mono)
                if s is None:
                    out[mono] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        p = Poly.__new__(Poly)
        p.arity = self.arity
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if not isinstance(e, int) or e < 0:
            raise AlgebraError("polynomial exponent must be a non-negative integer")
        result = Poly.constant(1, self.arity)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"

    # calculus and substitution

    def diff(self, index: int) -> "Poly":
        """Formal partial derivative with respect to variable `index`."""
        if not 0 <= index < self.arity:
            raise AlgebraError(f"variable index {index} out of range for arity {self.arity}")
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            e = mono[index]
            if e:
                lowered = mono[:index] + (e - 1,) + mono[index + 1 :]
                out[lowered] = out.get(lowered, Fraction(0)) + c * e
        return Poly(self.arity, out)

    def diff_multi(self, alpha: Monomial) -> "Poly":
        p = self
        for i, e in enumerate(alpha):
            for _ in range(e):
                p = p.diff(i)
                if p.is_zero():
                    return p
        return p

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.arity:
            raise ArityMismatchError(self.arity, len(point), "evaluation")
        vals = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for v, e in zip(vals, mono):
                if e:
                    term *= v ** e
            total += term
        return total

    def specialize_to_one(self, index: int) -> "Poly":
        """Set variable `index` to 1 and drop it, keeping the others in order."""
        if not 0 <= index < self.arity:
            raise AlgebraError(f"variable index {index} out of range for arity {self.arity}")
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            reduced = mono[:index] + mono[index + 1 :]
            s = out.get(reduced, Fraction(0)) + c
            if s:
                out[reduced] = s
            else:
                out.pop(reduced, None)
        return Poly(self.arity - 1, out)

    def embed(self, new_arity: int, index_map: Sequence[int]) -> "Poly":
        """Reinterpret in a larger ring, variable i becoming index_map[i]."""
        assert len(index_map) == self.arity
        out: Dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            big = [0] * new_arity
            for i, e in enumerate(mono):
                big[index_map[i]] = e
            out[tuple(big)] = c
        return Poly(new_arity, out)


@dataclass
class PolyMatrix:
    """Dense rectangular grid of polynomials sharing one ring."""

    rows: int
    cols: int
    entries: List[List[Poly]]

    def __post_init__(self):
        assert self.rows > 0 and self.cols > 0, "matrix dimensions must be positive"
        assert len(self.entries) == self.rows
        arities = {p.arity for row in self.entries for p in row}
        if len(arities) > 1:
            raise ArityMismatchError(min(arities), max(arities), "matrix entries")
        for row in self.entries:
            assert len(row) == self.cols

    @property
    def arity(self) -> int:
        return self.entries[0][0].arity

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            len(row_idx),
            len(col_idx),
            [[self.entries[r][c] for c in col_idx] for r in row_idx],
        )


def jacobian_matrix(fs: Sequence[Poly]) -> PolyMatrix:
    """Rows indexed by the functions, entry (s, i) = d f_s / d x_i."""
    fs = list(fs)
    if not fs:
        raise AlgebraError("jacobian of an empty function list")
    n = fs[0].arity
    for f in fs[1:]:
        if f.arity != n:
            raise ArityMismatchError(n, f.arity, "jacobian")
    return PolyMatrix(len(fs), n, [[f.diff(i) for i in range(n)] for f in fs])


def _exact_div(num: Poly, den: Poly, order: MonomialOrder) -> Poly:
    """Exact polynomial quotient; raises when the division is not exact."""
    if den.is_zero():
        raise AlgebraError("division by zero polynomial")
    quot = Poly.zero(num.arity)
    rem = num
    dm, dc = den.leading(order)
    while not rem.is_zero():
        rm, rc = rem.leading(order)
        if not monomial_divides(dm, rm):
            raise AlgebraError("non-exact polynomial division")
        t = Poly.monomial(monomial_div(rm, dm), rc / dc)
        quot = quot + t
        rem = rem - t * den
    return quot


def _det_cofactor(m: PolyMatrix) -> Poly:
    """Laplace expansion memoized over column subsets."""
    n = m.rows
    arity = m.arity
    cache: Dict[Tuple[int, Tuple[int, ...]], Poly] = {}

    def minor(row: int, cols: Tuple[int, ...]) -> Poly:
        if len(cols) == 1:
            return m.entries[row][cols[0]]
        key = (row, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        acc = Poly.zero(arity)
        for pos, c in enumerate(cols):
            entry = m.entries[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            piece = entry * sub
            acc = acc + piece if pos % 2 == 0 else acc - piece
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def _det_bareiss(m: PolyMatrix) -> Poly:
    """Fraction-free elimination; every division along the way is exact."""
    n = m.rows
    order = degrevlex(m.arity)
    a = [[m.entries[r][c] for c in range(n)] for r in range(n)]
    sign = 1
    prev = Poly.constant(1, m.arity)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(m.arity)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exact_div(num, prev, order)
            a[i][k] = Poly.zero(m.arity)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det

def determinant(m: PolyMatrix) -> Poly:
    if m.rows != m.cols:
        raise AlgebraError(f"determinant of a non-square matrix ({m.rows}x{m.cols})")
    if m.rows <= 5:
        return _det_cofactor(m)
    return _det_bareiss(m)


# text format

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    for match in _TOKEN_RE.finditer(text.replace("−", "-")):
        col = match.start() + 1
        digits, name, sym = match.groups()
        if digits is not None:
            tokens.append(("int", digits, col))
        elif name is not None:
            tokens.append(("name", name, col))
        elif sym.strip():
            tokens.append(("sym", sym, col))
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _PolyParser:
    def __init__(self, text: str, variables: Sequence[str], line: int = 1):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.line = line
        self.arity = len(variables)
        self.index = {name: i for i, name in enumerate(variables)}

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, col: int):
        raise ParseError(message, self.line, col)

    def parse(self) -> Poly:
        p = self.expr()
        kind, value, col = self.peek()
        if kind != "end":
            self.fail(f"unexpected {value!r}", col)
        return p

    def expr(self) -> Poly:
        kind, value, _ = self.peek()
        negate = False
        if kind == "sym" and value in "+-":
            self.take()
            negate = value == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value in "+-":
                self.take()
                nxt = self.term()
                acc = acc - nxt if value == "-" else acc + nxt
            else:
                return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            kind, value, col = self.peek()
            if kind == "sym" and value == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "sym" and value == "/":
                self.take()
                divisor = self.power()
                if not divisor.is_constant():
                    self.fail("division is only allowed by a constant", col)
                c = divisor.constant_value()
                if c == 0:
                    self.fail("division by zero literal", col)
                acc = acc * (1 / c)
            elif kind in ("int", "name") or (kind == "sym" and value == "("):
                self.fail(f"missing operator before {value!r}", col)
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        kind, value, col = self.peek()
        if kind == "sym" and value == "^":
            self.take()
            ekind, evalue, ecol = self.take()
            if ekind != "int":
                self.fail("malformed exponent", ecol)
            return base ** int(evalue)
        return base

    def atom(self) -> Poly:
        kind, value, col = self.take()
        if kind == "int":
            return Poly.constant(int(value), self.arity)
        if kind == "name":
            idx = self.index.get(value)
            if idx is None:
                self.fail(f"unknown identifier {value!r}", col)
            return Poly.variable(idx, self.arity)
        if kind == "sym" and value == "(":
            inner = self.expr()
            ckind, cvalue, ccol = self.take()
            if not (ckind == "sym" and cvalue == ")"):
                self.fail("expected ')'", ccol)
            return inner
        if kind == "sym" and value == "-":
            return -self.atom()
        self.fail(f"unexpected {value!r}" if value else "unexpected end of input", col)


def parse_poly(text: str, variables: Sequence[str], line: int = 1) -> Poly:
    """Parse the documented grammar into a Poly over the named variables."""
    return _PolyParser(text, variables, line).parse()


def default_names(arity: int) -> List[str]:
    return [f"x{i + 1}" for i in range(arity)]


def format_poly(
    p: Poly,
    order: Optional[MonomialOrder] = None,
    names: Optional[Sequence[str]] = None,
) -> str:
    """Canonical string: terms descending in the active order, exact rationals."""
    if p.is_zero():
        return "0"
    names = list(names) if names is not None else default_names(p.arity)
    assert len(names) == p.arity
    chunks: List[str] = []
    for mono, coeff in p.sorted_terms(order):
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)
