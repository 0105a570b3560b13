"""Line-oriented problem files.

::

    # comment
    field GF(7)          # or: field Q
    vars 3
    H1 = x2^3 - 1/2*x1*x3
    H2 = 0
    H3 = 0
    G1 = ...             # optional second map (compose)
    T = [[1, 2, 0], [0, 1, 0], [0, 0, 1]]
    M = [[0, 0], [1, 0]]
    v = (1, x2, 0)
    s = 2

Expressions use ``+ - * ^ /`` and parentheses; ``/`` needs a constant
divisor.  Whitespace inside expressions is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import ProblemSyntaxError, UnknownVariable
from .mpoly import Poly
from .polymap import PolyMap
from .scalars import Field, Matrix, QQ

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),\[\]]))")


@dataclass
class ProblemFile:
    field: Field
    nvars: int
    maps: dict = dc_field(default_factory=dict)  # letter -> {index: Poly}
    matrices: dict = dc_field(default_factory=dict)
    vectors: dict = dc_field(default_factory=dict)
    scalars: dict = dc_field(default_factory=dict)

    def polymap(self, letter: str = "H") -> PolyMap:
        comps = self.maps.get(letter)
        if not comps:
            raise ProblemSyntaxError(f"no components {letter}1, {letter}2, ... in the problem")
        m = max(comps)
        missing = [k for k in range(1, m + 1) if k not in comps]
        if missing:
            raise ProblemSyntaxError(f"component {letter}{missing[0]} is missing")
        return PolyMap([comps[k] for k in range(1, m + 1)], self.nvars, self.field)

    def has_map(self, letter: str) -> bool:
        return bool(self.maps.get(letter))


class _Parser:
    """Recursive descent over one right-hand side."""

    def __init__(self, text: str, line: int, offset: int, K: Field, nvars: int | None):
        self.line = line
        self.K = K
        self.nvars = nvars
        self.toks = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), offset + m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def error(self, msg, col=None):
        if col is None:
            col = self.toks[self.i][2] if self.i < len(self.toks) else None
        raise ProblemSyntaxError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            self.error("unexpected end of line" + (f", expected {value!r}" if value else ""))
        if value is not None and tok[1] != value:
            self.error(f"expected {value!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def done(self):
        if self.i != len(self.toks):
            self.error(f"unexpected {self.peek()[1]!r}")

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def expr(self) -> Poly:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Poly:
        out = self.power()
        while self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            rhs = self.power()
            if op == "*":
                out = out * rhs
            else:
                if rhs.degree() > 0:
                    self.error("division by a non-constant", col)
                c = rhs.constant_term()
                if c == 0:
                    self.error("division by zero", col)
                out = out.scale(self.K.inv(c))
        return out

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, col = self.peek()
            if kind != "num":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, col = self.peek()
        if kind == "num":
            self.take()
            return Poly.const(self.K, self.nvars, self.K(int(val)))
        if kind == "name":
            self.take()
            m = re.fullmatch(r"x(\d+)", val)
            if not m or not (1 <= int(m.group(1)) <= self.nvars):
                raise UnknownVariable(f"unknown variable {val!r} (vars are x1..x{self.nvars})", self.line, col)
            return Poly.var(self.K, self.nvars, int(m.group(1)) - 1)
        if val == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if val == "-" or val == "+":
            self.error(f"unexpected {val!r}; signs go only at the start of a sum")
        self.error("expected a number, a variable or '('" if kind else "unexpected end of line")

    def scalar(self):
        p = self.expr()
        if p.degree() > 0:
            self.error("expected a constant")
        return p.constant_term()

    def row(self, open_, close, item):
        self.take(open_)
        out = [item()]
        while self.peek()[1] == ",":
            self.take()
            out.append(item())
        self.take(close)
        return out


def _field_of(text: str, line: int) -> Field:
    t = text.replace(" ", "")
    if t == "Q":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", t)
    if not m:
        raise ProblemSyntaxError(f"unknown field {text!r}; use Q or GF(p)", line, 7)
    try:
        return Field(int(m.group(1)))
    except ValueError as exc:
        raise ProblemSyntaxError(str(exc), line, 7) from None


_ASSIGN = re.compile(r"\s*(?P<lhs>[A-Za-z]\w*)\s*=")


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file; errors carry line and column."""
    K: Field | None = None
    nvars: int | None = None
    prob = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head = line.split(None, 1)
        if head[0] == "field":
            if K is not None:
                raise ProblemSyntaxError("field declared twice", lineno, 1)
            if prob is not None:
                raise ProblemSyntaxError("'field' must come before the first assignment", lineno, 1)
            K = _field_of(head[1] if len(head) > 1 else "", lineno)
            continue
        if head[0] == "vars":
            if nvars is not None:
                raise ProblemSyntaxError("vars declared twice", lineno, 1)
            if len(head) < 2 or not head[1].strip().isdigit():
                raise ProblemSyntaxError("vars needs a non-negative integer", lineno, 6)
            nvars = int(head[1])
            continue
        m = _ASSIGN.match(line)
        if not m:
            raise ProblemSyntaxError("expected 'field', 'vars' or an assignment", lineno, 1)
        if nvars is None:
            raise ProblemSyntaxError("'vars n' must come before the first assignment", lineno, 1)
        K = K or QQ
        if prob is None:
            prob = ProblemFile(K, nvars)
        lhs = m.group("lhs")
        rhs = line[m.end():]
        p = _Parser(rhs, lineno, m.end(), K, nvars)
        comp = re.fullmatch(r"([A-Z])(\d+)", lhs)
        if comp:
            letter, k = comp.group(1), int(comp.group(2))
            if k < 1:
                raise ProblemSyntaxError("component indices start at 1", lineno, 1)
            slot = prob.maps.setdefault(letter, {})
            if k in slot:
                raise ProblemSyntaxError(f"{lhs} assigned twice", lineno, 1)
            slot[k] = p.expr()
        elif lhs in ("T", "M"):
            rows = p.row("[", "]", lambda: p.row("[", "]", p.scalar))
            if len({len(r) for r in rows}) != 1:
                raise ProblemSyntaxError(f"{lhs}: rows of different lengths", lineno, m.end())
            prob.matrices[lhs] = Matrix(K, rows)
        elif lhs == "v":
            prob.vectors[lhs] = tuple(p.row("(", ")", p.expr))
        elif lhs in ("s", "r", "dmax"):
            val = p.scalar()
            if K.p == 0 and val.denominator != 1:
                raise ProblemSyntaxError(f"{lhs} must be an integer", lineno, m.end())
            prob.scalars[lhs] = int(val)
        else:
            raise ProblemSyntaxError(f"unknown name {lhs!r}", lineno, 1)
        p.done()
    if nvars is None:
        raise ProblemSyntaxError("missing 'vars n'")
    return prob or ProblemFile(K or QQ, nvars)


def parse_poly(text: str, nvars: int, field: Field = QQ) -> Poly:
    """One polynomial in ``x1..x{nvars}`` from the expression grammar above."""
    p = _Parser(text, 1, 0, field, nvars)
    out = p.expr()
    p.done()
    return out


def parse_map(texts, nvars: int | None = None, field: Field = QQ) -> PolyMap:
    """A map from component expressions; ``nvars`` defaults to the number of components."""
    n = len(texts) if nvars is None else nvars
    return PolyMap([parse_poly(t, n, field) for t in texts], n, field)
