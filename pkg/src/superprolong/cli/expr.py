"""Expression language for superfunctions and vector fields.

Grammar (precedence climbing, lowest first)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*        '/' only by constants
    unary  := '-' unary | power
    power  := atom ('^' INT)?                   a^b^c is rejected
    atom   := INT | 'i' | x<k> | th<k> | 'D[' coord ']' | '(' expr ')'

Coefficients of a vector field stand to the left of ``D[..]``; each
``f*D[q]`` contributes f to the q-slot.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..gaussian import GaussianRational
from ..supercalc.fields import ParityMismatchError, SuperVectorField
from ..supercalc.grassmann import GrassmannPoly

__all__ = ["ExprError", "parse_expression", "parse_function", "parse_field", "format_expression"]


class ExprError(ValueError):
    """Syntax, arity or parity error with a 0-based source position."""

    def __init__(self, msg: str, pos: int | None = None, src: str | None = None):
        self.pos = pos
        self.src = src
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{msg}{where}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<coord>x\d+|th\d+)|(?P<i>i)|(?P<D>D\[)|(?P<op>[-+*/^()\]]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    out = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExprError(f"unexpected character {src[bad]!r}", bad, src)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    out.append(_Tok("end", "", len(src)))
    return out


def _coord_index(text: str, n_even: int, n_odd: int, pos: int, src: str) -> int:
    if text.startswith("th"):
        k = int(text[2:])
        if not 1 <= k <= n_odd:
            raise ExprError(f"{text} out of range (superdomain has {n_odd} odd coordinates)", pos, src)
        return n_even + k - 1
    k = int(text[1:])
    if not 1 <= k <= n_even:
        raise ExprError(f"{text} out of range (superdomain has {n_even} even coordinates)", pos, src)
    return k - 1


def _infer_dims(toks) -> tuple[int, int]:
    ne = no = 0
    for t in toks:
        if t.kind == "coord":
            if t.text.startswith("th"):
                no = max(no, int(t.text[2:]))
            else:
                ne = max(ne, int(t.text[1:]))
    return ne, no


class _Field:
    """Partially built vector field: slot -> coefficient."""

    def __init__(self, slots: dict, pos: int):
        self.slots = slots
        self.pos = pos


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


class _Parser:
    def __init__(self, src: str, n_even: int | None, n_odd: int | None):
        self.src = src
        self.toks = _tokenize(src)
        ne, no = _infer_dims(self.toks)
        self.n_even = ne if n_even is None else n_even
        self.n_odd = no if n_odd is None else n_odd
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        return ExprError(msg, tok.pos, self.src)

    def const(self, c) -> GrassmannPoly:
        return GrassmannPoly.const(self.n_even, self.n_odd, c)

    def parse(self):
        if self.peek().kind == "end":
            raise self.err("empty expression")
        v = self.expr(1)
        if self.peek().kind != "end":
            raise self.err(f"unexpected {self.peek().text!r}")
        return v

    def expr(self, min_prec: int):
        lhs = self.unary()
        while True:
            t = self.peek()
            if t.kind != "op" or t.text not in _PREC or _PREC[t.text] < min_prec:
                return lhs
            self.take()
            rhs = self.expr(_PREC[t.text] + 1)
            lhs = self.binary(t, lhs, rhs)

    def binary(self, t, a, b):
        op = t.text
        if op in "+-":
            if isinstance(a, _Field) != isinstance(b, _Field):
                raise self.err("cannot add a function and a vector field", t)
            if isinstance(a, _Field):
                slots = dict(a.slots)
                for k, c in b.slots.items():
                    c = -c if op == "-" else c
                    slots[k] = slots[k] + c if k in slots else c
                return _Field(slots, a.pos)
            return a + b if op == "+" else a - b
        if op == "*":
            if isinstance(a, _Field):
                raise self.err("coefficients must stand to the left of D[..]", t)
            if isinstance(b, _Field):
                return _Field({k: a * c for k, c in b.slots.items()}, b.pos)
            return a * b
        # division by a nonzero constant only
        if isinstance(b, _Field) or any(I or any(al) for I, al in b.terms):
            raise self.err("division is only allowed by constants", t)
        c = b.terms.get(((), (0,) * self.n_even))
        if not c:
            raise self.err("division by zero", t)
        if isinstance(a, _Field):
            return _Field({k: v.scale(1 / c) for k, v in a.slots.items()}, a.pos)
        return a.scale(1 / c)

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            v = self.expr(3)
            if isinstance(v, _Field):
                return _Field({k: -c for k, c in v.slots.items()}, v.pos)
            return -v
        if t.kind == "op" and t.text == "+":
            self.take()
            return self.expr(3)
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.peek()
            if e.kind == "op" and e.text == "(":
                self.take()
                e = self.peek()
                if e.kind != "num":
                    raise self.err("exponent must be a nonnegative integer")
                self.take()
                self.expect(")")
            elif e.kind != "num":
                raise self.err("exponent must be a nonnegative integer")
            else:
                self.take()
            if isinstance(base, _Field):
                raise self.err("cannot raise a vector field to a power", t)
            k = int(e.text)
            if self.peek().kind == "op" and self.peek().text == "^":
                raise self.err("chained exponents need parentheses")
            return base ** k
        return base

    def expect(self, text):
        t = self.peek()
        if t.kind == "op" and t.text == text:
            return self.take()
        raise self.err(f"expected {text!r}")

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return self.const(int(t.text))
        if t.kind == "i":
            return self.const(GaussianRational(0, 1))
        if t.kind == "coord":
            return GrassmannPoly.coord(self.n_even, self.n_odd,
                                       _coord_index(t.text, self.n_even, self.n_odd, t.pos, self.src))
        if t.kind == "D":
            c = self.take()
            if c.kind != "coord":
                raise ExprError("D[..] needs a coordinate name", c.pos, self.src)
            k = _coord_index(c.text, self.n_even, self.n_odd, c.pos, self.src)
            self.expect("]")
            return _Field({k: self.const(1)}, t.pos)
        if t.kind == "op" and t.text == "(":
            v = self.expr(1)
            self.expect(")")
            return v
        if t.kind == "end":
            raise ExprError("unexpected end of input", t.pos, self.src)
        raise ExprError(f"unexpected {t.text!r}", t.pos, self.src)


def parse_expression(src: str, n_even: int | None = None, n_odd: int | None = None):
    """Parse to a GrassmannPoly or a SuperVectorField.

    Superdomain dims default to the largest coordinate indices used.
    """
    p = _Parser(src, n_even, n_odd)
    v = p.parse()
    if isinstance(v, _Field):
        N = p.n_even + p.n_odd
        coeffs = [v.slots.get(k, GrassmannPoly.zero(p.n_even, p.n_odd)) for k in range(N)]
        for k, c in enumerate(coeffs):
            if c and c.parity() is None:
                raise ExprError(f"coefficient of D[{_name(k, p.n_even)}] is not homogeneous", v.pos, src)
        try:
            return SuperVectorField(coeffs)
        except ParityMismatchError as exc:
            raise ExprError(f"parity error: {exc} (odd coefficient on an even slot or vice versa)", v.pos, src)
    return v


def _name(k, n_even):
    return f"x{k + 1}" if k < n_even else f"th{k - n_even + 1}"


def parse_function(src: str, n_even: int | None = None, n_odd: int | None = None) -> GrassmannPoly:
    v = parse_expression(src, n_even, n_odd)
    if not isinstance(v, GrassmannPoly):
        raise ExprError("expected a function, got a vector field", 0, src)
    return v


def parse_field(src: str, n_even: int | None = None, n_odd: int | None = None) -> SuperVectorField:
    v = parse_expression(src, n_even, n_odd)
    if isinstance(v, GrassmannPoly):
        if v.is_zero():
            return SuperVectorField.zero(v.n_even, v.n_odd)
        raise ExprError("expected a vector field (use D[x1], D[th1], ...)", 0, src)
    return v


def format_expression(v) -> str:
    return v.to_expr()

