"""Expression syntax, JSON and grid-CSV interchange.

Expression grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER | 'i' | 't' INT | 'exp' '(' expr (',' expr)* ')' | '(' expr ')'

``NUMBER`` is ``a``, ``a/b`` or either with an ``i`` suffix, so ``3/4i`` is
the single literal ``(3/4)*i``.  Arguments of ``exp`` must be constants.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Exponential, ExpPoly, MalformedExponential
from .poly import GenPoly
from .scalar import Scalar


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?i?)|(?P<var>t(?P<idx>\d+))|(?P<exp>exp)|(?P<imag>i)|(?P<op>[-+*/^(),]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup != "idx" else m.start("var")
        for kind in ("num", "var", "exp", "imag", "op"):
            if m.group(kind) is not None:
                toks.append(_Tok(kind, m.group(kind), start))
                break
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    """Builds an AST of nested tuples; evaluation happens once d is known."""

    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.max_var = 0
        self.exp_arity: set[int] = set()

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take()
            node = (op.text, op.pos, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take()
            node = (op.text, op.pos, node, self.unary())
        return node

    def unary(self):
        t = self.peek()
        if t.text in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if t.text == "+" else ("neg", t.pos, inner)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek().text == "^":
            op = self.take()
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            t = self.take()
            if t.kind != "num" or not t.text.isdigit():
                raise ParseError("exponent must be an integer literal", t.pos)
            node = ("^", op.pos, node, sign * int(t.text))
        return node

    def atom(self):
        t = self.take()
        if t.kind == "num":
            body = t.text
            imag = body.endswith("i")
            if imag:
                body = body[:-1]
            try:
                val = Fraction(body)
            except ZeroDivisionError:
                raise ParseError("division by zero", t.pos) from None
            return ("const", t.pos, Scalar(0, val) if imag else Scalar(val))
        if t.kind == "imag":
            return ("const", t.pos, Scalar(0, 1))
        if t.kind == "var":
            idx = int(t.text[1:])
            if idx < 1:
                raise ParseError("variables are numbered from t1", t.pos)
            self.max_var = max(self.max_var, idx)
            return ("var", t.pos, idx)
        if t.kind == "exp":
            self.expect("(")
            args = [self.expr()]
            while self.peek().text == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            self.exp_arity.add(len(args))
            return ("exp", t.pos, args)
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def _const_value(f: ExpPoly, pos: int) -> Scalar:
    if not f.is_constant():
        raise ParseError("expected a constant", pos)
    return f.terms[0][1].constant_term() if f.terms else Scalar(0)


def _eval(node, d: int) -> ExpPoly:
    kind, pos = node[0], node[1]
    if kind == "const":
        return ExpPoly.constant(d, node[2])
    if kind == "var":
        if node[2] > d:
            raise ParseError(f"variable t{node[2]} exceeds dimension {d}", pos)
        return ExpPoly.polynomial(GenPoly.variable(d, node[2] - 1))
    if kind == "exp":
        if len(node[2]) != d:
            raise ParseError(f"exp() has {len(node[2])} arguments, dimension is {d}", pos)
        lam = []
        for arg in node[2]:
            lam.append(_const_value(_eval(arg, d), arg[1]))
        try:
            return ExpPoly.exponential(Exponential(tuple(lam)))
        except MalformedExponential as exc:
            raise ParseError(str(exc), pos) from None
    if kind == "neg":
        return -_eval(node[2], d)
    if kind == "^":
        base = _eval(node[2], d)
        k = node[3]
        if k < 0:
            c = _const_value(base, pos)
            if not c:
                raise ParseError("division by zero", pos)
            return ExpPoly.constant(d, c**k)
        out = ExpPoly.constant(d, 1)
        for _ in range(k):
            out = out * base
        return out
    left, right = _eval(node[2], d), _eval(node[3], d)
    if kind == "+":
        return left + right
    if kind == "-":
        return left - right
    if kind == "*":
        return left * right
    if kind == "/":
        c = _const_value(right, node[3][1])
        if not c:
            raise ParseError("division by zero", pos)
        return left.scale(c.inverse())
    raise AssertionError(kind)


def parse_expr(text: str, d: int | None = None) -> ExpPoly:
    """Parse expression text into a canonical ExpPoly.

    The dimension is inferred from the largest ``t`` index and the arity of
    ``exp`` unless given explicitly.
    """
    p = _Parser(text)
    ast = p.parse()
    if len(p.exp_arity) > 1:
        raise ParseError(f"inconsistent exp() arities {sorted(p.exp_arity)}", 0)
    inferred = max([p.max_var, 1, *p.exp_arity])
    if d is None:
        d = inferred
    elif d < p.max_var:
        raise ParseError(f"variable t{p.max_var} exceeds requested dimension {d}", 0)
    return _eval(ast, d)


def parse_scalar(text: str) -> Scalar:
    return _const_value(parse_expr(text, d=1), 0)


# -- printing --------------------------------------------------------------


def _var_name(k: int, block: int | None) -> str:
    if block is None:
        return f"t{k + 1}"
    b, j = divmod(k, block)
    return f"x{b + 1}" if block == 1 else f"x{b + 1}_{j + 1}"


def _scalar_factor(c: Scalar) -> str:
    s = str(c)
    if c.re and c.im:
        return f"({s})"
    return s


def _monomial_text(mono, block) -> str:
    parts = []
    for k, e in enumerate(mono):
        if e == 1:
            parts.append(_var_name(k, block))
        elif e:
            parts.append(f"{_var_name(k, block)}^{e}")
    return "*".join(parts)


def _signed_terms(pieces: list[tuple[bool, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _poly_pieces(p: GenPoly, block=None) -> list[tuple[bool, str]]:
    pieces = []
    for mono, c in p.sorted_items():
        neg = c.is_negative_like()
        a = -c if neg else c
        mtext = _monomial_text(mono, block)
        if not mtext:
            pieces.append((neg, _scalar_factor(a)))
        elif a.is_one():
            pieces.append((neg, mtext))
        else:
            pieces.append((neg, f"{_scalar_factor(a)}*{mtext}"))
    return pieces


def format_poly(p: GenPoly, block: int | None = None) -> str:
    return _signed_terms(_poly_pieces(p, block))


def format_exponential(m: Exponential) -> str:
    return "exp(" + ", ".join(str(v) for v in m.lam) + ")"


def format_expoly(f: ExpPoly, block: int | None = None) -> str:
    """Canonical text; ``parse_expr(format_expoly(f), f.d) == f``."""
    pieces: list[tuple[bool, str]] = []
    for m, p in f.terms:
        pp = _poly_pieces(p, block)
        if m.is_identity():
            pieces.extend(pp)
            continue
        e = format_exponential(m)
        if len(pp) == 1:
            neg, body = pp[0]
            pieces.append((neg, e if body == "1" else f"{body}*{e}"))
        else:
            pieces.append((False, f"({_signed_terms(pp)})*{e}"))
    return _signed_terms(pieces)


# -- JSON ------------------------------------------------------------------


def expoly_to_json(f: ExpPoly) -> dict:
    return {
        "d": f.d,
        "terms": [
            {
                "lambda": [v.to_json() for v in m.lam],
                "poly": [{"exps": list(mono), "coef": c.to_json()} for mono, c in p.sorted_items()],
            }
            for m, p in f.terms
        ],
    }


def expoly_from_json(obj: dict) -> ExpPoly:
    d = int(obj["d"])
    raw = []
    for term in obj.get("terms", []):
        lam = tuple(Scalar.from_json(v) for v in term["lambda"])
        poly = GenPoly(d, [(tuple(int(e) for e in mono["exps"]), Scalar.from_json(mono["coef"])) for mono in term["poly"]])
        raw.append((Exponential(lam), poly))
    return ExpPoly(d, raw)


# -- grid CSV --------------------------------------------------------------


def grid_to_csv(grid) -> str:
    """Header ``d,lo...,hi...`` then ``coords..., re, im`` per point."""
    box = grid.box
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([box.d, *box.lo, *box.hi])
    for x, v in zip(box.points(), grid.values):
        w.writerow([*x, str(v.re), str(v.im)])
    return buf.getvalue()


def grid_from_csv(text: str):
    from .gridlab import GridBox, GridFunction

    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty grid CSV")
    head = [int(c) for c in rows[0]]
    d = head[0]
    if len(head) != 1 + 2 * d:
        raise ValueError(f"grid CSV header must be d,lo...,hi... with d={d}")
    box = GridBox(tuple(head[1 : 1 + d]), tuple(head[1 + d :]))
    values = {}
    for r in rows[1:]:
        if len(r) != d + 2:
            raise ValueError(f"grid CSV row has {len(r)} fields, expected {d + 2}")
        x = tuple(int(c) for c in r[:d])
        values[x] = Scalar(r[d].strip(), r[d + 1].strip())
    pts = list(box.points())
    missing = [x for x in pts if x not in values]
    if missing:
        raise ValueError(f"grid CSV misses {len(missing)} points, e.g. {missing[0]}")
    return GridFunction(box, tuple(values[x] for x in pts))
