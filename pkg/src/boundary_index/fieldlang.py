"""A small expression language for vector fields on model manifolds.

A field is written as a parenthesized tuple of arithmetic expressions in
the ambient coordinates ``x1 .. x3``::

    (x1 - 1, x2)
    ((x1-1)^2 - x2^2, 2*(x1-1)*x2)

Supported: float literals, ``+ - * / ^`` (``^`` right-associative, binds
tighter than unary minus), and the functions ``sin cos exp sqrt abs``
(one argument) and ``max min`` (two or more arguments).  Evaluation is
vectorized over numpy arrays and raises :class:`DomainError` instead of
producing NaN or inf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ArityError, DomainError, FieldSyntaxError, UnknownSymbol

MAX_DIM = 3

UNARY_FUNCS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
NARY_FUNCS: dict[str, Callable] = {
    "max": np.maximum,
    "min": np.minimum,
}


# -- AST ---------------------------------------------------------------------

class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple


@dataclass(frozen=True)
class FieldDef:
    ambient_dim: int
    components: tuple
    source_text: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.components) != self.ambient_dim:
            raise ArityError(
                f"field has {len(self.components)} components, ambient dimension is {self.ambient_dim}"
            )

    def __call__(self, points):
        return eval_field(self, points)

    def __str__(self):
        return print_field(self)


# -- tokenizer ---------------------------------------------------------------

_ALIASES = {"−": "-", "×": "*", "÷": "/", "⋅": "*"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    for src, dst in _ALIASES.items():
        text = text.replace(src, dst)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FieldSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# -- parser ------------------------------------------------------------------

class _Parser:
    # expr  := term (('+'|'-') term)*
    # term  := unary (('*'|'/') unary)*
    # unary := '-' unary | power
    # power := atom ('^' unary)?
    # atom  := NUM | VAR | NAME '(' expr (',' expr)* ')' | '(' expr ')'

    def __init__(self, text: str, ambient_dim: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.dim = ambient_dim

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind == "end":
            found = self.tok.text or "end of input"
            raise FieldSyntaxError(f"found {found!r}", self.tok.pos, repr(text))
        return self.advance()

    def field(self) -> list[Expr]:
        self.expect("(")
        comps = [self.expr()]
        while self.tok.text == ",":
            self.advance()
            comps.append(self.expr())
        self.expect(")")
        if self.tok.kind != "end":
            raise FieldSyntaxError(f"trailing input {self.tok.text!r}", self.tok.pos, "end of input")
        return comps

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            m = re.fullmatch(r"x(\d+)", t.text)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= self.dim:
                    raise UnknownSymbol(
                        f"variable {t.text!r} at position {t.pos} exceeds ambient dimension {self.dim}"
                    )
                return Var(k)
            if t.text in UNARY_FUNCS or t.text in NARY_FUNCS:
                return self.call(t)
            raise UnknownSymbol(f"unknown symbol {t.text!r} at position {t.pos}")
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise FieldSyntaxError(f"found {found!r}", t.pos, "number, variable, function or '('")

    def call(self, name_tok: _Token) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.tok.text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        name = name_tok.text
        if name in UNARY_FUNCS and len(args) != 1:
            raise ArityError(f"{name} takes 1 argument, got {len(args)} (position {name_tok.pos})")
        if name in NARY_FUNCS and len(args) < 2:
            raise ArityError(f"{name} takes at least 2 arguments, got {len(args)} (position {name_tok.pos})")
        return Call(name, tuple(args))


def parse_expr(text: str, ambient_dim: int = MAX_DIM) -> Expr:
    p = _Parser(text, ambient_dim)
    node = p.expr()
    if p.tok.kind != "end":
        raise FieldSyntaxError(f"trailing input {p.tok.text!r}", p.tok.pos, "end of input")
    return node


def parse_field(text: str, ambient_dim: int) -> FieldDef:
    if ambient_dim not in (1, 2, 3):
        raise ValueError(f"ambient dimension must be 1, 2 or 3, got {ambient_dim}")
    comps = _Parser(text, ambient_dim).field()
    if len(comps) != ambient_dim:
        raise ArityError(f"field has {len(comps)} components, ambient dimension is {ambient_dim}")
    return FieldDef(ambient_dim, tuple(comps), text)


# -- printer -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def _wrap(e: Expr, needs: bool) -> str:
    s = print_expr(e)
    return f"({s})" if needs else s


def print_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _prec(e.operand) < _PREC["neg"])
    if isinstance(e, Call):
        return f"{e.name}(" + ", ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if e.op == "^":
            left = _wrap(e.left, _prec(e.left) < _PREC["atom"])
            right = _wrap(e.right, _prec(e.right) < _PREC["neg"])
            return f"{left}^{right}"
        if e.op in "*/":
            left = _wrap(e.left, _prec(e.left) < p)
            right = _wrap(e.right, _prec(e.right) < _PREC["neg"])
            return f"{left}{e.op}{right}"
        left = _wrap(e.left, _prec(e.left) < p)
        right = _wrap(e.right, _prec(e.right) <= p)
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


def print_field(f: FieldDef) -> str:
    return "(" + ", ".join(print_expr(c) for c in f.components) + ")"


# -- evaluation --------------------------------------------------------------

def _eval(e: Expr, coords, comp: int):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return coords[e.index - 1]
    if isinstance(e, Neg):
        return -_eval(e.operand, coords, comp)
    if isinstance(e, BinOp):
        a = _eval(e.left, coords, comp)
        b = _eval(e.right, coords, comp)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if np.any(np.asarray(b) == 0):
                raise DomainError("division by zero", comp)
            return a / b
        # ^
        a_arr = np.asarray(a, dtype=float)
        b_arr = np.asarray(b, dtype=float)
        bad = (a_arr < 0) & (b_arr != np.round(b_arr))
        if np.any(bad):
            raise DomainError("negative base with non-integer exponent", comp)
        if np.any((a_arr == 0) & (b_arr < 0)):
            raise DomainError("zero raised to a negative power", comp)
        return np.power(a_arr, b_arr)
    if isinstance(e, Call):
        args = [_eval(a, coords, comp) for a in e.args]
        if e.name == "sqrt" and np.any(np.asarray(args[0]) < 0):
            raise DomainError("sqrt of a negative number", comp)
        if e.name in UNARY_FUNCS:
            return UNARY_FUNCS[e.name](args[0])
        fn = NARY_FUNCS[e.name]
        out = args[0]
        for a in args[1:]:
            out = fn(out, a)
        return out
    raise TypeError(f"not an expression node: {e!r}")


def eval_field(f: FieldDef, points) -> np.ndarray:
    """Evaluate ``f`` at one point (shape ``(n,)``) or many (shape ``(..., n)``).

    Components are numbered from 1 in :class:`DomainError`.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1:] != (f.ambient_dim,):
        raise ValueError(f"points must have trailing dimension {f.ambient_dim}, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    coords = [pts[..., k] for k in range(f.ambient_dim)]
    out = np.empty(pts.shape, dtype=float)
    with np.errstate(all="ignore"):
        for k, comp in enumerate(f.components):
            val = _eval(comp, coords, k + 1)
            val = np.broadcast_to(np.asarray(val, dtype=float), pts.shape[:-1])
            if not np.all(np.isfinite(val)):
                raise DomainError("non-finite value", k + 1)
            out[..., k] = val
    return out


# -- algebra -----------------------------------------------------------------

def negate_field(f: FieldDef) -> FieldDef:
    comps = tuple(Neg(c) for c in f.components)
    out = FieldDef(f.ambient_dim, comps, "")
    return FieldDef(f.ambient_dim, comps, print_field(out))


def scale_field(f: FieldDef, c: float) -> FieldDef:
    factor = Num(abs(float(c)))
    comps = tuple(BinOp("*", factor, e) for e in f.components)
    if c < 0:
        comps = tuple(Neg(e) for e in comps)
    tmp = FieldDef(f.ambient_dim, comps, "")
    return FieldDef(f.ambient_dim, comps, print_field(tmp))


def add_fields(f: FieldDef, g: FieldDef) -> FieldDef:
    if f.ambient_dim != g.ambient_dim:
        raise ArityError("cannot add fields of different ambient dimension")
    comps = tuple(BinOp("+", a, b) for a, b in zip(f.components, g.components))
    tmp = FieldDef(f.ambient_dim, comps, "")
    return FieldDef(f.ambient_dim, comps, print_field(tmp))

