"""A one-definition recursive language over N -> N.

Grammar::

    def    := name "(" ident ")" "=" expr
    expr   := "if" expr "=" "0" "then" expr "else" expr | sum
    sum    := sum ("+" | "-") atom | atom
    atom   := NAT | ident | name "(" expr ")" | "(" expr ")"

``-`` is truncated subtraction. A definition compiles to an operator whose
recursive calls go to the *argument* approximant, so every compiled operator
is total.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import FixcofeError, ValueOverflow
from .fixpoint import Mode, Operator
from .instances import NATFUN, VALUE_MAX, NatFun

KEYWORDS = frozenset({"if", "then", "else"})


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(FixcofeError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at byte {span.start}")
        self.message = message
        self.span = span


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class IfZero:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


Expr = Union[Lit, Var, Add, Sub, Call, IfZero]


@dataclass(frozen=True)
class Def:
    name: str
    param: str
    body: Expr


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<nat>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()=+\-])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'nat', 'name', 'kw', punctuation char, or 'eof'
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    # Byte offsets for spans; char offsets for slicing.
    byte_at = [0]
    for ch in text:
        byte_at.append(byte_at[-1] + len(ch.encode("utf-8")))
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(byte_at[pos], byte_at[pos + 1]))
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "name" and word in KEYWORDS:
                kind = "kw"
            elif kind == "punct":
                kind = word
            toks.append(_Tok(kind, word, byte_at[m.start()], byte_at[m.end()]))
        pos = m.end()
    end = byte_at[-1]
    toks.append(_Tok("eof", "", end, end))
    return toks


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.fname = ""
        self.param = ""

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(message, SourceSpan(tok.start, tok.end))

    def _describe(self, tok: _Tok) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            self._error(f"expected {want!r}, found {self._describe(tok)}")
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def parse_def(self) -> Def:
        self.fname = self.expect("name").text
        self.expect("(")
        self.param = self.expect("name").text
        self.expect(")")
        self.expect("=")
        body = self.expr()
        if not self.at("eof"):
            if self.at("name") and self.toks[self.i + 1].kind == "(":
                self._error("multiple definitions are not supported")
            self._error(f"unexpected {self._describe(self.tok)}")
        return Def(self.fname, self.param, body)

    def expr(self) -> Expr:
        if self.at("kw", "if"):
            self.i += 1
            cond = self.expr()
            self.expect("=")
            zero = self.expect("nat")
            if int(zero.text) != 0:
                self._error("conditionals only support '= 0' guards", zero)
            self.expect("kw", "then")
            then = self.expr()
            self.expect("kw", "else")
            return IfZero(cond, then, self.expr())
        return self.sum()

    def sum(self) -> Expr:
        left = self.atom()
        while self.at("+") or self.at("-"):
            op = self.tok.kind
            self.i += 1
            right = self.atom()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "nat":
            self.i += 1
            value = int(tok.text)
            if value > VALUE_MAX:
                self._error("literal exceeds 2^64-1", tok)
            return Lit(value)
        if tok.kind == "(":
            self.i += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "name":
            self.i += 1
            if self.at("("):
                if tok.text != self.fname:
                    self._error(f"unknown function {tok.text!r}", tok)
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text != self.param:
                self._error(f"unknown identifier {tok.text!r}", tok)
            return Var(tok.text)
        self._error(f"expected an expression, found {self._describe(tok)}")


def parse_def(text: str) -> Def:
    return _Parser(text).parse_def()


def load_def(path: str | Path) -> Def:
    return parse_def(Path(path).read_text(encoding="utf-8"))


# -- printer ----------------------------------------------------------------

def _atom(e: Expr) -> str:
    if isinstance(e, (Lit, Var, Call)):
        return print_expr(e)
    return f"({print_expr(e)})"


def print_expr(e: Expr) -> str:
    if isinstance(e, Lit):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({print_expr(e.arg)})"
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        left = print_expr(e.left) if isinstance(e.left, (Add, Sub)) else _atom(e.left)
        return f"{left} {op} {_atom(e.right)}"
    if isinstance(e, IfZero):
        cond = _atom(e.cond) if isinstance(e.cond, IfZero) else print_expr(e.cond)
        then = _atom(e.then) if isinstance(e.then, IfZero) else print_expr(e.then)
        return f"if {cond} = 0 then {then} else {print_expr(e.orelse)}"
    raise TypeError(f"not an expression: {e!r}")


def print_def(d: Def) -> str:
    return f"{d.name}({d.param}) = {print_expr(d.body)}"


# -- evaluation -------------------------------------------------------------

def eval_expr(body: Expr, x: int, g: NatFun) -> int:
    """Call-by-value evaluation with the parameter bound to ``x`` and every
    recursive call answered by ``g``."""
    if isinstance(body, Lit):
        return body.value
    if isinstance(body, Var):
        return x
    if isinstance(body, Call):
        return g(eval_expr(body.arg, x, g))
    if isinstance(body, Add):
        v = eval_expr(body.left, x, g) + eval_expr(body.right, x, g)
        if v > VALUE_MAX:
            raise ValueOverflow(f"addition overflow: {v} > 2^64-1")
        return v
    if isinstance(body, Sub):
        return max(0, eval_expr(body.left, x, g) - eval_expr(body.right, x, g))
    if isinstance(body, IfZero):
        if eval_expr(body.cond, x, g) == 0:
            return eval_expr(body.then, x, g)
        return eval_expr(body.orelse, x, g)
    raise TypeError(f"not an expression: {body!r}")


def compile_def(d: Def) -> Operator:
    """Operator ``g -> λx. body`` on NatFun, declared unverified."""
    body = d.body

    def apply(g: NatFun) -> NatFun:
        return NatFun(lambda x: eval_expr(body, x, g), name=f"{d.name}[g]")

    return Operator(apply, NATFUN, Mode.UNVERIFIED, d.name)

