"""Concrete syntax for formulas.

    formula  := quant | implies
    quant    := ("forall" | "exists") var ["in" var] "." formula
    implies  := or ["->" implies]
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "~" unary | "(" formula ")" | quant | atom
    atom     := var "in" var | var "=" var | Name "(" arg ("," arg)* ")"

A quantifier body extends as far right as possible.  Unicode spellings
(¬ ∧ ∨ → ∀ ∃ ∈) are accepted on input; printing is always ASCII.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import FormulaSyntaxError, UnboundVariableError
from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Exists, ForAll, Formula, Implies,
    InterpretedAtom, Macro, Membership, Not, Or, free_vars, is_var,
)
from .macros import REGISTRY, is_literal

_UNICODE = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "∈": "in", "∀": "forall", "∃": "exists"}

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<nl>\n)
      | (?P<arrow>->|→)
      | (?P<sym>[~&|=().,¬∧∨∈∀∃])
      | (?P<num>\#\d+|∅)
      | (?P<brace>\{)
      | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - col0 + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            col0 = m.end()
        elif kind == "brace":
            end = _match_brace(text, pos, line, col)
            out.append(Token("lit", re.sub(r"\s+", "", text[pos:end]), line, col))
            pos = end
            continue
        elif kind == "num":
            out.append(Token("lit", m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            if word in ("forall", "exists", "in"):
                out.append(Token(word, word, line, col))
            else:
                out.append(Token("ident", word, line, col))
        elif kind in ("sym", "arrow"):
            s = _UNICODE.get(m.group(), m.group())
            out.append(Token(s if s in ("forall", "exists", "in") else s, s, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, len(text) - col0 + 1))
    return out


def _match_brace(text: str, pos: int, line: int, col: int) -> int:
    depth = 0
    for i in range(pos, len(text)):
        ch = text[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
        elif not (ch.isspace() or ch in ",#∅" or ch.isdigit()):
            raise FormulaSyntaxError(f"bad character {ch!r} in set literal", line, col)
    raise FormulaSyntaxError("unterminated set literal", line, col)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        raise FormulaSyntaxError(msg, tok.line, tok.column)

    def eat(self, kind: str) -> Token:
        tok = self.cur
        if tok.kind != kind:
            shown = tok.text or "end of input"
            self.error(f"expected {kind!r} but found {shown!r}")
        self.i += 1
        return tok

    def var(self) -> str:
        tok = self.eat("ident")
        if not is_var(tok.text):
            self.error(f"{tok.text!r} is not a variable name", tok)
        return tok.text

    def formula(self) -> Formula:
        if self.cur.kind in ("forall", "exists"):
            return self.quant()
        return self.implies()

    def quant(self) -> Formula:
        q = self.eat(self.cur.kind).kind
        v = self.var()
        bound = None
        if self.cur.kind == "in":
            self.eat("in")
            bound = self.var()
        self.eat(".")
        body = self.formula()
        if bound is None:
            return ForAll(v, body) if q == "forall" else Exists(v, body)
        return BoundedForAll(v, bound, body) if q == "forall" else BoundedExists(v, bound, body)

    def implies(self) -> Formula:
        left = self.disj()
        if self.cur.kind == "->":
            self.eat("->")
            right = self.quant() if self.cur.kind in ("forall", "exists") else self.implies()
            return Implies(left, right)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.cur.kind == "|":
            self.eat("|")
            if self.cur.kind in ("forall", "exists"):
                return Or(left, self.quant())
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.cur.kind == "&":
            self.eat("&")
            if self.cur.kind in ("forall", "exists"):
                return And(left, self.quant())
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.cur
        if tok.kind == "~":
            self.eat("~")
            if self.cur.kind in ("forall", "exists"):
                return Not(self.quant())
            return Not(self.unary())
        if tok.kind == "(":
            self.eat("(")
            f = self.formula()
            self.eat(")")
            return f
        if tok.kind in ("forall", "exists"):
            return self.quant()
        if tok.kind == "ident" and not is_var(tok.text):
            return self.named_atom()
        left = self.var()
        if self.cur.kind == "in":
            self.eat("in")
            return Membership(left, self.var())
        if self.cur.kind == "=":
            self.eat("=")
            return Equality(left, self.var())
        self.error("expected 'in' or '='")

    def named_atom(self) -> Formula:
        tok = self.eat("ident")
        d = REGISTRY.get(tok.text)
        if d is None:
            self.error(f"unknown macro {tok.text!r}", tok)
        self.eat("(")
        args = [self.arg()]
        while self.cur.kind == ",":
            self.eat(",")
            args.append(self.arg())
        self.eat(")")
        if len(args) != d.arity:
            self.error(f"{d.name} takes {d.arity} arguments, got {len(args)}", tok)
        for i, a in enumerate(args):
            if is_literal(a) and i not in d.literal_slots:
                self.error(f"argument {i + 1} of {d.name} must be a variable", tok)
            if i in d.literal_slots and d.name == "Is" and not is_literal(a):
                self.error("the second argument of Is must be a set literal", tok)
        node = InterpretedAtom if d.interpreted else Macro
        return node(d.name, tuple(args))

    def arg(self) -> str:
        tok = self.cur
        if tok.kind == "lit":
            self.i += 1
            return tok.text
        return self.var()


def parse(text: str, free: Iterable[str] | None = None) -> Formula:
    """Parse one formula; if ``free`` is given every free variable must be in it."""
    p = _Parser(tokenize(text))
    f = p.formula()
    if p.cur.kind != "eof":
        p.error(f"unexpected {p.cur.text!r} after formula")
    if free is not None:
        allowed = set(free)
        for v in free_vars(f):
            if v not in allowed:
                raise UnboundVariableError(f"free variable {v!r} is not declared")
    return f


def parse_list(text: str) -> list[Formula]:
    """One formula per non-blank line; ``%`` starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(str(exc).rsplit(" at line", 1)[0], lineno, exc.column) from None
    return out
