"""ASCII surface syntax.

::

    formula  := quant | disj
    quant    := ("forall" | "exists") IDENT "." formula
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := ("~" | "@" | "#") unary | quant | primary
    primary  := "(" formula ")" | "top" | "bot" | IDENT "(" terms? ")" | IDENT

``~`` is negation, ``@`` classicality and ``#`` its dual (``~@``).  Quantifier
scope extends as far right as possible.  A lowercase identifier on its own
is a propositional atom; a capitalised one is a 0-ary predicate.  Inside an
argument list an identifier is a variable when a binder is in scope and a
constant otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    BOTTOM,
    TOP,
    And,
    Atom,
    ArityError,
    Bullet,
    Circ,
    Const,
    Exists,
    Forall,
    Formula,
    LexicalError,
    Not,
    Or,
    ParseError,
    PropAtom,
    Signature,
    UnboundNameError,
    Var,
    check_well_formed,
)

KEYWORDS = {"forall", "exists", "top", "bot"}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[~@#&|().,]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LexicalError(f"unexpected character {text[pos]!r} at column {pos}")
        if m.group("ident"):
            word = m.group("ident")
            toks.append(_Tok("kw" if word in KEYWORDS else "ident", word, m.start("ident")))
        else:
            toks.append(_Tok("op", m.group("op"), m.start("op")))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig
        self.scope: list[str] = []
        self.arities: dict[str, int] = {}

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r} at column {tok.pos}, found {found!r}")

    def parse(self) -> Formula:
        f = self.formula()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r} at column {tok.pos}")
        return f

    def formula(self) -> Formula:
        if self.peek().text in ("forall", "exists") and self.peek().kind == "kw":
            return self.quant()
        return self.disj()

    def quant(self) -> Formula:
        kw = self.next().text
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError(f"expected a variable after {kw} at column {tok.pos}")
        var = tok.text
        if self.sig is not None and var in self.sig.constants:
            raise UnboundNameError(f"{var} is a constant and cannot be bound")
        self.expect(".")
        self.scope.append(var)
        try:
            body = self.formula()
        finally:
            self.scope.pop()
        return (Forall if kw == "forall" else Exists)(var, body)

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "op" and tok.text in "~@#":
            self.next()
            arg = self.unary()
            if tok.text == "~":
                return Not(arg)
            if tok.text == "@":
                return Circ(arg)
            return Bullet(arg)
        if tok.kind == "kw" and tok.text in ("forall", "exists"):
            return self.quant()
        return self.primary()

    def primary(self) -> Formula:
        tok = self.next()
        if tok.text == "(" and tok.kind == "op":
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "kw":
            if tok.text == "top":
                return TOP
            if tok.text == "bot":
                return BOTTOM
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise ParseError(f"unexpected {found!r} at column {tok.pos}")
        name = tok.text
        if self.peek().text == "(":
            self.next()
            args = []
            if self.peek().text != ")":
                args.append(self.term())
                while self.peek().text == ",":
                    self.next()
                    args.append(self.term())
            self.expect(")")
            return self.atom(name, tuple(args), tok.pos)
        if name[0].isupper():
            return self.atom(name, (), tok.pos)
        return PropAtom(name)

    def atom(self, name: str, args: tuple, pos: int) -> Formula:
        n = len(args)
        if self.sig is not None:
            declared = self.sig.arity(name)
            if declared is None:
                raise UnboundNameError(f"unknown predicate {name} at column {pos}")
            if declared != n:
                raise ArityError(f"{name} has arity {declared}, used with {n} at column {pos}")
        elif self.arities.setdefault(name, n) != n:
            raise ArityError(f"{name} used with arities {self.arities[name]} and {n}")
        return Atom(name, args)

    def term(self):
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError(f"expected a term at column {tok.pos}")
        name = tok.text
        if name in self.scope:
            return Var(name)
        if self.sig is not None and name not in self.sig.constants:
            raise UnboundNameError(f"{name} is neither a bound variable nor a constant")
        return Const(name)


def parse(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text``; without ``sig`` unknown names are accepted as declared."""
    f = _Parser(text, sig).parse()
    check_well_formed(f)
    return f


def parse_many(texts, sig: Signature | None = None) -> tuple[list[Formula], Signature]:
    """Parse several formulas against one signature, inferring it if absent."""
    formulas = [parse(t, sig) for t in texts]
    inferred = Signature.of(formulas)
    return formulas, sig.merge(inferred) if sig is not None else inferred


# --------------------------------------------------------------------------
# rendering

_QUANT, _OR, _AND, _UNARY = 0, 1, 2, 3


def _level(f: Formula) -> int:
    if isinstance(f, (Forall, Exists)):
        return _QUANT
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _UNARY


def _term(t) -> str:
    return str(t)


def render(f: Formula) -> str:
    def go(g: Formula, need: int) -> str:
        s = raw(g)
        if g != TOP and g != BOTTOM and _level(g) < need:
            return f"({s})"
        return s

    def raw(g: Formula) -> str:
        if g == TOP:
            return "top"
        if g == BOTTOM:
            return "bot"
        if isinstance(g, PropAtom):
            return g.name
        if isinstance(g, Atom):
            return f"{g.pred}({','.join(_term(t) for t in g.args)})"
        if isinstance(g, Not):
            return "~" + go(g.arg, _UNARY)
        if isinstance(g, Circ):
            return "@" + go(g.arg, _UNARY)
        if isinstance(g, (Or, And)):
            # walk the left spine iteratively; long clause lists are common
            kind, op, need = (Or, " | ", _AND) if isinstance(g, Or) else (And, " & ", _UNARY)
            rights = []
            while isinstance(g, kind):
                rights.append(g.right)
                g = g.left
            parts = [go(g, need - 1)] + [go(r, need) for r in reversed(rights)]
            return op.join(parts)
        kw = "forall" if isinstance(g, Forall) else "exists"
        return f"{kw} {g.var}. {go(g.body, _QUANT)}"

    return go(f, _QUANT)


# --------------------------------------------------------------------------
# signature files

_SIG_PRED = re.compile(r"^pred\s+([A-Za-z][A-Za-z0-9_]*)\s*/\s*(\d+)$")
_SIG_CONST = re.compile(r"^const\s+([a-z][A-Za-z0-9_]*)$")


def load_signature(text: str) -> Signature:
    """Lines ``pred P/2`` and ``const c``; ``#`` starts a comment."""
    preds: dict[str, int] = {}
    consts: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SIG_PRED.match(line)
        if m:
            name, n = m.group(1), int(m.group(2))
            if preds.setdefault(name, n) != n:
                raise ArityError(f"line {lineno}: {name} declared with arities {preds[name]} and {n}")
            continue
        m = _SIG_CONST.match(line)
        if m:
            if m.group(1) in KEYWORDS:
                raise ParseError(f"line {lineno}: {m.group(1)} is a keyword")
            consts.add(m.group(1))
            continue
        raise ParseError(f"line {lineno}: cannot read {raw.strip()!r}")
    return Signature(preds, frozenset(consts))
