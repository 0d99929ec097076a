"""Text format for derivations.

::

    (rule E| :conclude "q | p" :discharge 1
      (premise "p | q")
      (rule I| :conclude "q | p" (hyp 1 "p"))
      (rule I| :conclude "q | p" (hyp 1 "q")))

Formulas are quoted in the usual surface syntax (``\\"`` and ``\\\\`` escape).
``:eigen c`` names the eigen constant of a quantifier rule.  ``;`` starts a
comment running to the end of the line.
"""

from __future__ import annotations

import re

from ..parsing import parse, render
from ..syntax import ParseError
from .checker import ProofTree
from .rules import RuleId


class ProofFormatError(ParseError):
    pass


_TOKEN = re.compile(
    r'\s*(?:(?P<comment>;[^\n]*)|(?P<open>\()|(?P<close>\))'
    r'|(?P<str>"(?:[^"\\]|\\.)*")|(?P<sym>[^\s()";]+))'
)


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ProofFormatError(f"unexpected character at offset {pos}")
            return out
        pos = m.end()
        kind = m.lastgroup
        if kind == "comment":
            continue
        value = m.group(kind)
        if kind == "str":
            value = re.sub(r"\\(.)", r"\1", value[1:-1])
        out.append((kind, value, m.start(kind)))


def _read(tokens, i: int):
    """One s-expression starting at ``tokens[i]``; returns (value, next index)."""
    if i >= len(tokens):
        raise ProofFormatError("unexpected end of input")
    kind, value, pos = tokens[i]
    if kind == "close":
        raise ProofFormatError(f"unbalanced ')' at offset {pos}")
    if kind != "open":
        return (kind, value), i + 1
    items, i = [], i + 1
    while True:
        if i >= len(tokens):
            raise ProofFormatError(f"unclosed '(' at offset {pos}")
        if tokens[i][0] == "close":
            return items, i + 1
        item, i = _read(tokens, i)
        items.append(item)


def _formula(item, what: str):
    if not isinstance(item, tuple) or item[0] != "str":
        raise ProofFormatError(f"{what}: expected a quoted formula")
    try:
        return parse(item[1])
    except ParseError as e:
        raise ProofFormatError(f"{what}: {e}") from None


def _atom(item, what: str) -> str:
    if not isinstance(item, tuple):
        raise ProofFormatError(f"{what}: expected a name")
    return item[1]


def _build(expr) -> ProofTree:
    if not isinstance(expr, list) or not expr:
        raise ProofFormatError("expected a parenthesised node")
    head = _atom(expr[0], "node")
    if head == "premise":
        if len(expr) != 2:
            raise ProofFormatError("premise takes exactly one formula")
        return ProofTree(_formula(expr[1], "premise"), RuleId.PREMISE)
    if head == "hyp":
        if len(expr) != 3:
            raise ProofFormatError("hyp takes a label and a formula")
        return ProofTree(_formula(expr[2], "hyp"), RuleId.HYP,
                         discharge_label=_atom(expr[1], "hyp label"))
    if head != "rule" or len(expr) < 2:
        raise ProofFormatError(f"unknown node {head!r}")
    name = _atom(expr[1], "rule")
    try:
        rule = RuleId.parse(name)
    except KeyError as e:
        raise ProofFormatError(str(e)) from None
    if rule in (RuleId.PREMISE, RuleId.HYP):
        raise ProofFormatError(f"use ({name} ...) rather than (rule {name} ...)")
    conclusion, label, eigen, kids = None, None, None, []
    i = 2
    while i < len(expr):
        item = expr[i]
        if isinstance(item, tuple) and item[1].startswith(":"):
            if i + 1 >= len(expr):
                raise ProofFormatError(f"{item[1]} needs a value")
            value = expr[i + 1]
            if item[1] == ":conclude":
                conclusion = _formula(value, name)
            elif item[1] == ":discharge":
                label = _atom(value, ":discharge")
            elif item[1] == ":eigen":
                eigen = _atom(value, ":eigen")
            else:
                raise ProofFormatError(f"unknown keyword {item[1]}")
            i += 2
        else:
            kids.append(_build(item))
            i += 1
    if conclusion is None:
        raise ProofFormatError(f"rule {name} without :conclude")
    return ProofTree(conclusion, rule, tuple(kids), label, eigen)


def load_proof(text: str) -> ProofTree:
    toks = _tokens(text)
    expr, i = _read(toks, 0)
    if i != len(toks):
        raise ProofFormatError("trailing input after the proof")
    return _build(expr)


def _quote(f) -> str:
    return '"' + render(f).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dump_proof(t: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    if t.rule is RuleId.PREMISE:
        return f"{pad}(premise {_quote(t.conclusion)})"
    if t.rule is RuleId.HYP:
        return f"{pad}(hyp {t.discharge_label} {_quote(t.conclusion)})"
    head = f"{pad}(rule {t.rule.value} :conclude {_quote(t.conclusion)}"
    if t.discharge_label is not None:
        head += f" :discharge {t.discharge_label}"
    if t.eigen_constant is not None:
        head += f" :eigen {t.eigen_constant}"
    if not t.children:
        return head + ")"
    return "\n".join([head] + [dump_proof(c, indent + 1) for c in t.children]) + ")"
