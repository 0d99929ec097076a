"""Prefix reduction, classicality expansion and DNF/CNF conversion.

The pipeline for :func:`to_normal_form` is

1. :func:`expand_classicality` pushes every ``@`` and ``#`` down to atoms,
   so no connective survives inside their scope;
2. :func:`push_negations` applies De Morgan and double negation until ``~``
   only meets atoms, collapsing any ``~``/``@`` prefix chain to one of
   ``A, ~A, @A, #A, top, bot``;
3. clause-list distribution produces the requested shape.

``top`` and ``bot`` are treated as opaque literals throughout.
"""

from __future__ import annotations

import enum
import functools
import operator

from .parsing import render
from .syntax import (
    ATOMIC,
    BOTTOM,
    QUANTIFIERS,
    TOP,
    And,
    Bullet,
    Circ,
    Formula,
    LogicError,
    Not,
    Or,
    conjoin,
    disjoin,
    flatten,
)


class NormalFormKind(enum.Enum):
    DNF = "dnf"
    CNF = "cnf"


# --------------------------------------------------------------------------
# prefix chains

# state after reading a prefix from the inside out
_X, _NEG, _CIRC, _BUL, _TOP, _BOT = range(6)

_STEP = {
    (_X, "~"): _NEG, (_X, "@"): _CIRC,
    (_NEG, "~"): _X, (_NEG, "@"): _CIRC,
    (_CIRC, "~"): _BUL, (_CIRC, "@"): _TOP,
    (_BUL, "~"): _CIRC, (_BUL, "@"): _TOP,
    (_TOP, "~"): _BOT, (_TOP, "@"): _TOP,
    (_BOT, "~"): _TOP, (_BOT, "@"): _TOP,
}


def _split_chain(f: Formula) -> tuple[list[str], Formula]:
    ops = []
    while isinstance(f, (Not, Circ)):
        ops.append("~" if isinstance(f, Not) else "@")
        f = f.arg
    return ops, f


def _collapse(ops: list[str], base: Formula) -> Formula:
    state = _X
    for op in reversed(ops):
        state = _STEP[state, op]
    if state == _X:
        return base
    if state == _NEG:
        return Not(base)
    if state == _CIRC:
        return Circ(base)
    if state == _BUL:
        return Bullet(base)
    return TOP if state == _TOP else BOTTOM


def is_prefix_chain(f: Formula) -> bool:
    return isinstance(_split_chain(f)[1], ATOMIC)


def reduce_prefix(f: Formula) -> Formula:
    """Collapse every maximal ``~``/``@`` chain to at most two operators.

    The rewrites used (``~~A = A``, ``@~A = @A``, ``@@A = top`` and their
    consequences) hold for arbitrary ``A``, so chains over compound bases are
    collapsed as well after the base itself has been reduced.
    """
    if f == TOP or f == BOTTOM:
        return f
    ops, base = _split_chain(f)
    if isinstance(base, (And, Or)):
        base = type(base)(reduce_prefix(base.left), reduce_prefix(base.right))
    elif isinstance(base, QUANTIFIERS):
        base = type(base)(base.var, reduce_prefix(base.body))
    return _collapse(ops, base)


# --------------------------------------------------------------------------
# classicality expansion

def _circ_exp(g: Formula) -> Formula:
    """A formula equivalent to ``@g`` with ``@`` and ``#`` only on atoms."""
    if isinstance(g, ATOMIC):
        return Circ(g)
    if isinstance(g, Not):
        return _circ_exp(g.arg)
    if isinstance(g, Circ):
        return TOP
    if isinstance(g, QUANTIFIERS):
        raise LogicError("classicality expansion is for quantifier-free formulas")
    a, b = g.left, g.right
    ca, cb = _circ_exp(a), _circ_exp(b)
    ea, eb = expand_classicality(a), expand_classicality(b)
    na, nb = expand_classicality(Not(a)), expand_classicality(Not(b))
    if isinstance(g, And):
        return disjoin([conjoin([ca, cb, ea, eb]), And(ca, na), And(cb, nb)])
    return disjoin([And(ca, ea), And(cb, eb), conjoin([ca, cb, na, nb])])


def _bullet_exp(g: Formula) -> Formula:
    """A formula equivalent to ``#g`` with ``@`` and ``#`` only on atoms."""
    if isinstance(g, ATOMIC):
        return Bullet(g)
    if isinstance(g, Not):
        return _bullet_exp(g.arg)
    if isinstance(g, Circ):
        return BOTTOM
    if isinstance(g, QUANTIFIERS):
        raise LogicError("classicality expansion is for quantifier-free formulas")
    a, b = g.left, g.right
    ba, bb = _bullet_exp(a), _bullet_exp(b)
    ea, eb = expand_classicality(a), expand_classicality(b)
    na, nb = expand_classicality(Not(a)), expand_classicality(Not(b))
    if isinstance(g, And):
        return conjoin([disjoin([ba, bb, na, nb]), Or(ba, ea), Or(bb, eb)])
    return conjoin([Or(ba, na), Or(bb, nb), disjoin([ba, bb, ea, eb])])


def expand_classicality(f: Formula) -> Formula:
    if f == TOP or f == BOTTOM or isinstance(f, ATOMIC):
        return f
    if isinstance(f, Circ):
        return _circ_exp(f.arg)
    if isinstance(f, Not):
        if isinstance(f.arg, Circ):
            return _bullet_exp(f.arg.arg)
        return Not(expand_classicality(f.arg))
    if isinstance(f, (And, Or)):
        return type(f)(expand_classicality(f.left), expand_classicality(f.right))
    raise LogicError("classicality expansion is for quantifier-free formulas")


def classicality_is_flat(f: Formula) -> bool:
    """True when every ``@`` applies directly to an atom (top/bot excepted)."""
    if f == TOP or f == BOTTOM or isinstance(f, ATOMIC):
        return True
    if isinstance(f, Circ):
        return isinstance(f.arg, ATOMIC)
    if isinstance(f, Not):
        return classicality_is_flat(f.arg)
    if isinstance(f, (And, Or)):
        return classicality_is_flat(f.left) and classicality_is_flat(f.right)
    return classicality_is_flat(f.body)


# --------------------------------------------------------------------------
# negation normal form

def push_negations(f: Formula) -> Formula:
    if f == TOP or f == BOTTOM or isinstance(f, ATOMIC):
        return f
    if isinstance(f, And):
        return And(push_negations(f.left), push_negations(f.right))
    if isinstance(f, Or):
        return Or(push_negations(f.left), push_negations(f.right))
    if is_prefix_chain(f):
        return reduce_prefix(f)
    if isinstance(f, Circ):
        # only reachable when the input skipped expansion
        return push_negations(expand_classicality(f))
    g = f.arg
    if isinstance(g, Not):
        return push_negations(g.arg)
    if isinstance(g, And):
        return Or(push_negations(Not(g.left)), push_negations(Not(g.right)))
    if isinstance(g, Or):
        return And(push_negations(Not(g.left)), push_negations(Not(g.right)))
    if isinstance(g, Circ):
        return push_negations(expand_classicality(f))
    raise LogicError("negation pushing is for quantifier-free formulas")


# --------------------------------------------------------------------------
# distribution
#
# A clause is stored per atom as a 6-bit mask over the snapshot values (in
# table order).  In a DNF conjunction the mask is the set of values the atom
# may take for every literal on it to be designated; in a CNF disjunction it
# is the set of values for which some literal on it is designated.  This
# makes contradictory conjunctions and tautological disjunctions visible,
# and lets absorption compare clauses by mask inclusion.

_FULL = 0b111111


def _mask(*names: str) -> int:
    order = ["T", "T0", "b", "n", "F0", "F"]
    return sum(1 << order.index(n) for n in names)


# literal shapes on an atom A, in output order: A, ~A, @A, #A
_SHAPES = (
    (lambda a: a, _mask("T", "T0", "b")),
    (lambda a: Not(a), _mask("b", "F0", "F")),
    (lambda a: Circ(a), _mask("T", "F")),
    (lambda a: Bullet(a), _mask("T0", "b", "n", "F0")),
)


def is_nf_literal(f: Formula) -> bool:
    if f == TOP or f == BOTTOM:
        return True
    if isinstance(f, Not) and isinstance(f.arg, Circ):
        f = f.arg.arg
    elif isinstance(f, (Not, Circ)):
        f = f.arg
    return isinstance(f, ATOMIC)


def _literal(f: Formula) -> tuple[Formula, int]:
    if isinstance(f, Not) and isinstance(f.arg, Circ):
        return f.arg.arg, _SHAPES[3][1]
    if isinstance(f, Not):
        return f.arg, _SHAPES[1][1]
    if isinstance(f, Circ):
        return f.arg, _SHAPES[2][1]
    return f, _SHAPES[0][1]


class _Algebra:
    """Clause operations for one normal-form kind."""

    def __init__(self, kind: NormalFormKind):
        self.dnf = kind is NormalFormKind.DNF
        # neutral per-atom mask; an atom at this mask is simply absent
        self.unit = _FULL if self.dnf else 0
        # per-atom mask that collapses the whole clause
        self.zero = 0 if self.dnf else _FULL

    def leaf(self, f: Formula) -> list[dict]:
        if f == TOP:
            return [{}] if self.dnf else []
        if f == BOTTOM:
            return [] if self.dnf else [{}]
        atom, m = _literal(f)
        return [{atom: m}]

    def combine(self, c: dict, d: dict) -> dict | None:
        out = dict(c)
        for atom, m in d.items():
            m = (out.get(atom, self.unit) & m) if self.dnf else (out.get(atom, self.unit) | m)
            if m == self.zero:
                return None
            out[atom] = m
        return out

    def absorbs(self, c: dict, d: dict) -> bool:
        """Whether ``d`` is redundant next to ``c``."""
        if self.dnf:
            # d implies c
            return all(d.get(a, _FULL) & ~m == 0 for a, m in c.items())
        # c implies d
        return all(m & ~d.get(a, 0) == 0 for a, m in c.items())

    def minimal(self, clauses) -> list[dict]:
        unique = []
        for c in clauses:
            if c is not None and c not in unique:
                unique.append(c)
        return [
            c for i, c in enumerate(unique)
            if not any(j != i and self.absorbs(k, c) for j, k in enumerate(unique))
        ]

    def literals(self, atom: Formula, m: int) -> list[Formula]:
        if self.dnf:
            chosen = [(mk, lm) for mk, lm in _SHAPES if m & ~lm == 0]
            combine = lambda ms: functools.reduce(operator.and_, ms, _FULL)  # noqa: E731
        else:
            chosen = [(mk, lm) for mk, lm in _SHAPES if lm & ~m == 0]
            combine = lambda ms: functools.reduce(operator.or_, ms, 0)  # noqa: E731
        for item in list(chosen):
            rest = [x for x in chosen if x is not item]
            if combine(lm for _, lm in rest) == m:
                chosen = rest
        return [mk(atom) for mk, _ in chosen]


def _clauses(f: Formula, alg: _Algebra, outer: type, inner: type) -> list[dict]:
    if isinstance(f, outer):
        return alg.minimal(_clauses(f.left, alg, outer, inner) + _clauses(f.right, alg, outer, inner))
    if isinstance(f, inner):
        left = _clauses(f.left, alg, outer, inner)
        right = _clauses(f.right, alg, outer, inner)
        return alg.minimal(alg.combine(a, b) for a in left for b in right)
    if not is_nf_literal(f):
        raise LogicError(f"not a literal after negation pushing: {render(f)}")
    return alg.leaf(f)


def to_normal_form(f: Formula, kind: NormalFormKind = NormalFormKind.DNF) -> Formula:
    """Equivalent formula in disjunctive or conjunctive normal form.

    Distribution runs bottom-up on clause sets; contradictory conjunctions,
    tautological disjunctions and absorbed clauses are dropped on the way.
    Output is deterministic but not necessarily minimal.
    """
    nnf = push_negations(expand_classicality(f))
    alg = _Algebra(kind)
    outer, inner = (Or, And) if alg.dnf else (And, Or)
    join_outer = disjoin if alg.dnf else conjoin
    join_inner = conjoin if alg.dnf else disjoin
    clauses = _clauses(nnf, alg, outer, inner)
    if not clauses:
        return BOTTOM if alg.dnf else TOP
    parts = []
    for c in clauses:
        lits = [
            lit
            for atom in sorted(c, key=render)
            for lit in alg.literals(atom, c[atom])
        ]
        if not lits:
            lits = [TOP if alg.dnf else BOTTOM]
        parts.append(join_inner(lits))
    return join_outer(parts)


def is_normal_form(f: Formula, kind: NormalFormKind = NormalFormKind.DNF) -> bool:
    outer, inner = (Or, And) if kind is NormalFormKind.DNF else (And, Or)
    return all(
        is_nf_literal(lit)
        for clause in flatten(f, outer)
        for lit in flatten(clause, inner)
    )
