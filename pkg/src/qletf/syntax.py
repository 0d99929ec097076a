"""Formula and term representation for the propositional and first-order languages.

Formulas are immutable trees built from eight primitive node kinds.  The
derived connectives (``#A``, ``A^T``, ``A^F``, ``top``, ``bot``) are plain
functions returning primitive trees, so downstream code never has to know
about them except where it chooses to recognise the patterns.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class LogicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LogicError):
    pass


class LexicalError(ParseError):
    pass


class ArityError(ParseError):
    pass


class UnboundNameError(ParseError):
    pass


class VoidQuantifierError(ParseError):
    pass


# --------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    # diagram names denote a domain element directly and never collide with
    # signature constants
    diagram: bool = False

    def __str__(self) -> str:
        return f"<{self.name}>" if self.diagram else self.name


Term = Union[Var, Const]


# --------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class PropAtom:
    name: str


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Circ:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[PropAtom, Atom, Not, Circ, And, Or, Forall, Exists]
ATOMIC = (PropAtom, Atom)
BINARY = (And, Or)
QUANTIFIERS = (Forall, Exists)

#: Atom underlying ``top``/``bot``; not expressible in the surface syntax.
RESERVED_ATOM = PropAtom("_p0")


def Bullet(a: Formula) -> Formula:
    return Not(Circ(a))


def TSup(a: Formula) -> Formula:
    """Reliably true: ``@A & A``."""
    return And(Circ(a), a)


def FSup(a: Formula) -> Formula:
    """Reliably false: ``@A & ~A``."""
    return And(Circ(a), Not(a))


TOP = Circ(Circ(RESERVED_ATOM))
BOTTOM = Bullet(Bullet(RESERVED_ATOM))


def is_top(f: Formula) -> bool:
    return f == TOP


def is_bottom(f: Formula) -> bool:
    return f == BOTTOM


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction of a nonempty sequence."""
    it = iter(parts)
    out = next(it)
    for p in it:
        out = And(out, p)
    return out


def disjoin(parts: Iterable[Formula]) -> Formula:
    it = iter(parts)
    out = next(it)
    for p in it:
        out = Or(out, p)
    return out


def flatten(f: Formula, kind: type) -> list[Formula]:
    """Operands of a maximal ``kind``-tree (``And`` or ``Or``) rooted at ``f``."""
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, kind):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


# --------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class Signature:
    predicates: dict = field(default_factory=dict)
    constants: frozenset = frozenset()

    def arity(self, pred: str) -> int | None:
        return self.predicates.get(pred)

    def merge(self, other: "Signature") -> "Signature":
        preds = dict(self.predicates)
        for name, n in other.predicates.items():
            if preds.get(name, n) != n:
                raise ArityError(f"predicate {name} used with arities {preds[name]} and {n}")
            preds[name] = n
        return Signature(preds, self.constants | other.constants)

    @classmethod
    def of(cls, formulas: Iterable[Formula]) -> "Signature":
        """The smallest signature covering ``formulas``; arity conflicts raise."""
        preds: dict[str, int] = {}
        consts: set[str] = set()
        for f in formulas:
            for node in walk(f):
                if isinstance(node, Atom):
                    name, n = node.pred, len(node.args)
                    if preds.setdefault(name, n) != n:
                        raise ArityError(
                            f"predicate {name} used with arities {preds[name]} and {n}"
                        )
                    consts.update(
                        t.name for t in node.args if isinstance(t, Const) and not t.diagram
                    )
                elif isinstance(node, PropAtom) and node != RESERVED_ATOM:
                    if preds.setdefault(node.name, 0) != 0:
                        raise ArityError(f"{node.name} used both as atom and predicate")
        return cls(preds, frozenset(consts))


# --------------------------------------------------------------------------
# traversal

def children(f: Formula) -> tuple:
    if isinstance(f, ATOMIC):
        return ()
    if isinstance(f, (Not, Circ)):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.body,)


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def go(g: Formula) -> None:
        if g in seen:
            return
        for c in children(g):
            go(c)
        seen[g] = None

    go(f)
    return list(seen)


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS) for g in walk(f))


def is_atomic(f: Formula) -> bool:
    return isinstance(f, ATOMIC)


def complexity(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 1
    if isinstance(f, Circ):
        return complexity(f.arg) + 2
    if isinstance(f, Not):
        return complexity(f.arg) + 1
    if isinstance(f, BINARY):
        return complexity(f.left) + complexity(f.right) + 1
    return complexity(f.body) + 1


def is_generalized_literal(f: Formula) -> bool:
    if isinstance(f, (Not, Circ)):
        f = f.arg
    return isinstance(f, ATOMIC)


def atoms(f: Formula) -> set[Formula]:
    """Atomic subformulas, excluding the atom hidden inside ``top``/``bot``."""
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g == TOP or g == BOTTOM:
            continue
        if isinstance(g, ATOMIC):
            out.add(g)
        else:
            stack.extend(children(g))
    return out


def constants(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Atom):
            out.update(t.name for t in g.args if isinstance(t, Const))
    return out


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {t.name for t in f.args if isinstance(t, Var)}
    if isinstance(f, PropAtom):
        return set()
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    out: set[str] = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def all_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Atom):
            out.update(t.name for t in g.args if isinstance(t, Var))
        elif isinstance(g, QUANTIFIERS):
            out.add(g.var)
    return out


def check_well_formed(f: Formula, sig: Signature | None = None) -> None:
    """Reject void quantifiers and (given ``sig``) arity mismatches."""
    for g in walk(f):
        if isinstance(g, QUANTIFIERS) and g.var not in free_vars(g.body):
            kw = "forall" if isinstance(g, Forall) else "exists"
            raise VoidQuantifierError(f"void quantifier: {kw} {g.var} binds nothing")
        if sig is not None and isinstance(g, Atom):
            n = sig.arity(g.pred)
            if n is None:
                raise UnboundNameError(f"unknown predicate {g.pred}")
            if n != len(g.args):
                raise ArityError(f"{g.pred} has arity {n}, used with {len(g.args)}")


# --------------------------------------------------------------------------
# substitution

def substitute(f: Formula, x: str, c: Const) -> Formula:
    """Replace every free occurrence of variable ``x`` by constant ``c``."""
    if isinstance(f, Atom):
        if not any(isinstance(t, Var) and t.name == x for t in f.args):
            return f
        return Atom(f.pred, tuple(c if isinstance(t, Var) and t.name == x else t for t in f.args))
    if isinstance(f, PropAtom):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.arg, x, c))
    if isinstance(f, Circ):
        return Circ(substitute(f.arg, x, c))
    if isinstance(f, And):
        return And(substitute(f.left, x, c), substitute(f.right, x, c))
    if isinstance(f, Or):
        return Or(substitute(f.left, x, c), substitute(f.right, x, c))
    if f.var == x:
        return f
    return type(f)(f.var, substitute(f.body, x, c))


def replace_constant(f: Formula, c: Const, x: str) -> Formula:
    """Inverse of :func:`substitute` for a constant that occurs nowhere else."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(Var(x) if t == c else t for t in f.args))
    if isinstance(f, PropAtom):
        return f
    if isinstance(f, (Not, Circ)):
        return type(f)(replace_constant(f.arg, c, x))
    if isinstance(f, BINARY):
        return type(f)(replace_constant(f.left, c, x), replace_constant(f.right, c, x))
    return type(f)(f.var, replace_constant(f.body, c, x))


def rename_var(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of ``old`` to ``new`` (``new`` must be fresh)."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(Var(new) if t == Var(old) else t for t in f.args))
    if isinstance(f, PropAtom):
        return f
    if isinstance(f, (Not, Circ)):
        return type(f)(rename_var(f.arg, old, new))
    if isinstance(f, BINARY):
        return type(f)(rename_var(f.left, old, new), rename_var(f.right, old, new))
    if f.var == old:
        return f
    return type(f)(f.var, rename_var(f.body, old, new))


_FRESH_RE = re.compile(r"^x(\d+)$")


def fresh_names(avoid: Iterable[str] = (), stem: str = "x") -> Iterator[str]:
    """``x1, x2, ...`` skipping anything in ``avoid``."""
    avoid = set(avoid)
    for i in itertools.count(1):
        name = f"{stem}{i}"
        if name not in avoid:
            yield name


def rename_bound(f: Formula, fresh: Iterator[str] | None = None) -> Formula:
    """Alphabetic variant whose bound variables are pairwise distinct and fresh.

    Binders are renamed in pre-order, left to right.  ``fresh`` defaults to
    ``x1, x2, ...`` skipping every variable name already present in ``f``.
    """
    if fresh is None:
        fresh = fresh_names(all_vars(f))

    def go(g: Formula) -> Formula:
        if isinstance(g, ATOMIC):
            return g
        if isinstance(g, (Not, Circ)):
            return type(g)(go(g.arg))
        if isinstance(g, BINARY):
            left = go(g.left)
            return type(g)(left, go(g.right))
        new = next(fresh, None)
        if new is None:
            raise LogicError("fresh variable supply exhausted")
        return type(g)(new, go(rename_var(g.body, g.var, new)))

    return go(f)


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to the names of bound variables."""

    def go(a: Formula, b: Formula, env_a: dict, env_b: dict, depth: int) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, PropAtom):
            return a == b
        if isinstance(a, Atom):
            if a.pred != b.pred or len(a.args) != len(b.args):
                return False
            for s, t in zip(a.args, b.args):
                if isinstance(s, Var) and isinstance(t, Var):
                    ia, ib = env_a.get(s.name), env_b.get(t.name)
                    if ia != ib or (ia is None and s != t):
                        return False
                elif s != t:
                    return False
            return True
        if isinstance(a, (Not, Circ)):
            return go(a.arg, b.arg, env_a, env_b, depth)
        if isinstance(a, BINARY):
            return go(a.left, b.left, env_a, env_b, depth) and go(
                a.right, b.right, env_a, env_b, depth
            )
        return go(
            a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1
        )

    return go(f, g, {}, {}, 0)
