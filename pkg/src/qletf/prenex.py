"""Prenex normal form.

The transformation works bottom-up on the syntax tree:

* quantifiers are moved out of ``&``/``|`` after every binder has been given
  a globally fresh name, so "x not free in the other operand" always holds;
  the left operand's prefix goes first;
* ``~`` is pushed through quantifiers (``~forall x. A`` becomes
  ``exists x. ~A`` and dually) and through ``&``/``|`` by De Morgan;
* ``@A`` over a formula that contains quantifiers becomes ``A^T | A^F``
  (reliably true or reliably false), and the ``^T``/``^F`` marks are pushed
  inward: through ``~`` they swap, through ``&``/``|`` they distribute (``F``
  turning ``&`` into ``|`` and back), and through a quantifier ``^T`` keeps it
  while ``^F`` dualises it.  So ``@forall x. B`` becomes
  ``(forall x. B^T) | (exists x. B^F)``, each body is copied once rather than
  twice per level, and ``@@A`` becomes ``top``.

Equivalences are applied under binders directly rather than through a fresh
constant.  A binder whose variable disappears from the transformed body (only
possible through ``@@A -> top``) is dropped, which is sound because domains
are nonempty and all instances then have the same value.
"""

from __future__ import annotations

import itertools

from .models import FOVerdict, fo_equivalent
from .syntax import (
    QUANTIFIERS,
    TOP,
    And,
    Circ,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Signature,
    all_vars,
    fresh_names,
    free_vars,
    is_quantifier_free,
    rename_bound,
    rename_var,
)

_DUAL = {Forall: Exists, Exists: Forall}


def split_prefix(f: Formula) -> tuple[list[tuple[type, str]], Formula]:
    prefix = []
    while isinstance(f, QUANTIFIERS):
        prefix.append((type(f), f.var))
        f = f.body
    return prefix, f


def with_prefix(prefix, matrix: Formula) -> Formula:
    for q, v in reversed(prefix):
        matrix = q(v, matrix)
    return matrix


def is_pnf(f: Formula) -> bool:
    """A quantifier prefix over a quantifier-free matrix.

    Generalized literals, ``top`` and ``bot`` are the empty-prefix cases.
    """
    return is_quantifier_free(split_prefix(f)[1])


class _Prenexer:
    def __init__(self):
        self.fresh = (f"_q{i}" for i in itertools.count(1))

    def bind(self, q: type, var: str, body: Formula, transform) -> Formula:
        v = next(self.fresh)
        inner = transform(rename_var(body, var, v))
        prefix, matrix = split_prefix(inner)
        if v not in free_vars(matrix):
            return inner
        return with_prefix([(q, v)] + prefix, matrix)

    def combine(self, kind: type, a: Formula, b: Formula) -> Formula:
        pa, ma = split_prefix(a)
        pb, mb = split_prefix(b)
        return with_prefix(pa + pb, kind(ma, mb))

    def negate(self, g: Formula) -> Formula:
        prefix, matrix = split_prefix(g)
        return with_prefix([(_DUAL[q], v) for q, v in prefix], Not(matrix))

    def go(self, f: Formula) -> Formula:
        if is_quantifier_free(f):
            return f
        if isinstance(f, QUANTIFIERS):
            return self.bind(type(f), f.var, f.body, self.go)
        if isinstance(f, (And, Or)):
            return self.combine(type(f), self.go(f.left), self.go(f.right))
        if isinstance(f, Not):
            g = f.arg
            if isinstance(g, Not):
                return self.go(g.arg)
            if isinstance(g, And):
                return self.go(Or(Not(g.left), Not(g.right)))
            if isinstance(g, Or):
                return self.go(And(Not(g.left), Not(g.right)))
            if isinstance(g, QUANTIFIERS):
                return self.go(_DUAL[type(g)](g.var, Not(g.body)))
            return self.negate(self.go(g))
        return self.circ(f.arg)

    def circ(self, g: Formula) -> Formula:
        """PNF of ``@g``: ``@g`` is equivalent to ``g^T | g^F``."""
        if is_quantifier_free(g):
            return Circ(g)
        if isinstance(g, Circ):
            return TOP
        return self.combine(Or, self.reliably(g, True), self.reliably(g, False))

    def reliably(self, g: Formula, true: bool) -> Formula:
        """PNF of ``g^T`` (``true``) or ``g^F``, pushed inward by propagation."""
        if is_quantifier_free(g):
            return And(g, Circ(g)) if true else And(Not(g), Circ(g))
        if isinstance(g, Not):
            return self.reliably(g.arg, not true)
        if isinstance(g, (And, Or)):
            # (A & B)^T = A^T & B^T and (A & B)^F = A^F | B^F; dually for |
            kind = type(g) if true else (Or if isinstance(g, And) else And)
            return self.combine(
                kind, self.reliably(g.left, true), self.reliably(g.right, true)
            )
        if isinstance(g, QUANTIFIERS):
            q = type(g) if true else _DUAL[type(g)]
            return self.bind(q, g.var, g.body, lambda b: self.reliably(b, true))
        # (@A)^T is equivalent to @A and (@A)^F to ~@A
        c = self.circ(g.arg)
        return c if true else self.negate(c)


def to_pnf(f: Formula) -> Formula:
    """An equivalent sentence in prenex normal form.

    Bound variables of the result are ``x1, x2, ...`` in prefix order,
    skipping names used in ``f``.  Quantifier-free input is returned as is.
    """
    if is_quantifier_free(f):
        return f
    g = _Prenexer().go(f)
    return rename_bound(g, fresh_names(all_vars(f)))


def verify_pnf(
    f: Formula, g: Formula, max_size: int = 2, sig: Signature | None = None, **kw
) -> FOVerdict:
    """Bounded two-sided consequence check between ``f`` and ``g``."""
    return fo_equivalent(f, g, sig, max_size, **kw)
