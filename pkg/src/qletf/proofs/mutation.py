"""Single-node mutations of derivations, for fuzzing the checker."""

from __future__ import annotations

import random

from ..syntax import (
    And,
    Atom,
    Circ,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    PropAtom,
    children,
    is_sentence,
)
from .checker import ProofTree

_PROP_SWAP = {"p": "q", "q": "r", "r": "p"}


def _rename_atom(f: Formula) -> Formula:
    if isinstance(f, PropAtom):
        return PropAtom(_PROP_SWAP.get(f.name, "p"))
    return Atom("Q" if f.pred != "Q" else "P", f.args)


def _subterm_paths(f: Formula, path=()):
    yield path, f
    for i, c in enumerate(children(f)):
        yield from _subterm_paths(c, path + (i,))


def _replace_at(f: Formula, path, new: Formula) -> Formula:
    if not path:
        return new
    i = path[0]
    if isinstance(f, (Not, Circ)):
        return type(f)(_replace_at(f.arg, path[1:], new))
    if isinstance(f, (And, Or)):
        if i == 0:
            return type(f)(_replace_at(f.left, path[1:], new), f.right)
        return type(f)(f.left, _replace_at(f.right, path[1:], new))
    return type(f)(f.var, _replace_at(f.body, path[1:], new))


def _local(g: Formula, rng: random.Random) -> Formula:
    options = [lambda: Not(g), lambda: Circ(g)]
    if isinstance(g, (Not, Circ)):
        options.append(lambda: g.arg)
    if isinstance(g, And):
        options += [lambda: Or(g.left, g.right), lambda: And(g.right, g.left)]
    if isinstance(g, Or):
        options += [lambda: And(g.left, g.right), lambda: Or(g.right, g.left)]
    if isinstance(g, (Forall, Exists)):
        options.append(lambda: (Exists if isinstance(g, Forall) else Forall)(g.var, g.body))
    if isinstance(g, (PropAtom, Atom)):
        options.append(lambda: _rename_atom(g))
    return rng.choice(options)()


def mutate_formula(f: Formula, rng: random.Random) -> Formula:
    """A sentence different from ``f``, changed at one random position."""
    paths = list(_subterm_paths(f))
    while True:
        path, g = rng.choice(paths)
        out = _replace_at(f, path, _local(g, rng))
        if out != f and is_sentence(out):
            return out


def mutate_proof(t: ProofTree, rng: random.Random) -> ProofTree:
    """Replace the formula at one random node by a mutated one."""
    path, n = rng.choice(list(t.nodes()))
    changed = ProofTree(mutate_formula(n.conclusion, rng), n.rule, n.children,
                        n.discharge_label, n.eigen_constant)
    return t.replace(path, changed)
