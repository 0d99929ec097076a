import random

from hypothesis import strategies as st

from qletf.syntax import And, Atom, Circ, Const, Exists, Forall, Not, Or, PropAtom, Var, free_vars

ATOMS = ("p", "q", "r")


def prop_formulas(atoms=ATOMS, max_leaves=12):
    leaf = st.sampled_from([PropAtom(a) for a in atoms])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.builds(Circ, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def random_prop(rng: random.Random, depth: int, atoms=ATOMS):
    """Random quantifier-free formula of depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        return PropAtom(rng.choice(atoms))
    k = rng.randrange(4)
    if k == 0:
        return Not(random_prop(rng, depth - 1, atoms))
    if k == 1:
        return Circ(random_prop(rng, depth - 1, atoms))
    kind = And if k == 2 else Or
    return kind(random_prop(rng, depth - 1, atoms), random_prop(rng, depth - 1, atoms))


def random_sentence(rng: random.Random, depth: int, bound=(), preds=("P", "Q"), props=("p", "q")):
    """Random sentence over unary ``preds``, nullary ``props`` and the constant c."""
    if depth == 0 or rng.random() < 0.15:
        if props and rng.randrange(3) == 0:
            return PropAtom(rng.choice(props))
        term = Var(rng.choice(bound)) if bound and rng.random() < 0.8 else Const("c")
        return Atom(rng.choice(preds), (term,))
    k = rng.randrange(6)
    sub = lambda b=bound: random_sentence(rng, depth - 1, b, preds, props)  # noqa: E731
    if k == 0:
        return Not(sub())
    if k == 1:
        return Circ(sub())
    if k in (2, 3):
        kind = And if k == 2 else Or
        return kind(sub(), sub())
    var = f"v{len(bound)}"
    q = Forall if k == 4 else Exists
    body = sub(bound + (var,))
    # avoid void binders
    if var not in free_vars(body):
        body = And(body, Atom(rng.choice(preds), (Var(var),)))
    return q(var, body)
