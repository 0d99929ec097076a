import itertools
import random

import pytest
from hypothesis import given, settings

from conftest import prop_formulas, random_prop
from qletf.algebra import VALUES
from qletf.normal_forms import (
    NormalFormKind,
    classicality_is_flat,
    expand_classicality,
    is_normal_form,
    push_negations,
    reduce_prefix,
    to_normal_form,
)
from qletf.parsing import parse
from qletf.propositional import equivalent, evaluate
from qletf.syntax import BOTTOM, TOP, And, Circ, Not, Or, PropAtom, flatten

DNF, CNF = NormalFormKind.DNF, NormalFormKind.CNF
p = PropAtom("p")
CANONICAL = {p, Not(p), Circ(p), Not(Circ(p)), TOP, BOTTOM}


def _pointwise_equal(f, g):
    return all(evaluate(f, {"p": z}) == evaluate(g, {"p": z}) for z in VALUES)


@pytest.mark.parametrize("text,out", [("~@~p", "#p"), ("@@@p", "top"), ("~~p", "p")])
def test_reduce_prefix_examples(text, out):
    assert reduce_prefix(parse(text)) == parse(out)


@pytest.mark.parametrize("length", range(6))
def test_reduce_prefix_all_chains(length):
    wrap = {"~": Not, "@": Circ, "#": lambda a: Not(Circ(a))}
    for ops in itertools.product("~@#", repeat=length):
        f = p
        for op in reversed(ops):
            f = wrap[op](f)
        g = reduce_prefix(f)
        assert g in CANONICAL, (ops, g)
        assert _pointwise_equal(f, g)


def test_reduce_prefix_recurses():
    assert reduce_prefix(parse("~~p & ~@~@q")) == And(p, BOTTOM)


def test_expand_classicality_examples():
    assert expand_classicality(parse("@(p & q)")) == parse("@p & @q & p & q | @p & ~p | @q & ~q")
    assert expand_classicality(parse("#(p | q)")) == parse("(#p | ~p) & (#q | ~q) & (#p | #q | p | q)")
    assert expand_classicality(parse("@p")) == parse("@p")


@settings(max_examples=150, deadline=None)
@given(prop_formulas(atoms=("p", "q"), max_leaves=8))
def test_expand_classicality_flat_and_equivalent(f):
    g = expand_classicality(f)
    assert classicality_is_flat(g)
    assert equivalent(f, g).valid


@pytest.mark.parametrize("text,out", [("~(p & ~q)", "~p | q"), ("~@p", "#p"), ("~top", "bot")])
def test_push_negations_examples(text, out):
    assert push_negations(parse(text)) == parse(out)


def _negations_on_atoms(f):
    if f in (TOP, BOTTOM):
        return True
    if isinstance(f, Not):
        return isinstance(f.arg, PropAtom) or (isinstance(f.arg, Circ) and isinstance(f.arg.arg, PropAtom))
    if isinstance(f, Circ):
        return isinstance(f.arg, PropAtom)
    if isinstance(f, (And, Or)):
        return _negations_on_atoms(f.left) and _negations_on_atoms(f.right)
    return True


@settings(max_examples=150, deadline=None)
@given(prop_formulas(atoms=("p", "q"), max_leaves=8))
def test_push_negations_shape(f):
    g = push_negations(expand_classicality(f))
    assert _negations_on_atoms(g)
    assert equivalent(f, g).valid


def _clauses(f, outer, inner):
    return {frozenset(flatten(c, inner)) for c in flatten(f, outer)}


def test_to_normal_form_examples():
    assert to_normal_form(parse("p | (q & r)"), DNF) == parse("p | (q & r)")
    got = to_normal_form(parse("@(p & q)"), DNF)
    want = parse("@p & @q & p & q | @p & ~p | @q & ~q")
    assert _clauses(got, Or, And) == _clauses(want, Or, And)
    assert to_normal_form(parse("~(p | q)"), CNF) == parse("~p & ~q")


@pytest.mark.parametrize("text,kind,out", [
    ("(p & @q) | #r", DNF, True), ("@(p & q)", DNF, False), ("top", CNF, True),
    ("p & (q | r)", DNF, False), ("p & (q | r)", CNF, True), ("~~p", DNF, False),
])
def test_is_normal_form_examples(text, kind, out):
    assert is_normal_form(parse(text), kind) is out


@pytest.mark.parametrize("kind", [DNF, CNF])
def test_round_trip_random(kind):
    rng = random.Random(11 if kind is DNF else 12)
    for _ in range(120):
        f = random_prop(rng, rng.randint(1, 6), ["p", "q", "r"])
        g = to_normal_form(f, kind)
        assert is_normal_form(g, kind)
        assert equivalent(f, g).valid, (f, g)


@settings(max_examples=100, deadline=None)
@given(prop_formulas())
def test_normal_form_property(f):
    for kind in (DNF, CNF):
        g = to_normal_form(f, kind)
        assert is_normal_form(g, kind) and equivalent(f, g).valid


def test_constants_survive():
    assert to_normal_form(parse("@@p"), DNF) == TOP
    assert to_normal_form(parse("##p"), CNF) == BOTTOM
    assert to_normal_form(parse("p & ~p & @p"), DNF) == BOTTOM
