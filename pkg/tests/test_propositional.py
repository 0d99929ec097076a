import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import prop_formulas, random_prop
from qletf.algebra import B, F, F0, N, T, T0, VALUES, is_designated, mk_snapshot
from qletf.parsing import parse
from qletf.propositional import (
    AtomBoundError,
    Sequent,
    UnassignedAtomError,
    bivaluation_of,
    check_bivaluation_clauses,
    entails,
    equivalent,
    evaluate,
    format_assignment,
)
from qletf.syntax import And, Circ, Not, PropAtom, TOP, BOTTOM


def _bit_eval(f, a):
    """Evaluation on raw bit triples, written independently of the library tables."""
    if isinstance(f, PropAtom):
        z = a[f.name]
        return z.z1, z.z2, z.z3
    if isinstance(f, Not):
        x1, x2, x3 = _bit_eval(f.arg, a)
        return x2, x1, x3
    if isinstance(f, Circ):
        g = f.arg
        while isinstance(g, Not):
            g = g.arg
        if isinstance(g, Circ):
            return 1, 0, 1
        x3 = _bit_eval(f.arg, a)[2]
        return x3, 1 - x3, 1
    (x1, x2, x3), (y1, y2, y3) = _bit_eval(f.left, a), _bit_eval(f.right, a)
    if isinstance(f, And):
        return x1 & y1, x2 | y2, (x1 & x3 & y1 & y3) | (x2 & x3) | (y2 & y3)
    return x1 | y1, x2 & y2, (x2 & x3 & y2 & y3) | (x1 & x3) | (y1 & y3)


def _all(atoms):
    for combo in itertools.product(VALUES, repeat=len(atoms)):
        yield dict(zip(atoms, combo))


def _entails_oracle(premises, conclusion, atoms):
    return all(
        not all(_bit_eval(p, a)[0] for p in premises) or _bit_eval(conclusion, a)[0]
        for a in _all(atoms)
    )


@pytest.mark.parametrize("text,a,out", [("p & ~p", {"p": B}, B), ("@@p", {"p": N}, T), ("p", {"p": F0}, F0)])
def test_evaluate_examples(text, a, out):
    assert evaluate(parse(text), a) == out


def test_evaluate_unassigned():
    with pytest.raises(UnassignedAtomError):
        evaluate(parse("p & q"), {"p": T})


@pytest.mark.parametrize("text,a,out", [("p | q", {"p": N, "q": T}, 1), ("~p", {"p": B}, 1), ("@p", {"p": T0}, 0)])
def test_bivaluation_examples(text, a, out):
    assert bivaluation_of(a)(parse(text)) == out


def test_bivaluation_clauses_exhaustive():
    pool = [parse(t) for t in ["p", "q", "~p", "@q", "p & q", "@(p | q)", "~(p & @q)"]]
    for a in _all(["p", "q"]):
        report = check_bivaluation_clauses(a, pool)
        assert report.ok, report.violations
        assert report.checked > 0


def test_clause_thirteen_instance():
    rho_pairs = 0
    for a in _all(["p", "q"]):
        rho = bivaluation_of(a)
        if rho(parse("@(p & q)")) and rho(parse("~p")):
            rho_pairs += 1
            assert (rho(parse("@p")) and rho(parse("~p"))) or (rho(parse("@q")) and rho(parse("~q")))
    assert rho_pairs > 0


def test_entails_examples():
    assert entails(Sequent([parse("@p"), parse("p"), parse("~p")], parse("q"))).valid
    v = entails(Sequent([parse("p"), parse("~p | q")], parse("q")))
    assert not v.valid and v.countermodel == {"p": B, "q": N}
    assert entails(Sequent([parse("@p"), parse("p"), parse("~p | q")], parse("q"))).valid


def test_explosion_countermodel():
    v = entails(Sequent([parse("p"), parse("~p")], parse("q")))
    assert format_assignment(v.countermodel) == "p=b q=n"
    assert not v.valid


def test_countermodel_is_genuine():
    prem, conc = [parse("@(p | q)"), parse("~r")], parse("p & r")
    v = entails(Sequent(prem, conc))
    assert not v.valid
    assert all(is_designated(evaluate(f, v.countermodel)) for f in prem)
    assert not is_designated(evaluate(conc, v.countermodel))


def test_entails_parallel_agrees():
    for prem, conc in [(["p", "~p | q"], "q"), (["@(p & q)"], "@p"), (["p"], "p | q")]:
        s = Sequent([parse(t) for t in prem], parse(conc))
        assert entails(s) == entails(s, jobs=3)


def test_atom_bound():
    f = parse("p1 & p2 & p3")
    with pytest.raises(AtomBoundError):
        entails(Sequent([f], f), atom_bound=2)


def test_equivalent_examples():
    assert equivalent(parse("@(p & q)"), parse("(@p & @q & p & q) | (@p & ~p) | (@q & ~q)")).valid
    assert equivalent(parse("~~p"), parse("p")).valid
    v = equivalent(parse("p"), parse("@p"))
    assert not v.valid and v.countermodel == {"p": T0}


def test_agreement_on_random_formulas():
    rng = random.Random(7)
    atoms = ["p", "q", "r"]
    assignments = list(_all(atoms))
    for _ in range(150):
        f = random_prop(rng, 4, atoms)
        for a in assignments:
            z = evaluate(f, a)
            assert (z.z1, z.z2, z.z3) == _bit_eval(f, a)
            assert is_designated(z) == bool(bivaluation_of(a)(f))


@settings(max_examples=200, deadline=None)
@given(prop_formulas(atoms=("p", "q")), st.sampled_from(list(_all(["p", "q"]))))
def test_reconstruction_from_bivaluation(f, a):
    rho = bivaluation_of(a)
    triple = (rho(f), rho(Not(f)), rho(Circ(f)))
    assert mk_snapshot(*triple) == evaluate(f, a)


def _plug(context, g):
    if isinstance(context, PropAtom):
        return g if context.name == "h" else context
    if isinstance(context, (Not, Circ)):
        return type(context)(_plug(context.arg, g))
    return type(context)(_plug(context.left, g), _plug(context.right, g))


REPLACEMENT_PAIRS = [
    ("~~p", "p"), ("@~p", "@p"), ("~(p & q)", "~p | ~q"), ("@@p", "@@q"), ("#~p", "#p"),
    ("@(p | q)", "(@p & @q & ~p & ~q) | (@p & p) | (@q & q)"),
]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(REPLACEMENT_PAIRS), prop_formulas(atoms=("p", "q", "h"), max_leaves=6))
def test_replacement(pair, context):
    a, b = map(parse, pair)
    assert equivalent(a, b).valid
    assert equivalent(_plug(context, a), _plug(context, b)).valid


DUALITY = [
    (["#(p | q)"], "#p | ~p"), (["@p & ~p"], "@(p & q)"),
    (["#(p & q)"], "#q | q"), (["@q & q"], "@(p | q)"),
    (["#(p & q)"], "#p | #q"), (["@p & @q"], "@(p | q)"),
    (["#p & #q"], "#(p | q)"), (["@(p & q)"], "@p | @q"),
    ([], "p | ~p | #p"), (["@p", "p", "~p"], "q"),
    (["p", "~p"], "#p"), (["@p"], "p | ~p"),
]


@pytest.mark.parametrize("premises,conclusion", DUALITY)
def test_duality_suite(premises, conclusion):
    prem = [parse(t) for t in premises]
    conc = parse(conclusion)
    assert entails(Sequent(prem, conc)).valid
    assert _entails_oracle(prem, conc, ["p", "q"])


BULLET_RULES = {
    "Cons": (["@A", "#A"], "r"),
    "Comp": ([], "@A | #A"),
    "I#": (["A", "~A"], "#A"),
    "Cases": ([], "A | ~A | #A"),
    "I#~": (["#A"], "#~A"),
    "E#~": (["#~A"], "#A"),
    "E##": (["##A"], "r"),
}


@pytest.mark.parametrize("name", sorted(BULLET_RULES))
@pytest.mark.parametrize("inst", ["p", "p & q", "@q", "~(p | q)"])
def test_bullet_rules_valid(name, inst):
    premises, conclusion = BULLET_RULES[name]
    sub = lambda t: parse(t.replace("A", f"({inst})"))  # noqa: E731
    assert entails(Sequent([sub(t) for t in premises], sub(conclusion))).valid


def test_top_and_bottom():
    assert entails(Sequent([], TOP)).valid
    assert entails(Sequent([BOTTOM], parse("q"))).valid
    for a in _all(["p"]):
        assert evaluate(TOP, a) == T and evaluate(BOTTOM, a) == F
