import functools
import itertools
import random

import pytest

from conftest import random_sentence
from qletf.algebra import B, F, F0, N, T, T0, VALUES, conj, disj, is_designated
from qletf.models import (
    BoundExceededError,
    ExtensionTriple,
    NotASentenceError,
    Structure,
    StructureError,
    check_fo_bivaluation,
    check_v3_lemma,
    count_structures,
    dump_structure,
    enumerate_structures,
    eval_sentence,
    extensions_of,
    fo_entails,
    fo_equivalent,
    from_extensions,
    holds,
    load_structure,
)
from qletf.parsing import parse
from qletf.syntax import Circ, Not, Signature, free_vars, subformulas

SIG_P = Signature({"P": 1}, frozenset())


def unary(values, const=None, **props):
    dom = tuple(f"e{i + 1}" for i in range(len(values)))
    consts = {"c": dom[const]} if const is not None else {}
    preds = {"P": {(e,): z for e, z in zip(dom, values)}}
    preds.update({k: {(): z} for k, z in props.items()})
    return Structure(dom, consts, preds)


def test_extension_examples():
    t = extensions_of({("a",): T})
    assert ("a",) in t.plus and ("a",) not in t.minus and ("a",) in t.circ
    bad = ExtensionTriple(frozenset({("a",)}), frozenset({("a",)}), frozenset({("a",)}))
    with pytest.raises(StructureError):
        from_extensions(bad, 1, ["a"])
    assert from_extensions(ExtensionTriple(), 1, ["a"]) == {("a",): N}


@pytest.mark.parametrize("arity", [0, 1, 2])
def test_extensions_round_trip(arity):
    for size in (1, 2):
        dom = [f"e{i}" for i in range(size)]
        tuples = list(itertools.product(dom, repeat=arity))
        for combo in itertools.product(VALUES, repeat=len(tuples)):
            interp = dict(zip(tuples, combo))
            t = extensions_of(interp)
            assert t.circ <= t.plus | t.minus and not (t.plus & t.minus & t.circ)
            assert from_extensions(t, arity, dom) == interp


def test_eval_examples():
    s = unary([T, B])
    assert eval_sentence(s, parse("forall x. P(x)")) == B
    assert eval_sentence(s, parse("@forall x. P(x)")) == F
    assert eval_sentence(unary([F0]), parse("exists x. P(x)")) == F0


def test_holds_examples():
    assert holds(unary([T, B]), parse("forall x. P(x)"))
    assert not holds(unary([T0], const=0), parse("@P(c)"))
    assert not holds(unary([N], const=0), parse("P(c) | ~P(c)"))


def test_eval_errors():
    with pytest.raises(NotASentenceError):
        eval_sentence(unary([T]), parse("forall x. P(x)").body)
    with pytest.raises(StructureError):
        eval_sentence(unary([T]), parse("P(d)"))


@pytest.mark.parametrize("values,reliable", [([T, T], True), ([T, F], True), ([T, B], False)])
def test_v3_lemma_examples(values, reliable):
    s = unary(values)
    assert check_v3_lemma(s, parse("forall x. P(x)"))
    assert eval_sentence(s, parse("@forall x. P(x)")) == (T if reliable else F)


def test_v3_lemma_exhaustive():
    for size in (1, 2, 3):
        for combo in itertools.product(VALUES, repeat=size):
            s = unary(combo)
            for text in ["forall x. P(x)", "exists x. P(x)", "forall x. ~P(x)", "exists x. @P(x) | P(x)"]:
                assert check_v3_lemma(s, parse(text))


def test_quantifier_fold():
    for size in (1, 2, 3):
        for combo in itertools.product(VALUES, repeat=size):
            s = unary(combo)
            assert eval_sentence(s, parse("forall x. P(x)")) == functools.reduce(conj, combo)
            assert eval_sentence(s, parse("exists x. P(x)")) == functools.reduce(disj, combo)


def _closed_subformulas(texts):
    return sorted({g for t in texts for g in subformulas(parse(t)) if not free_vars(g)}, key=str)


def test_fo_bivaluation_clauses():
    pool = _closed_subformulas(["forall x. P(x)", "exists x. ~P(x)", "@forall x. P(x)", "P(c) | q",
                                "@exists x. P(x) & q"])
    for combo in itertools.product(VALUES, repeat=2):
        for qv in (T, B, N):
            report = check_fo_bivaluation(unary(combo, const=0, q=qv), pool)
            assert report.ok, report.violations


def test_fo_bivaluation_reports_clause_names():
    report = check_fo_bivaluation(unary([T, F]), _closed_subformulas(["@forall x. P(x)"]))
    assert report.ok and report.checked > 0


def test_snapshot_reconstruction_fo():
    rng = random.Random(3)
    for _ in range(40):
        f = random_sentence(rng, 3)
        s = Structure(
            ("e1", "e2"), {"c": rng.choice(["e1", "e2"])},
            {
                "P": {(e,): rng.choice(VALUES) for e in ("e1", "e2")},
                "Q": {(e,): rng.choice(VALUES) for e in ("e1", "e2")},
                "p": {(): rng.choice(VALUES)}, "q": {(): rng.choice(VALUES)},
            },
        )
        z = eval_sentence(s, f)
        triple = (holds(s, f), holds(s, Not(f)), holds(s, Circ(f)))
        assert triple == (bool(z.z1), bool(z.z2), bool(z.z3))


def test_enumeration_counts():
    assert len(list(enumerate_structures(SIG_P, 1))) == 6
    assert len(list(enumerate_structures(SIG_P, 2))) == 42
    assert count_structures(SIG_P, 2) == 42
    with_c = Signature({"P": 1}, frozenset({"c"}))
    assert count_structures(with_c, 2) == 6 + 2 * 36


def test_enumeration_order_and_cap():
    first = next(iter(enumerate_structures(SIG_P, 2)))
    assert first.domain == ("e1",) and first.pred_interp["P"] == {("e1",): T}
    with pytest.raises(BoundExceededError):
        list(enumerate_structures(Signature({"R": 2}, frozenset()), 3, cap=1000))


def test_degenerate_signature():
    with pytest.raises(StructureError):
        list(enumerate_structures(Signature({}, frozenset()), 2))


def test_fo_entails_examples():
    assert fo_entails([parse("forall x. P(x)")], parse("P(c)"), max_size=3).valid
    v = fo_entails([parse("exists x. P(x)")], parse("forall x. P(x)"), max_size=3)
    assert not v.valid and len(v.countermodel.domain) == 2
    assert holds(v.countermodel, parse("exists x. P(x)"))
    assert not holds(v.countermodel, parse("forall x. P(x)"))
    circ_all = parse("@forall x. P(x)")
    split = parse("(forall x. P(x) & @P(x)) | (exists x. ~P(x) & @P(x))")
    verdict = fo_entails([circ_all], split, max_size=3)
    assert verdict.valid and verdict.bounded


def test_fo_entails_matches_brute_force():
    rng = random.Random(5)
    sig = Signature({"P": 1, "p": 0}, frozenset({"c"}))
    structures = list(enumerate_structures(sig, 2))
    for _ in range(25):
        prem, conc = (random_sentence(rng, 2, preds=("P",), props=("p",)) for _ in range(2))
        expected = next((s for s in structures if holds(s, prem) and not holds(s, conc)), None)
        v = fo_entails([prem], conc, sig, max_size=2)
        assert v.valid == (expected is None)
        if expected is not None:
            assert dump_structure(v.countermodel) == dump_structure(expected)


def test_fo_entails_parallel_and_pruned():
    prem, conc = [parse("exists x. P(x) & Q(x)")], parse("forall x. P(x) | Q(x)")
    base = fo_entails(prem, conc, max_size=3)
    assert fo_entails(prem, conc, max_size=3, jobs=2).countermodel == base.countermodel
    assert not fo_entails(prem, conc, max_size=3, prune_isomorphic=True).valid


def test_fo_equivalent():
    assert fo_equivalent(parse("~exists x. P(x)"), parse("forall x. ~P(x)")).valid
    assert not fo_equivalent(parse("forall x. P(x)"), parse("exists x. P(x)")).valid


def test_structure_text_format():
    text = "domain: a b\nconst c = a\npred P/1 { a: T; b: b }\npred R/2 { +: a,a a,b; -: b,b; o: a,a }\n"
    s = load_structure(text)
    assert s.pred_interp["P"] == {("a",): T, ("b",): B}
    assert s.pred_interp["R"][("a", "a")] == T and s.pred_interp["R"][("b", "a")] == N
    assert load_structure(dump_structure(s)) == s
    assert not holds(s, parse("@P(c) & ~P(c)"))
    with pytest.raises(StructureError):
        load_structure("domain: a\npred P/1 { +: a; -: a; o: a }")
    with pytest.raises(StructureError):
        load_structure("pred P/1 { a: T }")
    with pytest.raises(StructureError):
        load_structure("domain: a b\npred P/1 { a: T }")


def test_reliable_quantifier_has_reliable_instance():
    assert fo_entails([parse("@exists x. P(x)")], parse("exists x. @P(x)"), max_size=3).valid
    v = fo_entails([parse("exists x. @P(x)")], parse("@exists x. P(x)"), max_size=3)
    assert not v.valid
    assert is_designated(eval_sentence(v.countermodel, parse("exists x. @P(x)")))
