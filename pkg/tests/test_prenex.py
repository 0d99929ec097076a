import random

import pytest

from conftest import random_sentence
from qletf.parsing import parse
from qletf.prenex import is_pnf, split_prefix, to_pnf, verify_pnf
from qletf.syntax import alpha_equal, complexity, is_sentence


@pytest.mark.parametrize("text,out", [
    ("forall x. exists y. P(x) & ~Q(y)", True), ("@forall x. P(x)", False), ("@P(c)", True),
    ("top", True), ("p & forall x. P(x)", False),
])
def test_is_pnf_examples(text, out):
    assert is_pnf(parse(text)) is out


def test_to_pnf_examples():
    assert alpha_equal(to_pnf(parse("~forall x. P(x)")), parse("exists x. ~P(x)"))
    g = to_pnf(parse("@forall x. P(x)"))
    want = parse("forall x. exists y. (P(x) & @P(x)) | (~P(y) & @P(y))")
    assert alpha_equal(g, want)
    assert verify_pnf(parse("@forall x. P(x)"), g, 3).valid
    h = to_pnf(parse("(forall x. P(x)) | forall x. Q(x)"))
    assert alpha_equal(h, parse("forall y. forall z. P(y) | Q(z)"))
    assert verify_pnf(parse("(forall x. P(x)) | forall x. Q(x)"), h, 3).valid


def test_quantifier_free_unchanged():
    f = parse("@P(c) | ~q")
    assert to_pnf(f) == f


def test_bound_variables_distinct_and_fresh():
    f = parse("(forall x. P(x)) & (exists x. Q(x)) & forall x1. P(x1)")
    prefix, _ = split_prefix(to_pnf(f))
    names = [v for _, v in prefix]
    assert len(names) == len(set(names)) == 3
    assert "x1" not in names


@pytest.mark.parametrize("f,g,ok", [
    ("~exists x. P(x)", "forall x. ~P(x)", True),
    ("exists x. q & P(x)", "q & exists x. P(x)", True),
    ("forall x. P(x)", "exists x. P(x)", False),
])
def test_verify_pnf_examples(f, g, ok):
    v = verify_pnf(parse(f), parse(g), 3)
    assert v.valid is ok
    if not ok:
        assert len(v.countermodel.domain) == 2


def test_random_sentences_small_domain():
    rng = random.Random(21)
    for _ in range(60):
        f = random_sentence(rng, rng.randint(2, 5))
        g = to_pnf(f)
        assert is_pnf(g) and is_sentence(g)
        assert verify_pnf(f, g, 2).valid, (f, g)


def test_prenex_terminates_on_deep_input():
    f = parse("@~(forall x. exists y. @(P(x) | ~Q(y))) & ~@exists z. P(z) & q")
    g = to_pnf(f)
    assert is_pnf(g) and complexity(g) > 0
    assert verify_pnf(f, g, 2).valid
