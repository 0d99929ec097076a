"""Acceptance suite: one PASS/FAIL line per criterion, with runtime."""

import functools
import itertools
import os
import random
import time

import pytest

from conftest import random_prop, random_sentence
from qletf.algebra import VALUES, conj, disj, mk_snapshot, operation_table
from qletf.models import (
    Structure,
    check_fo_bivaluation,
    check_v3_lemma,
    eval_sentence,
    instances,
)
from qletf.normal_forms import NormalFormKind, is_normal_form, reduce_prefix, to_normal_form
from qletf.parsing import parse
from qletf.prenex import is_pnf, to_pnf, verify_pnf
from qletf.proofs import SYSTEMS, check_proof, worked_fixtures
from qletf.proofs.audit import NEGATIVE_CONTROL, audit_rules
from qletf.proofs.mutation import mutate_proof
from qletf.propositional import (
    Sequent,
    bivaluation_of,
    check_bivaluation_clauses,
    entails,
    equivalent,
    evaluate,
)
from qletf.syntax import BOTTOM, TOP, Circ, Exists, Forall, Not, PropAtom, free_vars, subformulas

from test_algebra import EXPECTED_CIRC, EXPECTED_CONJ, EXPECTED_DISJ, EXPECTED_NEG

JOBS = min(8, os.cpu_count() or 1)


@pytest.fixture
def criterion(capsys):
    """Time the body and print one verdict line, whatever the outcome."""
    state = {}

    def run(number, title, budget, body):
        start = time.perf_counter()
        detail, ok = "", False
        try:
            detail = body() or ""
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < budget
            verdict = "PASS" if ok and within else "FAIL"
            note = "" if within else f" (over the {budget:g}s budget)"
            with capsys.disabled():
                print(f"\n[criterion {number:2d}] {verdict} {title}: {elapsed:.2f}s{note} {detail}".rstrip())
            state["ok"] = ok and within
        assert state["ok"], f"criterion {number} exceeded its {budget}s budget"

    return run


def test_01_tables(criterion):
    def body():
        names = lambda rows: [[z.name for z in row] for row in rows]  # noqa: E731
        assert names(operation_table("conj")) == [r.split() for r in EXPECTED_CONJ]
        assert names(operation_table("disj")) == [r.split() for r in EXPECTED_DISJ]
        assert [r[0].name for r in operation_table("neg")] == EXPECTED_NEG
        assert [r[0].name for r in operation_table("circ")] == EXPECTED_CIRC
        return "84 cells"

    criterion(1, "operation tables", 1.0, body)


def test_02_semantics_agreement(criterion):
    def body():
        rng = random.Random(2024)
        checked = 0
        for _ in range(1000):
            k = rng.randint(1, 3)
            atoms = ["p", "q", "r"][:k]
            f = random_prop(rng, rng.randint(1, 5), atoms)
            for combo in itertools.product(VALUES, repeat=k):
                a = dict(zip(atoms, combo))
                z = evaluate(f, a)
                rho = bivaluation_of(a)
                assert bool(z.z1) == bool(rho(f))
                assert mk_snapshot(rho(f), rho(Not(f)), rho(Circ(f))) == z
                checked += 1
        return f"{checked} formula/assignment pairs"

    criterion(2, "six-valued vs bivalued semantics", 30.0, body)


def test_03_clause_audit(criterion):
    def body():
        pool = sorted({g for t in ["@(p & q) | ~p", "#(p | ~q)", "~(@p & q)", "p & q | ~@q"]
                       for g in subformulas(parse(t))}, key=str)
        total = 0
        for combo in itertools.product(VALUES, repeat=2):
            report = check_bivaluation_clauses(dict(zip("pq", combo)), pool)
            assert report.ok, report.violations
            total += report.checked
        fo_texts = ["forall x. P(x)", "exists x. ~P(x) & q", "@forall x. P(x) | Q(x)",
                    "@exists x. #P(x)", "~forall x. @Q(x)"]
        fo_pool = sorted({g for t in fo_texts for g in subformulas(parse(t)) if not free_vars(g)}, key=str)
        rng = random.Random(3)
        for size in (1, 2, 3):
            dom = tuple(f"e{i + 1}" for i in range(size))
            for _ in range(12):
                s = Structure(dom, {}, {
                    "P": {(e,): rng.choice(VALUES) for e in dom},
                    "Q": {(e,): rng.choice(VALUES) for e in dom},
                    "q": {(): rng.choice(VALUES)},
                })
                pool = list(fo_pool)
                for f in fo_pool:
                    if isinstance(f, (Forall, Exists)):
                        pool += [g for i in instances(s, f) for g in subformulas(i)]
                report = check_fo_bivaluation(s, sorted(set(pool), key=str))
                assert report.ok, report.violations
                total += report.checked
        return f"{total} clause instances, 0 violations"

    criterion(3, "bivaluation clause audit", 120.0, body)


def test_04_rule_soundness(criterion):
    def body():
        report = audit_rules(fo_bound=3, jobs=JOBS)
        catalog = [r for r in report.failed_rules() if r != NEGATIVE_CONTROL.label]
        assert not catalog, catalog
        assert NEGATIVE_CONTROL.label in report.failed_rules()
        return f"{len(report.entries) - 1} rule forms sound, control flagged"

    criterion(4, "rule soundness audit", 300.0, body)


NON_THEOREMS = [
    (["p", "~p"], "q", False),
    ([], "p | ~p", False),
    (["p", "~p | q"], "q", False),
    ([], "~p | p", False),
    ([], "(@p & p) | (@p & ~p)", False),
    (["@p", "p", "~p | q"], "q", True),
]


def test_05_non_theorems(criterion):
    def body():
        shown = []
        for premises, conclusion, valid in NON_THEOREMS:
            start = time.perf_counter()
            prem = [parse(t) for t in premises]
            conc = parse(conclusion)
            v = entails(Sequent(prem, conc))
            assert time.perf_counter() - start < 1.0
            assert v.valid is valid, (premises, conclusion)
            if not valid:
                a = v.countermodel
                assert all(evaluate(f, a).z1 for f in prem) and not evaluate(conc, a).z1
                shown.append(" ".join(f"{k}={z.name}" for k, z in sorted(a.items())))
        return "countermodels: " + "; ".join(shown)

    criterion(5, "non-theorems", 6.0, body)


def test_06_normal_forms(criterion):
    def body():
        rng = random.Random(6)
        for _ in range(500):
            f = random_prop(rng, rng.randint(1, 6), ["p", "q", "r"])
            for kind in NormalFormKind:
                g = to_normal_form(f, kind)
                assert is_normal_form(g, kind), (f, kind)
                assert equivalent(f, g).valid, (f, kind)
        return "500 formulas x 2 kinds"

    criterion(6, "normal forms", 120.0, body)


def test_07_prefix_reduction(criterion):
    def body():
        p = PropAtom("p")
        canonical = {p, Not(p), Circ(p), Not(Circ(p)), TOP, BOTTOM}
        wrap = {"~": Not, "@": Circ, "#": lambda a: Not(Circ(a))}
        count = 0
        for length in range(6):
            for ops in itertools.product("~@#", repeat=length):
                f = p
                for op in reversed(ops):
                    f = wrap[op](f)
                g = reduce_prefix(f)
                assert g in canonical
                assert all(evaluate(f, {"p": z}) == evaluate(g, {"p": z}) for z in VALUES)
                count += 1
        return f"{count} prefixes"

    criterion(7, "prefix reduction", 5.0, body)


def test_08_quantifier_fold(criterion):
    def body():
        forall, exists = parse("forall x. P(x)"), parse("exists x. P(x)")
        cases = 0
        for size in (1, 2, 3):
            dom = tuple(f"e{i + 1}" for i in range(size))
            for combo in itertools.product(VALUES, repeat=size):
                s = Structure(dom, {}, {"P": {(e,): z for e, z in zip(dom, combo)}})
                assert eval_sentence(s, forall) == functools.reduce(conj, combo)
                assert eval_sentence(s, exists) == functools.reduce(disj, combo)
                assert check_v3_lemma(s, forall) and check_v3_lemma(s, exists)
                cases += 1
        return f"{cases} instance vectors"

    criterion(8, "quantifier fold and reliability lemma", 5.0, body)


def test_09_prenex(criterion):
    def body():
        rng = random.Random(9)
        sentences = [random_sentence(rng, rng.randint(1, 5)) for _ in range(200)]
        for f in sentences:
            g = to_pnf(f)
            assert is_pnf(g), f
            assert verify_pnf(f, g, 2).valid, f
        for f in rng.sample(sentences, 20):
            assert verify_pnf(f, to_pnf(f), 3, jobs=JOBS).valid, f
        return "200 at |D|<=2, 20 at |D|=3"

    criterion(9, "prenex normal form", 600.0, body)


def test_10_derivations(criterion):
    def body():
        rejected = 0
        for i, fx in enumerate(worked_fixtures()):
            assert fx.check().ok, (fx.name, fx.check().error)
            rng = random.Random(1000 + i)
            for _ in range(50):
                bad = mutate_proof(fx.tree, rng)
                assert not check_proof(bad, fx.premises, fx.goal, SYSTEMS[fx.system]).ok
                rejected += 1
        return f"{len(worked_fixtures())} fixtures ok, {rejected} mutations rejected"

    criterion(10, "worked derivations", 60.0, body)


def test_11_top_bottom(criterion):
    def body():
        assert entails(Sequent([], TOP)).valid
        for text in ["@p & p & ~p", "@p & #p", "##p"]:
            assert entails(Sequent([parse(text)], parse("r"))).valid, text
        assert entails(Sequent([BOTTOM], parse("r"))).valid
        return "top valid; three bottoms explode"

    criterion(11, "top and bottom", 5.0, body)
