"""Worked derivations of derived rules, encoded as proof trees.

Schematic letters are instantiated with ``p``/``q`` in the propositional
fixtures and with ``P(x)`` in the first-order ones; eigen constants come
from the reserved ``k1, k2, ...`` supply.  Where a worked derivation writes a
conjunction in one order and then uses it in the other (``B & @B`` versus
``B^T = @B & B``), the fixture spells out the swap with ``E&`` and ``I&``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..parsing import parse
from ..syntax import Formula
from .checker import ProofTree, check_proof, hyp, node, premise
from .rules import SYSTEMS, RuleId as R

EIGEN_STEM = "k"


def fresh_constants(avoid=()):
    """``k1, k2, ...`` minus anything in ``avoid``."""
    avoid = set(avoid)
    return (f"{EIGEN_STEM}{i}" for i in itertools.count(1) if f"{EIGEN_STEM}{i}" not in avoid)


@dataclass(frozen=True)
class Fixture:
    name: str
    tree: ProofTree
    premises: tuple
    system: str

    @property
    def goal(self) -> Formula:
        return self.tree.conclusion

    def check(self):
        return check_proof(self.tree, self.premises, self.goal, SYSTEMS[self.system])


def _n(rule, text, *kids, label=None, eigen=None) -> ProofTree:
    return node(rule, parse(text), *kids, label=label, eigen=eigen)


def _p(text) -> ProofTree:
    return premise(parse(text))


def _h(label, text) -> ProofTree:
    return hyp(label, parse(text))


def _swap(text: str, conj: ProofTree, left: str, right: str) -> ProofTree:
    """``text`` (= right & left) from a proof of ``left & right``."""
    return _n(R.I_AND, text, _n(R.E_AND, right, conj), _n(R.E_AND, left, conj))


def _or_t() -> Fixture:
    at = "@p & p"
    tree = _n(
        R.I_AND, "@(p | q) & (p | q)",
        _n(R.I_COR2, "@(p | q)", _n(R.E_AND, "@p", _p(at)), _n(R.E_AND, "p", _p(at))),
        _n(R.I_OR, "p | q", _n(R.E_AND, "p", _p(at))),
    )
    return Fixture("I|T in ND_F'", tree, (parse(at),), "ND_F'")


def _and_f() -> Fixture:
    prem = "@(p & q) & ~(p & q)"
    goal = "(@p & ~p) | (@q & ~q)"
    pi = _n(
        R.E_CAND2, goal,
        _n(R.E_AND, "@(p & q)", _p(prem)),
        _n(
            R.E_NAND, "~p | ~q",
            _n(R.E_AND, "~(p & q)", _p(prem)),
            _n(R.I_OR, "~p | ~q", _h("1", "~p")),
            _n(R.I_OR, "~p | ~q", _h("1", "~q")),
            label="1",
        ),
    )
    tree = _n(
        R.E_OR, goal, pi,
        _n(R.I_OR, goal, _h("2", "@p & ~p")),
        _n(R.I_OR, goal, _h("2", "@q & ~q")),
        label="2",
    )
    return Fixture("E&F in ND_F'", tree, (parse(prem),), "ND_F'")


def _circ_or_elim() -> Fixture:
    prems = ("@(p | q)", "~p", "~q")
    orf = _n(
        R.I_AND, "@(p | q) & ~(p | q)",
        _p("@(p | q)"),
        _n(R.I_NOR, "~(p | q)", _p("~p"), _p("~q")),
    )
    tree = _n(
        R.I_AND, "@p & @q",
        _n(R.E_AND, "@p", _n(R.E_OR_F, "@p & ~p", orf)),
        _n(R.E_AND, "@q", _n(R.E_OR_F, "@q & ~q", orf)),
    )
    return Fixture("E@|1 in ND_F", tree, tuple(map(parse, prems)), "ND_F")


def _circ_and_intro() -> Fixture:
    tree = _n(
        R.E_AND, "@(p & q)",
        _n(R.I_AND_F, "@(p & q) & ~(p & q)", _n(R.I_AND, "@p & ~p", _p("@p"), _p("~p"))),
    )
    return Fixture("I@&2 in ND_F", tree, (parse("@p"), parse("~p")), "ND_F")


def _bullet_neg() -> Fixture:
    tree = _n(
        R.E_OR, "#~p",
        _n(R.COMP, "@~p | #~p"),
        _n(R.CONS, "#~p", _n(R.E_CN, "@p", _h("1", "@~p")), _p("#p")),
        _h("1", "#~p"),
        label="1",
    )
    return Fixture("I#~", tree, (parse("#p"),), "ND_F")


def _cases() -> Fixture:
    goal = "p | ~p | #p"
    tree = _n(
        R.E_OR, goal,
        _n(R.COMP, "@p | #p"),
        _n(R.I_OR, goal, _n(R.PEM, "p | ~p", _h("1", "@p"))),
        _n(R.I_OR, goal, _h("1", "#p")),
        label="1",
    )
    return Fixture("Cases", tree, (), "ND_F")


def _bullet_bullet() -> Fixture:
    tree = _n(
        R.CONS, "q",
        _n(R.I_CN, "@~@p", _n(R.I_CC, "@@p")),
        _p("##p"),
    )
    return Fixture("E##", tree, (parse("##p"),), "ND_F")


ALL_TB = "forall x. P(x) & @P(x)"
EX_FB = "exists x. ~P(x) & @P(x)"
EX_TB = "exists x. P(x) & @P(x)"
ALL_FB = "forall x. ~P(x) & @P(x)"


def _circ_all_elim() -> Fixture:
    prem = "@forall x. P(x)"
    goal = f"({ALL_TB}) | ({EX_FB})"
    all_t = _n(
        R.E_ALL_T, "@P(k1) & P(k1)",
        _n(R.I_AND, "(@forall x. P(x)) & forall x. P(x)", _p(prem), _h("2", "forall x. P(x)")),
    )
    true_case = _n(
        R.I_OR, goal,
        _n(R.I_ALL, ALL_TB, _swap("P(k1) & @P(k1)", all_t, "@P(k1)", "P(k1)"), eigen="k1"),
    )
    false_case = _n(
        R.E_ALL_F, goal,
        _n(R.I_AND, "(@forall x. P(x)) & ~forall x. P(x)", _p(prem), _h("2", "~forall x. P(x)")),
        _n(
            R.I_OR, goal,
            _n(R.I_EX, EX_FB,
               _swap("~P(k1) & @P(k1)", _h("1", "@P(k1) & ~P(k1)"), "@P(k1)", "~P(k1)")),
        ),
        label="1", eigen="k1",
    )
    tree = _n(
        R.E_OR, goal,
        _n(R.PEM, "(forall x. P(x)) | ~forall x. P(x)", _p(prem)),
        true_case, false_case,
        label="2",
    )
    return Fixture("@forallE in ND_QF", tree, (parse(prem),), "ND_QF")


def _circ_all_intro_true() -> Fixture:
    inst = _n(R.E_ALL, "P(k1) & @P(k1)", _p(ALL_TB))
    tree = _n(
        R.E_AND, "@forall x. P(x)",
        _n(R.I_ALL_T, "(@forall x. P(x)) & forall x. P(x)",
           _swap("@P(k1) & P(k1)", inst, "P(k1)", "@P(k1)"), eigen="k1"),
    )
    return Fixture("@forallI (first form) in ND_QF", tree, (parse(ALL_TB),), "ND_QF")


def _circ_all_intro_false() -> Fixture:
    h = _h("1", "~P(k1) & @P(k1)")
    tree = _n(
        R.E_EX, "@forall x. P(x)",
        _p(EX_FB),
        _n(R.E_AND, "@forall x. P(x)",
           _n(R.I_ALL_F, "(@forall x. P(x)) & ~forall x. P(x)",
              _swap("@P(k1) & ~P(k1)", h, "~P(k1)", "@P(k1)"))),
        label="1", eigen="k1",
    )
    return Fixture("@forallI (second form) in ND_QF", tree, (parse(EX_FB),), "ND_QF")


def _ex_t() -> Fixture:
    prem = "(@exists x. P(x)) & exists x. P(x)"
    split = _n(
        R.C_EX_E, f"({EX_TB}) | ({ALL_FB})",
        _n(R.E_AND, "@exists x. P(x)", _p(prem)),
    )
    w = _n(R.E_ALL, "~P(k2) & @P(k2)", _h("1", ALL_FB))
    absurd = _n(
        R.E_EX, EX_TB,
        _n(R.E_AND, "exists x. P(x)", _p(prem)),
        _n(R.EXP, EX_TB, _n(R.E_AND, "@P(k2)", w), _h("3", "P(k2)"), _n(R.E_AND, "~P(k2)", w)),
        label="3", eigen="k2",
    )
    major = _n(R.E_OR, EX_TB, split, _h("1", EX_TB), absurd, label="1")
    minor = _n(
        R.I_EX, "exists x. @P(x) & P(x)",
        _swap("@P(k1) & P(k1)", _h("2", "P(k1) & @P(k1)"), "P(k1)", "@P(k1)"),
    )
    tree = _n(R.E_EX, "exists x. @P(x) & P(x)", major, minor, label="2", eigen="k1")
    return Fixture("EexistsT in ND_QF'", tree, (parse(prem),), "ND_QF'")


def _ex_f() -> Fixture:
    prem = "(@exists x. P(x)) & ~exists x. P(x)"
    split = _n(
        R.C_EX_E, f"({EX_TB}) | ({ALL_FB})",
        _n(R.E_AND, "@exists x. P(x)", _p(prem)),
    )
    h = _h("2", "P(k2) & @P(k2)")
    absurd = _n(
        R.E_EX, ALL_FB,
        _h("1", EX_TB),
        _n(R.EXP, ALL_FB,
           _n(R.E_AND, "@P(k2)", h), _n(R.E_AND, "P(k2)", h),
           _n(R.E_NEX, "~P(k2)", _n(R.E_AND, "~exists x. P(x)", _p(prem)))),
        label="2", eigen="k2",
    )
    d = _n(R.E_OR, ALL_FB, split, absurd, _h("1", ALL_FB), label="1")
    w = _n(R.E_ALL, "~P(k1) & @P(k1)", d)
    tree = _swap("@P(k1) & ~P(k1)", w, "~P(k1)", "@P(k1)")
    return Fixture("EexistsF in ND_QF'", tree, (parse(prem),), "ND_QF'")


@lru_cache(maxsize=None)
def worked_fixtures() -> tuple[Fixture, ...]:
    return tuple(
        build()
        for build in (
            _or_t, _and_f, _circ_or_elim, _circ_and_intro,
            _bullet_neg, _cases, _bullet_bullet,
            _circ_all_elim, _circ_all_intro_true, _circ_all_intro_false, _ex_t, _ex_f,
        )
    )


def encode_paper_derivations() -> list[tuple[str, ProofTree]]:
    return [(f.name, f.tree) for f in worked_fixtures()]
