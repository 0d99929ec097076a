"""Six-valued evaluation, induced bivaluations and exhaustive entailment.

Assignments map atom keys to snapshots.  A propositional atom's key is its
name; a ground predicate atom such as ``P(c)`` is keyed by its rendering, so
quantifier-free first-order sentences can be treated propositionally.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import algebra
from .algebra import Snapshot, VALUES
from .parsing import render
from .syntax import (
    And,
    Atom,
    Circ,
    FSup,
    Formula,
    LogicError,
    Not,
    Or,
    PropAtom,
    TSup,
    atoms,
    is_quantifier_free,
)

DEFAULT_ATOM_BOUND = 6

Assignment = Mapping[str, Snapshot]


class UnassignedAtomError(LogicError):
    pass


class AtomBoundError(LogicError):
    pass


def atom_key(f: Formula) -> str:
    if isinstance(f, PropAtom):
        return f.name
    if isinstance(f, Atom):
        return render(f)
    raise TypeError(f"not an atom: {f!r}")


def atom_keys(formulas: Iterable[Formula]) -> list[str]:
    keys: set[str] = set()
    for f in formulas:
        keys.update(atom_key(a) for a in atoms(f))
    return sorted(keys)


def _classical_under_circ(f: Formula) -> bool:
    # v3 of a chain of negations over a @-formula is always 1, so @ of it is T
    while isinstance(f, Not):
        f = f.arg
    return isinstance(f, Circ)


def evaluate(f: Formula, a: Assignment) -> Snapshot:
    if isinstance(f, (PropAtom, Atom)):
        try:
            return a[atom_key(f)]
        except KeyError:
            raise UnassignedAtomError(f"atom {atom_key(f)} is not assigned") from None
    if isinstance(f, Not):
        return algebra.neg(evaluate(f.arg, a))
    if isinstance(f, Circ):
        if _classical_under_circ(f.arg):
            return algebra.T
        return algebra.circ(evaluate(f.arg, a))
    if isinstance(f, And):
        return algebra.conj(evaluate(f.left, a), evaluate(f.right, a))
    if isinstance(f, Or):
        return algebra.disj(evaluate(f.left, a), evaluate(f.right, a))
    raise LogicError("quantified formulas need a structure; see qletf.models")


def bivaluation_of(a: Assignment) -> Callable[[Formula], int]:
    """The two-valued map ``A -> v1(A)`` induced by the assignment."""

    def rho(f: Formula) -> int:
        return evaluate(f, a).z1

    return rho


# --------------------------------------------------------------------------
# bivaluation clause audit

@dataclass
class ClauseReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, clause: str, holds: bool, *instance: Formula) -> None:
        self.checked += 1
        if not holds:
            self.violations.append((clause, tuple(render(f) for f in instance)))

    def extend(self, other: "ClauseReport") -> None:
        self.checked += other.checked
        self.violations.extend(other.violations)


def _iff(p: bool, q: bool) -> bool:
    return p == q


def _implies(p: bool, q: bool) -> bool:
    return (not p) or q


def unary_clauses(rho, A: Formula, report: ClauseReport) -> None:
    r = lambda f: rho(f) == 1  # noqa: E731
    report.record("3", _iff(r(Not(Not(A))), r(A)), A)
    report.record("6", _implies(r(Circ(A)), _iff(r(Not(A)), not r(A))), A)
    report.record("7", r(Circ(Circ(A))), A)
    report.record("8", rho(Circ(Not(A))) == rho(Circ(A)), A)


def binary_clauses(rho, A: Formula, B: Formula, report: ClauseReport) -> None:
    """Clauses (1)-(5), (9)-(18) and the macro clauses (4')-(7') for one pair."""
    r = lambda f: rho(f) == 1  # noqa: E731
    cA, cB, nA, nB = r(Circ(A)), r(Circ(B)), r(Not(A)), r(Not(B))
    a, b = r(A), r(B)
    c_and, c_or = r(Circ(And(A, B))), r(Circ(Or(A, B)))
    report.record("1", _iff(r(And(A, B)), a and b), A, B)
    report.record("2", _iff(r(Or(A, B)), a or b), A, B)
    report.record("4", _iff(r(Not(And(A, B))), nA or nB), A, B)
    report.record("5", _iff(r(Not(Or(A, B))), nA and nB), A, B)
    report.record("9", _implies(cA and a and cB and b, c_and), A, B)
    report.record("10", _implies(cA and nA, c_and), A, B)
    report.record("11", _implies(cB and nB, c_and), A, B)
    report.record("12", _implies(c_and and a and b, cA and cB), A, B)
    report.record(
        "13", _implies(c_and and (nA or nB), (cA and nA) or (cB and nB)), A, B
    )
    report.record("14", _implies(cA and a, c_or), A, B)
    report.record("15", _implies(cB and b, c_or), A, B)
    report.record("16", _implies(cA and nA and cB and nB, c_or), A, B)
    report.record("17", _implies(c_or and (a or b), (cA and a) or (cB and b)), A, B)
    report.record("18", _implies(c_or and not a and not b, cA and cB), A, B)
    # the same propagation facts phrased with the A^T / A^F macros
    report.record("4'", _iff(r(TSup(And(A, B))), r(TSup(A)) and r(TSup(B))), A, B)
    report.record("5'", _iff(r(TSup(Or(A, B))), r(TSup(A)) or r(TSup(B))), A, B)
    report.record("6'", _iff(r(FSup(And(A, B))), r(FSup(A)) or r(FSup(B))), A, B)
    report.record("7'", _iff(r(FSup(Or(A, B))), r(FSup(A)) and r(FSup(B))), A, B)


def check_bivaluation_clauses(a: Assignment, pool: Sequence[Formula]) -> ClauseReport:
    """Verify every clause instance over ``pool`` (and all pairs from it)."""
    rho = bivaluation_of(a)
    report = ClauseReport()
    for A in pool:
        unary_clauses(rho, A, report)
    for A in pool:
        for B in pool:
            binary_clauses(rho, A, B, report)
    return report


# --------------------------------------------------------------------------
# entailment

@dataclass(frozen=True)
class Sequent:
    premises: tuple
    conclusion: Formula

    def __init__(self, premises: Iterable[Formula], conclusion: Formula):
        object.__setattr__(self, "premises", tuple(premises))
        object.__setattr__(self, "conclusion", conclusion)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    countermodel: dict | None = None

    def __bool__(self) -> bool:
        return self.valid


def format_assignment(a: Mapping[str, Snapshot]) -> str:
    return " ".join(f"{k}={v.name}" for k, v in sorted(a.items()))


def assignments(keys: Sequence[str]) -> Iterable[dict[str, Snapshot]]:
    """All assignments; the first key varies slowest, values in table order."""
    for combo in itertools.product(VALUES, repeat=len(keys)):
        yield dict(zip(keys, combo))


def _is_counter(premises, conclusion, a) -> bool:
    return all(evaluate(p, a).z1 for p in premises) and not evaluate(conclusion, a).z1


def _search_block(args) -> int | None:
    premises, conclusion, keys, first = args
    for offset, combo in enumerate(itertools.product(VALUES, repeat=len(keys) - 1)):
        a = dict(zip(keys, (first, *combo)))
        if _is_counter(premises, conclusion, a):
            return offset
    return None


def entails(
    s: Sequent, atom_bound: int = DEFAULT_ATOM_BOUND, jobs: int = 1
) -> Verdict:
    """Exhaustive six-valued consequence check with a reproducible countermodel.

    With ``jobs > 1`` the search space is split by the value of the first
    atom; the reported countermodel is still the first in enumeration order.
    """
    formulas = [*s.premises, s.conclusion]
    for f in formulas:
        if not is_quantifier_free(f):
            raise LogicError("entails expects quantifier-free formulas")
    keys = atom_keys(formulas)
    if len(keys) > atom_bound:
        raise AtomBoundError(
            f"{len(keys)} atoms exceed the bound of {atom_bound} ({6 ** len(keys)} assignments)"
        )
    if jobs > 1 and keys:
        tasks = [(s.premises, s.conclusion, keys, v) for v in VALUES]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_block, tasks))
        for v, offset in zip(VALUES, results):
            if offset is not None:
                rest = next(itertools.islice(
                    itertools.product(VALUES, repeat=len(keys) - 1), offset, None))
                return Verdict(False, dict(zip(keys, (v, *rest))))
        return Verdict(True)
    for a in assignments(keys):
        if _is_counter(s.premises, s.conclusion, a):
            return Verdict(False, a)
    return Verdict(True)


def equivalent(f: Formula, g: Formula, atom_bound: int = DEFAULT_ATOM_BOUND) -> Verdict:
    forward = entails(Sequent([f], g), atom_bound)
    if not forward.valid:
        return forward
    return entails(Sequent([g], f), atom_bound)
