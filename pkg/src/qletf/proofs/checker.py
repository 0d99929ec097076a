"""Proof trees and the derivation checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from ..parsing import render
from ..syntax import Formula, LogicError, constants, free_vars, is_sentence
from .rules import LEAVES, Match, RuleId, Side, match, resolve

Path = tuple


def format_path(path: Path) -> str:
    return "root" + "".join(f".{i}" for i in path)


class ProofError(LogicError):
    """A rejected derivation; ``path`` locates the offending node."""

    kind = "invalid proof"

    def __init__(self, path: Path, reason: str):
        super().__init__(f"{format_path(path)}: {self.kind}: {reason}")
        self.path = path
        self.reason = reason


class SchemaMismatch(ProofError):
    kind = "schema mismatch"


class ArityMismatch(ProofError):
    kind = "arity mismatch"


class UnknownPremise(ProofError):
    kind = "unknown premise"


class UndischargedHypothesis(ProofError):
    kind = "undischarged hypothesis"


class DoublyDischarged(ProofError):
    kind = "doubly-discharged hypothesis"


class EigenvariableViolation(ProofError):
    kind = "eigenvariable violation"


class FreeVariableViolation(ProofError):
    kind = "free-variable violation"


class NotASentence(ProofError):
    kind = "not a sentence"


class WrongConclusion(ProofError):
    kind = "wrong conclusion"


class RuleNotAllowed(ProofError):
    kind = "rule not in system"


@dataclass(frozen=True)
class ProofTree:
    conclusion: Formula
    rule: RuleId
    children: tuple = ()
    # for hypotheses: their tag; for other nodes: the tag they discharge
    discharge_label: str | None = None
    eigen_constant: str | None = None

    def nodes(self, path: Path = ()):
        """Pre-order ``(path, node)`` pairs."""
        stack = [(path, self)]
        while stack:
            p, t = stack.pop()
            yield p, t
            for i in reversed(range(len(t.children))):
                stack.append((p + (i,), t.children[i]))

    def at(self, path: Path) -> "ProofTree":
        t = self
        for i in path:
            t = t.children[i]
        return t

    def replace(self, path: Path, node: "ProofTree") -> "ProofTree":
        if not path:
            return node
        i = path[0]
        kids = list(self.children)
        kids[i] = kids[i].replace(path[1:], node)
        return ProofTree(self.conclusion, self.rule, tuple(kids), self.discharge_label,
                         self.eigen_constant)


def premise(f: Formula) -> ProofTree:
    return ProofTree(f, RuleId.PREMISE)


def hyp(label: str, f: Formula) -> ProofTree:
    return ProofTree(f, RuleId.HYP, discharge_label=label)


def node(rule: RuleId, f: Formula, *children: ProofTree, label=None, eigen=None) -> ProofTree:
    return ProofTree(f, rule, tuple(children), label, eigen)


@dataclass(frozen=True)
class Dependency:
    label: str | None  # None for premises
    formula: Formula
    path: Path


@dataclass
class CheckResult:
    ok: bool
    error: ProofError | None = None
    premises_used: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class _Checker:
    def __init__(self, premises, rules):
        self.premises = None if premises is None else set(premises)
        self.rules = rules
        self.labels: dict[str, Path] = {}

    def check(self, t: ProofTree, path: Path) -> list[Dependency]:
        deps = self._check(t, path)
        if not is_sentence(t.conclusion):
            raise NotASentence(path, f"{render(t.conclusion)} has free variables")
        return deps

    def _check(self, t: ProofTree, path: Path) -> list[Dependency]:
        if t.rule.side is not Side.NOT_FREE and not is_sentence(t.conclusion):
            raise NotASentence(path, f"{render(t.conclusion)} has free variables")
        if t.rule in LEAVES:
            if t.children:
                raise ArityMismatch(path, f"{t.rule.value} takes no subproofs")
            if t.rule is RuleId.PREMISE:
                if self.premises is not None and t.conclusion not in self.premises:
                    raise UnknownPremise(path, render(t.conclusion))
                return [Dependency(None, t.conclusion, path)]
            if not t.discharge_label:
                raise SchemaMismatch(path, "hypothesis without a label")
            return [Dependency(t.discharge_label, t.conclusion, path)]
        if self.rules is not None and t.rule not in self.rules:
            raise RuleNotAllowed(path, t.rule.value)
        spec = t.rule.spec
        if len(t.children) != spec.arity:
            raise ArityMismatch(
                path, f"{t.rule.value} expects {spec.arity} subproofs, got {len(t.children)}"
            )
        label = t.discharge_label
        if label is not None:
            if not spec.discharges:
                raise SchemaMismatch(path, f"{t.rule.value} discharges nothing")
            if label in self.labels:
                raise DoublyDischarged(
                    path, f"label {label} is already discharged at {format_path(self.labels[label])}"
                )
            self.labels[label] = path
        try:
            deps = [self.check(c, path + (i,)) for i, c in enumerate(t.children)]
        finally:
            # a label may be reused in a separate branch, never inside its own scope
            if label is not None:
                del self.labels[label]
        return self.apply(t, path, deps)

    def apply(self, t: ProofTree, path: Path, deps) -> list[Dependency]:
        spec = t.rule.spec
        label = t.discharge_label
        side_error = None
        for form in spec.forms:
            for perm in itertools.permutations(range(len(t.children))):
                m = Match()
                if t.eigen_constant is not None:
                    m.env["const:c"] = t.eigen_constant
                roles = [form.premises[j] for j in perm]
                if not all(match(r.pattern, c.conclusion, m) for r, c in zip(roles, t.children)):
                    continue
                if spec.side is Side.NOT_FREE:
                    # checked before the conclusion, which is then not a sentence
                    err = self.side_condition(t, path, spec.side, m.env, None)
                    if err is not None:
                        side_error = side_error or err
                        continue
                if not match(form.conclusion, t.conclusion, m):
                    continue
                remaining, ok = [None] * len(roles), True
                for j, r, d in zip(perm, roles, deps):
                    mine = [x for x in d if label is not None and x.label == label]
                    if mine and r.discharges is None:
                        ok = False
                        break
                    ok = all(match(r.discharges, x.formula, m) for x in mine)
                    if not ok:
                        break
                    remaining[j] = [x for x in d if x not in mine]
                if not ok or not resolve(m):
                    continue
                err = self.side_condition(t, path, spec.side, m.env, remaining)
                if err is None:
                    return [x for d in remaining for x in d]
                side_error = side_error or err
        if side_error is not None:
            raise side_error
        raise SchemaMismatch(
            path, f"{render(t.conclusion)} is not an instance of {t.rule.value}"
        )

    @staticmethod
    def side_condition(t, path, side: Side, env: dict, remaining) -> ProofError | None:
        if side is Side.NONE:
            return None
        x = env.get("var:x")
        if side is Side.NOT_FREE:
            if x in free_vars(env["B"]):
                return FreeVariableViolation(path, f"{x} is free in {render(env['B'])}")
            return None
        c = env.get("const:c")
        if c is None:
            # vacuous elimination: nothing was instantiated
            return None
        if c in constants(env["A"]):
            return EigenvariableViolation(path, f"{c} occurs in {render(env['A'])}")
        if side is Side.EIGEN_INTRO:
            scope = remaining[0]
        else:
            if c in constants(env["C"]):
                return EigenvariableViolation(path, f"{c} occurs in the conclusion")
            scope = remaining[1]
        for d in scope:
            if c in constants(d.formula):
                what = "premise" if d.label is None else f"open hypothesis {d.label}"
                return EigenvariableViolation(
                    path, f"{c} occurs in {what} {render(d.formula)} at {format_path(d.path)}"
                )
        return None


def check_proof(
    t: ProofTree,
    premises: Iterable[Formula] | None = None,
    goal: Formula | None = None,
    rules: Iterable[RuleId] | None = None,
) -> CheckResult:
    """Check a derivation.

    ``premises`` restricts which formulas may appear as premise leaves (any,
    if omitted); ``goal`` fixes the conclusion; ``rules`` restricts the rule
    set, for instance to one of :data:`~qletf.proofs.rules.SYSTEMS`.
    """
    checker = _Checker(premises, None if rules is None else frozenset(rules))
    try:
        if goal is not None and t.conclusion != goal:
            raise WrongConclusion((), f"expected {render(goal)}, got {render(t.conclusion)}")
        deps = checker.check(t, ())
        open_hyps = [d for d in deps if d.label is not None]
        if open_hyps:
            d = open_hyps[0]
            raise UndischargedHypothesis(d.path, f"[{render(d.formula)}] with label {d.label}")
    except ProofError as e:
        return CheckResult(False, e)
    used = []
    for d in deps:
        if d.formula not in used:
            used.append(d.formula)
    return CheckResult(True, None, used)
