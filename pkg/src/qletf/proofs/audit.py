"""Semantic audit of the rule catalog.

Every form of every rule is turned into a consequence claim and checked:

* a premise that discharges hypotheses is replaced by the claim that the
  remaining premises entail one of the discharged hypotheses (designation
  of a disjunction is the disjunction of designations, so this is exactly
  what case reasoning needs);
* in eigen rules, ``A(c/x)`` with ``c`` fresh stands for every instance:
  an introduction premise ``π(c)`` becomes ``forall x. π(x)`` and a
  discharged hypothesis ``η(c)`` becomes ``exists x. η(x)``;
* in the other quantifier rules ``c`` is a signature constant.

Propositional rules are checked exhaustively for all instantiations from a
formula pool, vectorised over the pool; quantifier rules go through bounded
first-order entailment.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..algebra import VALUES, circ, conj, disj, index, neg
from ..models import dump_structure, fo_entails
from ..parsing import parse, render
from ..propositional import atom_key, atom_keys, format_assignment
from ..syntax import And, Atom, Circ, Exists, Forall, Formula, Not, Or, PropAtom, disjoin
from .rules import RULES, Form, Inst, Meta, Premise, RuleSpec, Side, instantiate

A = Meta("A")

#: Fabricated unsound rule ``A / @A``; the audit must flag it.
NEGATIVE_CONTROL = RuleSpec("control A/@A", (Form(Circ(A), (Premise(A),)),), group="control")

DEFAULT_FO_BODIES = ("P(x)", "~P(x)", "@P(x)", "#P(x)", "P(x) & Q(x)", "P(x) | ~Q(x)")
DEFAULT_FO_CLOSED = ("Q(c)", "~Q(c)", "@Q(c)")


def formula_pool(atoms=("p", "q"), depth: int = 2) -> list[Formula]:
    """All formulas over ``atoms`` of depth at most ``depth``, without repeats."""
    layers = [[PropAtom(a) for a in atoms]]
    pool = list(layers[0])
    for _ in range(depth):
        new = []
        for f in pool:
            new += [Not(f), Circ(f)]
        for f, g in itertools.product(pool, repeat=2):
            new += [And(f, g), Or(f, g)]
        seen = set(pool)
        pool += [f for f in dict.fromkeys(new) if f not in seen]
    return pool


@dataclass(frozen=True)
class Failure:
    rule: str
    form: int
    premises: tuple
    conclusion: Formula
    countermodel: str

    def __str__(self) -> str:
        prem = ", ".join(render(p) for p in self.premises)
        return f"{self.rule}[{self.form}]: {{{prem}}} / {render(self.conclusion)} fails at {self.countermodel}"


@dataclass
class RuleAudit:
    rule: str
    form: int
    mode: str  # "prop" or "fo"
    instances: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class AuditReport:
    entries: list

    @property
    def failures(self) -> list:
        return [f for e in self.entries for f in e.failures]

    def failed_rules(self) -> list[str]:
        return sorted({e.rule for e in self.entries if not e.ok})

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            status = "ok" if e.ok else f"INVALID ({len(e.failures)} shown)"
            out.append(f"{e.rule}[{e.form}] {e.mode} instances={e.instances} {status}")
            out += [f"  {f}" for f in e.failures]
        return out


# --------------------------------------------------------------------------
# semantic claims


def _strip_inst(pattern):
    """Replace ``A(c/x)`` leaves by the open body ``A``."""
    if isinstance(pattern, Inst):
        return Meta(pattern.body)
    if isinstance(pattern, (Not, Circ)):
        return type(pattern)(_strip_inst(pattern.arg))
    if isinstance(pattern, (And, Or)):
        return type(pattern)(_strip_inst(pattern.left), _strip_inst(pattern.right))
    if isinstance(pattern, (Forall, Exists)):
        return type(pattern)(pattern.var, _strip_inst(pattern.body))
    return pattern


def _has_inst(pattern) -> bool:
    if isinstance(pattern, Inst):
        return True
    if isinstance(pattern, (Not, Circ)):
        return _has_inst(pattern.arg)
    if isinstance(pattern, (And, Or)):
        return _has_inst(pattern.left) or _has_inst(pattern.right)
    if isinstance(pattern, (Forall, Exists)):
        return _has_inst(pattern.body)
    return False


def claim(form: Form, side: Side = Side.NONE) -> tuple[list, object]:
    """The consequence claim ``(premise patterns, conclusion pattern)`` of a form."""
    plain = [p.pattern for p in form.premises if p.discharges is None]
    hyps = [p.discharges for p in form.premises if p.discharges is not None]
    if side is Side.EIGEN_INTRO:
        plain = [Forall("x", _strip_inst(p)) if _has_inst(p) else p for p in plain]
    if side is Side.EIGEN_ELIM:
        hyps = [Exists("x", _strip_inst(h)) if _has_inst(h) else h for h in hyps]
    conclusion = disjoin(hyps) if hyps else form.conclusion
    return plain, conclusion


def _metas(pattern, under=False, acc=None) -> dict:
    """Metavariable names mapped to whether they occur under a binder."""
    acc = {} if acc is None else acc
    if isinstance(pattern, Meta):
        acc[pattern.name] = acc.get(pattern.name, False) or under
    elif isinstance(pattern, Inst):
        acc[pattern.body] = True
    elif isinstance(pattern, (Not, Circ)):
        _metas(pattern.arg, under, acc)
    elif isinstance(pattern, (And, Or)):
        _metas(pattern.left, under, acc)
        _metas(pattern.right, under, acc)
    elif isinstance(pattern, (Forall, Exists)):
        _metas(pattern.body, True, acc)
    return acc


def _occurrences(pattern, under=False):
    """``(name, under a binder)`` for every metavariable occurrence."""
    if isinstance(pattern, Meta):
        yield pattern.name, under
    elif isinstance(pattern, Inst):
        yield pattern.body, True
    elif isinstance(pattern, (Not, Circ)):
        yield from _occurrences(pattern.arg, under)
    elif isinstance(pattern, (And, Or)):
        yield from _occurrences(pattern.left, under)
        yield from _occurrences(pattern.right, under)
    elif isinstance(pattern, (Forall, Exists)):
        yield from _occurrences(pattern.body, True)


def is_first_order(form: Form) -> bool:
    pats = [form.conclusion] + [p.pattern for p in form.premises]
    pats += [p.discharges for p in form.premises if p.discharges is not None]
    return any(any(_metas(p).values()) or _has_inst(p) for p in pats)


# --------------------------------------------------------------------------
# propositional: vectorised over the pool

_NEG = np.array([index(neg(z)) for z in VALUES], dtype=np.int8)
_CIRC = np.array([index(circ(z)) for z in VALUES], dtype=np.int8)
_CONJ = np.array([[index(conj(z, w)) for w in VALUES] for z in VALUES], dtype=np.int8)
_DISJ = np.array([[index(disj(z, w)) for w in VALUES] for z in VALUES], dtype=np.int8)
_DES = np.array([z.z1 == 1 for z in VALUES])


def _vec(f, leaf):
    """Value-index array of ``f``; ``leaf`` supplies arrays for atoms and metas."""
    if isinstance(f, (Meta, PropAtom, Atom)):
        return leaf(f)
    if isinstance(f, Not):
        return _NEG[_vec(f.arg, leaf)]
    if isinstance(f, Circ):
        g = f.arg
        while isinstance(g, Not):
            g = g.arg
        if isinstance(g, Circ):
            return np.zeros((1,), dtype=np.int8)  # T everywhere
        return _CIRC[_vec(f.arg, leaf)]
    table = _CONJ if isinstance(f, And) else _DISJ
    return table[_vec(f.left, leaf), _vec(f.right, leaf)]


class _PropAuditor:
    def __init__(self, pool):
        self.pool = list(pool)
        self.keys = atom_keys(self.pool)
        n = len(self.keys)
        grid = np.array(list(itertools.product(range(6), repeat=n)), dtype=np.int8).reshape(-1, n)
        self.assignments = grid
        columns = {k: grid[:, i] for i, k in enumerate(self.keys)}
        self.values = np.stack(
            [np.broadcast_to(_vec(f, lambda a: columns[atom_key(a)]), (len(grid),)) for f in self.pool]
        )

    def countermodel(self, row: int, formulas) -> str:
        used = set(atom_keys(formulas))
        return format_assignment(
            {k: VALUES[v] for k, v in zip(self.keys, self.assignments[row]) if k in used}
        )

    def audit(self, name: str, i: int, form: Form, limit: int) -> RuleAudit:
        premises, conclusion = claim(form)
        names = sorted(set().union(*(_metas(p) for p in premises + [conclusion])))
        k, P = len(names), len(self.pool)
        if k > 2:
            raise ValueError(f"{name}: more than two schematic letters")

        def leaf(m):
            axis = names.index(m.name)
            shape = [1] * k + [self.values.shape[1]]
            shape[axis] = P
            return self.values.reshape(shape)

        bad = ~_DES[_vec(conclusion, leaf)]
        for p in premises:
            bad = bad & _DES[_vec(p, leaf)]
        bad = np.broadcast_to(bad, (P,) * k + (self.values.shape[1],))
        failing = np.argwhere(bad.any(axis=-1))
        entry = RuleAudit(name, i, "prop", P ** k)
        for idx in failing[:limit]:
            env = {m: self.pool[j] for m, j in zip(names, idx)}
            row = int(np.flatnonzero(bad[tuple(idx)])[0])
            prem = tuple(instantiate(p, env) for p in premises)
            conc = instantiate(conclusion, env)
            entry.failures.append(Failure(name, i, prem, conc, self.countermodel(row, [*prem, conc])))
        return entry


# --------------------------------------------------------------------------
# first-order


def _open_body(text: str) -> Formula:
    """``text`` with ``x`` free (a bare parse would read ``x`` as a constant)."""
    return parse(f"forall x. {text}").body


def _fo_task(args) -> RuleAudit:
    name, i, form, side, bodies, closed, bound = args
    premises, conclusion = claim(form, side)
    # a body needs every occurrence under a binder; B in CD also sits outside
    roles = {}
    for p in premises + [conclusion]:
        for m, under in _occurrences(p):
            roles[m] = roles.get(m, True) and under
    names = sorted(roles)
    pools = [bodies if roles[m] else closed for m in names]
    entry = RuleAudit(name, i, "fo", 0)
    for choice in itertools.product(*pools):
        env = {m: _open_body(t) if roles[m] else parse(t) for m, t in zip(names, choice)}
        env.update({"var:x": "x", "const:c": "c"})
        prem = [instantiate(p, env) for p in premises]
        conc = instantiate(conclusion, env)
        entry.instances += 1
        verdict = fo_entails(prem, conc, max_size=bound)
        if not verdict.valid:
            model = dump_structure(verdict.countermodel).strip().replace("\n", "; ")
            entry.failures.append(Failure(name, i, tuple(prem), conc, model))
    return entry


def audit_rules(
    pool=None,
    fo_bound: int = 3,
    rules=None,
    extra=(NEGATIVE_CONTROL,),
    fo_bodies=DEFAULT_FO_BODIES,
    fo_closed=DEFAULT_FO_CLOSED,
    limit: int = 3,
    jobs: int = 1,
) -> AuditReport:
    """Check every form of every rule semantically.

    ``pool`` defaults to all formulas of depth at most 2 over ``p, q``; at
    most ``limit`` failing instances are kept per form.  ``extra`` rules
    (by default the negative control) are audited alongside the catalog.
    """
    pool = formula_pool() if pool is None else pool
    specs = [(r.value, RULES[r]) for r in (RULES if rules is None else rules)]
    specs += [(s.label, s) for s in extra]
    prop = None
    entries, fo_tasks = [], []
    for name, spec in specs:
        for i, form in enumerate(spec.forms):
            if spec.side is not Side.NONE or is_first_order(form):
                fo_tasks.append((name, i, form, spec.side, fo_bodies, fo_closed, fo_bound))
                entries.append(len(fo_tasks) - 1)
            else:
                prop = prop or _PropAuditor(pool)
                entries.append(prop.audit(name, i, form, limit))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            fo_done = list(ex.map(_fo_task, fo_tasks))
    else:
        fo_done = [_fo_task(t) for t in fo_tasks]
    return AuditReport([fo_done[e] if isinstance(e, int) else e for e in entries])
