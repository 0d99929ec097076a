"""Finite first-order structures and bounded semantic consequence.

Quantifiers are evaluated substitutionally: ``forall x. A`` is computed from
the values of the instances ``A(<a>/x)`` where ``<a>`` is the diagram name of
domain element ``a``.  :func:`eval_sentence` does exactly that and is the
reference semantics.

Searching all structures up to a size is done by :class:`_Batch`, which
evaluates a sentence on a contiguous range of the canonical enumeration at
once with numpy bit arrays.  Binding variables to element indices there is
the same computation as substituting diagram names, and the test suite
checks the two evaluators against each other.

Canonical enumeration order: domains ``e1..ek`` for ``k = 1, 2, ...``; for a
fixed ``k`` a structure is a digit string, first the constants (sorted by
name, each ranging over the domain in order) and then the predicate cells
(predicates sorted by name, argument tuples in row-major order, each cell
ranging over ``T T0 b n F0 F``).  The leftmost digit varies slowest.
"""

from __future__ import annotations

import functools
import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import algebra
from .algebra import Snapshot, VALUES, SnapshotError
from .parsing import render
from .propositional import ClauseReport, binary_clauses, unary_clauses
from .syntax import (
    And,
    Atom,
    Circ,
    Const,
    Exists,
    Forall,
    Formula,
    LogicError,
    Not,
    Or,
    PropAtom,
    Signature,
    Var,
    free_vars,
    substitute,
)


class StructureError(LogicError):
    pass


class NotASentenceError(LogicError):
    pass


class BoundExceededError(LogicError):
    pass


DEFAULT_STRUCTURE_CAP = 50_000_000
_CHUNK = 1 << 17


# --------------------------------------------------------------------------
# structures

@dataclass(frozen=True)
class ExtensionTriple:
    plus: frozenset = frozenset()
    minus: frozenset = frozenset()
    circ: frozenset = frozenset()


@dataclass
class Structure:
    domain: tuple
    const_interp: dict = field(default_factory=dict)
    pred_interp: dict = field(default_factory=dict)

    def __post_init__(self):
        self.domain = tuple(self.domain)
        if not self.domain:
            raise StructureError("the domain must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise StructureError("duplicate domain elements")
        for c, e in self.const_interp.items():
            if e not in self.domain:
                raise StructureError(f"constant {c} denotes {e}, which is not in the domain")
        for p, table in self.pred_interp.items():
            arities = {len(t) for t in table}
            if len(arities) > 1:
                raise StructureError(f"predicate {p} has tuples of mixed length")
            n = arities.pop() if arities else 0
            expected = set(itertools.product(self.domain, repeat=n))
            if set(table) != expected:
                raise StructureError(f"predicate {p} is not total on the domain")
            for t, z in table.items():
                if not isinstance(z, Snapshot) or z not in VALUES:
                    raise StructureError(f"{p}{t} is not a snapshot value")

    def arity(self, pred: str) -> int:
        return len(next(iter(self.pred_interp[pred])))

    def signature(self) -> Signature:
        return Signature(
            {p: self.arity(p) for p in self.pred_interp}, frozenset(self.const_interp)
        )

    def element(self, t) -> str:
        if isinstance(t, Var):
            raise NotASentenceError(f"free variable {t.name}")
        if t.diagram:
            if t.name not in self.domain:
                raise StructureError(f"{t} names no element of the domain")
            return t.name
        try:
            return self.const_interp[t.name]
        except KeyError:
            raise StructureError(f"constant {t.name} is not interpreted") from None

    def value(self, pred: str, elems: tuple) -> Snapshot:
        try:
            table = self.pred_interp[pred]
        except KeyError:
            raise StructureError(f"predicate {pred} is not interpreted") from None
        try:
            return table[elems]
        except KeyError:
            raise StructureError(f"{pred} has no value at {elems}") from None

    def dump(self) -> str:
        return dump_structure(self)


def extensions_of(interp: Mapping[tuple, Snapshot]) -> ExtensionTriple:
    plus = frozenset(t for t, z in interp.items() if z.z1)
    minus = frozenset(t for t, z in interp.items() if z.z2)
    circ = frozenset(t for t, z in interp.items() if z.z3)
    return ExtensionTriple(plus, minus, circ)


def from_extensions(t: ExtensionTriple, arity: int, domain: Sequence[str]) -> dict:
    out = {}
    tuples = list(itertools.product(domain, repeat=arity))
    for sets in (t.plus, t.minus, t.circ):
        stray = set(sets) - set(tuples)
        if stray:
            raise StructureError(f"tuples outside the domain: {sorted(stray)}")
    for tup in tuples:
        bits = (int(tup in t.plus), int(tup in t.minus), int(tup in t.circ))
        try:
            out[tup] = algebra.mk_snapshot(*bits)
        except SnapshotError:
            raise StructureError(
                f"{tup} in the circ extension must lie in exactly one of plus and minus"
            ) from None
    return out


# --------------------------------------------------------------------------
# reference evaluation

def _diagram(e: str) -> Const:
    return Const(e, diagram=True)


def instances(s: Structure, f: Formula) -> list[Formula]:
    """``B(<a>/x)`` for every element ``a``, in domain order."""
    return [substitute(f.body, f.var, _diagram(e)) for e in s.domain]


def quantify(kind: type, values: Sequence[Snapshot]) -> Snapshot:
    v1 = [z.z1 for z in values]
    v2 = [z.z2 for z in values]
    rel_true = [z.z3 & z.z1 for z in values]
    rel_false = [z.z3 & z.z2 for z in values]
    if kind is Forall:
        return Snapshot(int(all(v1)), int(any(v2)), int(all(rel_true) or any(rel_false)))
    return Snapshot(int(any(v1)), int(all(v2)), int(all(rel_false) or any(rel_true)))


def _classical_under_circ(f: Formula) -> bool:
    while isinstance(f, Not):
        f = f.arg
    return isinstance(f, Circ)


def eval_sentence(s: Structure, f: Formula) -> Snapshot:
    if free_vars(f):
        raise NotASentenceError(f"not a sentence: {render(f)}")
    memo: dict[Formula, Snapshot] = {}

    def ev(g: Formula) -> Snapshot:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, PropAtom):
            out = s.value(g.name, ())
        elif isinstance(g, Atom):
            out = s.value(g.pred, tuple(s.element(t) for t in g.args))
        elif isinstance(g, Not):
            out = algebra.neg(ev(g.arg))
        elif isinstance(g, Circ):
            out = algebra.T if _classical_under_circ(g.arg) else algebra.circ(ev(g.arg))
        elif isinstance(g, And):
            out = algebra.conj(ev(g.left), ev(g.right))
        elif isinstance(g, Or):
            out = algebra.disj(ev(g.left), ev(g.right))
        else:
            out = quantify(type(g), [ev(i) for i in instances(s, g)])
        memo[g] = out
        return out

    return ev(f)


def holds(s: Structure, f: Formula) -> bool:
    return algebra.is_designated(eval_sentence(s, f))


def check_v3_lemma(s: Structure, f: Formula) -> bool:
    """Compare the third coordinate of a quantified sentence with its instances.

    For ``forall``: reliable iff every instance is reliably true or some
    instance is reliably false; dually for ``exists``.
    """
    if not isinstance(f, (Forall, Exists)):
        raise LogicError("expected a quantified sentence")
    vals = [eval_sentence(s, i) for i in instances(s, f)]
    rel_true = [z.z3 == 1 and z.z1 == 1 for z in vals]
    rel_false = [z.z3 == 1 and z.z2 == 1 for z in vals]
    if isinstance(f, Forall):
        predicted = all(rel_true) or any(rel_false)
    else:
        predicted = any(rel_true) or all(rel_false)
    return predicted == (eval_sentence(s, f).z3 == 1)


def check_fo_bivaluation(s: Structure, pool: Sequence[Formula]) -> ClauseReport:
    """Check the primed clauses (and the propositional ones) for ``rho = v1``."""
    memo: dict[Formula, int] = {}

    def rho(g: Formula) -> int:
        if g not in memo:
            memo[g] = eval_sentence(s, g).z1
        return memo[g]

    r = lambda g: rho(g) == 1  # noqa: E731
    report = ClauseReport()
    for A in pool:
        unary_clauses(rho, A, report)
        if isinstance(A, (PropAtom, Atom)):
            if isinstance(A, PropAtom):
                z = s.value(A.name, ())
            else:
                z = s.value(A.pred, tuple(s.element(t) for t in A.args))
            report.record("1'", r(A) == bool(z.z1), A)
            report.record("2'", r(Not(A)) == bool(z.z2), A)
            report.record("3'", r(Circ(A)) == bool(z.z3), A)
        if isinstance(A, (Forall, Exists)):
            inst = instances(s, A)
            pos = [r(i) for i in inst]
            neg = [r(Not(i)) for i in inst]
            cl = [r(Circ(i)) for i in inst]
            if isinstance(A, Forall):
                report.record("8'", r(A) == all(pos), A)
                report.record("10'", r(Not(A)) == any(neg), A)
                expected = all(p and c for p, c in zip(pos, cl)) or any(
                    n and c for n, c in zip(neg, cl)
                )
                report.record("12'", r(Circ(A)) == expected, A)
            else:
                report.record("9'", r(A) == any(pos), A)
                report.record("11'", r(Not(A)) == all(neg), A)
                expected = any(p and c for p, c in zip(pos, cl)) or all(
                    n and c for n, c in zip(neg, cl)
                )
                report.record("13'", r(Circ(A)) == expected, A)
    for A in pool:
        for B in pool:
            binary_clauses(rho, A, B, report)
    return report


# --------------------------------------------------------------------------
# enumeration

@dataclass(frozen=True)
class _Layout:
    """Digit layout of the structures with a fixed domain size."""

    size: int
    consts: tuple
    preds: tuple  # (name, arity) sorted by name
    radices: tuple
    strides: tuple

    @classmethod
    def of(cls, sig: Signature, size: int) -> "_Layout":
        consts = tuple(sorted(sig.constants))
        preds = tuple(sorted(sig.predicates.items()))
        radices = [size] * len(consts)
        for _, n in preds:
            radices += [6] * size ** n
        strides = [1] * len(radices)
        for i in range(len(radices) - 2, -1, -1):
            strides[i] = strides[i + 1] * radices[i + 1]
        return cls(size, consts, preds, tuple(radices), tuple(strides))

    @property
    def count(self) -> int:
        out = 1
        for r in self.radices:
            out *= r
        return out

    @property
    def domain(self) -> tuple:
        return tuple(f"e{i}" for i in range(1, self.size + 1))

    def cells(self, pred_index: int) -> int:
        return self.size ** self.preds[pred_index][1]

    def cell_offset(self, pred_index: int) -> int:
        return len(self.consts) + sum(self.cells(j) for j in range(pred_index))

    def decode(self, index: int) -> Structure:
        digits = []
        for r, st in zip(self.radices, self.strides):
            digits.append(index // st % r)
        dom = self.domain
        consts = {c: dom[d] for c, d in zip(self.consts, digits)}
        preds = {}
        for j, (p, n) in enumerate(self.preds):
            off = self.cell_offset(j)
            tuples = itertools.product(dom, repeat=n)
            preds[p] = {t: VALUES[digits[off + i]] for i, t in enumerate(tuples)}
        return Structure(dom, consts, preds)


def _layouts(sig: Signature, max_size: int, cap: int) -> list[_Layout]:
    if not sig.predicates:
        raise StructureError("the signature has no predicates to interpret")
    if max_size < 1:
        raise StructureError("max_size must be at least 1")
    out, total = [], 0
    for k in range(1, max_size + 1):
        lay = _Layout.of(sig, k)
        total += lay.count
        if total > cap:
            raise BoundExceededError(
                f"more than {cap} structures up to size {k}; lower the domain bound"
            )
        out.append(lay)
    return out


def count_structures(sig: Signature, max_size: int) -> int:
    return sum(_Layout.of(sig, k).count for k in range(1, max_size + 1))


def _is_canonical(lay: _Layout, index: int) -> bool:
    digits = [index // st % r for r, st in zip(lay.radices, lay.strides)]
    for perm in itertools.permutations(range(lay.size)):
        if _permuted_index(lay, digits, perm) < index:
            return False
    return True


def _permuted_index(lay: _Layout, digits, perm) -> int:
    """Index of the image of the structure under the element permutation."""
    new = list(digits)
    for i in range(len(lay.consts)):
        new[i] = perm[digits[i]]
    for j, (_, n) in enumerate(lay.preds):
        off = lay.cell_offset(j)
        for i, t in enumerate(itertools.product(range(lay.size), repeat=n)):
            img = 0
            for e in t:
                img = img * lay.size + perm[e]
            new[off + img] = digits[off + i]
    return sum(d * st for d, st in zip(new, lay.strides))


def enumerate_structures(
    sig: Signature,
    max_size: int,
    cap: int = DEFAULT_STRUCTURE_CAP,
    prune_isomorphic: bool = False,
) -> Iterator[Structure]:
    for lay in _layouts(sig, max_size, cap):
        for i in range(lay.count):
            if prune_isomorphic and not _is_canonical(lay, i):
                continue
            yield lay.decode(i)


# --------------------------------------------------------------------------
# batch evaluation over an index range

_Z = np.array([[z.z1, z.z2, z.z3] for z in VALUES], dtype=bool)


@functools.lru_cache(maxsize=65536)
def _free(f: Formula) -> frozenset:
    return frozenset(free_vars(f))


class _Batch:
    def __init__(self, lay: _Layout, start: int, stop: int):
        self.lay = lay
        idx = np.arange(start, stop, dtype=np.int64)
        self.n = stop - start
        digits = [idx // st % r for r, st in zip(lay.radices, lay.strides)]
        self.consts = {c: digits[i] for i, c in enumerate(lay.consts)}
        self.cells = {}
        for j, (p, _) in enumerate(lay.preds):
            off = lay.cell_offset(j)
            self.cells[p] = np.stack(digits[off:off + lay.cells(j)])
        self.digits = digits
        self.ones = np.ones(self.n, dtype=bool)
        self.zeros = np.zeros(self.n, dtype=bool)
        self.memo: dict = {}

    def element(self, t, env):
        if isinstance(t, Var):
            if t.name not in env:
                raise NotASentenceError(f"free variable {t.name}")
            return env[t.name]
        if t.diagram:
            return self.lay.domain.index(t.name)
        try:
            return self.consts[t.name]
        except KeyError:
            raise StructureError(f"constant {t.name} is not in the signature") from None

    def atom(self, pred: str, args, env):
        try:
            table = self.cells[pred]
        except KeyError:
            raise StructureError(f"predicate {pred} is not in the signature") from None
        cell = 0
        for t in args:
            cell = cell * self.lay.size + self.element(t, env)
        if isinstance(cell, int):
            vals = table[cell]
        else:
            vals = table[cell, np.arange(self.n)]
        return _Z[vals, 0], _Z[vals, 1], _Z[vals, 2]

    def eval(self, f: Formula, env: dict | None = None):
        env = env or {}
        key = (f, tuple(sorted((k, v) for k, v in env.items() if k in _free(f))))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._eval(f, env)
        self.memo[key] = out
        return out

    def _eval(self, f: Formula, env: dict):
        if isinstance(f, PropAtom):
            return self.atom(f.name, (), env)
        if isinstance(f, Atom):
            return self.atom(f.pred, f.args, env)
        if isinstance(f, Not):
            a1, a2, a3 = self.eval(f.arg, env)
            return a2, a1, a3
        if isinstance(f, Circ):
            if _classical_under_circ(f.arg):
                return self.ones, self.zeros, self.ones
            a3 = self.eval(f.arg, env)[2]
            return a3, ~a3, self.ones
        if isinstance(f, And):
            a1, a2, a3 = self.eval(f.left, env)
            b1, b2, b3 = self.eval(f.right, env)
            return a1 & b1, a2 | b2, (a1 & a3 & b1 & b3) | (a2 & a3) | (b2 & b3)
        if isinstance(f, Or):
            a1, a2, a3 = self.eval(f.left, env)
            b1, b2, b3 = self.eval(f.right, env)
            return a1 | b1, a2 & b2, (a2 & a3 & b2 & b3) | (a1 & a3) | (b1 & b3)
        vals = [self.eval(f.body, {**env, f.var: e}) for e in range(self.lay.size)]
        all1 = np.logical_and.reduce([v[0] for v in vals])
        any1 = np.logical_or.reduce([v[0] for v in vals])
        all2 = np.logical_and.reduce([v[1] for v in vals])
        any2 = np.logical_or.reduce([v[1] for v in vals])
        all_rt = np.logical_and.reduce([v[2] & v[0] for v in vals])
        any_rt = np.logical_or.reduce([v[2] & v[0] for v in vals])
        all_rf = np.logical_and.reduce([v[2] & v[1] for v in vals])
        any_rf = np.logical_or.reduce([v[2] & v[1] for v in vals])
        if isinstance(f, Forall):
            return all1, any2, all_rt | any_rf
        return any1, all2, all_rf | any_rt

    def canonical_mask(self):
        lay = self.lay
        base = sum(d * st for d, st in zip(self.digits, lay.strides))
        ok = np.ones(self.n, dtype=bool)
        for perm in itertools.permutations(range(lay.size)):
            ok &= _permuted_index(lay, self.digits, np.array(perm)) >= base
        return ok


def batch_values(lay: _Layout, f: Formula, start: int = 0, stop: int | None = None):
    """Snapshot indices of ``f`` on structures ``start..stop`` of ``lay``."""
    stop = lay.count if stop is None else stop
    z1, z2, z3 = _Batch(lay, start, stop).eval(f)
    bits = np.stack([z1, z2, z3], axis=1)
    lookup = {(z.z1, z.z2, z.z3): i for i, z in enumerate(VALUES)}
    return [lookup[tuple(int(b) for b in row)] for row in bits]


# --------------------------------------------------------------------------
# bounded consequence

@dataclass(frozen=True)
class FOVerdict:
    valid: bool
    countermodel: Structure | None = None
    max_size: int = 0
    # absence of a counter-structure is only checked up to max_size
    bounded: bool = True

    def __bool__(self) -> bool:
        return self.valid


def _search_chunk(args) -> int | None:
    lay, start, stop, premises, conclusion, prune = args
    batch = _Batch(lay, start, stop)
    bad = ~batch.eval(conclusion)[0]
    for p in premises:
        bad &= batch.eval(p)[0]
    if prune:
        bad &= batch.canonical_mask()
    hits = np.flatnonzero(bad)
    return int(hits[0]) + start if hits.size else None


def _check_sentences(formulas: Iterable[Formula]) -> None:
    for f in formulas:
        if free_vars(f):
            raise NotASentenceError(f"not a sentence: {render(f)}")


def fo_entails(
    premises: Sequence[Formula],
    conclusion: Formula,
    sig: Signature | None = None,
    max_size: int = 3,
    cap: int = DEFAULT_STRUCTURE_CAP,
    jobs: int = 1,
    prune_isomorphic: bool = False,
) -> FOVerdict:
    """Search for a counter-structure of size at most ``max_size``.

    Returns the first counter-structure in canonical order, or a verdict
    flagged ``bounded`` when none exists up to the bound.
    """
    formulas = [*premises, conclusion]
    _check_sentences(formulas)
    inferred = Signature.of(formulas)
    sig = inferred if sig is None else sig.merge(inferred)
    for lay in _layouts(sig, max_size, cap):
        tasks = [
            (lay, a, min(a + _CHUNK, lay.count), tuple(premises), conclusion, prune_isomorphic)
            for a in range(0, lay.count, _CHUNK)
        ]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_search_chunk, tasks))
        else:
            results = []
            for t in tasks:
                results.append(_search_chunk(t))
                if results[-1] is not None:
                    break
        for hit in results:
            if hit is not None:
                return FOVerdict(False, lay.decode(hit), max_size)
    return FOVerdict(True, None, max_size)


def fo_equivalent(f: Formula, g: Formula, sig: Signature | None = None, max_size: int = 3,
                  **kw) -> FOVerdict:
    forward = fo_entails([f], g, sig, max_size, **kw)
    if not forward.valid:
        return forward
    return fo_entails([g], f, sig, max_size, **kw)


# --------------------------------------------------------------------------
# text format

_VALUE_NAMES = "|".join(sorted((z.name for z in VALUES), key=len, reverse=True))
_PRED_RE = re.compile(r"^pred\s+([A-Za-z][A-Za-z0-9_]*)\s*/\s*(\d+)\s*\{(.*)\}\s*$")
_CONST_RE = re.compile(r"^const\s+([a-z][A-Za-z0-9_]*)\s*=\s*([A-Za-z0-9_]+)\s*$")


def _parse_tuple(text: str, arity: int, where: str) -> tuple:
    text = text.strip()
    if text == "()":
        text = ""
    parts = [p for p in re.split(r"[\s,]+", text) if p]
    if len(parts) != arity:
        raise StructureError(f"{where}: expected {arity} elements, got {text!r}")
    return tuple(parts)


def load_structure(text: str) -> Structure:
    """Read the ``domain:`` / ``const`` / ``pred`` line format."""
    domain = None
    consts: dict[str, str] = {}
    preds: dict[str, dict] = {}
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if line.startswith("domain:"):
            domain = tuple(line[len("domain:"):].split())
            continue
        m = _CONST_RE.match(line)
        if m:
            consts[m.group(1)] = m.group(2)
            continue
        m = _PRED_RE.match(line)
        if m:
            pending.append((m.group(1), int(m.group(2)), m.group(3), where))
            continue
        raise StructureError(f"{where}: cannot parse {raw.strip()!r}")
    if domain is None:
        raise StructureError("missing 'domain:' line")
    for name, arity, body, where in pending:
        if name in preds:
            raise StructureError(f"{where}: predicate {name} defined twice")
        entries = [e.strip() for e in body.split(";") if e.strip()]
        keys = [e.split(":", 1)[0].strip() for e in entries]
        if entries and all(k in ("+", "-", "o") for k in keys):
            sets = {"+": set(), "-": set(), "o": set()}
            for e in entries:
                key, rest = e.split(":", 1)
                for tok in rest.split():
                    sets[key.strip()].add(_parse_tuple(tok, arity, where))
            triple = ExtensionTriple(
                frozenset(sets["+"]), frozenset(sets["-"]), frozenset(sets["o"])
            )
            preds[name] = from_extensions(triple, arity, domain)
            continue
        table = {}
        for e in entries:
            if ":" not in e:
                raise StructureError(f"{where}: expected 'tuple: value' in {e!r}")
            key, val = e.rsplit(":", 1)
            try:
                table[_parse_tuple(key, arity, where)] = algebra.from_name(val.strip())
            except SnapshotError as err:
                raise StructureError(f"{where}: {err}") from None
        preds[name] = table
    return Structure(domain, consts, preds)


def dump_structure(s: Structure) -> str:
    lines = ["domain: " + " ".join(s.domain)]
    for c in sorted(s.const_interp):
        lines.append(f"const {c} = {s.const_interp[c]}")
    for p in sorted(s.pred_interp):
        n = s.arity(p)
        cells = "; ".join(
            f"{','.join(t)}: {s.pred_interp[p][t].name}"
            for t in itertools.product(s.domain, repeat=n)
        )
        lines.append(f"pred {p}/{n} {{ {cells} }}")
    return "\n".join(lines)
