"""Rule catalog: schemas for every inference rule the checker knows.

A schema is a formula tree whose leaves may be metavariables (:class:`Meta`)
or instances ``A(c/x)`` (:class:`Inst`).  In a quantifier node of a schema the
variable name is itself a metavariable, bound to the variable used in the
actual formula.  ``A^T`` and ``A^F`` are written with :func:`TSup` and
:func:`FSup`, so schemas already have the expanded shapes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..syntax import (
    And,
    Circ,
    Const,
    Exists,
    Forall,
    Formula,
    FSup,
    Not,
    Or,
    TSup,
    constants,
    substitute,
)


@dataclass(frozen=True)
class Meta:
    name: str


@dataclass(frozen=True)
class Inst:
    """``A(c/x)``: metavariable ``body`` with variable ``var`` replaced by constant ``const``."""

    body: str = "A"
    var: str = "x"
    const: str = "c"


class Side(enum.Enum):
    NONE = "none"
    # c fresh for A and for the hypotheses the premise depends on
    EIGEN_INTRO = "eigen-intro"
    # additionally fresh for C; the minor premise may use the discharged instance
    EIGEN_ELIM = "eigen-elim"
    # x not free in B
    NOT_FREE = "not-free"


@dataclass(frozen=True)
class Premise:
    pattern: object
    # hypothesis pattern discharged in this premise's subproof, if any
    discharges: object = None


@dataclass(frozen=True)
class Form:
    conclusion: object
    premises: tuple


@dataclass(frozen=True)
class RuleSpec:
    label: str
    forms: tuple
    side: Side = Side.NONE
    group: str = "core"

    @property
    def arity(self) -> int:
        return len(self.forms[0].premises)

    @property
    def discharges(self) -> bool:
        return any(p.discharges is not None for f in self.forms for p in f.premises)


class RuleId(enum.Enum):
    # FDE core and classicality
    I_AND = "I&"
    E_AND = "E&"
    I_OR = "I|"
    E_OR = "E|"
    I_NAND = "I~&"
    E_NAND = "E~&"
    I_NOR = "I~|"
    E_NOR = "E~|"
    DN = "DN"
    EXP = "EXP@"
    PEM = "PEM@"
    I_CC = "I@@"
    I_CN = "I@~"
    E_CN = "E@~"
    # T/F propagation
    I_AND_T = "I&T"
    I_AND_F = "I&F"
    I_OR_T = "I|T"
    I_OR_F = "I|F"
    E_AND_T = "E&T"
    E_AND_F = "E&F"
    E_OR_T = "E|T"
    E_OR_F = "E|F"
    # classicality propagation in the primitive language
    I_CAND1 = "I@&1"
    I_CAND2 = "I@&2"
    E_CAND1 = "E@&1"
    E_CAND2 = "E@&2"
    I_COR1 = "I@|1"
    I_COR2 = "I@|2"
    E_COR1 = "E@|1"
    E_COR2 = "E@|2"
    # quantifiers
    I_ALL = "Iforall"
    E_ALL = "Eforall"
    I_EX = "Iexists"
    E_EX = "Eexists"
    I_NALL = "I~forall"
    E_NALL = "E~forall"
    I_NEX = "I~exists"
    E_NEX = "E~exists"
    CD = "CD"
    I_ALL_T = "IforallT"
    E_ALL_T = "EforallT"
    I_EX_T = "IexistsT"
    E_EX_T = "EexistsT"
    I_ALL_F = "IforallF"
    E_ALL_F = "EforallF"
    I_EX_F = "IexistsF"
    E_EX_F = "EexistsF"
    CD_T = "CD'"
    C_ALL_I = "@forallI"
    C_ALL_E = "@forallE"
    C_EX_I = "@existsI"
    C_EX_E = "@existsE"
    CD_C = "CD@"
    # derived rules for #
    CONS = "Cons"
    COMP = "Comp"
    I_BUL = "I#"
    CASES = "Cases"
    I_BN = "I#~"
    E_BN = "E#~"
    E_BB = "E##"
    # leaves
    PREMISE = "premise"
    HYP = "hyp"

    @property
    def spec(self) -> RuleSpec:
        return RULES[self]

    @property
    def arity(self) -> int:
        return 0 if self in LEAVES else RULES[self].arity

    @property
    def discharges(self) -> bool:
        return self not in LEAVES and RULES[self].discharges

    @property
    def side(self) -> Side:
        return Side.NONE if self in LEAVES else RULES[self].side

    @property
    def label(self) -> str:
        return self.value if self in LEAVES else RULES[self].label

    @classmethod
    def parse(cls, text: str) -> "RuleId":
        try:
            return cls(text)
        except ValueError:
            raise KeyError(f"unknown rule {text!r}") from None


LEAVES = frozenset({RuleId.PREMISE, RuleId.HYP})

A, B, C = Meta("A"), Meta("B"), Meta("C")
Ac = Inst()


def _f(conclusion, *premises) -> Form:
    return Form(
        conclusion,
        tuple(p if isinstance(p, Premise) else Premise(p) for p in premises),
    )


def _h(pattern, discharges) -> Premise:
    return Premise(pattern, discharges)


def _all(body):
    return Forall("x", body)


def _ex(body):
    return Exists("x", body)


def _bul(a):
    return Not(Circ(a))


RULES: dict[RuleId, RuleSpec] = {
    RuleId.I_AND: RuleSpec("I∧", (_f(And(A, B), A, B),)),
    RuleId.E_AND: RuleSpec("E∧", (_f(A, And(A, B)), _f(B, And(A, B)))),
    RuleId.I_OR: RuleSpec("I∨", (_f(Or(A, B), A), _f(Or(A, B), B))),
    RuleId.E_OR: RuleSpec("E∨", (_f(C, Or(A, B), _h(C, A), _h(C, B)),)),
    RuleId.I_NAND: RuleSpec(
        "I¬∧", (_f(Not(And(A, B)), Not(A)), _f(Not(And(A, B)), Not(B)))
    ),
    RuleId.E_NAND: RuleSpec(
        "E¬∧", (_f(C, Not(And(A, B)), _h(C, Not(A)), _h(C, Not(B))),)
    ),
    RuleId.I_NOR: RuleSpec("I¬∨", (_f(Not(Or(A, B)), Not(A), Not(B)),)),
    RuleId.E_NOR: RuleSpec(
        "E¬∨", (_f(Not(A), Not(Or(A, B))), _f(Not(B), Not(Or(A, B))))
    ),
    RuleId.DN: RuleSpec("DN", (_f(A, Not(Not(A))), _f(Not(Not(A)), A))),
    RuleId.EXP: RuleSpec("EXP∘", (_f(B, Circ(A), A, Not(A)),)),
    RuleId.PEM: RuleSpec("PEM∘", (_f(Or(A, Not(A)), Circ(A)),)),
    RuleId.I_CC: RuleSpec("I∘∘", (_f(Circ(Circ(A))),)),
    RuleId.I_CN: RuleSpec("I∘¬", (_f(Circ(Not(A)), Circ(A)),)),
    RuleId.E_CN: RuleSpec("E∘¬", (_f(Circ(A), Circ(Not(A))),)),
    RuleId.I_AND_T: RuleSpec(
        "I∧T", (_f(TSup(And(A, B)), TSup(A), TSup(B)),), group="tf"
    ),
    RuleId.I_AND_F: RuleSpec(
        "I∧F", (_f(FSup(And(A, B)), FSup(A)), _f(FSup(And(A, B)), FSup(B))), group="tf"
    ),
    RuleId.I_OR_T: RuleSpec(
        "I∨T", (_f(TSup(Or(A, B)), TSup(A)), _f(TSup(Or(A, B)), TSup(B))), group="tf"
    ),
    RuleId.I_OR_F: RuleSpec(
        "I∨F", (_f(FSup(Or(A, B)), FSup(A), FSup(B)),), group="tf"
    ),
    RuleId.E_AND_T: RuleSpec(
        "E∧T", (_f(TSup(A), TSup(And(A, B))), _f(TSup(B), TSup(And(A, B)))), group="tf"
    ),
    RuleId.E_AND_F: RuleSpec(
        "E∧F", (_f(C, FSup(And(A, B)), _h(C, FSup(A)), _h(C, FSup(B))),), group="tf"
    ),
    RuleId.E_OR_T: RuleSpec(
        "E∨T", (_f(C, TSup(Or(A, B)), _h(C, TSup(A)), _h(C, TSup(B))),), group="tf"
    ),
    RuleId.E_OR_F: RuleSpec(
        "E∨F", (_f(FSup(A), FSup(Or(A, B))), _f(FSup(B), FSup(Or(A, B)))), group="tf"
    ),
    RuleId.I_CAND1: RuleSpec(
        "I∘∧₁", (_f(Circ(And(A, B)), Circ(A), A, Circ(B), B),), group="prop-circ"
    ),
    RuleId.I_CAND2: RuleSpec(
        "I∘∧₂",
        (_f(Circ(And(A, B)), Circ(A), Not(A)), _f(Circ(And(A, B)), Circ(B), Not(B))),
        group="prop-circ",
    ),
    RuleId.E_CAND1: RuleSpec(
        "E∘∧₁", (_f(And(Circ(A), Circ(B)), Circ(And(A, B)), A, B),), group="prop-circ"
    ),
    RuleId.E_CAND2: RuleSpec(
        "E∘∧₂",
        (
            _f(
                Or(And(Circ(A), Not(A)), And(Circ(B), Not(B))),
                Circ(And(A, B)),
                Or(Not(A), Not(B)),
            ),
        ),
        group="prop-circ",
    ),
    RuleId.I_COR1: RuleSpec(
        "I∘∨₁", (_f(Circ(Or(A, B)), Circ(A), Not(A), Circ(B), Not(B)),), group="prop-circ"
    ),
    RuleId.I_COR2: RuleSpec(
        "I∘∨₂",
        (_f(Circ(Or(A, B)), Circ(A), A), _f(Circ(Or(A, B)), Circ(B), B)),
        group="prop-circ",
    ),
    RuleId.E_COR1: RuleSpec(
        "E∘∨₁",
        (_f(And(Circ(A), Circ(B)), Circ(Or(A, B)), Not(A), Not(B)),),
        group="prop-circ",
    ),
    RuleId.E_COR2: RuleSpec(
        "E∘∨₂",
        (_f(Or(And(Circ(A), A), And(Circ(B), B)), Circ(Or(A, B)), Or(A, B)),),
        group="prop-circ",
    ),
    RuleId.I_ALL: RuleSpec("I∀", (_f(_all(A), Ac),), Side.EIGEN_INTRO, "quant"),
    RuleId.E_ALL: RuleSpec("E∀", (_f(Ac, _all(A)),), group="quant"),
    RuleId.I_EX: RuleSpec("I∃", (_f(_ex(A), Ac),), group="quant"),
    RuleId.E_EX: RuleSpec("E∃", (_f(C, _ex(A), _h(C, Ac)),), Side.EIGEN_ELIM, "quant"),
    RuleId.I_NALL: RuleSpec("I¬∀", (_f(Not(_all(A)), Not(Ac)),), group="quant"),
    RuleId.E_NALL: RuleSpec(
        "E¬∀", (_f(C, Not(_all(A)), _h(C, Not(Ac))),), Side.EIGEN_ELIM, "quant"
    ),
    RuleId.I_NEX: RuleSpec("I¬∃", (_f(Not(_ex(A)), Not(Ac)),), Side.EIGEN_INTRO, "quant"),
    RuleId.E_NEX: RuleSpec("E¬∃", (_f(Not(Ac), Not(_ex(A))),), group="quant"),
    RuleId.CD: RuleSpec("CD", (_f(Or(B, _all(A)), _all(Or(B, A))),), Side.NOT_FREE, "quant"),
    RuleId.I_ALL_T: RuleSpec(
        "I∀T", (_f(TSup(_all(A)), TSup(Ac)),), Side.EIGEN_INTRO, "quant-tf"
    ),
    RuleId.E_ALL_T: RuleSpec("E∀T", (_f(TSup(Ac), TSup(_all(A))),), group="quant-tf"),
    RuleId.I_EX_T: RuleSpec("I∃T", (_f(TSup(_ex(A)), TSup(Ac)),), group="quant-tf"),
    RuleId.E_EX_T: RuleSpec(
        "E∃T", (_f(C, TSup(_ex(A)), _h(C, TSup(Ac))),), Side.EIGEN_ELIM, "quant-tf"
    ),
    RuleId.I_ALL_F: RuleSpec("I∀F", (_f(FSup(_all(A)), FSup(Ac)),), group="quant-tf"),
    RuleId.E_ALL_F: RuleSpec(
        "E∀F", (_f(C, FSup(_all(A)), _h(C, FSup(Ac))),), Side.EIGEN_ELIM, "quant-tf"
    ),
    RuleId.I_EX_F: RuleSpec(
        "I∃F", (_f(FSup(_ex(A)), FSup(Ac)),), Side.EIGEN_INTRO, "quant-tf"
    ),
    RuleId.E_EX_F: RuleSpec("E∃F", (_f(FSup(Ac), FSup(_ex(A))),), group="quant-tf"),
    RuleId.CD_T: RuleSpec(
        "CD′", (_f(Or(B, TSup(_all(A))), _all(Or(B, TSup(A)))),), Side.NOT_FREE, "quant-tf"
    ),
    RuleId.C_ALL_I: RuleSpec(
        "∘∀I",
        (
            _f(Circ(_all(B)), _all(And(B, Circ(B)))),
            _f(Circ(_all(B)), _ex(And(Not(B), Circ(B)))),
        ),
        group="quant-circ",
    ),
    RuleId.C_ALL_E: RuleSpec(
        "∘∀E",
        (_f(Or(_all(And(B, Circ(B))), _ex(And(Not(B), Circ(B)))), Circ(_all(B))),),
        group="quant-circ",
    ),
    RuleId.C_EX_I: RuleSpec(
        "∘∃I",
        (
            _f(Circ(_ex(B)), _ex(And(B, Circ(B)))),
            _f(Circ(_ex(B)), _all(And(Not(B), Circ(B)))),
        ),
        group="quant-circ",
    ),
    RuleId.C_EX_E: RuleSpec(
        "∘∃E",
        (_f(Or(_ex(And(B, Circ(B))), _all(And(Not(B), Circ(B)))), Circ(_ex(B))),),
        group="quant-circ",
    ),
    RuleId.CD_C: RuleSpec(
        "CD∘",
        (_f(Or(B, And(Circ(_all(A)), _all(A))), _all(Or(B, And(Circ(A), A)))),),
        Side.NOT_FREE,
        "quant-circ",
    ),
    RuleId.CONS: RuleSpec("Cons", (_f(B, Circ(A), _bul(A)),), group="bullet"),
    RuleId.COMP: RuleSpec("Comp", (_f(Or(Circ(A), _bul(A))),), group="bullet"),
    RuleId.I_BUL: RuleSpec("I•", (_f(_bul(A), A, Not(A)),), group="bullet"),
    RuleId.CASES: RuleSpec("Cases", (_f(Or(Or(A, Not(A)), _bul(A))),), group="bullet"),
    RuleId.I_BN: RuleSpec("I•¬", (_f(_bul(Not(A)), _bul(A)),), group="bullet"),
    RuleId.E_BN: RuleSpec("E•¬", (_f(_bul(A), _bul(Not(A))),), group="bullet"),
    RuleId.E_BB: RuleSpec("E••", (_f(B, _bul(_bul(A))),), group="bullet"),
}


def _rules(*groups: str, extra=()) -> frozenset:
    return frozenset(r for r, s in RULES.items() if s.group in groups) | frozenset(extra)


_FDE = _rules("core") - {RuleId.I_CC, RuleId.I_CN, RuleId.E_CN}
_CIRC = {RuleId.I_CC, RuleId.I_CN, RuleId.E_CN}

#: Rule sets of the deductive systems; the derived ``#`` rules are usable in all.
SYSTEMS: dict[str, frozenset] = {
    "ND_F-": _FDE | _rules("bullet"),
    "ND_F": _FDE | _CIRC | _rules("tf", "bullet"),
    "ND_F'": _FDE | _CIRC | _rules("prop-circ", "bullet"),
    "ND_QF": _FDE | _CIRC | _rules("tf", "quant", "quant-tf", "bullet"),
    "ND_QF'": _FDE | _CIRC | _rules("prop-circ", "quant", "quant-circ", "bullet"),
}


# --------------------------------------------------------------------------
# matching


@dataclass
class Match:
    """Bindings collected while matching one form."""

    env: dict = field(default_factory=dict)
    pending: list = field(default_factory=list)

    def copy(self) -> "Match":
        return Match(dict(self.env), list(self.pending))


def match(pattern, f: Formula, m: Match) -> bool:
    """Structural match of ``f`` against ``pattern``, extending ``m``.

    ``Inst`` leaves are recorded in ``m.pending`` and checked by
    :func:`resolve` once the metavariables they mention are bound.
    """
    if isinstance(pattern, Meta):
        bound = m.env.get(pattern.name)
        if bound is None:
            m.env[pattern.name] = f
            return True
        return bound == f
    if isinstance(pattern, Inst):
        m.pending.append((pattern, f))
        return True
    if type(pattern) is not type(f):
        return False
    if isinstance(pattern, (Not, Circ)):
        return match(pattern.arg, f.arg, m)
    if isinstance(pattern, (And, Or)):
        return match(pattern.left, f.left, m) and match(pattern.right, f.right, m)
    if isinstance(pattern, (Forall, Exists)):
        key = "var:" + pattern.var
        bound = m.env.get(key)
        if bound is None:
            m.env[key] = f.var
        elif bound != f.var:
            return False
        return match(pattern.body, f.body, m)
    return pattern == f


def _instance_ok(inst: Inst, f: Formula, env: dict) -> bool:
    body, var = env.get(inst.body), env.get("var:" + inst.var)
    c = env.get("const:" + inst.const)
    return body is not None and var is not None and substitute(body, var, Const(c)) == f


def resolve(m: Match) -> bool:
    """Check pending ``A(c/x)`` leaves, inferring ``c`` where unbound."""

    def go(i: int, env: dict) -> dict | None:
        if i == len(m.pending):
            return env
        inst, f = m.pending[i]
        key = "const:" + inst.const
        if key in env:
            return go(i + 1, env) if _instance_ok(inst, f, env) else None
        for c in sorted(constants(f)):
            trial = {**env, key: c}
            if _instance_ok(inst, f, trial):
                found = go(i + 1, trial)
                if found is not None:
                    return found
        return None

    env = go(0, m.env)
    if env is None:
        return False
    m.env, m.pending = env, []
    return True


def instantiate(pattern, env: dict) -> Formula:
    """Fill a schema from bindings (used by the audit and by fixtures)."""
    if isinstance(pattern, Meta):
        return env[pattern.name]
    if isinstance(pattern, Inst):
        return substitute(
            env[pattern.body], env.get("var:" + pattern.var, pattern.var),
            Const(env["const:" + pattern.const]),
        )
    if isinstance(pattern, (Not, Circ)):
        return type(pattern)(instantiate(pattern.arg, env))
    if isinstance(pattern, (And, Or)):
        return type(pattern)(instantiate(pattern.left, env), instantiate(pattern.right, env))
    if isinstance(pattern, (Forall, Exists)):
        return type(pattern)(
            env.get("var:" + pattern.var, pattern.var), instantiate(pattern.body, env)
        )
    return pattern
