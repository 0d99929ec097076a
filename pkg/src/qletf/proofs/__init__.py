"""Natural-deduction derivations: rule catalog, checker, file format, audit."""

from .checker import (
    ArityMismatch,
    CheckResult,
    DoublyDischarged,
    EigenvariableViolation,
    FreeVariableViolation,
    NotASentence,
    ProofError,
    ProofTree,
    RuleNotAllowed,
    SchemaMismatch,
    UndischargedHypothesis,
    UnknownPremise,
    WrongConclusion,
    check_proof,
    hyp,
    node,
    premise,
)
from .fileformat import ProofFormatError, dump_proof, load_proof
from .fixtures import Fixture, encode_paper_derivations, fresh_constants, worked_fixtures
from .rules import RULES, SYSTEMS, RuleId, Side
