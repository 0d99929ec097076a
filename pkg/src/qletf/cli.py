"""Six-valued evaluation, consequence, normal forms, finite models and proof checking.

Exit codes: 0 success or valid, 1 semantic negative (countermodel, not
equivalent, proof rejected, audit failure), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import algebra
from .algebra import VALUES, from_name, is_designated
from .models import eval_sentence, fo_entails, load_structure, dump_structure
from .normal_forms import NormalFormKind, is_normal_form, to_normal_form
from .parsing import load_signature, parse, parse_many, render
from .prenex import is_pnf, to_pnf, verify_pnf
from .propositional import (
    DEFAULT_ATOM_BOUND,
    Sequent,
    entails,
    equivalent,
    evaluate,
    format_assignment,
)
from .proofs import SYSTEMS, check_proof, load_proof
from .proofs.audit import audit_rules
from .syntax import LogicError

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _formulas(args, texts):
    sig = load_signature(_read(args.sig)) if args.sig else None
    return parse_many(texts, sig)


def _assignment(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"expected atom=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        out[k] = from_name(v)
    return out


# --------------------------------------------------------------------------
# subcommands


def cmd_table(args, out) -> int:
    ops = [args.op] if args.op else ["conj", "disj", "neg", "circ"]
    names = [z.name for z in VALUES]
    for k, op in enumerate(ops):
        table = algebra.operation_table(op)
        binary = op in algebra.BINARY_OPS
        if args.format == "csv":
            out.write("a,b,value\n" if binary else "a,value\n")
            for i, row in enumerate(table):
                for j, z in enumerate(row):
                    left = f"{names[i]},{names[j]}" if binary else names[i]
                    out.write(f"{left},{z.name}\n")
            continue
        if k:
            out.write("\n")
        out.write(f"{op}\n")
        if binary:
            out.write("\t".join(["", *names]) + "\n")
            for i, row in enumerate(table):
                out.write("\t".join([names[i], *(z.name for z in row)]) + "\n")
        else:
            for i, row in enumerate(table):
                out.write(f"{names[i]}\t{row[0].name}\n")
    return OK


def cmd_eval(args, out) -> int:
    (f,), _ = _formulas(args, [args.formula])
    z = evaluate(f, _assignment(args.assignment))
    out.write(z.name + "\n")
    return OK


def cmd_entails(args, out) -> int:
    formulas, _ = _formulas(args, [*args.premise, args.conclusion])
    verdict = entails(Sequent(formulas[:-1], formulas[-1]), args.atom_bound, args.jobs)
    if verdict.valid:
        out.write("valid\n")
        return OK
    out.write(format_assignment(verdict.countermodel) + "\n")
    return NEGATIVE


def cmd_equiv(args, out) -> int:
    (f, g), _ = _formulas(args, [args.left, args.right])
    verdict = equivalent(f, g, args.atom_bound)
    if verdict.valid:
        out.write("equivalent\n")
        return OK
    out.write(format_assignment(verdict.countermodel) + "\n")
    return NEGATIVE


def cmd_nf(args, out) -> int:
    (f,), _ = _formulas(args, [args.formula])
    kind = NormalFormKind.CNF if args.cnf else NormalFormKind.DNF
    g = to_normal_form(f, kind)
    out.write(render(g) + "\n")
    if args.verify:
        verdict = equivalent(f, g, args.atom_bound)
        shape = is_normal_form(g, kind)
        if not (verdict.valid and shape):
            why = "not in normal form" if not shape else format_assignment(verdict.countermodel)
            out.write(f"verification failed: {why}\n")
            return NEGATIVE
        out.write("verified\n")
    return OK


def cmd_prenex(args, out) -> int:
    (f,), sig = _formulas(args, [args.formula])
    g = to_pnf(f)
    out.write(render(g) + "\n")
    if args.verify:
        verdict = verify_pnf(f, g, args.max_domain, sig, jobs=args.jobs)
        if not (verdict.valid and is_pnf(g)):
            out.write("verification failed\n")
            if verdict.countermodel is not None:
                out.write(dump_structure(verdict.countermodel) + "\n")
            return NEGATIVE
        out.write(f"verified up to domain size {args.max_domain}\n")
    return OK


def cmd_model_check(args, out) -> int:
    s = load_structure(_read(args.model))
    sig = s.signature()
    if args.sig:
        sig = sig.merge(load_signature(_read(args.sig)))
    f = parse(args.formula, sig)
    z = eval_sentence(s, f)
    designated = is_designated(z)
    out.write(f"{z.name} {'designated' if designated else 'not designated'}\n")
    return OK if designated else NEGATIVE


def cmd_fo_entails(args, out) -> int:
    formulas, sig = _formulas(args, [*args.premise, args.conclusion])
    verdict = fo_entails(
        formulas[:-1], formulas[-1], sig, args.max_domain,
        jobs=args.jobs, prune_isomorphic=args.prune,
    )
    if verdict.valid:
        out.write(f"valid up to domain size {args.max_domain}\n")
        return OK
    out.write(dump_structure(verdict.countermodel) + "\n")
    return NEGATIVE


def cmd_proof_check(args, out) -> int:
    tree = load_proof(_read(args.file))
    premises = None
    if args.premises:
        lines = [ln.strip() for ln in _read(args.premises).splitlines()]
        premises = [parse(ln) for ln in lines if ln and not ln.startswith("#")]
    goal = parse(args.goal) if args.goal else None
    rules = SYSTEMS[args.system] if args.system else None
    result = check_proof(tree, premises, goal, rules)
    if result.ok:
        used = ", ".join(render(p) for p in result.premises_used)
        out.write(f"ok: {{{used}}} |- {render(tree.conclusion)}\n")
        return OK
    out.write(f"rejected: {result.error}\n")
    return NEGATIVE


def cmd_rules_audit(args, out) -> int:
    report = audit_rules(fo_bound=args.fo_bound, jobs=args.jobs)
    for line in report.lines():
        out.write(line + "\n")
    bad = [r for r in report.failed_rules() if not r.startswith("control")]
    control_flagged = any(r.startswith("control") for r in report.failed_rules())
    out.write(f"catalog: {'sound' if not bad else 'UNSOUND: ' + ', '.join(bad)}; "
              f"negative control: {'flagged' if control_flagged else 'NOT flagged'}\n")
    return OK if not bad and control_flagged else NEGATIVE


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", metavar="FILE", help="signature file (pred P/2, const c)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="qletf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="operation tables")
    t.add_argument("--op", choices=["conj", "disj", "neg", "circ", "bullet"])
    t.add_argument("--format", choices=["text", "csv"], default="text")
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("eval", parents=[common], help="evaluate under an assignment")
    e.add_argument("-f", "--formula", required=True)
    e.add_argument("-a", "--assignment", required=True, help='e.g. "p=b,q=n"')
    e.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("entails", cmd_entails, "six-valued consequence"),
        ("fo-entails", cmd_fo_entails, "bounded first-order consequence"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("-p", "--premise", action="append", default=[])
        s.add_argument("-c", "--conclusion", required=True)
        if name == "entails":
            s.add_argument("--atom-bound", type=int, default=DEFAULT_ATOM_BOUND)
        else:
            s.add_argument("--max-domain", type=int, default=3)
            s.add_argument("--prune", action="store_true",
                           help="skip structures isomorphic to earlier ones")
        s.set_defaults(func=func)

    q = sub.add_parser("equiv", parents=[common], help="two-sided consequence")
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--atom-bound", type=int, default=DEFAULT_ATOM_BOUND)
    q.set_defaults(func=cmd_equiv)

    n = sub.add_parser("nf", parents=[common], help="disjunctive or conjunctive normal form")
    n.add_argument("formula")
    kind = n.add_mutually_exclusive_group()
    kind.add_argument("--dnf", action="store_true", help="(default)")
    kind.add_argument("--cnf", action="store_true")
    n.add_argument("--verify", action="store_true")
    n.add_argument("--atom-bound", type=int, default=DEFAULT_ATOM_BOUND)
    n.set_defaults(func=cmd_nf)

    x = sub.add_parser("prenex", parents=[common], help="prenex normal form")
    x.add_argument("formula")
    x.add_argument("--verify", action="store_true")
    x.add_argument("--max-domain", type=int, default=2)
    x.set_defaults(func=cmd_prenex)

    m = sub.add_parser("model-check", parents=[common], help="value of a sentence in a structure")
    m.add_argument("-m", "--model", required=True, metavar="FILE")
    m.add_argument("-f", "--formula", required=True)
    m.set_defaults(func=cmd_model_check)

    c = sub.add_parser("proof-check", parents=[common], help="check a derivation file")
    c.add_argument("file")
    c.add_argument("--premises", metavar="FILE", help="one formula per line")
    c.add_argument("--goal", help="required conclusion")
    c.add_argument("--system", choices=sorted(SYSTEMS))
    c.set_defaults(func=cmd_proof_check)

    r = sub.add_parser("rules-audit", parents=[common], help="semantic audit of all rules")
    r.add_argument("--fo-bound", type=int, default=3)
    r.set_defaults(func=cmd_rules_audit)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, LogicError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
