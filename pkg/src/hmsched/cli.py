"""Command-line front end.

Exit codes: 0 success or feasible, 1 I/O error, 2 invalid input, 3 infeasible
or failed check, 4 state budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import nfold, serialize
from .core import (
    Assignment,
    BudgetExceeded,
    Infeasible,
    InvalidAssignment,
    InvalidInstance,
    ScheduleInstance,
    check_assignment,
    eval_sumwc_closed,
    evaluate,
)
from .reductions import (
    FAMILIES,
    BalancedBinPackingInstance,
    BinPackingInstance,
    bp_to_bbp,
    packing_from_perfect_schedule,
    q_to_cutting_stock,
    reduce_bbp,
)
from .solvers import (
    DEFAULT_MAX_STATES,
    CuttingStockInstance,
    brute_force_solve,
    cuttingstock_solve,
    cuttingstock_within_budget,
    dp_feasible_cmax,
    dp_minimize,
)
from .verify import (
    ORACLE_FAMILY,
    ROUNDTRIP_FAMILIES,
    TARGET_FAMILIES,
    SweepSpec,
    oracle_equivalence_sweep,
    roundtrip_check,
    target_value_check,
)

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _load(path):
    try:
        return serialize.load(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _save(value, path) -> None:
    try:
        serialize.save(value, path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _split(doc):
    """``(instance, certificate or None)`` from a plain instance or a bundle."""
    if isinstance(doc, tuple):
        return doc
    return doc, None


def _schedule(doc) -> tuple:
    inst, cert = _split(doc)
    if not isinstance(inst, ScheduleInstance):
        raise CliError(EXIT_INVALID, f"expected a schedule instance, got {type(inst).__name__}")
    return inst, cert


def _enc(v) -> str:
    return serialize.enc_num(v)


# reduce

def cmd_reduce(args) -> int:
    doc = _load(args.inp)
    src, _ = _split(doc)
    fam = args.family
    if fam == "bp2bbp":
        if not isinstance(src, BinPackingInstance):
            raise CliError(EXIT_INVALID, "bp2bbp needs a bin packing instance")
        out = bp_to_bbp(src)
        _save(out, args.out)
        _emit({"family": fam, "items": len(out.items), "capacity": str(out.capacity), "tight": out.tight})
        return EXIT_OK
    if fam == "q2cs":
        inst, cert = _schedule(doc)
        T = args.target if args.target is not None else inst.target
        if T is None and cert is not None:
            T = cert.target
        cs, rc = q_to_cutting_stock(inst, T)
        _save((cs, rc), args.out)
        _emit({"family": fam, "T": _enc(rc.T), "K1": str(rc.K1), "K2": str(rc.K2), "budget": str(cs.budget),
               "carry_free": rc.carry_free})
        return EXIT_OK
    if not isinstance(src, BinPackingInstance):
        raise CliError(EXIT_INVALID, f"{fam} needs a balanced bin packing instance")
    if not isinstance(src, BalancedBinPackingInstance):
        src = BalancedBinPackingInstance(src.items, src.bins, src.capacity)
    inst, cert = reduce_bbp(fam, src)
    _save((inst, cert), args.out)
    _emit({"family": fam, "constants": {k: _enc(v) for k, v in cert.constants.items()},
           "target": _enc(cert.target)})
    return EXIT_OK


# solve

def _solve_cuttingstock(args, doc) -> int:
    cs, _ = _split(doc)
    if not isinstance(cs, CuttingStockInstance):
        raise CliError(EXIT_INVALID, "cuttingstock needs a cutting stock instance")
    budget = args.target if args.target is not None else None
    if budget is not None:
        if budget.denominator != 1:
            raise CliError(EXIT_INVALID, "budget must be an integer")
        sol = cuttingstock_within_budget(cs, int(budget), args.max_states)
        if sol is None:
            _emit({"feasible": False, "budget": str(budget)})
            return EXIT_INFEASIBLE
    else:
        sol = cuttingstock_solve(cs, args.max_states)
    if args.out:
        _save(sol, args.out)
    _emit({"feasible": True, "cost": str(sol.cost), "purchases": [str(x) for x in sol.purchases]})
    return EXIT_OK


def cmd_solve(args) -> int:
    doc = _load(args.inp)
    if args.algo == "cuttingstock":
        return _solve_cuttingstock(args, doc)
    inst, cert = _schedule(doc)
    objective = args.objective or inst.objective
    if args.target is not None:
        if args.objective not in (None, "cmax"):
            raise CliError(EXIT_INVALID, "--target decision mode is only defined for cmax")
        objective = "cmax"
    report = {"algo": args.algo, "objective": objective}
    if args.target is not None:
        if args.algo == "dp":
            a = dp_feasible_cmax(inst, args.target, args.max_states)
        else:
            a, value = brute_force_solve(inst, "cmax", args.max_states)
            a = a if value <= args.target else None
        report["target"] = _enc(args.target)
        report["feasible"] = a is not None
        if a is None:
            _emit(report)
            return EXIT_INFEASIBLE
        value = evaluate(inst, a, "cmax")
    elif args.algo == "dp":
        a, value = dp_minimize(inst, objective, args.max_states)
    else:
        a, value = brute_force_solve(inst, objective, args.max_states)
    report["value"] = _enc(value)
    if cert is not None and objective == "cmax":
        check = packing_from_perfect_schedule(cert, a, inst)
        report["perfect"] = check.ok
        if check.ok:
            report["packing"] = list(check.packing)
        else:
            report["reason"] = check.reason
    if args.out:
        body = serialize.to_dict(a)
        body.update(objective=objective, value=_enc(value))
        _write_text(args.out, json.dumps(body, indent=2) + "\n")
    else:
        report["counts"] = [[str(v) for v in row] for row in a.counts]
    _emit(report)
    return EXIT_OK


# eval

def cmd_eval(args) -> int:
    inst, _ = _schedule(_load(args.inp))
    a = _load(args.assignment)
    if not isinstance(a, Assignment):
        raise CliError(EXIT_INVALID, "assignment file must hold an assignment")
    check_assignment(inst, a)
    objective = args.objective or inst.objective
    value = evaluate(inst, a, objective)
    out = {objective: _enc(value)}
    if objective == "l2sq":
        out["l2_approx"] = f"{math.sqrt(value):.6g}"
    if objective == "sumwc":
        parts = eval_sumwc_closed(inst, a)
        out["breakdown"] = {k: _enc(v) for k, v in parts.as_dict().items()}
    _emit(out)
    return EXIT_OK


# verify

def cmd_verify(args) -> int:
    common = dict(seed=args.seed, max_size=args.max_size, max_states=args.max_states,
                  workers=args.workers, bins=tuple(args.bins))
    if args.action == "oracle":
        spec = SweepSpec(ORACLE_FAMILY, generator="random", trials=args.trials or 2,
                         max_items=args.max_n, max_machines=args.max_machines, max_types=args.max_types,
                         max_weight=args.max_weight, **common)
        report = oracle_equivalence_sweep(spec)
    else:
        if not args.family:
            raise CliError(EXIT_INVALID, "--family is required")
        generator = "exhaustive" if args.exhaustive else ("planted" if args.action == "target" else "random")
        spec = SweepSpec(args.family, generator=generator, trials=args.trials, max_items=args.max_items,
                         min_items=args.min_items, nfold_check=args.nfold, **common)
        if args.action == "roundtrip":
            if args.family not in ROUNDTRIP_FAMILIES:
                raise CliError(EXIT_INVALID, f"roundtrip family must be one of {', '.join(ROUNDTRIP_FAMILIES)}")
            report = roundtrip_check(spec)
        else:
            if args.family not in TARGET_FAMILIES:
                raise CliError(EXIT_INVALID, f"target family must be one of {', '.join(TARGET_FAMILIES)}")
            report = target_value_check(spec)
    try:
        report.write(args.csv, args.json, timing=not args.no_timing)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write report: {exc}") from None
    _emit({"verdict": report.verdict, "summary": report.summary,
           "counterexamples": [r.digest for r in report.counterexamples]})
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


# nfold

def _read_vector(path) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    if text.lstrip().startswith("{"):
        a = serialize.loads(text)
        if not isinstance(a, Assignment):
            raise CliError(EXIT_INVALID, "solution file must hold an assignment or integers")
        return a.flatten()
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise CliError(EXIT_INVALID, "solution vector must be whitespace-separated integers") from None


def _import(path) -> nfold.NFoldModel:
    try:
        return nfold.import_model(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def cmd_nfold(args) -> int:
    if args.action == "export":
        inst, cert = _schedule(_load(args.inp))
        objective = args.objective or inst.objective
        if objective == "cmax":
            T = args.target if args.target is not None else inst.target
            if T is None and cert is not None:
                T = cert.target
            if T is None:
                raise CliError(EXIT_INVALID, "cmax export needs --target or an instance target")
            model = nfold.build_nfold_cmax(inst, T)
        else:
            model = nfold.build_nfold_objective(inst, objective)
        if args.standard_form:
            model = nfold.standard_form(model)
        _write_text(args.out, nfold.format_model(model))
        _emit({"r": model.r, "s": model.s, "t": model.t, "N": model.N, "variables": model.num_vars})
        return EXIT_OK
    if args.action == "check":
        model = _import(args.model)
        x = _read_vector(args.solution)
        ok, violations = nfold.check_solution(model, x)
        _emit({"ok": ok, "violations": violations})
        return EXIT_OK if ok else EXIT_INFEASIBLE
    model = _import(args.inp)
    _write_text(args.out, nfold.format_model(model))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--max-states", type=int, default=argparse.SUPPRESS,
                        help=f"cap on DP/brute-force states (default {DEFAULT_MAX_STATES})")
    p = argparse.ArgumentParser(prog="hmsched", parents=[shared],
                                description="Exact high-multiplicity scheduling toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", parents=[shared], help="build a reduced instance and its certificate")
    r.add_argument("--family", required=True, choices=FAMILIES)
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--target", type=_rational, help="makespan target for q2cs (default: instance target)")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[shared], help="solve an instance exactly")
    s.add_argument("--algo", required=True, choices=("dp", "brute", "cuttingstock"))
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--target", type=_rational, help="decision mode: makespan (or cost budget) to meet")
    s.add_argument("--objective", choices=("cmax", "l2sq", "sumwc"))
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", parents=[shared], help="evaluate an assignment exactly")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--assignment", required=True)
    e.add_argument("--objective", choices=("cmax", "l2sq", "sumwc"))
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", parents=[shared], help="run a soundness sweep")
    v.add_argument("action", choices=("roundtrip", "target", "oracle"))
    v.add_argument("--family")
    v.add_argument("--trials", type=int, default=0)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-items", type=int, default=4)
    v.add_argument("--min-items", type=int, default=1)
    v.add_argument("--max-size", type=int, default=None)
    v.add_argument("--bins", type=int, nargs="+", default=[2])
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--nfold", action="store_true", help="also check DP solutions against the N-fold model")
    v.add_argument("--max-n", type=int, default=6, help="oracle: most jobs per instance")
    v.add_argument("--max-machines", type=int, default=3)
    v.add_argument("--max-types", type=int, default=3)
    v.add_argument("--max-weight", type=int, default=5)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--csv")
    v.add_argument("--json")
    v.add_argument("--no-timing", action="store_true", help="leave the wall_ms column empty")
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("nfold", parents=[shared], help="export or check N-fold models")
    n.add_argument("action", choices=("export", "check", "normalize"))
    n.add_argument("--in", dest="inp")
    n.add_argument("--out")
    n.add_argument("--target", type=_rational)
    n.add_argument("--objective", choices=("cmax", "l2sq", "sumwc"))
    n.add_argument("--standard-form", action="store_true")
    n.add_argument("--model")
    n.add_argument("--solution")
    n.set_defaults(func=cmd_nfold)
    return p


def _require(args, *names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(EXIT_INVALID, f"{args.command} {args.action}: missing {', '.join(missing)}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "max_states"):
        args.max_states = DEFAULT_MAX_STATES
    if args.command == "verify" and args.max_size is None:
        args.max_size = 5 if args.action == "oracle" else 3
    try:
        if args.command == "nfold":
            need = {"export": ("inp", "out"), "check": ("model", "solution"), "normalize": ("inp", "out")}
            _require(args, *need[args.action])
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidInstance, InvalidAssignment, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
