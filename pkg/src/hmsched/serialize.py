"""Canonical JSON for every value type.

Integers travel as decimal strings and rationals as ``"p/q"`` in lowest terms,
so nothing depends on the reader's float or int width.  Every document has a
top-level ``"kind"``.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .core import INF, Assignment, InvalidInstance, JobType, ScheduleInstance, is_inf
from .reductions.binpacking import BalancedBinPackingInstance, BinPackingInstance
from .reductions.cutting_stock import RadixConstants
from .reductions.scheduling import ReductionCertificate
from .solvers.cutting_stock import CuttingStockInstance, CuttingStockSolution


def enc_int(v) -> str:
    return str(int(v))


def enc_num(v) -> str:
    """Integer or rational; ``Fraction(6)`` becomes ``"6"``."""
    if is_inf(v):
        return "inf"
    q = Fraction(v)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dec_int(s) -> int:
    if isinstance(s, bool):
        raise InvalidInstance(f"expected an integer, got {s!r}")
    if isinstance(s, int):
        return s
    try:
        return int(str(s).strip())
    except ValueError:
        raise InvalidInstance(f"expected a decimal integer, got {s!r}") from None


def dec_num(s):
    """``int`` for plain integers, ``Fraction`` for ``p/q``, ``INF`` for ``inf``."""
    if isinstance(s, int) and not isinstance(s, bool):
        return s
    text = str(s).strip()
    if text == "inf":
        return INF
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidInstance(f"bad rational {s!r}") from None
    return dec_int(text)


def _matrix(rows, enc=enc_int):
    return [[enc(v) for v in row] for row in rows]


# encoders

def _job(job: JobType) -> dict:
    out = {}
    if job.per_machine:
        out["sizes"] = [enc_num(p) for p in job.size]
    else:
        out["size"] = enc_num(job.size)
    out["multiplicity"] = enc_int(job.multiplicity)
    if job.weight is not None:
        out["weight"] = enc_int(job.weight)
    return out


def _schedule(inst: ScheduleInstance) -> dict:
    out = {"kind": "schedule_instance", "model": inst.model, "objective": inst.objective}
    if inst.model == "uniform":
        out["machines"] = [{"speed": enc_num(s)} for s in inst.speeds]
    else:
        out["machines"] = enc_int(inst.machines)
    out["jobs"] = [_job(j) for j in inst.jobs]
    if inst.target is not None:
        out["target"] = enc_num(inst.target)
    return out


def _bp(bp: BinPackingInstance) -> dict:
    kind = "balanced_bin_packing" if isinstance(bp, BalancedBinPackingInstance) else "bin_packing"
    return {"kind": kind, "items": [enc_int(a) for a in bp.items], "bins": enc_int(bp.bins),
            "capacity": enc_int(bp.capacity)}


def _certificate(cert: ReductionCertificate) -> dict:
    out = {"kind": "certificate", "family": cert.family, "source": _bp(cert.source),
           "labels": list(cert.labels),
           "constants": {k: enc_num(v) for k, v in cert.constants.items()},
           "target": enc_num(cert.target)}
    if cert.factors is not None:
        C, D = cert.factors
        out["factors"] = {"C": _matrix(C), "D": _matrix(D)}
    if cert.notes:
        out["notes"] = list(cert.notes)
    return out


def _radix(rc: RadixConstants) -> dict:
    return {"kind": "radix_constants", "T": enc_num(rc.T), "capacities": [enc_int(c) for c in rc.capacities],
            "K1": enc_int(rc.K1), "K2": enc_int(rc.K2), "third_mass": enc_int(rc.third_mass),
            "second_mass": enc_int(rc.second_mass)}


def _cutting_stock(cs: CuttingStockInstance) -> dict:
    out = {"kind": "cutting_stock", "item_sizes": [enc_int(v) for v in cs.item_sizes],
           "item_counts": [enc_int(v) for v in cs.item_counts],
           "bin_sizes": [enc_int(v) for v in cs.bin_sizes], "bin_costs": [enc_int(v) for v in cs.bin_costs]}
    if cs.budget is not None:
        out["budget"] = enc_int(cs.budget)
    return out


def _cs_solution(sol: CuttingStockSolution) -> dict:
    return {"kind": "cutting_stock_solution", "purchases": [enc_int(v) for v in sol.purchases],
            "packing": [{"bin": enc_int(b), "counts": [enc_int(c) for c in counts]} for b, counts in sol.packing],
            "cost": enc_int(sol.cost)}


def to_dict(value) -> dict:
    if isinstance(value, ScheduleInstance):
        return _schedule(value)
    if isinstance(value, BinPackingInstance):
        return _bp(value)
    if isinstance(value, Assignment):
        return {"kind": "assignment", "counts": _matrix(value.counts)}
    if isinstance(value, ReductionCertificate):
        return _certificate(value)
    if isinstance(value, RadixConstants):
        return _radix(value)
    if isinstance(value, CuttingStockInstance):
        return _cutting_stock(value)
    if isinstance(value, CuttingStockSolution):
        return _cs_solution(value)
    if isinstance(value, tuple) and len(value) == 2:
        return {"kind": "bundle", "instance": to_dict(value[0]), "certificate": to_dict(value[1])}
    raise TypeError(f"cannot serialize {type(value).__name__}")


# decoders

def _dec_job(d: dict, model: str, m: int) -> JobType:
    if "sizes" in d:
        size = tuple(dec_num(p) for p in d["sizes"])
    elif "size" in d:
        size = dec_num(d["size"])
    else:
        raise InvalidInstance("job needs 'size' or 'sizes'")
    if model == "unrelated" and not isinstance(size, tuple):
        size = (size,) * m
    weight = dec_int(d["weight"]) if d.get("weight") is not None else None
    return JobType(size, dec_int(d.get("multiplicity", 0)), weight)


def _dec_schedule(d: dict) -> ScheduleInstance:
    model = d.get("model", "identical")
    machines = d.get("machines")
    speeds = None
    if isinstance(machines, list):
        speeds = tuple(Fraction(dec_num(mc.get("speed", "1"))) for mc in machines)
        m = len(machines)
        if model == "identical":
            if any(s != 1 for s in speeds):
                raise InvalidInstance("identical model cannot carry speeds other than 1")
            speeds = None
    else:
        m = dec_int(machines)
    if model == "uniform" and speeds is None:
        speeds = (Fraction(1),) * m
    jobs = tuple(_dec_job(j, model, m) for j in d.get("jobs", ()))
    target = d.get("target")
    target = Fraction(dec_num(target)) if target is not None else None
    return ScheduleInstance(model, m, jobs, speeds=speeds, objective=d.get("objective", "cmax"), target=target)


def _dec_bp(d: dict, balanced: bool):
    cls = BalancedBinPackingInstance if balanced else BinPackingInstance
    return cls(tuple(dec_int(a) for a in d["items"]), dec_int(d["bins"]), dec_int(d["capacity"]))


def _dec_certificate(d: dict) -> ReductionCertificate:
    src = d["source"]
    factors = None
    if "factors" in d:
        C = tuple(tuple(dec_int(v) for v in row) for row in d["factors"]["C"])
        D = tuple(tuple(dec_int(v) for v in row) for row in d["factors"]["D"])
        factors = (C, D)
    return ReductionCertificate(
        d["family"], _dec_bp(src, True), tuple(d["labels"]),
        {k: dec_num(v) for k, v in d["constants"].items()},
        Fraction(dec_num(d["target"])), factors, tuple(d.get("notes", ())))


def from_dict(d: dict):
    try:
        kind = d["kind"]
    except (KeyError, TypeError):
        raise InvalidInstance("document has no 'kind'") from None
    try:
        if kind == "schedule_instance":
            return _dec_schedule(d)
        if kind in ("bin_packing", "balanced_bin_packing"):
            return _dec_bp(d, kind == "balanced_bin_packing")
        if kind == "assignment":
            return Assignment(tuple(tuple(dec_int(v) for v in row) for row in d["counts"]))
        if kind == "certificate":
            return _dec_certificate(d)
        if kind == "radix_constants":
            return RadixConstants(Fraction(dec_num(d["T"])), tuple(dec_int(c) for c in d["capacities"]),
                                  dec_int(d["K1"]), dec_int(d["K2"]), dec_int(d["third_mass"]),
                                  dec_int(d["second_mass"]))
        if kind == "cutting_stock":
            budget = d.get("budget")
            return CuttingStockInstance(*(tuple(dec_int(v) for v in d[f]) for f in
                                          ("item_sizes", "item_counts", "bin_sizes", "bin_costs")),
                                        budget=dec_int(budget) if budget is not None else None)
        if kind == "cutting_stock_solution":
            packing = tuple((dec_int(p["bin"]), tuple(dec_int(c) for c in p["counts"])) for p in d["packing"])
            return CuttingStockSolution(tuple(dec_int(v) for v in d["purchases"]), packing, dec_int(d["cost"]))
        if kind == "bundle":
            return from_dict(d["instance"]), from_dict(d["certificate"])
    except KeyError as exc:
        raise InvalidInstance(f"{kind}: missing field {exc.args[0]!r}") from None
    raise InvalidInstance(f"unknown kind {kind!r}")


def dumps(value) -> str:
    return json.dumps(to_dict(value), indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"not valid JSON: {exc}") from None


def canonical(value) -> str:
    return json.dumps(to_dict(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(value) -> str:
    """Stable short hash of the canonical form."""
    return hashlib.sha256(canonical(value).encode("utf-8")).hexdigest()[:16]


def save(value, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(value))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
