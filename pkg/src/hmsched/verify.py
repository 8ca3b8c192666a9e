"""Soundness sweeps over generated instances.

Every sweep turns a :class:`SweepSpec` into a list of source instances, runs
one independent trial per source and collects a :class:`SweepRecord` each.
Trials may run in a process pool; records always come back in source order.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import nfold
from .core import (
    INF,
    BudgetExceeded,
    JobType,
    ScheduleInstance,
    eval_makespan,
    eval_sumwc_closed,
    eval_sumwc_sim,
    evaluate,
    loads,
    smith_order,
)
from .reductions import (
    FOUR_TYPE_FAMILY,
    R_FAMILIES,
    BalancedBinPackingInstance,
    BinPackingInstance,
    bbp_solve,
    bp_solve,
    bp_to_bbp,
    check_packing,
    factors_match,
    lift_packing,
    packing_from_perfect_schedule,
    perfect_schedule,
    q_to_cutting_stock,
    reduce_bbp,
    schedule_from_cutting_stock,
)
from .reductions.scheduling import ceil_scaled_root
from .serialize import digest
from .solvers import brute_force_solve, cuttingstock_within_budget, dp_feasible_cmax, dp_minimize

ROUNDTRIP_FAMILIES = ("bp2bbp", "bbp2qcmax", "bbp2rcmax", "bbp2rcmax4", "q2cs")
TARGET_FAMILIES = ("bbp2ql2", "bbp2rl2", "bbp2rswc", "bbp2qcmax", "bbp2rcmax", "bbp2rcmax4")
ORACLE_FAMILY = "solver"
SPEEDS = (Fraction(1), Fraction(3, 2), Fraction(2))


@dataclass(frozen=True)
class SweepSpec:
    """What to generate and how hard to try.

    ``generator`` is ``exhaustive``, ``random`` (uniform tight instances,
    feasible or not) or ``planted`` (tight instances built around a packing).
    For the oracle sweep ``trials`` counts instances per grid cell.
    """

    family: str
    generator: str = "exhaustive"
    max_items: int = 4
    min_items: int = 1
    max_size: int = 3
    bins: tuple = (2,)
    trials: int = 0
    seed: int = 0
    tight_only: bool = True
    max_states: int = 10**7
    workers: int = 1
    nfold_check: bool = False
    max_machines: int = 3
    max_types: int = 3
    max_weight: int = 5

    def __post_init__(self):
        if self.generator not in ("exhaustive", "random", "planted"):
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.max_items < 0 or self.max_size < 1 or self.trials < 0 or self.max_states < 1:
            raise ValueError("sweep bounds must be positive")
        if any(k < 1 for k in self.bins):
            raise ValueError("bin counts must be ≥ 1")


@dataclass(frozen=True)
class SweepRecord:
    digest: str
    family: str
    source_feasible: str
    reduced_feasible: str
    verdict: str  # pass | fail | skipped
    wall_ms: float = 0.0
    detail: str = ""


@dataclass
class SweepReport:
    spec: SweepSpec
    records: list = field(default_factory=list)

    @property
    def counterexamples(self) -> list:
        return [r for r in self.records if r.verdict == "fail"]

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.records:
            counts[r.verdict] += 1
        return counts

    @property
    def verdict(self) -> str:
        return "fail" if self.counterexamples else "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> str:
        spec = asdict(self.spec)
        spec["bins"] = list(spec["bins"])
        body = {
            "spec": spec,
            "verdict": self.verdict,
            "summary": self.summary,
            "counterexamples": [
                {k: v for k, v in asdict(r).items() if k != "wall_ms"} for r in self.counterexamples
            ],
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["digest", "family", "source_feasible", "reduced_feasible", "verdict", "wall_ms", "detail"])
        for r in self.records:
            w.writerow([r.digest, r.family, r.source_feasible, r.reduced_feasible, r.verdict,
                        f"{r.wall_ms:.3f}" if timing else "", r.detail])
        return buf.getvalue()

    def write(self, csv_path=None, json_path=None, timing: bool = True) -> None:
        if csv_path:
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.to_csv(timing))
        if json_path:
            with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(self.to_json())


# generators

def tight_bp_instances(max_items: int, max_size: int, bins=(2, 3), min_items: int = 1):
    """All tight Bin Packing instances as sorted item multisets, by ``k``, then ``n``."""
    for k in bins:
        for n in range(min_items, max_items + 1):
            for items in itertools.combinations_with_replacement(range(1, max_size + 1), n):
                if sum(items) % k == 0:
                    yield BinPackingInstance(items, k, sum(items) // k)


def tight_bbp_instances(max_items: int, max_size: int, bins=(2,), min_items: int = 1):
    """All tight Balanced Bin Packing instances with ``min_items <= n <= max_items`` and ``k | n``."""
    for k in bins:
        first = max(k, -(-min_items // k) * k)
        for n in range(first, max_items + 1, k):
            for items in itertools.combinations_with_replacement(range(1, max_size + 1), n):
                if sum(items) % k == 0:
                    yield BalancedBinPackingInstance(items, k, sum(items) // k)


def random_tight_bbp(rng: random.Random, k: int, n: int, max_size: int) -> BalancedBinPackingInstance:
    """Uniform item sizes, redrawn until the total splits evenly over ``k`` bins."""
    while True:
        items = [rng.randint(1, max_size) for _ in range(n)]
        if sum(items) % k == 0:
            return BalancedBinPackingInstance(tuple(items), k, sum(items) // k)


def planted_bbp(rng: random.Random, k: int, n: int, max_size: int):
    """``(instance, packing)`` with every bin summing to a common ``B``, items shuffled."""
    per = n // k
    B = rng.randint(per, per * max_size)
    items, owner = [], []
    for b in range(k):
        while True:
            parts = [rng.randint(1, max_size) for _ in range(per - 1)]
            last = B - sum(parts)
            if 1 <= last <= max_size:
                break
        items += parts + [last]
        owner += [b] * per
    order = list(range(n))
    rng.shuffle(order)
    inst = BalancedBinPackingInstance(tuple(items[i] for i in order), k, B)
    return inst, tuple(owner[i] for i in order)


def toy_q_instance(rng: random.Random, m: int = 2, max_types: int = 2, max_size: int = 4,
                   max_mult: int = 3, max_cap: int = 10) -> ScheduleInstance:
    """Small uniform instance whose capacities ``T s_i`` are integers."""
    k = rng.randint(1, max_types)
    jobs = tuple(JobType(rng.randint(1, max_size), rng.randint(0, max_mult)) for _ in range(k))
    T = rng.randint(1, 6)
    speeds = tuple(Fraction(rng.randint(1, max_cap), T) for _ in range(m))
    return ScheduleInstance("uniform", m, jobs, speeds=speeds, target=Fraction(T))


def random_grid_instance(rng: random.Random, model: str, m: int, k: int, max_n: int,
                         max_size: int, max_weight: int) -> ScheduleInstance:
    total = rng.randint(0, max_n)
    cuts = sorted(rng.randint(0, total) for _ in range(k - 1))
    mults = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    jobs = []
    for n in mults:
        w = rng.randint(0, max_weight)
        if model == "unrelated":
            sizes = [rng.randint(1, max_size) if rng.random() > 0.15 else INF for _ in range(m)]
            if all(s is INF for s in sizes):
                sizes[rng.randrange(m)] = rng.randint(1, max_size)
            jobs.append(JobType(tuple(sizes), n, w))
        else:
            jobs.append(JobType(rng.randint(1, max_size), n, w))
    speeds = tuple(rng.choice(SPEEDS) for _ in range(m)) if model == "uniform" else None
    return ScheduleInstance(model, m, tuple(jobs), speeds=speeds)


def sources(spec: SweepSpec) -> list:
    """The source instances of a sweep, in deterministic order."""
    rng = random.Random(spec.seed)
    fam = spec.family
    if fam == ORACLE_FAMILY:
        out = []
        for model in ("identical", "uniform", "unrelated"):
            for m in range(1, spec.max_machines + 1):
                for k in range(1, spec.max_types + 1):
                    for _ in range(spec.trials):
                        out.append(random_grid_instance(rng, model, m, k, spec.max_items, spec.max_size,
                                                        spec.max_weight))
        return out
    if fam == "bp2bbp":
        if spec.generator == "exhaustive":
            return list(tight_bp_instances(spec.max_items, spec.max_size, spec.bins, spec.min_items))
        out = []
        for _ in range(spec.trials):
            k = rng.choice(spec.bins)
            n = rng.randint(1, max(1, spec.max_items))
            items = [rng.randint(1, spec.max_size) for _ in range(n)]
            items[-1] += (-sum(items)) % k
            out.append(BinPackingInstance(tuple(items), k, sum(items) // k))
        return out
    if fam == "q2cs" and spec.generator != "exhaustive":
        return [toy_q_instance(rng, max_size=spec.max_size) for _ in range(spec.trials)]
    bins = (2,) if fam == FOUR_TYPE_FAMILY else spec.bins
    if spec.generator == "exhaustive":
        return list(tight_bbp_instances(spec.max_items, spec.max_size, bins, spec.min_items))
    out = []
    for _ in range(spec.trials):
        k = rng.choice(bins)
        n = k * rng.randint(max(1, -(-spec.min_items // k)), max(1, spec.max_items // k))
        if spec.generator == "planted":
            out.append(planted_bbp(rng, k, n, spec.max_size))
        else:
            out.append(random_tight_bbp(rng, k, n, spec.max_size))
    return out


# trials

def _yn(flag) -> str:
    return "yes" if flag else "no"


def _nfold_problems(inst, T, a) -> list:
    model = nfold.build_nfold_cmax(inst, T)
    ok, violations = nfold.check_solution(model, a.flatten())
    problems = [] if ok else [f"nfold: {violations[0]}"]
    text = nfold.format_model(model)
    if nfold.format_model(nfold.parse_model(text)) != text:
        problems.append("nfold: export/import not byte-identical")
    return problems


def _roundtrip_bp(bp: BinPackingInstance):
    src = bp_solve(bp)
    bbp = bp_to_bbp(bp)
    red = bbp_solve(bbp)
    problems = []
    if (src is None) != (red is None):
        problems.append("feasibility differs")
    if src is not None:
        lifted = lift_packing(bp, src)
        issue = check_packing(bbp, lifted, balanced=True)
        if issue:
            problems.append(f"lifted packing invalid: {issue}")
    return _yn(src is not None), _yn(red is not None), problems


def _roundtrip_cmax(family: str, bbp: BalancedBinPackingInstance, spec: SweepSpec):
    src = bbp_solve(bbp)
    inst, cert = reduce_bbp(family, bbp)
    problems = []
    if family in R_FAMILIES or family == FOUR_TYPE_FAMILY:
        if not factors_match(inst, cert):
            problems.append("rank-2 factors do not reproduce the size matrix")
    a = dp_feasible_cmax(inst, cert.target, spec.max_states)
    if (src is None) != (a is None):
        problems.append("feasibility differs")
    if a is not None:
        check = packing_from_perfect_schedule(cert, a, inst)
        if not check.ok:
            problems.append(check.reason)
        if spec.nfold_check:
            problems += _nfold_problems(inst, cert.target, a)
    return _yn(src is not None), _yn(a is not None), problems


def _roundtrip_q2cs(source, spec: SweepSpec):
    if isinstance(source, BalancedBinPackingInstance):
        inst, cert = reduce_bbp("bbp2qcmax", source)
        T = cert.target
    else:
        inst, T = source, source.target
    cs, rc = q_to_cutting_stock(inst, T)
    problems = [] if rc.carry_free else ["radix constants allow a carry"]
    src = dp_feasible_cmax(inst, T, spec.max_states)
    if not isinstance(source, BalancedBinPackingInstance):
        best = brute_force_solve(inst, "cmax", spec.max_states)[1]
        if (best <= T) != (src is not None):
            problems.append("DP and brute force disagree on the source")
    sol = cuttingstock_within_budget(cs, cs.budget, spec.max_states)
    if (src is None) != (sol is None):
        problems.append("feasibility differs")
    if sol is not None:
        if any(x != 1 for x in sol.purchases):
            problems.append(f"budget met without buying each bin once: {sol.purchases}")
        else:
            a = schedule_from_cutting_stock(inst, sol)
            if eval_makespan(inst, a) > T:
                problems.append("schedule read from the bins misses the target")
    return _yn(src is not None), _yn(sol is not None), problems


def _target_trial(family: str, planted, spec: SweepSpec):
    bbp, packing = planted
    inst, cert = reduce_bbp(family, bbp)
    a = perfect_schedule(cert, packing)
    value = evaluate(inst, a)
    problems = []
    if value != cert.target:
        problems.append(f"value {value} != target {cert.target}")
    c = cert.constants
    if family in R_FAMILIES or family == FOUR_TYPE_FAMILY:
        if not factors_match(inst, cert):
            problems.append("rank-2 factors do not reproduce the size matrix")
    unscaled = loads(inst, a).unscaled
    for i, (load, ai) in enumerate(zip(unscaled, bbp.items)):
        want = {"bbp2qcmax": c["T"] + ai, "bbp2ql2": c["T"] + ai, FOUR_TYPE_FAMILY: c["T"]}.get(family, c.get("T_R"))
        if load != want:
            problems.append(f"machine {i}: unscaled load {load} != {want}")
            break
    if family == "bbp2ql2":
        T, amax = c["T"], c["a_max"]
        speeds = [int(s) for s in inst.speeds]
        for i, (s, ai) in enumerate(zip(speeds, bbp.items)):
            lo = (T + amax) ** 2 * (T + ai)
            if not (s * s >= lo and (s - 1) ** 2 < lo):
                problems.append(f"machine {i}: speed {s} is not the least root")
            if not s * s < (T + amax) ** 2 * (T + ai + 1):
                problems.append(f"machine {i}: speed {s} breaks the strict upper bound")
            if s != ceil_scaled_root(T + amax, T + ai):
                problems.append(f"machine {i}: speed mismatch")
        by_item = {}
        for s, ai in zip(speeds, bbp.items):
            by_item.setdefault(ai, set()).add(s)
        if len(set().union(*by_item.values())) != len(by_item):
            problems.append("distinct items share a speed")
    if family == "bbp2rswc":
        sim = eval_sumwc_sim(inst, a)
        closed = eval_sumwc_closed(inst, a).total
        formula = c["load_term"] + c["Gamma"] + c["Delta_linear"] + c["Delta_quadr"]
        if not sim == closed == cert.target == formula:
            problems.append(f"sumwc mismatch: sim {sim}, closed {closed}, target {cert.target}, formula {formula}")
        gamma = len(cert.labels) - 1
        for i, row in enumerate(a.counts):
            if smith_order(inst, i, row)[0] != gamma:
                problems.append(f"machine {i}: gamma is not first in Smith order")
                break
    return "yes", _yn(not problems), problems


def _oracle_trial(inst: ScheduleInstance, spec: SweepSpec):
    problems = []
    values = []
    for objective in ("cmax", "l2sq", "sumwc"):
        dp_a, dp_v = dp_minimize(inst, objective, spec.max_states)
        _, bf_v = brute_force_solve(inst, objective, spec.max_states)
        values.append((bf_v, dp_v))
        if dp_v != bf_v:
            problems.append(f"{objective}: dp {dp_v} != brute {bf_v}")
        if objective == "cmax":
            if dp_feasible_cmax(inst, dp_v, spec.max_states) is None:
                problems.append("cmax: DP infeasible at its own optimum")
            if dp_feasible_cmax(inst, dp_v + 1, spec.max_states) is None:
                problems.append("cmax: feasibility not monotone in T")
    src = ";".join(str(b) for b, _ in values)
    red = ";".join(str(d) for _, d in values)
    return src, red, problems


def _run_one(kind: str, source, spec: SweepSpec) -> SweepRecord:
    start = time.perf_counter()
    fam = spec.family
    subject = source[0] if isinstance(source, tuple) else source
    dig = digest(subject)
    try:
        if kind == "oracle":
            src, red, problems = _oracle_trial(source, spec)
        elif kind == "target":
            src, red, problems = _target_trial(fam, source, spec)
        elif fam == "bp2bbp":
            src, red, problems = _roundtrip_bp(source)
        elif fam == "q2cs":
            src, red, problems = _roundtrip_q2cs(source, spec)
        else:
            src, red, problems = _roundtrip_cmax(fam, source, spec)
        verdict = "fail" if problems else "pass"
        detail = "; ".join(problems)
    except BudgetExceeded as exc:
        src, red, verdict, detail = "", "", "skipped", f"budget: {exc}"
    ms = (time.perf_counter() - start) * 1000.0
    return SweepRecord(dig, fam, src, red, verdict, ms, detail)


def _task(args):
    return _run_one(*args)


def _sweep(kind: str, spec: SweepSpec, items) -> SweepReport:
    tasks = [(kind, s, spec) for s in items]
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * spec.workers))))
    else:
        records = [_task(t) for t in tasks]
    return SweepReport(spec, records)


def roundtrip_check(spec: SweepSpec) -> SweepReport:
    """Source feasibility (brute force) against reduced feasibility (DP or Cutting Stock)."""
    if spec.family not in ROUNDTRIP_FAMILIES:
        raise ValueError(f"roundtrip family must be one of {ROUNDTRIP_FAMILIES}")
    if spec.generator == "planted":
        raise ValueError("roundtrip sweeps need exhaustive or random sources")
    return _sweep("roundtrip", spec, sources(spec))


def target_value_check(spec: SweepSpec) -> SweepReport:
    """Perfect schedules of planted packings must hit the certificate target exactly."""
    if spec.family not in TARGET_FAMILIES:
        raise ValueError(f"target family must be one of {TARGET_FAMILIES}")
    if spec.generator == "exhaustive":
        planted = []
        for bbp in sources(spec):
            packing = bbp_solve(bbp)
            if packing is not None:
                planted.append((bbp, packing))
    else:
        spec_planted = SweepSpec(**{**asdict(spec), "generator": "planted", "bins": tuple(spec.bins)})
        planted = sources(spec_planted)
    return _sweep("target", spec, planted)


def oracle_equivalence_sweep(spec: SweepSpec) -> SweepReport:
    """DP optimum against brute-force optimum for every objective on a seeded grid."""
    if spec.family != ORACLE_FAMILY:
        raise ValueError(f"oracle sweep family must be {ORACLE_FAMILY!r}")
    return _sweep("oracle", spec, sources(spec))

