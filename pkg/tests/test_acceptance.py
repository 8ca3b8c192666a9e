"""Acceptance suite: eight criteria, each printed as one pass/fail line.

Run on its own with ``pytest tests/test_acceptance.py -v`` (the lines show in
the terminal summary) or ``python tests/test_acceptance.py``.
"""
import random
import time
from fractions import Fraction

import pytest

from hmsched.core import Assignment, JobType, ScheduleInstance, eval_sumwc_closed, eval_sumwc_sim
from hmsched.nfold import build_nfold_cmax, check_solution, export_model, format_model, import_model
from hmsched.reductions import (
    FOUR_TYPE_FAMILY,
    R_FAMILIES,
    factors_match,
    q_to_cutting_stock,
    reduce_bbp,
)
from hmsched.solvers import cuttingstock_within_budget, dp_feasible_cmax, packing_instance, purchase_vectors
from hmsched.verify import (
    SweepSpec,
    oracle_equivalence_sweep,
    roundtrip_check,
    sources,
    target_value_check,
    tight_bbp_instances,
    toy_q_instance,
)

RESULTS = []
CMAX_FAMILIES = ("bbp2qcmax", "bbp2rcmax", "bbp2rcmax4")
TARGET_FAMILIES = ("bbp2qcmax", "bbp2rcmax", "bbp2rcmax4", "bbp2ql2", "bbp2rl2", "bbp2rswc")
SEED = 20240611


def _record(number, name, ok, elapsed, limit, detail):
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    line = f"[{status}] criterion {number}: {name}: {detail}; {elapsed:.1f}s{budget}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


def _criterion3_sources():
    exhaustive = list(tight_bbp_instances(4, 4, (2,), min_items=4))
    spec = SweepSpec("bbp2qcmax", generator="random", trials=50, seed=SEED, min_items=4, max_items=4, max_size=8)
    return exhaustive, sources(spec)


def _criterion4_planted():
    out = {}
    for family in TARGET_FAMILIES:
        bins = (2,) if family == FOUR_TYPE_FAMILY else (2, 3)
        out[family] = SweepSpec(family, generator="planted", trials=20, seed=SEED, max_items=6, max_size=8, bins=bins)
    return out


@pytest.mark.slow
def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    spec = SweepSpec("solver", generator="random", trials=40, seed=SEED, max_items=6, max_size=5,
                     max_machines=3, max_types=3, max_weight=5)
    report = oracle_equivalence_sweep(spec)
    s = report.summary
    _record(1, "DP == brute force (cmax, l2sq, sumwc; P/Q/R; m,k<=3, n<=6)",
            report.passed and s["skipped"] == 0, time.perf_counter() - start, 300,
            f"{s['pass']} instances x 3 objectives, {s['fail']} mismatches, {s['skipped']} skipped")


def test_criterion_2_padding_equivalence():
    start = time.perf_counter()
    report = roundtrip_check(SweepSpec("bp2bbp", max_items=5, max_size=4, bins=(2, 3)))
    s = report.summary
    _record(2, "Bin Packing feasibility preserved by padding (n<=5, k in {2,3}, sizes<=4)",
            report.passed and s["skipped"] == 0, time.perf_counter() - start, 60,
            f"{len(report.records)} tight instances, {s['fail']} mismatches")


def test_criterion_3_makespan_roundtrips():
    start = time.perf_counter()
    total = fails = skipped = 0
    details = []
    for family in CMAX_FAMILIES:
        for spec in (SweepSpec(family, min_items=4, max_items=4, max_size=4, nfold_check=True),
                     SweepSpec(family, generator="random", trials=50, seed=SEED, min_items=4, max_items=4,
                               max_size=8, nfold_check=True)):
            report = roundtrip_check(spec)
            total += len(report.records)
            fails += report.summary["fail"]
            skipped += report.summary["skipped"]
            details += [r.detail for r in report.counterexamples]
    _record(3, "reduced feasibility == source feasibility, DP solutions are perfect (Q, R, R 4-type)",
            fails == 0 and skipped == 0, time.perf_counter() - start, 600,
            f"{total} runs, {fails} counterexamples, {skipped} skipped" + (f" {details[:3]}" if details else ""))


def test_criterion_4_forward_targets():
    start = time.perf_counter()
    total = fails = 0
    details = []
    for family, spec in _criterion4_planted().items():
        report = target_value_check(spec)
        total += len(report.records)
        fails += report.summary["fail"] + report.summary["skipped"]
        details += [f"{family}: {r.detail}" for r in report.counterexamples]
    _record(4, "perfect schedule value == certificate target, exactly (6 families x 20 planted)",
            fails == 0 and total == 120, time.perf_counter() - start, 120,
            f"{total} checks, {fails} deviations" + (f" {details[:3]}" if details else ""))


def test_criterion_5_sumwc_closed_form():
    start = time.perf_counter()
    rng = random.Random(SEED)
    deviations = 0
    for _ in range(200):
        m, k = rng.randint(1, 4), rng.randint(1, 4)
        model = rng.choice(("identical", "uniform", "unrelated"))
        mults = [rng.randint(0, 10) for _ in range(k)]
        while sum(mults) > 10:
            mults[rng.randrange(k)] //= 2
        if model == "unrelated":
            jobs = [JobType(tuple(rng.randint(1, 9) for _ in range(m)), n, rng.randint(0, 9)) for n in mults]
        else:
            jobs = [JobType(rng.randint(1, 9), n, rng.randint(0, 9)) for n in mults]
        speeds = tuple(rng.choice((1, Fraction(3, 2), 2)) for _ in range(m)) if model == "uniform" else None
        inst = ScheduleInstance(model, m, tuple(jobs), speeds=speeds, objective="sumwc")
        rows = [[0] * k for _ in range(m)]
        for j, n in enumerate(mults):
            for _ in range(n):
                rows[rng.randrange(m)][j] += 1
        a = Assignment(tuple(map(tuple, rows)))
        if eval_sumwc_closed(inst, a).total != eval_sumwc_sim(inst, a):
            deviations += 1
    _record(5, "closed form == simulator on 200 random assignments (m,k<=4, n<=10)",
            deviations == 0, time.perf_counter() - start, 30, f"{deviations} deviations")


def _packable_by_dp(cs, purchases):
    inst = packing_instance(cs, purchases)
    if inst.machines == 0:
        return not any(cs.item_counts)
    return dp_feasible_cmax(inst, 1) is not None


def test_criterion_6_cutting_stock_structure():
    start = time.perf_counter()
    exhaustive, randomized = _criterion3_sources()
    carry_bad = 0
    for bbp in exhaustive + randomized:
        inst, cert = reduce_bbp("bbp2qcmax", bbp)
        _, rc = q_to_cutting_stock(inst, cert.target)
        if not (rc.third_mass < rc.K2 and rc.second_mass * rc.K2 < rc.K1):
            carry_bad += 1
    rng = random.Random(SEED)
    toys = [toy_q_instance(rng) for _ in range(120)]
    toys += [reduce_bbp("bbp2qcmax", b)[0] for b in tight_bbp_instances(2, 6, (1, 2), min_items=2)]
    mismatch = extra_bins = 0
    feasible_count = 0
    for inst in toys:
        cs, _ = q_to_cutting_stock(inst)
        feasible = dp_feasible_cmax(inst, inst.target) is not None
        feasible_count += feasible
        sol = cuttingstock_within_budget(cs)
        if (sol is not None) != feasible:
            mismatch += 1
        meeting = [x for x in purchase_vectors(cs, cs.budget) if _packable_by_dp(cs, x)]
        if any(x != (1,) * inst.machines for x in meeting) or bool(meeting) != feasible:
            extra_bins += 1
    ok = carry_bad == 0 and mismatch == 0 and extra_bins == 0
    _record(6, "carry-free radices; m=2 budget met iff schedulable, only by one bin per type",
            ok, time.perf_counter() - start, 120,
            f"{len(exhaustive) + len(randomized)} carry checks ({carry_bad} bad), {len(toys)} toys "
            f"({feasible_count} feasible), {mismatch} mismatches, {extra_bins} budget violations")


def test_criterion_7_rank_two():
    start = time.perf_counter()
    exhaustive, randomized = _criterion3_sources()
    checked = bad = 0
    for bbp in exhaustive + randomized:
        for family in R_FAMILIES + (FOUR_TYPE_FAMILY,):
            inst, cert = reduce_bbp(family, bbp)
            checked += 1
            bad += not factors_match(inst, cert)
    for family, spec in _criterion4_planted().items():
        if family not in R_FAMILIES and family != FOUR_TYPE_FAMILY:
            continue
        for bbp, _ in sources(spec):
            inst, cert = reduce_bbp(family, bbp)
            checked += 1
            bad += not factors_match(inst, cert)
    _record(7, "C.D equals the size matrix for every generated unrelated instance",
            bad == 0 and checked > 0, time.perf_counter() - start, None, f"{checked} instances, {bad} deviations")


def test_criterion_8_nfold(tmp_path):
    start = time.perf_counter()
    exhaustive, randomized = _criterion3_sources()
    checked = bad = 0
    for n, bbp in enumerate(exhaustive + randomized):
        for family in CMAX_FAMILIES:
            inst, cert = reduce_bbp(family, bbp)
            a = dp_feasible_cmax(inst, cert.target)
            if a is None:
                continue
            model = build_nfold_cmax(inst, cert.target)
            checked += 1
            ok, _ = check_solution(model, a.flatten())
            path = tmp_path / f"{family}_{n}.nfold"
            export_model(model, path)
            back = import_model(path)
            export_model(back, tmp_path / "again.nfold")
            same = (back == model and (tmp_path / "again.nfold").read_bytes() == path.read_bytes()
                    and format_model(back) == path.read_text())
            bad += not (ok and same)
    _record(8, "DP solutions satisfy the exported N-fold model; export/import byte-identical",
            bad == 0 and checked > 0, time.perf_counter() - start, 60, f"{checked} solutions, {bad} deviations")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
