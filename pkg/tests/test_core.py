import itertools
from fractions import Fraction

import pytest

from hmsched.core import (
    INF,
    Assignment,
    InvalidAssignment,
    InvalidInstance,
    JobType,
    ScheduleInstance,
    check_assignment,
    eval_l2sq,
    eval_makespan,
    eval_sumwc_closed,
    eval_sumwc_sim,
    evaluate,
    identical,
    loads,
    smith_order,
    validate_instance,
)


def test_validate_tiny_ok(tiny):
    assert validate_instance(tiny).ok


def test_validate_negative_multiplicity():
    inst = identical((3, 5), (-1, 1), 2)
    report = validate_instance(inst)
    assert not report.ok
    assert any("multiplicity ≥ 0" in v for v in report.violations)


def test_validate_zero_speed():
    inst = ScheduleInstance("uniform", 2, (JobType(3, 1),), speeds=(Fraction(0), Fraction(1)))
    assert any("speed > 0" in v for v in validate_instance(inst).violations)


def test_validate_missing_weights_and_bad_lengths():
    inst = ScheduleInstance("unrelated", 2, (JobType((1, 2, 3), 1),), objective="sumwc")
    violations = validate_instance(inst).violations
    assert any("size list length" in v for v in violations)
    assert any("weight required" in v for v in violations)


def test_unknown_model_rejected():
    with pytest.raises(InvalidInstance):
        ScheduleInstance("quantum", 1, ())


def test_makespan_tiny(tiny):
    a = Assignment(((2, 0), (0, 1)))
    assert loads(tiny, a).unscaled == (6, 5)
    assert eval_makespan(tiny, a) == 6


def test_makespan_empty():
    inst = identical((3,), (0,), 2)
    assert eval_makespan(inst, Assignment.zeros(2, 1)) == 0


def test_makespan_uniform_fraction():
    inst = ScheduleInstance("uniform", 1, (JobType(3, 1),), speeds=(Fraction(3, 2),))
    assert eval_makespan(inst, Assignment(((1,),))) == 2


def test_l2sq_values(tiny):
    assert eval_l2sq(tiny, Assignment(((2, 0), (0, 1)))) == 61
    assert eval_l2sq(identical((3,), (0,), 2), Assignment.zeros(2, 1)) == 0
    inst = ScheduleInstance("uniform", 2, (JobType(4, 2),), speeds=(1, 2))
    assert eval_l2sq(inst, Assignment(((1,), (1,)))) == 20


def test_scaled_times_speed_is_unscaled():
    inst = ScheduleInstance("uniform", 3, (JobType(4, 3), JobType(5, 2)), speeds=(1, Fraction(3, 2), 2))
    lv = loads(inst, Assignment(((1, 1), (1, 0), (1, 1))))
    assert all(L * inst.speed(i) == u for i, (L, u) in enumerate(zip(lv.scaled, lv.unscaled)))


def test_incomplete_assignment_rejected(tiny):
    with pytest.raises(InvalidAssignment):
        eval_makespan(tiny, Assignment(((1, 0), (0, 1))))
    check_assignment(tiny, Assignment(((1, 0), (0, 1))), partial=True)


def test_infinite_size_with_positive_count_rejected():
    inst = ScheduleInstance("unrelated", 2, (JobType((2, INF), 1),))
    assert eval_makespan(inst, Assignment(((1,), (0,)))) == 2
    with pytest.raises(InvalidAssignment, match="infinite"):
        eval_makespan(inst, Assignment(((0,), (1,))))


def _two_jobs(machines=1):
    return identical((1, 2), (1, 1), machines, weights=(2, 1), objective="sumwc")


def _orders_oracle(jobs):
    """Best and worst sum w C over every order of a list of (p, w) jobs."""
    values = []
    for perm in itertools.permutations(jobs):
        t = total = 0
        for p, w in perm:
            t += p
            total += w * t
        values.append(total)
    return min(values), max(values)


def test_sumwc_sim_smith_example():
    inst = _two_jobs()
    a = Assignment(((1, 1),))
    assert eval_sumwc_sim(inst, a) == 5
    assert _orders_oracle([(1, 2), (2, 1)]) == (5, 8)


def test_sumwc_single_job_and_split():
    inst = identical((2,), (1,), 1, weights=(2,), objective="sumwc")
    assert eval_sumwc_sim(inst, Assignment(((1,),))) == 4
    assert eval_sumwc_closed(inst, Assignment(((1,),))).total == 4
    assert eval_sumwc_sim(_two_jobs(2), Assignment(((1, 0), (0, 1)))) == 4


def test_sumwc_closed_matches_hand_value():
    parts = eval_sumwc_closed(_two_jobs(), Assignment(((1, 1),)))
    assert parts.total == 5
    assert all(v >= 0 for v in parts.as_dict().values())


def test_sumwc_zero_weights():
    inst = identical((3, 4), (2, 1), 2, weights=(0, 0), objective="sumwc")
    a = Assignment(((1, 1), (1, 0)))
    assert eval_sumwc_closed(inst, a).total == 0 == eval_sumwc_sim(inst, a)


def test_sumwc_ties_do_not_matter():
    inst = identical((2, 4, 3), (2, 1, 1), 1, weights=(1, 2, 1), objective="sumwc")
    a = Assignment(((2, 1, 1),))
    assert smith_order(inst, 0, a.counts[0]) != smith_order(inst, 0, a.counts[0], reverse_ties=True)
    assert eval_sumwc_sim(inst, a) == eval_sumwc_sim(inst, a, reverse_ties=True)


def test_sumwc_requires_weights(tiny):
    with pytest.raises(InvalidInstance, match="weight"):
        eval_sumwc_sim(tiny, Assignment(((2, 0), (0, 1))))


def test_evaluate_dispatch(tiny):
    a = Assignment(((2, 0), (0, 1)))
    assert evaluate(tiny, a) == 6
    assert evaluate(tiny, a, "l2sq") == 61
    with pytest.raises(InvalidInstance):
        evaluate(tiny, a, "lateness")


def test_sumwc_uniform_speed_scales_completion():
    inst = ScheduleInstance("uniform", 1, (JobType(3, 2, 1),), speeds=(Fraction(3, 2),), objective="sumwc")
    # completions at 2 and 4
    assert eval_sumwc_sim(inst, Assignment(((2,),))) == 6
    assert eval_sumwc_closed(inst, Assignment(((2,),))).total == 6
