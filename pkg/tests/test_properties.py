"""Property tests drawn with hypothesis."""
from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from hmsched.core import (
    INF,
    Assignment,
    JobType,
    ScheduleInstance,
    eval_l2sq,
    eval_makespan,
    eval_sumwc_closed,
    eval_sumwc_sim,
    evaluate,
    loads,
    permute_jobs,
)
from hmsched.nfold import build_nfold_cmax, check_solution
from hmsched.reductions import (
    BinPackingInstance,
    bbp_solve,
    bp_solve,
    bp_to_bbp,
    factors_match,
    perfect_schedule,
    reduce_bbp,
)
from hmsched.solvers import brute_force_solve, dp_feasible_cmax, dp_minimize
from hmsched.verify import planted_bbp

SPEEDS = (Fraction(1), Fraction(3, 2), Fraction(2))


@st.composite
def instances(draw, max_m=3, max_k=3, max_n=6, max_size=5, max_weight=5, allow_inf=True):
    model = draw(st.sampled_from(("identical", "uniform", "unrelated")))
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(1, max_k))
    mults = draw(st.lists(st.integers(0, max_n), min_size=k, max_size=k))
    assume(sum(mults) <= max_n)
    jobs = []
    for n in mults:
        w = draw(st.integers(0, max_weight))
        if model == "unrelated":
            choices = st.integers(1, max_size) | st.just(INF) if allow_inf else st.integers(1, max_size)
            sizes = draw(st.lists(choices, min_size=m, max_size=m))
            assume(any(s is not INF for s in sizes))
            jobs.append(JobType(tuple(sizes), n, w))
        else:
            jobs.append(JobType(draw(st.integers(1, max_size)), n, w))
    speeds = tuple(draw(st.sampled_from(SPEEDS)) for _ in range(m)) if model == "uniform" else None
    return ScheduleInstance(model, m, tuple(jobs), speeds=speeds, objective="sumwc")


@st.composite
def assigned(draw, **kw):
    inst = draw(instances(**kw))
    rows = [[0] * inst.k for _ in range(inst.machines)]
    for j, n in enumerate(inst.multiplicities):
        allowed = [i for i in range(inst.machines) if inst.size(i, j) is not INF]
        for _ in range(n):
            rows[draw(st.sampled_from(allowed))][j] += 1
    return inst, Assignment(tuple(map(tuple, rows)))


@given(assigned(max_m=4, max_k=4, max_n=10, max_size=9, max_weight=9))
def test_closed_form_equals_simulation(case):
    inst, a = case
    parts = eval_sumwc_closed(inst, a)
    assert parts.total == eval_sumwc_sim(inst, a)
    assert all(v >= 0 for v in parts.as_dict().values())


@given(assigned())
def test_l2_sandwich(case):
    inst, a = case
    cmax, l2 = eval_makespan(inst, a), eval_l2sq(inst, a)
    assert cmax**2 <= l2 <= inst.machines * cmax**2


@given(assigned())
def test_scaled_load_times_speed(case):
    inst, a = case
    lv = loads(inst, a)
    assert all(L * inst.speed(i) == u for i, (L, u) in enumerate(zip(lv.scaled, lv.unscaled)))


@given(assigned(), st.randoms(use_true_random=False))
def test_permuting_job_types(case, rnd):
    inst, a = case
    perm = list(range(inst.k))
    rnd.shuffle(perm)
    inst2 = permute_jobs(inst, perm)
    a2 = a.permuted(perm)
    for objective in ("cmax", "l2sq", "sumwc"):
        assert evaluate(inst, a, objective) == evaluate(inst2, a2, objective)


@given(instances(max_n=5, max_size=4))
def test_dp_matches_brute(inst):
    for objective in ("cmax", "l2sq", "sumwc"):
        a, v = dp_minimize(inst, objective)
        assert v == brute_force_solve(inst, objective)[1]
        assert evaluate(inst, a, objective) == v


@given(instances(max_n=5), st.fractions(min_value=0, max_value=20, max_denominator=2))
def test_dp_decision_sound_monotone_and_nfold(inst, T):
    a = dp_feasible_cmax(inst, T)
    best = brute_force_solve(inst, "cmax")[1]
    assert (a is not None) == (best <= T)
    if a is not None:
        assert eval_makespan(inst, a) <= T
        assert dp_feasible_cmax(inst, T + 1) is not None
        assert check_solution(build_nfold_cmax(inst, T), a.flatten())[0]


@given(st.integers(2, 3), st.lists(st.integers(1, 4), min_size=1, max_size=5))
def test_bp_to_bbp_preserves_feasibility(k, items):
    items[-1] += (-sum(items)) % k
    assume(items[-1] <= 4)
    bp = BinPackingInstance(tuple(items), k, sum(items) // k)
    bbp = bp_to_bbp(bp)
    assert bbp.tight
    assert (bp_solve(bp) is None) == (bbp_solve(bbp) is None)


@given(st.randoms(use_true_random=False), st.sampled_from((1, 2, 3)), st.integers(1, 3), st.integers(1, 8))
def test_forward_soundness_and_rank_two(rnd, k, per, max_size):
    bbp, packing = planted_bbp(rnd, k, k * per, max_size)
    for family in ("bbp2qcmax", "bbp2rcmax", "bbp2ql2", "bbp2rl2", "bbp2rswc") + (("bbp2rcmax4",) if k == 2 else ()):
        inst, cert = reduce_bbp(family, bbp)
        a = perfect_schedule(cert, packing)
        assert evaluate(inst, a) == cert.target
        if cert.factors is not None:
            assert factors_match(inst, cert)


@given(st.randoms(use_true_random=False), st.integers(1, 3), st.integers(1, 9))
def test_l2_speeds_distinct_and_bounded(rnd, per, max_size):
    bbp, _ = planted_bbp(rnd, 2, 2 * per, max_size)
    inst, cert = reduce_bbp("bbp2ql2", bbp)
    T, amax = cert.constants["T"], cert.constants["a_max"]
    by_item = {}
    for s, a in zip(inst.speeds, bbp.items):
        s = int(s)
        assert (s - 1) ** 2 < (T + amax) ** 2 * (T + a) <= s * s < (T + amax) ** 2 * (T + a + 1)
        by_item.setdefault(a, set()).add(s)
    assert all(len(v) == 1 for v in by_item.values())
    assert len(set().union(*by_item.values())) == len(by_item)
