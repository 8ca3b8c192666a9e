"""Configuration dynamic program over job-count vectors.

Machines are processed one at a time.  After machine ``i`` the table holds the
count vectors ``n'`` of jobs that machines ``0..i`` can take together; the
instance is feasible when the full multiplicity vector is reached after the
last machine.  Only reachable vectors are ever stored.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Optional

from .. import kernels
from ..core import (
    INF,
    Assignment,
    BudgetExceeded,
    Infeasible,
    InvalidInstance,
    ScheduleInstance,
    eval_makespan,
    evaluate,
    machine_sumwc,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 10**7


def _machine_sizes(inst: ScheduleInstance, machine: int):
    """(sizes with INF replaced by 0, INF mask)."""
    raw = inst.sizes_on(machine)
    return [0 if p is INF else p for p in raw], [p is INF for p in raw]


def _machine_bound(inst: ScheduleInstance, machine: int, bound):
    return [0 if inst.size(machine, j) is INF else b for j, b in enumerate(bound)]


def enumerate_configurations(inst: ScheduleInstance, machine: int, cap, bound=None, backend=None) -> list:
    """All count vectors ``x <= bound`` that keep ``machine`` within makespan ``cap``.

    The load test is ``p . x <= cap * s`` on uniform machines and ``p . x <= cap``
    otherwise.  Vectors come out in colexicographic order (type 0 varies
    fastest).  Job types with infinite size on ``machine`` stay at zero.
    """
    bound = list(inst.multiplicities if bound is None else bound)
    sizes, _ = _machine_sizes(inst, machine)
    return kernels.enumerate_configs(sizes, _machine_bound(inst, machine, bound),
                                     inst.capacity(machine, cap), backend=backend)


def _rest_profile(inst: ScheduleInstance, caps):
    """Per machine ``i``: cheapest size of each type over machines after ``i`` and their total capacity."""
    m, k = inst.machines, inst.k
    profile = [None] * m
    best = [None] * k
    rest_cap = 0
    for i in range(m - 1, -1, -1):
        profile[i] = ([0 if b is None else b for b in best], [b is None for b in best], rest_cap)
        sizes = inst.sizes_on(i)
        for j, p in enumerate(sizes):
            if p is not INF and (best[j] is None or p < best[j]):
                best[j] = p
        rest_cap += caps[i]
    return profile


def dp_feasible_cmax(inst: ScheduleInstance, T, max_states: int = DEFAULT_MAX_STATES,
                     prune: bool = True, backend=None) -> Optional[Assignment]:
    """An assignment with makespan at most ``T``, or ``None`` when there is none.

    With ``prune`` the table also drops count vectors that provably cannot be
    completed: the jobs still to place must fit, at their cheapest size, into
    the capacity of the remaining machines.  This never changes the answer.
    """
    T = Fraction(T)
    m, k = inst.machines, inst.k
    n = list(inst.multiplicities)
    if m < 1:
        raise InvalidInstance("instance has no machines")
    caps = [inst.capacity(i, T) for i in range(m)]
    if any(c < 0 for c in caps):
        return None
    profile = _rest_profile(inst, caps)

    # lower-bound weights: cheapest size of each type over all machines
    cheapest = []
    for j in range(k):
        finite = [inst.size(i, j) for i in range(m) if inst.size(i, j) is not INF]
        if not finite:
            if n[j]:
                return None
            finite = [0]
        cheapest.append(min(finite))
    total_cheap = sum(q * c for q, c in zip(cheapest, n))
    total_cap = sum(caps)

    states = [0]
    layers = []
    for i in range(m - 1):
        sizes, _ = _machine_sizes(inst, i)
        bound_i = _machine_bound(inst, i, n)
        if prune:
            lower = total_cheap - (total_cap - caps[i])
            configs = kernels.enumerate_configs(sizes, bound_i, caps[i], cheapest, lower, backend=backend)
            rest_w, rest_inf, rest_cap = profile[i]
        else:
            configs = kernels.enumerate_configs(sizes, bound_i, caps[i], backend=backend)
            rest_w, rest_inf, rest_cap = [0] * k, [False] * k, 0
        states, parents, cfg_idx = kernels.expand_layer(states, configs, n, rest_w, rest_inf, rest_cap,
                                                        backend=backend)
        log.debug("machine %d: %d configurations, %d states", i, len(configs), len(states))
        if len(states) > max_states:
            raise BudgetExceeded(f"DP layer {i} holds {len(states)} states (budget {max_states})")
        layers.append((parents, cfg_idx, configs))
        if not states:
            return None

    sizes, inf_mask = _machine_sizes(inst, m - 1)
    hit = kernels.finish_layer(states, n, sizes, inf_mask, caps[m - 1], backend=backend)
    if hit < 0:
        return None
    used = kernels.decode(states[hit], n)
    rows = [tuple(nj - u for nj, u in zip(n, used))]
    idx = hit
    for parents, cfg_idx, configs in reversed(layers):
        rows.append(tuple(configs[cfg_idx[idx]]))
        idx = parents[idx]
    a = Assignment(tuple(reversed(rows)))
    if eval_makespan(inst, a) > T:
        raise AssertionError("DP returned an assignment above the makespan bound")
    return a


def candidate_makespans(inst: ScheduleInstance) -> list:
    """Every makespan a single machine can reach, sorted; the optimum is among them."""
    values = set()
    n = inst.multiplicities
    for i in range(inst.machines):
        sums = {0}
        for j, nj in enumerate(n):
            p = inst.size(i, j)
            if p is INF or not nj:
                continue
            sums = {s + c * p for s in sums for c in range(nj + 1)}
        s_i = inst.speed(i)
        values.update(Fraction(v) / s_i for v in sums)
    return sorted(values)


def _minimize_cmax(inst, max_states, backend):
    candidates = candidate_makespans(inst)
    lo, hi = 0, len(candidates) - 1
    best = dp_feasible_cmax(inst, candidates[hi], max_states, backend=backend)
    if best is None:
        raise Infeasible("no assignment exists (some job type runs on no machine)")
    while lo < hi:
        mid = (lo + hi) // 2
        a = dp_feasible_cmax(inst, candidates[mid], max_states, backend=backend)
        if a is None:
            lo = mid + 1
        else:
            best, hi = a, mid
    return best, eval_makespan(inst, best)


def _machine_value(inst, objective, machine, x):
    if objective == "l2sq":
        total = 0
        for j, c in enumerate(x):
            if c:
                total += inst.size(machine, j) * c
        load = Fraction(total) / inst.speed(machine)
        return load * load
    return machine_sumwc(inst, machine, x)


def dp_minimize(inst: ScheduleInstance, objective: Optional[str] = None,
                max_states: int = DEFAULT_MAX_STATES, backend=None):
    """Optimal ``(assignment, value)`` for the instance's objective.

    Makespan uses a binary search over :func:`candidate_makespans` with
    :func:`dp_feasible_cmax` as the oracle.  The separable objectives run
    ``D[i, v] = min_x f_i(x) + D[i-1, v - x]`` directly; among equal values the
    earliest configuration in enumeration order wins.
    """
    objective = objective or inst.objective
    if objective == "cmax":
        return _minimize_cmax(inst, max_states, backend)
    if objective == "sumwc" and any(w is None for w in inst.weights):
        raise InvalidInstance("sumwc needs a weight on every job type")
    if objective not in ("l2sq", "sumwc"):
        raise InvalidInstance(f"unknown objective {objective!r}")

    n = list(inst.multiplicities)
    m = inst.machines
    radix = kernels.radix_of(n)
    table = {0: (Fraction(0), None, None)}
    history = []
    for i in range(m):
        bound_i = _machine_bound(inst, i, n)
        last = i == m - 1
        if last:
            configs = None
        else:
            sizes, _ = _machine_sizes(inst, i)
            configs = kernels.enumerate_configs(sizes, bound_i, sum(p * b for p, b in zip(sizes, bound_i)),
                                                backend=backend)
            values = [_machine_value(inst, objective, i, x) for x in configs]
            codes = [sum(c * r for c, r in zip(x, radix)) for x in configs]
        new = {}
        for code, (value, _, _) in table.items():
            used = kernels.decode(code, n)
            if last:
                x = tuple(nj - u for nj, u in zip(n, used))
                if any(c > b for c, b in zip(x, bound_i)):
                    continue
                cand = value + _machine_value(inst, objective, i, x)
                full = kernels.encode(n, n)
                if full not in new or cand < new[full][0]:
                    new[full] = (cand, code, x)
                continue
            for x, fx, xc in zip(configs, values, codes):
                if any(u + c > nj for u, c, nj in zip(used, x, n)):
                    continue
                nxt = code + xc
                cand = value + fx
                if nxt not in new or cand < new[nxt][0]:
                    new[nxt] = (cand, code, x)
        if len(new) > max_states:
            raise BudgetExceeded(f"DP layer {i} holds {len(new)} states (budget {max_states})")
        history.append(new)
        table = new
    full = kernels.encode(n, n)
    if full not in table:
        raise Infeasible("no assignment exists (some job type runs on no machine)")
    rows = []
    code = full
    for layer in reversed(history):
        _, parent, x = layer[code]
        rows.append(tuple(x))
        code = parent
    a = Assignment(tuple(reversed(rows)))
    value = table[full][0]
    if evaluate(inst, a, objective) != value:
        raise AssertionError("DP value disagrees with the evaluator")
    return a, value
