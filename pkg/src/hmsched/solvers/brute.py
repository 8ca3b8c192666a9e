"""Exhaustive oracle for tiny instances.

Jobs of one type are interchangeable, so instead of labelling every job with
a machine we enumerate, per job type, the ways of splitting its multiplicity
over the machines, and take the product over types.  Nothing here is shared
with the DP except the objective evaluators in :mod:`hmsched.core`.
"""
from __future__ import annotations

import itertools
from typing import Optional

from ..core import INF, Assignment, BudgetExceeded, Infeasible, ScheduleInstance, evaluate

DEFAULT_MAX_STATES = 10**7


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def search_size(inst: ScheduleInstance) -> int:
    size = 1
    for n in inst.multiplicities:
        size *= (n + 1) ** inst.machines
    return size


def brute_force_solve(inst: ScheduleInstance, objective: Optional[str] = None,
                      max_states: int = DEFAULT_MAX_STATES):
    """Optimal ``(assignment, value)`` by trying every complete assignment."""
    objective = objective or inst.objective
    if search_size(inst) > max_states:
        raise BudgetExceeded(f"brute force needs {search_size(inst)} states (budget {max_states})")
    m = inst.machines
    splits = []
    for j, n in enumerate(inst.multiplicities):
        allowed = [c for c in compositions(n, m)
                   if all(not c[i] or inst.size(i, j) is not INF for i in range(m))]
        splits.append(allowed)
    best = None
    for columns in itertools.product(*splits):
        a = Assignment(tuple(zip(*columns)) if columns else tuple(() for _ in range(m)))
        value = evaluate(inst, a, objective)
        if best is None or value < best[1]:
            best = (a, value)
    if best is None:
        raise Infeasible("no complete assignment exists")
    return best
