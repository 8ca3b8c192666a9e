"""Uniform-machine makespan to Cutting Stock.

Each bin type packs three coordinates into one integer with radix constants
``K1 > K2``: a leading ``1`` (matched by one ``eta`` item of size ``K1``), a
one-hot bit ``2^(i-1)`` (matched by ``nu`` items of size ``K2``) and the
machine capacity ``T * s_i``.  Size equals cost, so meeting the budget forces
buying every bin type exactly once and filling each to the last unit of the
third coordinate that the schedule allows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core import Assignment, InvalidInstance, ScheduleInstance, eval_makespan, is_inf
from ..solvers.cutting_stock import CuttingStockInstance, CuttingStockSolution


@dataclass(frozen=True)
class RadixConstants:
    T: Fraction
    capacities: tuple
    K1: int
    K2: int
    third_mass: int
    second_mass: int

    @property
    def carry_free(self) -> bool:
        return self.third_mass < self.K2 and self.second_mass * self.K2 < self.K1


def capacities(inst: ScheduleInstance, T) -> tuple:
    """``T * s_i`` per machine, which must be integral."""
    T = Fraction(T)
    caps = []
    for i in range(inst.machines):
        c = T * inst.speed(i)
        if c.denominator != 1:
            raise InvalidInstance(f"machine {i}: capacity T*s_i = {c} is not integral")
        caps.append(int(c))
    return tuple(caps)


def radix_constants(inst: ScheduleInstance, T=None) -> RadixConstants:
    """Smallest clean radices that keep every coordinate free of carries.

    The third coordinate of any bin multiset within budget holds at most
    ``max(sum c_i, sum p n, m max c_i - sum p n)``; for reduced instances all
    three collapse to at most ``mT + A``.
    """
    if inst.model != "uniform":
        raise InvalidInstance(f"cutting stock reduction needs a uniform instance, got {inst.model}")
    T = inst.target if T is None else T
    if T is None:
        raise InvalidInstance("no makespan target given")
    if any(job.per_machine or is_inf(job.size) for job in inst.jobs):
        raise InvalidInstance("job sizes must be single finite integers")
    caps = capacities(inst, T)
    m = inst.machines
    mass = sum(job.size * job.multiplicity for job in inst.jobs)
    third = max(sum(caps), mass, m * max(caps, default=0) - mass)
    K2 = third + 1
    K1 = K2 << m
    return RadixConstants(Fraction(T), caps, K1, K2, third, (1 << m) - 1)


def q_to_cutting_stock(inst: ScheduleInstance, T=None):
    """``(CuttingStockInstance, RadixConstants)`` for the decision question "makespan <= T"."""
    rc = radix_constants(inst, T)
    m = inst.machines
    bins = tuple(rc.K1 + (1 << i) * rc.K2 + c for i, c in enumerate(rc.capacities))
    sizes = tuple(job.size for job in inst.jobs) + (rc.K1, rc.K2)
    counts = tuple(job.multiplicity for job in inst.jobs) + (m, (1 << m) - 1)
    budget = m * rc.K1 + ((1 << m) - 1) * rc.K2 + sum(rc.capacities)
    return CuttingStockInstance(sizes, counts, bins, bins, budget), rc


def schedule_from_cutting_stock(inst: ScheduleInstance, sol: CuttingStockSolution) -> Optional[Assignment]:
    """Machine ``i`` runs the job items packed into the bin of type ``i``.

    Returns ``None`` unless every bin type was bought exactly once.
    """
    if any(x != 1 for x in sol.purchases) or len(sol.purchases) != inst.machines:
        return None
    rows = [None] * inst.machines
    for b, counts in sol.packing:
        rows[b] = tuple(counts[: inst.k])
    return Assignment(tuple(rows))


def solution_from_schedule(inst: ScheduleInstance, a: Assignment, T=None) -> CuttingStockSolution:
    """The budget-meeting Cutting Stock solution for a schedule of makespan ``<= T``."""
    cs, rc = q_to_cutting_stock(inst, T)
    if eval_makespan(inst, a) > rc.T:
        raise InvalidInstance("schedule exceeds the makespan target")
    m = inst.machines
    packing = []
    for i, row in enumerate(a.counts):
        packing.append((i, tuple(row) + (1, (1 << i))))
    # bit i of (2^m - 1) is supplied by 2^i nu items in bin i
    return CuttingStockSolution((1,) * m, tuple(packing), cs.budget)
