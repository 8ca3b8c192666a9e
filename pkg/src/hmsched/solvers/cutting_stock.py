"""Exact Cutting Stock at desk scale.

``cuttingstock_solve`` is a memoised branch and bound over remaining-item
vectors.  Each step opens one bin for the lowest-index item still unpacked and
fills it to a *maximal* configuration; any optimal packing can be rearranged
into that shape without raising its cost.  The lower bound is the remaining
item mass priced at the cheapest cost per unit of bin size.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..core import BudgetExceeded, Infeasible, InvalidInstance, JobType, ScheduleInstance

DEFAULT_MAX_STATES = 10**7


@dataclass(frozen=True)
class CuttingStockInstance:
    item_sizes: tuple
    item_counts: tuple
    bin_sizes: tuple
    bin_costs: tuple
    budget: Optional[int] = None

    def __post_init__(self):
        for name in ("item_sizes", "item_counts", "bin_sizes", "bin_costs"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        if len(self.item_sizes) != len(self.item_counts):
            raise InvalidInstance("item sizes and counts differ in length")
        if len(self.bin_sizes) != len(self.bin_costs):
            raise InvalidInstance("bin sizes and costs differ in length")
        if any(p < 1 for p in self.item_sizes):
            raise InvalidInstance("item sizes must be ≥ 1")
        if any(v < 0 for v in self.item_counts + self.bin_sizes + self.bin_costs):
            raise InvalidInstance("counts, bin sizes and costs must be ≥ 0")

    @property
    def k(self) -> int:
        return len(self.item_sizes)

    @property
    def m(self) -> int:
        return len(self.bin_sizes)


@dataclass(frozen=True)
class CuttingStockSolution:
    """Bins bought per type plus, for every bought bin, the item counts it holds."""

    purchases: tuple
    packing: tuple = field(default_factory=tuple)  # (bin_type, counts) per bought bin
    cost: int = 0


def check_solution(inst: CuttingStockInstance, sol: CuttingStockSolution) -> None:
    bought = [0] * inst.m
    total = [0] * inst.k
    for b, counts in sol.packing:
        bought[b] += 1
        load = sum(p * c for p, c in zip(inst.item_sizes, counts))
        if load > inst.bin_sizes[b]:
            raise AssertionError(f"bin of type {b} overfilled ({load} > {inst.bin_sizes[b]})")
        total = [t + c for t, c in zip(total, counts)]
    if tuple(total) != inst.item_counts:
        raise AssertionError("packing does not hold every item exactly once")
    if tuple(bought) != tuple(sol.purchases):
        raise AssertionError("packing and purchase vector disagree")
    if sum(c * x for c, x in zip(inst.bin_costs, sol.purchases)) != sol.cost:
        raise AssertionError("cost does not match purchases")


def _check_fits(inst: CuttingStockInstance) -> None:
    biggest = max(inst.bin_sizes, default=0)
    for t, (p, n) in enumerate(zip(inst.item_sizes, inst.item_counts)):
        if n and p > biggest:
            raise Infeasible(f"item type {t} (size {p}) fits in no bin")


def _maximal_configs(sizes, rem, cap, first):
    """Vectors ``x <= rem`` with ``x[first] >= 1`` and load ``<= cap`` that admit no further item."""
    k = len(sizes)
    out = []
    x = [0] * k

    def rec(j, load):
        if j == k:
            if x[first] == 0:
                return
            room = cap - load
            if all(x[t] == rem[t] or sizes[t] > room for t in range(k)):
                out.append(tuple(x))
            return
        lo = 1 if j == first else 0
        for v in range(rem[j], lo - 1, -1):
            nl = load + v * sizes[j]
            if nl > cap:
                continue
            x[j] = v
            rec(j + 1, nl)
        x[j] = 0

    rec(0, 0)
    return out


class _Search:
    def __init__(self, inst: CuttingStockInstance, max_states: int):
        self.inst = inst
        self.max_states = max_states
        useful = [b for b in range(inst.m) if inst.bin_sizes[b] > 0]
        self.bins = useful
        self.unit = min((Fraction(inst.bin_costs[b], inst.bin_sizes[b]) for b in useful), default=Fraction(0))
        self.exact = {}
        self.lower = {}
        self.moves = {}

    def bound(self, rem) -> Fraction:
        mass = sum(p * c for p, c in zip(self.inst.item_sizes, rem))
        return mass * self.unit

    def best(self, rem, ub):
        """Optimal cost of packing ``rem`` if it is below ``ub``, else ``None``."""
        if not any(rem):
            return 0 if ub > 0 else None
        if rem in self.exact:
            v = self.exact[rem]
            return v if v < ub else None
        lb = max(self.lower.get(rem, 0), self.bound(rem))
        if lb >= ub:
            return None
        if len(self.exact) + len(self.lower) > self.max_states:
            raise BudgetExceeded(f"cutting stock search exceeded {self.max_states} states")
        first = next(t for t, c in enumerate(rem) if c)
        best_v, best_move, cur = None, None, ub
        sizes = self.inst.item_sizes
        for b in self.bins:
            cost = self.inst.bin_costs[b]
            if lb >= cur:
                break
            for x in _maximal_configs(sizes, rem, self.inst.bin_sizes[b], first):
                rest = tuple(r - c for r, c in zip(rem, x))
                sub = self.best(rest, cur - cost)
                if sub is not None and cost + sub < cur:
                    cur = best_v = cost + sub
                    best_move = (b, x)
        if best_v is None:
            self.lower[rem] = max(self.lower.get(rem, 0), ub)
            return None
        self.exact[rem] = best_v
        self.moves[rem] = best_move
        return best_v

    def extract(self, rem):
        packing = []
        while any(rem):
            b, x = self.moves[rem]
            packing.append((b, x))
            rem = tuple(r - c for r, c in zip(rem, x))
        return packing


def _solution(inst, packing) -> CuttingStockSolution:
    purchases = [0] * inst.m
    for b, _ in packing:
        purchases[b] += 1
    cost = sum(c * x for c, x in zip(inst.bin_costs, purchases))
    sol = CuttingStockSolution(tuple(purchases), tuple(sorted(packing)), cost)
    check_solution(inst, sol)
    return sol


def cuttingstock_solve(inst: CuttingStockInstance, max_states: int = DEFAULT_MAX_STATES) -> CuttingStockSolution:
    """A minimum-cost purchase vector together with a packing."""
    _check_fits(inst)
    search = _Search(inst, max_states)
    if inst.budget is not None:
        # try the cheap bounded search first; it is exact whenever it succeeds
        if search.best(inst.item_counts, inst.budget + 1) is not None:
            return _solution(inst, search.extract(inst.item_counts))
    if search.best(inst.item_counts, float("inf")) is None:
        raise Infeasible("no packing exists")
    return _solution(inst, search.extract(inst.item_counts))


def cuttingstock_within_budget(inst: CuttingStockInstance, budget: Optional[int] = None,
                               max_states: int = DEFAULT_MAX_STATES) -> Optional[CuttingStockSolution]:
    """Cheapest solution if it costs at most ``budget`` (default: the instance budget), else ``None``."""
    budget = inst.budget if budget is None else budget
    if budget is None:
        raise InvalidInstance("no budget given")
    try:
        _check_fits(inst)
    except Infeasible:
        return None
    search = _Search(inst, max_states)
    if search.best(inst.item_counts, budget + 1) is None:
        return None
    return _solution(inst, search.extract(inst.item_counts))


def purchase_vectors(inst: CuttingStockInstance, max_cost: int):
    """Every purchase vector of cost at most ``max_cost``, at most one bin per item per type."""
    cap = sum(inst.item_counts)
    ranges = []
    for c in inst.bin_costs:
        top = cap if c == 0 else min(cap, max_cost // c)
        ranges.append(range(top + 1))
    for x in itertools.product(*ranges):
        if sum(c * v for c, v in zip(inst.bin_costs, x)) <= max_cost:
            yield x


def packable(inst: CuttingStockInstance, purchases) -> Optional[list]:
    """Brute-force packing of all items into the bought bins; ``None`` if impossible."""
    bins = [b for b, x in enumerate(purchases) for _ in range(x)]
    caps = [inst.bin_sizes[b] for b in bins]
    items = sorted((t for t, n in enumerate(inst.item_counts) for _ in range(n)),
                   key=lambda t: -inst.item_sizes[t])
    contents = [[0] * inst.k for _ in bins]

    def place(pos):
        if pos == len(items):
            return True
        t = items[pos]
        p = inst.item_sizes[t]
        tried = set()
        for slot, room in enumerate(caps):
            key = (bins[slot], room, tuple(contents[slot]))
            if room < p or key in tried:
                continue
            tried.add(key)
            caps[slot] -= p
            contents[slot][t] += 1
            if place(pos + 1):
                return True
            caps[slot] += p
            contents[slot][t] -= 1
        return False

    if not place(0):
        return None
    return [(b, tuple(c)) for b, c in zip(bins, contents)]


def cuttingstock_brute(inst: CuttingStockInstance, max_cost: int) -> Optional[CuttingStockSolution]:
    """Independent oracle: cheapest packable purchase vector of cost at most ``max_cost``."""
    best = None
    for x in purchase_vectors(inst, max_cost):
        cost = sum(c * v for c, v in zip(inst.bin_costs, x))
        if best is not None and cost >= best.cost:
            continue
        packing = packable(inst, x)
        if packing is not None:
            best = CuttingStockSolution(tuple(x), tuple(sorted(packing)), cost)
    return best


def packing_instance(inst: CuttingStockInstance, purchases) -> ScheduleInstance:
    """The bought bins as uniform machines (speed = bin size, makespan 1).

    Lets the configuration DP decide whether a purchase vector can hold all
    items; bins of size 0 are dropped since they hold nothing.
    """
    speeds = [inst.bin_sizes[b] for b, x in enumerate(purchases) for _ in range(x) if inst.bin_sizes[b] > 0]
    jobs = tuple(JobType(p, n) for p, n in zip(inst.item_sizes, inst.item_counts))
    return ScheduleInstance("uniform", len(speeds), jobs, speeds=tuple(speeds), target=1)
