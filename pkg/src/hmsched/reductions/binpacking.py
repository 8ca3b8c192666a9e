"""Bin Packing, Balanced Bin Packing, and the padding reduction between them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..core import InvalidInstance


@dataclass(frozen=True)
class BinPackingInstance:
    items: tuple
    bins: int
    capacity: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(int(a) for a in self.items))
        if self.bins < 1:
            raise InvalidInstance("need at least one bin")
        if self.capacity < 0:
            raise InvalidInstance("capacity must be ≥ 0")
        if any(a < 1 for a in self.items):
            raise InvalidInstance("item sizes must be ≥ 1")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def total(self) -> int:
        """``A = k * B`` for tight instances."""
        return self.bins * self.capacity

    @property
    def a_max(self) -> int:
        return max(self.items, default=0)

    @property
    def tight(self) -> bool:
        return sum(self.items) == self.bins * self.capacity


@dataclass(frozen=True)
class BalancedBinPackingInstance(BinPackingInstance):
    """Bin Packing where every bin must receive exactly ``n / k`` items."""

    def __post_init__(self):
        super().__post_init__()
        if self.n % self.bins:
            raise InvalidInstance(f"{self.n} items cannot be split evenly over {self.bins} bins")

    @property
    def per_bin(self) -> int:
        return self.n // self.bins


def solve_packing(items: Sequence[int], bins: int, capacity: int, per_bin: Optional[int] = None):
    """Bin index per item for a packing respecting ``capacity`` (and ``per_bin``), or ``None``.

    Plain backtracking, largest items first, skipping bins whose (load, count)
    state was already tried for the current item.
    """
    n = len(items)
    order = sorted(range(n), key=lambda i: -items[i])
    loads = [0] * bins
    counts = [0] * bins
    where = [0] * n
    if sum(items) > bins * capacity:
        return None

    def rec(pos):
        if pos == n:
            return True
        i = order[pos]
        a = items[i]
        tried = set()
        for b in range(bins):
            state = (loads[b], counts[b])
            if state in tried:
                continue
            tried.add(state)
            if loads[b] + a > capacity or (per_bin is not None and counts[b] >= per_bin):
                continue
            loads[b] += a
            counts[b] += 1
            where[i] = b
            if rec(pos + 1):
                return True
            loads[b] -= a
            counts[b] -= 1
        return False

    return tuple(where) if rec(0) else None


def bp_solve(bp: BinPackingInstance):
    return solve_packing(bp.items, bp.bins, bp.capacity)


def bbp_solve(bbp: BalancedBinPackingInstance):
    return solve_packing(bbp.items, bbp.bins, bbp.capacity, bbp.per_bin)


def check_packing(bp: BinPackingInstance, packing: Sequence[int], balanced: bool = False) -> Optional[str]:
    """``None`` if ``packing`` is valid, else a description of the first problem."""
    if len(packing) != bp.n:
        return f"packing covers {len(packing)} items, instance has {bp.n}"
    loads = [0] * bp.bins
    counts = [0] * bp.bins
    for a, b in zip(bp.items, packing):
        if not 0 <= b < bp.bins:
            return f"bin index {b} out of range"
        loads[b] += a
        counts[b] += 1
    for b, load in enumerate(loads):
        if load > bp.capacity:
            return f"bin {b} holds {load} > capacity {bp.capacity}"
    if balanced and len(set(counts)) > 1:
        return f"bins hold unequal item counts {counts}"
    return None


def bp_to_bbp(bp: BinPackingInstance) -> BalancedBinPackingInstance:
    """Pad every bin to ``n`` items.

    Items grow by one, capacity grows by ``n`` and ``n (k - 1)`` unit items are
    appended, so a bin with ``c`` original items takes ``n - c`` of the new
    ones.  Tightness and feasibility carry over in both directions.
    """
    n, k = bp.n, bp.bins
    items = tuple(a + 1 for a in bp.items) + (1,) * (n * (k - 1))
    return BalancedBinPackingInstance(items, k, bp.capacity + n)


def lift_packing(bp: BinPackingInstance, packing: Sequence[int]) -> tuple:
    """A balanced packing of ``bp_to_bbp(bp)`` built from a packing of ``bp``."""
    n, k = bp.n, bp.bins
    counts = [0] * k
    for b in packing:
        counts[b] += 1
    fillers = [b for b in range(k) for _ in range(n - counts[b])]
    return tuple(packing) + tuple(fillers)
