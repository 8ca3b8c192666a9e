"""Exact solvers: configuration DP, brute-force oracle, Cutting Stock."""
from .brute import brute_force_solve, compositions
from .cutting_stock import (
    CuttingStockInstance,
    CuttingStockSolution,
    cuttingstock_brute,
    cuttingstock_solve,
    cuttingstock_within_budget,
    packable,
    packing_instance,
    purchase_vectors,
)
from .dp import (
    DEFAULT_MAX_STATES,
    candidate_makespans,
    dp_feasible_cmax,
    dp_minimize,
    enumerate_configurations,
)

__all__ = [
    "CuttingStockInstance",
    "CuttingStockSolution",
    "DEFAULT_MAX_STATES",
    "brute_force_solve",
    "candidate_makespans",
    "compositions",
    "cuttingstock_brute",
    "cuttingstock_solve",
    "cuttingstock_within_budget",
    "dp_feasible_cmax",
    "dp_minimize",
    "enumerate_configurations",
    "packable",
    "packing_instance",
    "purchase_vectors",
]
