"""Hardness reductions with perfect-schedule constructors and their inverses."""
from .binpacking import (
    BalancedBinPackingInstance,
    BinPackingInstance,
    bbp_solve,
    bp_solve,
    bp_to_bbp,
    check_packing,
    lift_packing,
    solve_packing,
)
from .cutting_stock import (
    RadixConstants,
    q_to_cutting_stock,
    radix_constants,
    schedule_from_cutting_stock,
    solution_from_schedule,
)
from .scheduling import (
    FOUR_TYPE_FAMILY,
    Q_FAMILIES,
    R_FAMILIES,
    REDUCTIONS,
    SCHEDULING_FAMILIES,
    PerfectCheck,
    ReductionCertificate,
    bbp_to_q_cmax,
    bbp_to_q_l2,
    bbp_to_r_cmax,
    bbp_to_r_cmax_4types,
    bbp_to_r_l2,
    bbp_to_r_sumwc,
    factors_match,
    packing_from_perfect_schedule,
    perfect_schedule,
    reduce_bbp,
    size_matrix,
)

FAMILIES = ("bp2bbp",) + tuple(REDUCTIONS) + ("q2cs",)
