"""Exact toolkit for high-multiplicity scheduling: DP solvers, N-fold models and hardness reductions."""
from .core import (
    INF,
    Assignment,
    BudgetExceeded,
    HMSchedError,
    Infeasible,
    InvalidAssignment,
    InvalidInstance,
    JobType,
    LoadVector,
    ScheduleInstance,
    SumWcBreakdown,
    eval_l2sq,
    eval_makespan,
    eval_sumwc_closed,
    eval_sumwc_sim,
    evaluate,
    loads,
    validate_instance,
)

__version__ = "0.1.0"
