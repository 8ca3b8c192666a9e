"""Balanced Bin Packing to high-multiplicity scheduling.

Machine ``i`` stands for item ``a_i``.  For every bin ``j`` there are three job
types: ``alpha1_j`` and ``alpha0_j`` (almost equal, ``alpha1`` one unit longer)
and the large ``beta_j``.  A *perfect* schedule gives machine ``i`` exactly
``a_i`` x ``alpha1_j``, ``A - a_i`` x ``alpha0_j`` and one ``beta_j`` when
item ``i`` goes to bin ``j``; its unscaled load is then exactly ``T + a_i``
with ``T = 3 k A^3``.  The unrelated-machine variants add a machine-dependent
blocker ``gamma`` of size ``4 k A^3 - a_i`` instead of speeds.

Job types are ordered ``alpha1_1, alpha0_1, ..., alpha1_k, alpha0_k,
beta_1, ..., beta_k`` (then ``gamma``); machines follow the item order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..core import (
    Assignment,
    InvalidAssignment,
    InvalidInstance,
    JobType,
    ScheduleInstance,
    check_assignment,
)
from .binpacking import BalancedBinPackingInstance, check_packing

Q_FAMILIES = ("bbp2qcmax", "bbp2ql2")
R_FAMILIES = ("bbp2rcmax", "bbp2rl2", "bbp2rswc")
FOUR_TYPE_FAMILY = "bbp2rcmax4"
SCHEDULING_FAMILIES = Q_FAMILIES + R_FAMILIES + (FOUR_TYPE_FAMILY,)


@dataclass(frozen=True)
class ReductionCertificate:
    """What a reduction knows about the instance it produced.

    ``constants`` holds the derived numbers (``A``, ``T`` or ``T_R``, ``a_max``
    and family-specific terms).  ``factors`` is ``(C, D)`` with ``C`` a
    ``k x 2`` and ``D`` a ``2 x m`` integer matrix whose product is the size
    matrix, for the unrelated families.
    """

    family: str
    source: BalancedBinPackingInstance
    labels: tuple
    constants: dict
    target: Fraction
    factors: Optional[tuple] = None
    notes: tuple = field(default_factory=tuple)

    def index(self, label: str) -> int:
        return self.labels.index(label)


def _check_source(bbp: BalancedBinPackingInstance) -> None:
    if bbp.n == 0:
        raise InvalidInstance("empty instance: nothing to reduce")
    if not bbp.tight:
        raise InvalidInstance(f"instance not tight: items sum to {sum(bbp.items)}, k*B = {bbp.total}")
    if bbp.n % bbp.bins:
        raise InvalidInstance(f"m = {bbp.n} not divisible by k = {bbp.bins}")


def alpha_beta_types(A: int, k: int, m: int):
    """Sizes, multiplicities and labels of the ``3k`` machine-independent types."""
    B = A // k
    sizes, mults, labels = [], [], []
    for j in range(1, k + 1):
        sizes += [k * A**2 + A * (k - j) + 1, k * A**2 + A * (k - j)]
        mults += [B, (m - 1) * A // k]
        labels += [f"alpha1_{j}", f"alpha0_{j}"]
    for j in range(1, k + 1):
        sizes.append(2 * k * A**3 - A**2 * (k - j))
        mults.append(m // k)
        labels.append(f"beta_{j}")
    return sizes, mults, labels


def _base_constants(bbp):
    A = bbp.total
    return {"A": A, "k": bbp.bins, "B": bbp.capacity, "m": bbp.n, "a_max": bbp.a_max, "T": 3 * bbp.bins * A**3}


def bbp_to_q_cmax(bbp: BalancedBinPackingInstance):
    """Uniform machines, ``3k`` types, speeds ``(T + a_i) / T``, target makespan ``T``."""
    _check_source(bbp)
    c = _base_constants(bbp)
    A, k, m, T = c["A"], c["k"], c["m"], c["T"]
    sizes, mults, labels = alpha_beta_types(A, k, m)
    speeds = tuple(Fraction(T + a, T) for a in bbp.items)
    inst = ScheduleInstance("uniform", m, tuple(JobType(p, n) for p, n in zip(sizes, mults)),
                            speeds=speeds, objective="cmax", target=Fraction(T))
    return inst, ReductionCertificate("bbp2qcmax", bbp, tuple(labels), c, Fraction(T))


def ceil_scaled_root(factor: int, radicand: int) -> int:
    """Least integer ``s`` with ``s^2 >= factor^2 * radicand``."""
    N = factor * factor * radicand
    return 0 if N == 0 else math.isqrt(N - 1) + 1


def bbp_to_q_l2(bbp: BalancedBinPackingInstance):
    """The uniform instance with integer speeds ``ceil((T + a_max) sqrt(T + a_i))`` under l2^2."""
    _check_source(bbp)
    c = _base_constants(bbp)
    A, k, m, T, a_max = c["A"], c["k"], c["m"], c["T"], c["a_max"]
    sizes, mults, labels = alpha_beta_types(A, k, m)
    speeds = tuple(Fraction(ceil_scaled_root(T + a_max, T + a)) for a in bbp.items)
    target = sum((Fraction(T + a) / s) ** 2 for a, s in zip(bbp.items, speeds))
    inst = ScheduleInstance("uniform", m, tuple(JobType(p, n) for p, n in zip(sizes, mults)),
                            speeds=speeds, objective="l2sq", target=target)
    return inst, ReductionCertificate("bbp2ql2", bbp, tuple(labels), c, target)


def _r_instance(bbp, family, objective, weights=False):
    _check_source(bbp)
    c = _base_constants(bbp)
    A, k, m = c["A"], c["k"], c["m"]
    TR = 7 * k * A**3
    block = 4 * k * A**3
    c.update(T_R=TR, w_gamma=block)
    sizes, mults, labels = alpha_beta_types(A, k, m)
    gamma = tuple(block - a for a in bbp.items)
    jobs = [JobType(tuple([p] * m), n, p if weights else None) for p, n in zip(sizes, mults)]
    jobs.append(JobType(gamma, m, block if weights else None))
    C = tuple((p, 0) for p in sizes) + ((block, -1),)
    D = ((1,) * m, tuple(bbp.items))
    return jobs, tuple(labels) + ("gamma",), c, (C, D)


def bbp_to_r_cmax(bbp: BalancedBinPackingInstance):
    """Unrelated machines: the ``3k`` types plus blocker ``gamma``; target ``T_R = 7 k A^3``."""
    jobs, labels, c, factors = _r_instance(bbp, "bbp2rcmax", "cmax")
    target = Fraction(c["T_R"])
    inst = ScheduleInstance("unrelated", c["m"], tuple(jobs), objective="cmax", target=target)
    return inst, ReductionCertificate("bbp2rcmax", bbp, labels, c, target, factors)


def bbp_to_r_l2(bbp: BalancedBinPackingInstance):
    """The unrelated instance under l2^2 with target ``m * T_R^2``."""
    jobs, labels, c, factors = _r_instance(bbp, "bbp2rl2", "l2sq")
    target = Fraction(c["m"] * c["T_R"] ** 2)
    inst = ScheduleInstance("unrelated", c["m"], tuple(jobs), objective="l2sq", target=target)
    return inst, ReductionCertificate("bbp2rl2", bbp, labels, c, target, factors)


def bbp_to_r_sumwc(bbp: BalancedBinPackingInstance):
    """The unrelated instance with weights ``w = p`` (``w_gamma = 4 k A^3``) under sum w_j C_j.

    Target: ``m T_R^2 / 2 + Gamma + Delta_linear + Delta_quadr`` where
    ``Gamma = 1/2 sum_t n_t p_t w_t`` over the alpha/beta types and the Delta
    terms collect the single gamma job of every machine.
    """
    jobs, labels, c, factors = _r_instance(bbp, "bbp2rswc", "sumwc", weights=True)
    m, TR, wg = c["m"], c["T_R"], c["w_gamma"]
    load_term = Fraction(m * TR**2, 2)
    gamma = sum((Fraction(job.size[0] * job.weight * job.multiplicity, 2) for job in jobs[:-1]), Fraction(0))
    d_lin = sum((Fraction(p * wg, 2) for p in jobs[-1].size), Fraction(0))
    d_quad = sum((Fraction(p * a, 2) for p, a in zip(jobs[-1].size, bbp.items)), Fraction(0))
    target = load_term + gamma + d_lin + d_quad
    c.update(load_term=load_term, Gamma=gamma, Delta_linear=d_lin, Delta_quadr=d_quad)
    inst = ScheduleInstance("unrelated", m, tuple(jobs), objective="sumwc", target=target)
    return inst, ReductionCertificate("bbp2rswc", bbp, labels, c, target, factors)


def bbp_to_r_cmax_4types(bbp: BalancedBinPackingInstance):
    """Two bins, four job types, size matrix of rank 2, target ``A^4``.

    Multiplicities follow from the perfect schedule: bin-1 machines carry
    ``a_i`` x ``alpha1_1`` and ``A - a_i`` x ``alpha0_1``; bin-2 machines carry
    one ``beta_2`` and ``a_i`` x ``alpha1_2``.
    """
    _check_source(bbp)
    if bbp.bins != 2:
        raise InvalidInstance(f"four-type reduction needs k = 2 bins, got {bbp.bins}")
    A, m = bbp.total, bbp.n
    T = A**4
    items = bbp.items
    jobs = (
        JobType(tuple(A**3 + A - a for a in items), A // 2),
        JobType(tuple(A**3 - a for a in items), (m // 2) * A - A // 2),
        JobType(tuple([A**2] * m), A // 2),
        JobType(tuple(A**4 - a * A**2 for a in items), m // 2),
    )
    C = ((A**3 + A, -1), (A**3, -1), (A**2, 0), (A**4, -A**2))
    D = ((1,) * m, tuple(items))
    c = {"A": A, "k": 2, "B": bbp.capacity, "m": m, "a_max": bbp.a_max, "T": T}
    labels = ("alpha1_1", "alpha0_1", "alpha1_2", "beta_2")
    inst = ScheduleInstance("unrelated", m, jobs, objective="cmax", target=Fraction(T))
    notes = ("multiplicities derived from the perfect schedule",)
    return inst, ReductionCertificate(FOUR_TYPE_FAMILY, bbp, labels, c, Fraction(T), (C, D), notes)


REDUCTIONS = {
    "bbp2qcmax": bbp_to_q_cmax,
    "bbp2rcmax": bbp_to_r_cmax,
    "bbp2rcmax4": bbp_to_r_cmax_4types,
    "bbp2ql2": bbp_to_q_l2,
    "bbp2rl2": bbp_to_r_l2,
    "bbp2rswc": bbp_to_r_sumwc,
}


def reduce_bbp(family: str, bbp: BalancedBinPackingInstance):
    try:
        return REDUCTIONS[family](bbp)
    except KeyError:
        raise InvalidInstance(f"unknown family {family!r}; valid: {sorted(REDUCTIONS)}") from None


def size_matrix(inst: ScheduleInstance) -> list:
    """``k x m`` matrix of sizes (row per job type)."""
    return [[inst.size(i, j) for i in range(inst.machines)] for j in range(inst.k)]


def factors_match(inst: ScheduleInstance, cert: ReductionCertificate) -> bool:
    """True when ``C . D`` reproduces the size matrix entry by entry."""
    if cert.factors is None:
        return False
    C, D = cert.factors
    P = size_matrix(inst)
    for j, row in enumerate(C):
        for i in range(inst.machines):
            if sum(row[r] * D[r][i] for r in range(len(D))) != P[j][i]:
                return False
    return True


def perfect_schedule(cert: ReductionCertificate, packing: Sequence[int]) -> Assignment:
    """The intended assignment for a balanced packing (``packing[i]`` = bin of item ``i``, 0-based)."""
    bbp = cert.source
    problem = check_packing(bbp, packing, balanced=True)
    if problem:
        raise InvalidAssignment(f"not a balanced packing: {problem}")
    A, k = bbp.total, bbp.bins
    K = len(cert.labels)
    rows = []
    for a, b in zip(bbp.items, packing):
        row = [0] * K
        if cert.family == FOUR_TYPE_FAMILY:
            if b == 0:
                row[0], row[1] = a, A - a
            else:
                row[2], row[3] = a, 1
        else:
            row[2 * b] = a
            row[2 * b + 1] = A - a
            row[2 * k + b] = 1
            if cert.family in R_FAMILIES:
                row[3 * k] = 1
        rows.append(tuple(row))
    return Assignment(tuple(rows))


@dataclass(frozen=True)
class PerfectCheck:
    packing: Optional[tuple]
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.packing is not None


def _expected_row(cert, machine, bin_index):
    bbp = cert.source
    A, k, a = bbp.total, bbp.bins, bbp.items[machine]
    row = [0] * len(cert.labels)
    if cert.family == FOUR_TYPE_FAMILY:
        if bin_index == 0:
            row[0], row[1] = a, A - a
        else:
            row[2], row[3] = a, 1
        return row
    row[2 * bin_index] = a
    row[2 * bin_index + 1] = A - a
    row[2 * k + bin_index] = 1
    if cert.family in R_FAMILIES:
        row[3 * k] = 1
    return row


def packing_from_perfect_schedule(cert: ReductionCertificate, a: Assignment, inst: Optional[ScheduleInstance] = None) -> PerfectCheck:
    """Read the packing back from a perfect schedule, or say why ``a`` is not one."""
    bbp = cert.source
    if a.m != bbp.n or any(len(row) != len(cert.labels) for row in a.counts):
        return PerfectCheck(None, "not perfect: dimensions do not match the certificate")
    if inst is not None:
        try:
            check_assignment(inst, a)
        except InvalidAssignment as exc:
            return PerfectCheck(None, f"not perfect: {exc}")
    k = bbp.bins
    packing = []
    for i, row in enumerate(a.counts):
        if cert.family == FOUR_TYPE_FAMILY:
            betas = row[3]
            if betas > 1:
                return PerfectCheck(None, f"not perfect: β multiplicity {betas} on machine {i}")
            b = 1 if betas else 0
        else:
            present = [j for j in range(k) if row[2 * k + j]]
            total = sum(row[2 * k + j] for j in range(k))
            if total != 1:
                return PerfectCheck(None, f"not perfect: β multiplicity {total} on machine {i}")
            b = present[0]
        expected = _expected_row(cert, i, b)
        for t, (got, want) in enumerate(zip(row, expected)):
            if got != want:
                return PerfectCheck(None, f"not perfect: machine {i} runs {got} x {cert.labels[t]}, expected {want}")
        packing.append(b)
    packing = tuple(packing)
    problem = check_packing(bbp, packing, balanced=True)
    if problem:
        return PerfectCheck(None, f"not perfect: induced packing invalid ({problem})")
    return PerfectCheck(packing)
