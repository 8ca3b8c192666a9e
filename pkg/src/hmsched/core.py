"""Exact data model for high-multiplicity scheduling.

Instances carry job *types* (size, multiplicity, optional weight) rather than
individual jobs.  An :class:`Assignment` is an ``m x k`` matrix of counts: row
``i`` says how many jobs of each type run on machine ``i``.

Every number is exact.  Sizes and loads are Python ints, speeds and objective
values are :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

MODELS = ("identical", "uniform", "unrelated")
OBJECTIVES = ("cmax", "l2sq", "sumwc")


class HMSchedError(Exception):
    """Base class for errors raised by this package."""


class InvalidInstance(HMSchedError, ValueError):
    pass


class InvalidAssignment(HMSchedError, ValueError):
    pass


class BudgetExceeded(HMSchedError):
    """A search would need more states than the configured budget."""


class Infeasible(HMSchedError):
    pass


class _Infinity:
    """Marker for a job type that cannot run on a machine."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Size = Union[int, _Infinity]


def is_inf(value) -> bool:
    return value is INF


@dataclass(frozen=True)
class JobType:
    """One job type.

    ``size`` is an int for the identical and uniform models and a tuple with
    one entry per machine (int or :data:`INF`) for the unrelated model.
    """

    size: Union[int, tuple]
    multiplicity: int
    weight: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.size, list):
            object.__setattr__(self, "size", tuple(self.size))

    @property
    def per_machine(self) -> bool:
        return isinstance(self.size, tuple)

    def size_on(self, machine: int) -> Size:
        if isinstance(self.size, tuple):
            return self.size[machine]
        return self.size

    def machine_dependent(self) -> bool:
        return isinstance(self.size, tuple) and len(set(map(_size_key, self.size))) > 1


def _size_key(value):
    return ("inf",) if value is INF else value


@dataclass(frozen=True)
class ScheduleInstance:
    model: str
    machines: int
    jobs: tuple
    speeds: Optional[tuple] = None
    objective: str = "cmax"
    target: Optional[Fraction] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidInstance(f"unknown machine model {self.model!r}; expected one of {MODELS}")
        if self.objective not in OBJECTIVES:
            raise InvalidInstance(f"unknown objective {self.objective!r}; expected one of {OBJECTIVES}")
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.speeds is not None:
            object.__setattr__(self, "speeds", tuple(Fraction(s) for s in self.speeds))
        if self.target is not None:
            object.__setattr__(self, "target", Fraction(self.target))

    @property
    def k(self) -> int:
        return len(self.jobs)

    @property
    def m(self) -> int:
        return self.machines

    @property
    def multiplicities(self) -> tuple:
        return tuple(job.multiplicity for job in self.jobs)

    @property
    def weights(self) -> tuple:
        return tuple(job.weight for job in self.jobs)

    def speed(self, machine: int) -> Fraction:
        if self.model == "uniform":
            return self.speeds[machine]
        return Fraction(1)

    def size(self, machine: int, job: int) -> Size:
        """Unscaled size of job type ``job`` on ``machine``."""
        return self.jobs[job].size_on(machine)

    def sizes_on(self, machine: int) -> tuple:
        return tuple(job.size_on(machine) for job in self.jobs)

    def capacity(self, machine: int, bound) -> int:
        """Largest integral unscaled load that keeps ``machine`` within ``bound``."""
        return _floor(Fraction(bound) * self.speed(machine))

    def with_objective(self, objective: str, target=None) -> "ScheduleInstance":
        return replace(self, objective=objective, target=target)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


@dataclass(frozen=True)
class Assignment:
    """Per-machine job-count vectors; ``counts[i][j]`` jobs of type j on machine i."""

    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(tuple(int(c) for c in row) for row in self.counts))

    @classmethod
    def zeros(cls, m: int, k: int) -> "Assignment":
        return cls(tuple((0,) * k for _ in range(m)))

    @property
    def m(self) -> int:
        return len(self.counts)

    @property
    def k(self) -> int:
        return len(self.counts[0]) if self.counts else 0

    def column_sums(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.counts)) if self.counts else ()

    def flatten(self) -> list:
        return [c for row in self.counts for c in row]

    def permuted(self, perm: Sequence[int]) -> "Assignment":
        """Columns reordered so that new column ``c`` is old column ``perm[c]``."""
        return Assignment(tuple(tuple(row[p] for p in perm) for row in self.counts))


@dataclass(frozen=True)
class LoadVector:
    unscaled: tuple
    scaled: tuple


@dataclass(frozen=True)
class SumWcBreakdown:
    """Closed-form parts of the weighted completion time objective.

    ``load_term`` is half the squared load of each machine weighted by the
    Smith ratio of its last job type (``1/2 * sum L_i^2`` when that ratio is 1).
    ``gamma_quadr`` collects the remaining quadratic prefix terms,
    ``gamma_linear`` the linear terms of machine-dependent job types and
    ``uniform_linear`` the linear terms of every other job type.
    """

    load_term: Fraction
    gamma_linear: Fraction
    gamma_quadr: Fraction
    uniform_linear: Fraction

    @property
    def total(self) -> Fraction:
        return self.load_term + self.gamma_linear + self.gamma_quadr + self.uniform_linear

    def as_dict(self) -> dict:
        return {
            "load_term": self.load_term,
            "gamma_linear": self.gamma_linear,
            "gamma_quadr": self.gamma_quadr,
            "uniform_linear": self.uniform_linear,
            "total": self.total,
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_instance(inst: ScheduleInstance) -> ValidationReport:
    problems = []
    if inst.machines < 1:
        problems.append("machines ≥ 1")
    if inst.k < 1:
        problems.append("job types ≥ 1")
    if inst.model == "uniform":
        if inst.speeds is None or len(inst.speeds) != inst.machines:
            got = 0 if inst.speeds is None else len(inst.speeds)
            problems.append(f"uniform model needs one speed per machine ({got} given for {inst.machines})")
        else:
            for i, s in enumerate(inst.speeds):
                if s <= 0:
                    problems.append(f"machine {i}: speed > 0")
    elif inst.speeds is not None:
        problems.append(f"{inst.model} model: speeds not allowed")
    for j, job in enumerate(inst.jobs):
        if job.multiplicity < 0:
            problems.append(f"job {j}: multiplicity ≥ 0")
        if inst.model == "unrelated":
            if not job.per_machine:
                problems.append(f"job {j}: unrelated model needs a per-machine size list")
            elif len(job.size) != inst.machines:
                problems.append(f"job {j}: size list length {len(job.size)} != machines {inst.machines}")
        elif job.per_machine:
            problems.append(f"job {j}: per-machine sizes require the unrelated model")
        sizes = job.size if job.per_machine else (job.size,)
        for s in sizes:
            if s is INF:
                if not job.per_machine:
                    problems.append(f"job {j}: infinite size only allowed per machine")
            elif s < 1:
                problems.append(f"job {j}: size ≥ 1")
                break
        if job.weight is None:
            if inst.objective == "sumwc":
                problems.append(f"job {j}: weight required for sumwc")
        elif job.weight < 0:
            problems.append(f"job {j}: weight ≥ 0")
    return ValidationReport(tuple(problems))


def check_assignment(inst: ScheduleInstance, a: Assignment, partial: bool = False) -> None:
    """Raise :class:`InvalidAssignment` unless ``a`` fits ``inst``."""
    if a.m != inst.machines:
        raise InvalidAssignment(f"assignment has {a.m} machine rows, instance has {inst.machines}")
    for i, row in enumerate(a.counts):
        if len(row) != inst.k:
            raise InvalidAssignment(f"machine {i}: {len(row)} counts for {inst.k} job types")
        for j, c in enumerate(row):
            if c < 0:
                raise InvalidAssignment(f"machine {i}, job {j}: negative count")
            if c and inst.size(i, j) is INF:
                raise InvalidAssignment(f"machine {i}, job {j}: infinite size used with positive count")
    sums = a.column_sums() if a.m else (0,) * inst.k
    for j, (got, want) in enumerate(zip(sums, inst.multiplicities)):
        if got > want or (not partial and got != want):
            raise InvalidAssignment(f"job {j}: {got} assigned, multiplicity {want}")


def machine_load(inst: ScheduleInstance, machine: int, x: Sequence[int]) -> int:
    total = 0
    for j, c in enumerate(x):
        if c:
            p = inst.size(machine, j)
            if p is INF:
                raise InvalidAssignment(f"machine {machine}, job {j}: infinite size used with positive count")
            total += p * c
    return total


def loads(inst: ScheduleInstance, a: Assignment, partial: bool = False) -> LoadVector:
    check_assignment(inst, a, partial=partial)
    unscaled = tuple(machine_load(inst, i, row) for i, row in enumerate(a.counts))
    scaled = tuple(Fraction(u) / inst.speed(i) for i, u in enumerate(unscaled))
    return LoadVector(unscaled, scaled)


def eval_makespan(inst: ScheduleInstance, a: Assignment) -> Fraction:
    scaled = loads(inst, a).scaled
    return max(scaled, default=Fraction(0))


def eval_l2sq(inst: ScheduleInstance, a: Assignment) -> Fraction:
    return sum((L * L for L in loads(inst, a).scaled), Fraction(0))


def _require_weights(inst: ScheduleInstance) -> None:
    missing = [j for j, job in enumerate(inst.jobs) if job.weight is None]
    if missing:
        raise InvalidInstance(f"job types {missing} carry no weight")


def smith_order(inst: ScheduleInstance, machine: int, x: Sequence[int], reverse_ties: bool = False) -> list:
    """Job types present on ``machine`` in nonincreasing Smith-ratio order.

    Ties go to the lower type index unless ``reverse_ties`` is set.
    """
    s = inst.speed(machine)
    present = [j for j, c in enumerate(x) if c]
    sign = -1 if reverse_ties else 1
    return sorted(present, key=lambda j: (-(inst.jobs[j].weight * s / inst.size(machine, j)), sign * j))


def eval_sumwc_sim(inst: ScheduleInstance, a: Assignment, reverse_ties: bool = False) -> Fraction:
    """Reference simulator: run every job one by one in Smith order."""
    _require_weights(inst)
    check_assignment(inst, a)
    total = Fraction(0)
    for i, row in enumerate(a.counts):
        s = inst.speed(i)
        clock = Fraction(0)
        for j in smith_order(inst, i, row, reverse_ties):
            duration = Fraction(inst.size(i, j)) / s
            w = inst.jobs[j].weight
            for _ in range(row[j]):
                clock += duration
                total += w * clock
    return total


def machine_sumwc_parts(inst: ScheduleInstance, machine: int, x: Sequence[int]) -> SumWcBreakdown:
    s = inst.speed(machine)
    order = smith_order(inst, machine, x)
    times = [Fraction(inst.size(machine, j)) / s for j in order]
    ratios = [inst.jobs[j].weight / t for j, t in zip(order, times)]
    load_term = gamma_quadr = gamma_linear = uniform_linear = Fraction(0)
    z = Fraction(0)
    for pos, (j, t, rho) in enumerate(zip(order, times, ratios)):
        z += t * x[j]
        if pos + 1 < len(order):
            gamma_quadr += z * z * (rho - ratios[pos + 1]) / 2
        else:
            load_term += z * z * rho / 2
        linear = t * inst.jobs[j].weight * x[j] / 2
        if inst.jobs[j].machine_dependent():
            gamma_linear += linear
        else:
            uniform_linear += linear
    return SumWcBreakdown(load_term, gamma_linear, gamma_quadr, uniform_linear)


def machine_sumwc(inst: ScheduleInstance, machine: int, x: Sequence[int]) -> Fraction:
    return machine_sumwc_parts(inst, machine, x).total


def eval_sumwc_closed(inst: ScheduleInstance, a: Assignment) -> SumWcBreakdown:
    _require_weights(inst)
    check_assignment(inst, a)
    parts = [machine_sumwc_parts(inst, i, row) for i, row in enumerate(a.counts)]
    return SumWcBreakdown(
        sum((p.load_term for p in parts), Fraction(0)),
        sum((p.gamma_linear for p in parts), Fraction(0)),
        sum((p.gamma_quadr for p in parts), Fraction(0)),
        sum((p.uniform_linear for p in parts), Fraction(0)),
    )


def evaluate(inst: ScheduleInstance, a: Assignment, objective: Optional[str] = None) -> Fraction:
    """Exact objective value of ``a`` under ``objective`` (default: the instance's)."""
    objective = objective or inst.objective
    if objective == "cmax":
        return eval_makespan(inst, a)
    if objective == "l2sq":
        return eval_l2sq(inst, a)
    if objective == "sumwc":
        return eval_sumwc_sim(inst, a)
    raise InvalidInstance(f"unknown objective {objective!r}")


def permute_jobs(inst: ScheduleInstance, perm: Sequence[int]) -> ScheduleInstance:
    """Instance whose job type ``c`` is the old type ``perm[c]``."""
    return replace(inst, jobs=tuple(inst.jobs[p] for p in perm))


def identical(sizes: Iterable[int], multiplicities: Iterable[int], machines: int, weights=None, **kw) -> ScheduleInstance:
    """Shorthand for an identical-machines instance."""
    sizes, multiplicities = list(sizes), list(multiplicities)
    weights = list(weights) if weights is not None else [None] * len(sizes)
    jobs = tuple(JobType(p, n, w) for p, n, w in zip(sizes, multiplicities, weights))
    return ScheduleInstance("identical", machines, jobs, **kw)
