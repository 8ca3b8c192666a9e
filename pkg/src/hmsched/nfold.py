"""N-fold integer programming model of a scheduling instance.

Variables are the counts ``x^i_j`` laid out brick by brick (machine ``i``
holds ``t`` consecutive entries).  The top ``r`` rows link all bricks and
force every job to be scheduled; each brick also carries ``s`` local rows
that cap the machine's load.

``.nfold`` text layout::

    NFOLD r s t N
    BLOCK 1
    E1 <t integers>          (r lines)
    E2 <t integers>          (s lines)
    BLOCK 2
    ...
    RHS <r + N s integers>
    SENSE <r + N s tokens among = <= >=>
    LB <N t integers or -inf>
    UB <N t integers or inf>
    OBJ <kind>               (optional, followed by per-brick lines)
    END

Only decimal integers (and ``p/q`` speeds inside ``OBJ``) appear; no floats.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .core import Assignment, InvalidInstance, ScheduleInstance, is_inf

SENSES = ("=", "<=", ">=")
POS_INF = "inf"
NEG_INF = "-inf"


@dataclass(frozen=True)
class NFoldObjective:
    """Separable objective over the bricks, declared but never solved here.

    ``kind`` is ``l2sq`` (sum of ``(z^i / s_i)^2`` with ``z^i = p^i x^i``) or
    ``sumwc`` (the Smith-order completion cost of brick ``i`` with weights
    ``weights[i]`` and sizes ``z_coeffs[i]``).
    """

    kind: str
    z_coeffs: tuple
    speeds: tuple = ()
    weights: tuple = ()


@dataclass(frozen=True)
class NFoldModel:
    r: int
    s: int
    t: int
    N: int
    E1: tuple  # N blocks, each r rows of length t
    E2: tuple  # N blocks, each s rows of length t
    rhs: tuple
    sense: tuple
    lb: tuple
    ub: tuple
    objective: Optional[NFoldObjective] = None
    notes: tuple = field(default_factory=tuple, compare=False)

    def __post_init__(self):
        if len(self.E1) != self.N or len(self.E2) != self.N:
            raise ValueError("need one E1 and one E2 block per brick")
        for blk in self.E1:
            if len(blk) != self.r or any(len(row) != self.t for row in blk):
                raise ValueError(f"E1 blocks must be {self.r} x {self.t}")
        for blk in self.E2:
            if len(blk) != self.s or any(len(row) != self.t for row in blk):
                raise ValueError(f"E2 blocks must be {self.s} x {self.t}")
        rows = self.r + self.N * self.s
        if len(self.rhs) != rows or len(self.sense) != rows:
            raise ValueError(f"rhs and sense need {rows} entries")
        if any(s not in SENSES for s in self.sense):
            raise ValueError(f"sense tokens must be among {SENSES}")
        if len(self.lb) != self.N * self.t or len(self.ub) != self.N * self.t:
            raise ValueError(f"bounds need {self.N * self.t} entries")

    @property
    def num_rows(self) -> int:
        return self.r + self.N * self.s

    @property
    def num_vars(self) -> int:
        return self.N * self.t


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _brick_sizes(inst: ScheduleInstance, i: int):
    """Sizes on machine ``i``; forbidden pairs get coefficient 0 and an upper bound of 0."""
    sizes = inst.sizes_on(i)
    return tuple(0 if is_inf(p) else p for p in sizes), tuple(is_inf(p) for p in sizes)


def _bounds(inst: ScheduleInstance):
    lb, ub = [], []
    for i in range(inst.machines):
        _, inf = _brick_sizes(inst, i)
        lb += [0] * inst.k
        ub += [0 if f else n for n, f in zip(inst.multiplicities, inf)]
    return tuple(lb), tuple(ub)


def build_nfold_cmax(inst: ScheduleInstance, T) -> NFoldModel:
    """Linking rows ``sum_i x^i = n`` and per-machine rows ``p^i x^i <= floor(T s_i)``.

    The right-hand side is floored since loads are integers; with identical or
    unrelated machines ``s_i = 1``.
    """
    T = Fraction(T)
    if T < 0:
        raise InvalidInstance("T must be ≥ 0")
    k, m = inst.k, inst.machines
    E1 = tuple(_identity(k) for _ in range(m))
    E2 = tuple((_brick_sizes(inst, i)[0],) for i in range(m))
    rhs = tuple(inst.multiplicities) + tuple(_floor(T * inst.speed(i)) for i in range(m))
    sense = ("=",) * k + ("<=",) * m
    lb, ub = _bounds(inst)
    return NFoldModel(k, 1, k, m, E1, E2, rhs, sense, lb, ub)


def build_nfold_objective(inst: ScheduleInstance, objective: Optional[str] = None) -> NFoldModel:
    """Linking rows only, plus a declared l2sq or sumwc objective over ``z^i = p^i x^i``."""
    objective = objective or inst.objective
    if objective not in ("l2sq", "sumwc"):
        raise InvalidInstance(f"no separable objective stanza for {objective!r}")
    k, m = inst.k, inst.machines
    lb, ub = _bounds(inst)
    z = tuple(_brick_sizes(inst, i)[0] for i in range(m))
    if objective == "l2sq":
        obj = NFoldObjective("l2sq", z, speeds=tuple(inst.speed(i) for i in range(m)))
    else:
        if any(w is None for w in inst.weights):
            raise InvalidInstance("sumwc objective needs a weight on every job type")
        obj = NFoldObjective("sumwc", z, weights=tuple(tuple(inst.weights) for _ in range(m)))
    return NFoldModel(k, 0, k, m, tuple(_identity(k) for _ in range(m)), tuple(() for _ in range(m)),
                      tuple(inst.multiplicities), ("=",) * k, lb, ub, obj)


def standard_form(model: NFoldModel) -> NFoldModel:
    """Turn every local inequality into an equality with its own slack column."""
    s, t = model.s, model.t
    E1 = tuple(tuple(tuple(row) + (0,) * s for row in blk) for blk in model.E1)
    E2 = []
    lb, ub = [], []
    for i in range(model.N):
        rows = []
        for q, row in enumerate(model.E2[i]):
            sense = model.sense[model.r + i * s + q]
            slack = [0] * s
            slack[q] = {"=": 0, "<=": 1, ">=": -1}[sense]
            rows.append(tuple(row) + tuple(slack))
        E2.append(tuple(rows))
        lb += list(model.lb[i * t:(i + 1) * t]) + [0] * s
        ub += list(model.ub[i * t:(i + 1) * t]) + [POS_INF] * s
    sense = tuple(model.sense[: model.r]) + ("=",) * (model.N * s)
    obj = model.objective
    if obj is not None:
        obj = replace(obj, z_coeffs=tuple(tuple(z) + (0,) * s for z in obj.z_coeffs),
                      weights=tuple(tuple(w) + (0,) * s for w in obj.weights))
    return NFoldModel(model.r, s, t + s, model.N, E1, tuple(E2), model.rhs, sense, tuple(lb), tuple(ub), obj)


def flatten(a: Assignment) -> list:
    return a.flatten()


def unflatten(model: NFoldModel, x: Sequence[int]) -> Assignment:
    t = model.t
    return Assignment(tuple(tuple(x[i * t:(i + 1) * t]) for i in range(model.N)))


def _holds(lhs, sense, rhs) -> bool:
    if sense == "=":
        return lhs == rhs
    if sense == "<=":
        return lhs <= rhs
    return lhs >= rhs


def row_values(model: NFoldModel, x: Sequence[int]) -> list:
    t, s = model.t, model.s
    top = [0] * model.r
    local = []
    for i in range(model.N):
        brick = x[i * t:(i + 1) * t]
        for q, row in enumerate(model.E1[i]):
            top[q] += sum(c * v for c, v in zip(row, brick))
        for row in model.E2[i]:
            local.append(sum(c * v for c, v in zip(row, brick)))
    return top + local


def check_solution(model: NFoldModel, x: Sequence[int]):
    """``(ok, violations)`` after checking every row and bound exactly."""
    if len(x) != model.num_vars:
        raise ValueError(f"solution has {len(x)} entries, model has {model.num_vars} variables")
    violations = []
    values = row_values(model, x)
    for q, (lhs, sense, rhs) in enumerate(zip(values, model.sense, model.rhs)):
        if _holds(lhs, sense, rhs):
            continue
        if q < model.r:
            violations.append(f"linking row {q} violated: {lhs} {sense} {rhs} fails")
        else:
            i, row = divmod(q - model.r, model.s)
            violations.append(f"block {i} row {row} violated: {lhs} {sense} {rhs} fails")
    for v, (value, lo, hi) in enumerate(zip(x, model.lb, model.ub)):
        if (lo != NEG_INF and value < lo) or (hi != POS_INF and value > hi):
            violations.append(f"bound violated at variable {v}: {value} not in [{lo}, {hi}]")
    return not violations, violations


def dense_matrix(model: NFoldModel) -> list:
    """The full ``(r + N s) x (N t)`` constraint matrix."""
    t, s = model.t, model.s
    M = [[0] * model.num_vars for _ in range(model.num_rows)]
    for i in range(model.N):
        for q, row in enumerate(model.E1[i]):
            M[q][i * t:(i + 1) * t] = list(row)
        for q, row in enumerate(model.E2[i]):
            M[model.r + i * s + q][i * t:(i + 1) * t] = list(row)
    return M


def block_pattern_ok(model: NFoldModel) -> bool:
    """Nonzeros only in the linking band and in the diagonal local bands."""
    t, s = model.t, model.s
    for q, row in enumerate(dense_matrix(model)):
        if q < model.r:
            continue
        brick = (q - model.r) // s
        if any(v for c, v in enumerate(row) if c // t != brick):
            return False
    return True


# text format

def _ints(values) -> str:
    return " ".join(str(v) for v in values)


def _line(tag, values) -> str:
    body = _ints(values)
    return f"{tag} {body}" if body else tag


def format_model(model: NFoldModel) -> str:
    out = [f"NFOLD {model.r} {model.s} {model.t} {model.N}"]
    for i in range(model.N):
        out.append(f"BLOCK {i + 1}")
        out += [_line("E1", row) for row in model.E1[i]]
        out += [_line("E2", row) for row in model.E2[i]]
    out.append(_line("RHS", model.rhs))
    out.append(_line("SENSE", model.sense))
    out.append(_line("LB", model.lb))
    out.append(_line("UB", model.ub))
    obj = model.objective
    if obj is not None:
        out.append(f"OBJ {obj.kind}")
        for i in range(model.N):
            out.append(_line(f"Z {i + 1}", obj.z_coeffs[i]))
            if obj.speeds:
                out.append(f"SPEED {i + 1} {obj.speeds[i]}")
            if obj.weights:
                out.append(_line(f"W {i + 1}", obj.weights[i]))
    out.append("END")
    return "\n".join(out) + "\n"


def _bound(token: str):
    return token if token in (POS_INF, NEG_INF) else int(token)


def parse_model(text: str) -> NFoldModel:
    lines = text.splitlines()
    pos = 0

    def take(tag):
        nonlocal pos
        if pos >= len(lines):
            raise ValueError(f"unexpected end of input, wanted {tag}")
        parts = lines[pos].split()
        if not parts or parts[0] != tag:
            raise ValueError(f"line {pos + 1}: expected {tag}, got {lines[pos]!r}")
        pos += 1
        return parts[1:]

    head = take("NFOLD")
    if len(head) != 4:
        raise ValueError("header must read NFOLD r s t N")
    r, s, t, N = (int(v) for v in head)
    E1, E2 = [], []
    for i in range(N):
        if take("BLOCK") != [str(i + 1)]:
            raise ValueError(f"line {pos}: expected BLOCK {i + 1}")
        E1.append(tuple(tuple(int(v) for v in take("E1")) for _ in range(r)))
        E2.append(tuple(tuple(int(v) for v in take("E2")) for _ in range(s)))
    rhs = tuple(int(v) for v in take("RHS"))
    sense = tuple(take("SENSE"))
    lb = tuple(_bound(v) for v in take("LB"))
    ub = tuple(_bound(v) for v in take("UB"))
    obj = None
    if pos < len(lines) and lines[pos].startswith("OBJ"):
        (kind,) = take("OBJ")
        z, speeds, weights = [], [], []
        for i in range(N):
            z.append(tuple(int(v) for v in take("Z")[1:]))
            if pos < len(lines) and lines[pos].startswith("SPEED"):
                speeds.append(Fraction(take("SPEED")[1]))
            if pos < len(lines) and lines[pos].startswith("W "):
                weights.append(tuple(int(v) for v in take("W")[1:]))
        obj = NFoldObjective(kind, tuple(z), tuple(speeds), tuple(weights))
    take("END")
    if any(line.strip() for line in lines[pos:]):
        raise ValueError(f"trailing content after END at line {pos + 1}")
    return NFoldModel(r, s, t, N, tuple(E1), tuple(E2), rhs, sense, lb, ub, obj)


def export_model(model: NFoldModel, path) -> None:
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_model(model))


def import_model(path) -> NFoldModel:
    with open(os.fspath(path), encoding="ascii") as fh:
        return parse_model(fh.read())
