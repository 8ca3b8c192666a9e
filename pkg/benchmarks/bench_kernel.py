"""Compiled vs pure-Python DP kernel.

    python benchmarks/bench_kernel.py [--repeat 3]

Each workload runs the full makespan decision DP once per backend and checks
that both backends agree on feasibility.
"""
import argparse
import statistics
import time

from hmsched.core import identical
from hmsched.kernels import available_backends
from hmsched.reductions import BalancedBinPackingInstance, reduce_bbp
from hmsched.solvers import dp_feasible_cmax


def workloads():
    yield "identical m=4 k=3 n=(12,10,8)", identical((7, 11, 13), (12, 10, 8), 4), 90
    yield "identical m=6 k=4 n=(8,8,8,8)", identical((3, 5, 8, 9), (8, 8, 8, 8), 6), 34
    big = BalancedBinPackingInstance((3, 5, 4, 4, 2, 6), 2, 12)
    for family in ("bbp2qcmax", "bbp2rcmax", "bbp2rcmax4"):
        inst, cert = reduce_bbp(family, big)
        yield f"{family} m={inst.machines} k={inst.k}", inst, cert.target


def timed(inst, T, backend, repeat):
    runs = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = dp_feasible_cmax(inst, T, backend=backend)
        runs.append(time.perf_counter() - start)
    return statistics.median(runs), result is not None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'workload':40s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s} feasible")
    for name, inst, T in workloads():
        py, feas_py = timed(inst, T, "python", args.repeat)
        if "cython" in backends:
            cy, feas_cy = timed(inst, T, "cython", args.repeat)
            if feas_py != feas_cy:
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:40s} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x {feas_py}")
        else:
            print(f"{name:40s} {py:10.4f} {'n/a':>10s} {'':>8s} {feas_py}")


if __name__ == "__main__":
    main()
