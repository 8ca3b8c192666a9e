import importlib.util
from pathlib import Path

import pytest

from hmsched.kernels import available_backends
from hmsched.solvers import dp_feasible_cmax

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernel.py"


def _load():
    spec = importlib.util.spec_from_file_location("bench_kernel", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.mark.skipif("cython" not in available_backends(), reason="compiled kernel not built")
def test_benchmark_workloads_agree():
    for name, inst, T in _load().workloads():
        py = dp_feasible_cmax(inst, T, backend="python")
        cy = dp_feasible_cmax(inst, T, backend="cython")
        assert (py is None) == (cy is None), name


def test_benchmark_main_runs(capsys, monkeypatch):
    monkeypatch.setattr("sys.argv", ["bench_kernel.py", "--repeat", "1"])
    _load().main()
    out = capsys.readouterr().out
    assert out.startswith("backends:")
    assert len(out.strip().splitlines()) == 2 + len(list(_load().workloads()))
