import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hmsched import kernels
from hmsched.kernels import _dp_py

BACKENDS = kernels.available_backends()


def _brute_configs(sizes, bound, cap):
    out = [x for x in itertools.product(*(range(b + 1) for b in bound))
           if sum(p * v for p, v in zip(sizes, x)) <= cap]
    # colex: coordinate 0 fastest
    return sorted(out, key=lambda x: tuple(reversed(x)))


def test_compiled_kernel_built():
    assert "cython" in BACKENDS, "compiled extension missing; run pip install -e . --no-build-isolation"


def test_encode_decode_roundtrip():
    bound = [2, 0, 3]
    for x in itertools.product(range(3), range(1), range(4)):
        assert _dp_py.decode(_dp_py.encode(x, bound), bound) == list(x)


@pytest.mark.parametrize("backend", BACKENDS)
@given(sizes=st.lists(st.integers(0, 6), min_size=1, max_size=3),
       data=st.data(), cap=st.integers(-1, 20))
def test_enumerate_matches_brute(backend, sizes, data, cap):
    bound = data.draw(st.lists(st.integers(0, 3), min_size=len(sizes), max_size=len(sizes)))
    got = kernels.enumerate_configs(sizes, bound, cap, backend=backend)
    assert got == _brute_configs(sizes, bound, cap)


@pytest.mark.parametrize("backend", BACKENDS)
@given(sizes=st.lists(st.integers(1, 6), min_size=1, max_size=3), data=st.data(),
       cap=st.integers(0, 20), lower=st.integers(-5, 25))
def test_enumerate_lower_bound(backend, sizes, data, cap, lower):
    k = len(sizes)
    bound = data.draw(st.lists(st.integers(0, 3), min_size=k, max_size=k))
    weights = data.draw(st.lists(st.integers(0, 4), min_size=k, max_size=k))
    got = kernels.enumerate_configs(sizes, bound, cap, weights, lower, backend=backend)
    want = [x for x in _brute_configs(sizes, bound, cap) if sum(w * v for w, v in zip(weights, x)) >= lower]
    assert got == want


def test_backends_agree_on_layers():
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    rng = random.Random(5)
    for _ in range(40):
        k = rng.randint(1, 3)
        bound = [rng.randint(0, 4) for _ in range(k)]
        sizes = [rng.randint(1, 5) for _ in range(k)]
        cap = rng.randint(0, 15)
        configs = _dp_py.enumerate_configs(sizes, bound, cap)
        states = sorted({_dp_py.encode([rng.randint(0, b) for b in bound], bound) for _ in range(5)})
        rest_w = [rng.randint(0, 3) for _ in range(k)]
        rest_inf = [rng.random() < 0.2 for _ in range(k)]
        rest_cap = rng.randint(0, 20)
        a = kernels.expand_layer(states, configs, bound, rest_w, rest_inf, rest_cap, backend="python")
        b = kernels.expand_layer(states, configs, bound, rest_w, rest_inf, rest_cap, backend="cython")
        assert [list(v) for v in a] == [list(v) for v in b]
        inf = [rng.random() < 0.2 for _ in range(k)]
        assert (kernels.finish_layer(states, bound, sizes, inf, cap, backend="python")
                == kernels.finish_layer(states, bound, sizes, inf, cap, backend="cython"))


def test_big_numbers_fall_back_to_python():
    big = 1 << 70
    assert kernels._pick(None, big) == "python"
    got = kernels.enumerate_configs([big, 1], [1, 2], big + 1)
    assert got == [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2)]
