"""Hot loops of the configuration DP.

The compiled extension ``_dp`` is used when it was built and every number of
the call fits comfortably in int64; everything else goes through the
pure-Python ``_dp_py``.  Set ``HMSCHED_PURE_PYTHON=1`` to disable the
extension entirely.
"""
import os

import numpy as np

from . import _dp_py

try:
    if os.environ.get("HMSCHED_PURE_PYTHON"):
        raise ImportError("disabled by HMSCHED_PURE_PYTHON")
    from . import _dp as _native
except ImportError:
    _native = None

BACKEND = "cython" if _native is not None else "python"
INT64_SAFE = 1 << 62

decode = _dp_py.decode
encode = _dp_py.encode
radix_of = _dp_py.radix_of


def available_backends():
    return ("python", "cython") if _native is not None else ("python",)


def _pick(backend, *magnitudes):
    if backend == "python" or _native is None:
        if backend == "cython":
            raise RuntimeError("compiled kernel not available")
        return "python"
    if backend == "cython":
        return "cython"
    return "cython" if all(abs(v) < INT64_SAFE for v in magnitudes) else "python"


def _arr(values):
    return np.ascontiguousarray(values, dtype=np.int64)


def _state_space(bound):
    total = 1
    for b in bound:
        total *= b + 1
    return total


def enumerate_configs(sizes, bound, cap, lower_weights=None, lower=None, backend=None):
    k = len(sizes)
    if lower_weights is None:
        lower_weights, lower = [0] * k, 0
    span = sum(p * b for p, b in zip(sizes, bound)) + sum(w * b for w, b in zip(lower_weights, bound))
    # bounds outside [0, span] are vacuous; clamping keeps them int64-sized
    if cap >= 0:
        cap = min(cap, span)
    lower = min(max(lower, 0), span + 1)
    if _pick(backend, span, cap, lower, *sizes, *lower_weights) == "python":
        return _dp_py.enumerate_configs(sizes, bound, cap, lower_weights, lower)
    rows = _native.enumerate_configs(_arr(sizes), _arr(bound), cap, _arr(lower_weights), lower)
    return [tuple(r) for r in rows.tolist()]


def expand_layer(states, configs, bound, rest_weights, rest_inf, rest_cap, backend=None):
    span = sum(w * b for w, b in zip(rest_weights, bound))
    if _pick(backend, _state_space(bound), span, *rest_weights) == "python" or not states:
        return _dp_py.expand_layer(states, configs, bound, rest_weights, rest_inf, rest_cap)
    rest_cap = min(rest_cap, INT64_SAFE)
    cfg = np.asarray(configs, dtype=np.int64).reshape(len(configs), len(bound))
    codes, parents, cidx = _native.expand_layer(
        _arr(states), np.ascontiguousarray(cfg), _arr(bound), _arr(rest_weights),
        _arr([1 if f else 0 for f in rest_inf]), rest_cap)
    return codes.tolist(), parents.tolist(), cidx.tolist()


def finish_layer(states, bound, sizes, inf_mask, cap, backend=None):
    span = sum(p * b for p, b in zip(sizes, bound))
    if _pick(backend, _state_space(bound), span, cap, *sizes) == "python" or not states:
        return _dp_py.finish_layer(states, bound, sizes, inf_mask, cap)
    return int(_native.finish_layer(_arr(states), _arr(bound), _arr(sizes),
                                    _arr([1 if f else 0 for f in inf_mask]), cap))
