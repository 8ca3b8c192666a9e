# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""int64 DP kernels; same contracts as ``_dp_py``.

Callers must make sure every value, including the packed state codes, stays
below 2**62.
"""
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

import numpy as np


def enumerate_configs(long long[::1] sizes, long long[::1] bound, long long cap,
                      long long[::1] lower_weights, long long lower):
    cdef Py_ssize_t k = sizes.shape[0]
    cdef Py_ssize_t j, t
    cdef vector[long long] out
    cdef vector[long long] x, load, lval, maxrest
    cdef long long need, start, nl
    if cap < 0:
        return np.empty((0, k), dtype=np.int64)
    if k == 0:
        return np.empty((1, 0), dtype=np.int64)
    x.resize(k)
    load.resize(k + 1)
    lval.resize(k + 1)
    maxrest.resize(k)
    maxrest[0] = 0
    for j in range(1, k):
        maxrest[j] = maxrest[j - 1] + lower_weights[j - 1] * bound[j - 1]

    j = k - 1
    load[k] = 0
    lval[k] = 0
    # entering level j: pick the first admissible value
    need = lower - maxrest[j]
    if need > 0:
        if lower_weights[j] == 0:
            return np.empty((0, k), dtype=np.int64)
        start = (need + lower_weights[j] - 1) // lower_weights[j]
    else:
        start = 0
    x[j] = start - 1
    while True:
        x[j] += 1
        nl = load[j + 1] + x[j] * sizes[j]
        if x[j] > bound[j] or nl > cap:
            x[j] = 0
            j += 1
            if j == k:
                break
            continue
        load[j] = nl
        lval[j] = lval[j + 1] + x[j] * lower_weights[j]
        if j == 0:
            for t in range(k):
                out.push_back(x[t])
            continue
        j -= 1
        need = lower - maxrest[j] - lval[j + 1]
        if need > 0:
            if lower_weights[j] == 0:
                j += 1
                continue
            start = (need + lower_weights[j] - 1) // lower_weights[j]
        else:
            start = 0
        x[j] = start - 1

    cdef Py_ssize_t rows = out.size() // k
    result = np.empty((rows, k), dtype=np.int64)
    cdef long long[:, ::1] rv = result
    for j in range(rows):
        for t in range(k):
            rv[j, t] = out[j * k + t]
    return result


def expand_layer(long long[::1] states, long long[:, ::1] configs, long long[::1] bound,
                 long long[::1] rest_weights, long long[::1] rest_inf, long long rest_cap):
    cdef Py_ssize_t k = bound.shape[0]
    cdef Py_ssize_t ns = states.shape[0]
    cdef Py_ssize_t nc = configs.shape[0]
    cdef Py_ssize_t si, ci, j
    cdef vector[long long] radix, digits, ccodes
    cdef vector[long long] out_codes, out_parent, out_cfg
    cdef unordered_set[long long] seen
    cdef long long r, code, rest, rem_load, new
    cdef bint ok
    radix.resize(k)
    digits.resize(k)
    ccodes.resize(nc)
    r = 1
    for j in range(k):
        radix[j] = r
        r *= bound[j] + 1
    for ci in range(nc):
        code = 0
        for j in range(k):
            code += configs[ci, j] * radix[j]
        ccodes[ci] = code

    for si in range(ns):
        code = states[si]
        rest = code
        for j in range(k):
            digits[j] = rest % (bound[j] + 1)
            rest = rest // (bound[j] + 1)
        for ci in range(nc):
            ok = True
            rem_load = 0
            for j in range(k):
                r = bound[j] - digits[j] - configs[ci, j]
                if r < 0 or (r != 0 and rest_inf[j] != 0):
                    ok = False
                    break
                rem_load += rest_weights[j] * r
                if rem_load > rest_cap:
                    ok = False
                    break
            if ok:
                new = code + ccodes[ci]
                if seen.insert(new).second:
                    out_codes.push_back(new)
                    out_parent.push_back(si)
                    out_cfg.push_back(ci)

    n = out_codes.size()
    codes_arr = np.empty(n, dtype=np.int64)
    parent_arr = np.empty(n, dtype=np.int64)
    cfg_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] cv = codes_arr
    cdef long long[::1] pv = parent_arr
    cdef long long[::1] fv = cfg_arr
    for si in range(<Py_ssize_t>n):
        cv[si] = out_codes[si]
        pv[si] = out_parent[si]
        fv[si] = out_cfg[si]
    return codes_arr, parent_arr, cfg_arr


def finish_layer(long long[::1] states, long long[::1] bound, long long[::1] sizes,
                 long long[::1] inf_mask, long long cap):
    cdef Py_ssize_t k = bound.shape[0]
    cdef Py_ssize_t si, j
    cdef long long rest, d, r, load
    cdef bint ok
    for si in range(states.shape[0]):
        rest = states[si]
        load = 0
        ok = True
        for j in range(k):
            d = rest % (bound[j] + 1)
            rest = rest // (bound[j] + 1)
            r = bound[j] - d
            if r != 0:
                if inf_mask[j] != 0:
                    ok = False
                    break
                load += r * sizes[j]
                if load > cap:
                    ok = False
                    break
        if ok:
            return si
    return -1
