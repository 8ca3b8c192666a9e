"""Pure-Python DP kernels.

Works on arbitrary-precision ints, so it doubles as the bignum path when the
numbers of a reduced instance do not fit the compiled int64 kernel.

States are count vectors ``0 <= v <= bound`` packed into one int with mixed
radix ``bound[j] + 1`` (coordinate 0 least significant).
"""


def radix_of(bound):
    radix, r = [], 1
    for b in bound:
        radix.append(r)
        r *= b + 1
    return radix


def decode(code, bound):
    digits = []
    for b in bound:
        code, d = divmod(code, b + 1)
        digits.append(d)
    return digits


def encode(vec, bound):
    code = 0
    for v, r in zip(vec, radix_of(bound)):
        code += v * r
    return code


def enumerate_configs(sizes, bound, cap, lower_weights=None, lower=None):
    """All ``x <= bound`` with ``sizes . x <= cap`` and ``lower_weights . x >= lower``.

    Output is in colexicographic order (coordinate 0 varies fastest).
    """
    k = len(sizes)
    if cap < 0:
        return []
    if k == 0:
        return [()]
    if lower_weights is None:
        lower_weights = [0] * k
        lower = 0
    # best lower-weight value still reachable from coordinates below j
    maxrest = [0] * k
    for j in range(1, k):
        maxrest[j] = maxrest[j - 1] + lower_weights[j - 1] * bound[j - 1]
    out = []
    x = [0] * k

    def rec(j, load, lval):
        p, w, b = sizes[j], lower_weights[j], bound[j]
        need = lower - maxrest[j] - lval
        start = 0
        if need > 0:
            if w == 0:
                return
            start = -(-need // w)
        for v in range(start, b + 1):
            nl = load + v * p
            if nl > cap:
                break
            x[j] = v
            if j == 0:
                out.append(tuple(x))
            else:
                rec(j - 1, nl, lval + v * w)
        x[j] = 0

    rec(k - 1, 0, 0)
    return out


def expand_layer(states, configs, bound, rest_weights, rest_inf, rest_cap):
    """Add every config to every state; keep results that can still be completed.

    A result ``v`` survives when ``v <= bound`` and the leftover ``bound - v``
    passes ``rest_weights . leftover <= rest_cap`` with no leftover on an
    ``rest_inf`` coordinate.  The first (state, config) pair reaching a code
    wins.  Returns ``(codes, parent_index, config_index)``.
    """
    k = len(bound)
    radix = radix_of(bound)
    ccodes = [sum(c * r for c, r in zip(cfg, radix)) for cfg in configs]
    seen = {}
    out_codes, out_parent, out_cfg = [], [], []
    jrange = range(k)
    for si, code in enumerate(states):
        d = decode(code, bound)
        for ci, cfg in enumerate(configs):
            rem_load = 0
            for j in jrange:
                r = bound[j] - d[j] - cfg[j]
                if r < 0 or (r and rest_inf[j]):
                    break
                rem_load += rest_weights[j] * r
                if rem_load > rest_cap:
                    break
            else:
                new = code + ccodes[ci]
                if new not in seen:
                    seen[new] = True
                    out_codes.append(new)
                    out_parent.append(si)
                    out_cfg.append(ci)
    return out_codes, out_parent, out_cfg


def finish_layer(states, bound, sizes, inf_mask, cap):
    """Index of the first state whose complement ``bound - v`` fits in ``cap``, else -1."""
    k = len(bound)
    for si, code in enumerate(states):
        d = decode(code, bound)
        load = 0
        for j in range(k):
            r = bound[j] - d[j]
            if r:
                if inf_mask[j]:
                    break
                load += r * sizes[j]
                if load > cap:
                    break
        else:
            return si
    return -1
