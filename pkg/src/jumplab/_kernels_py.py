"""Pure-Python kernels. Reference twin of ``_kernels.pyx``: same loops, same
operation order, so both backends return bit-identical arrays."""

import numpy as np

from .model import native_callables, NativeForm

DONE, ABORTED, STOPPED = 0, 1, 2


def euler_generic(sigma, b, big_f, comp, x0, dt, dw, is_atom, z, guard, big_threshold):
    """Jump-adapted explicit Euler over precomputed merged-grid increments.

    Returns ``(values, pre, delta, status)``; arrays cover the knots actually
    reached (index 0 is ``x0``). ``status`` is DONE, ABORTED (|X| > guard or
    non-finite) or STOPPED (first jump with |dX| >= big_threshold, applied).
    """
    n = len(dt)
    values = np.empty(n + 1)
    pre = np.empty(n + 1)
    delta = np.zeros(n + 1)
    x = float(x0)
    values[0] = pre[0] = x
    dtl, dwl, al, zl = dt.tolist(), dw.tolist(), is_atom.tolist(), z.tolist()
    status, last = DONE, n
    for k in range(n):
        h = dtl[k]
        x = x + sigma(x) * dwl[k] + b(x) * h - h * comp(x)
        pre[k + 1] = x
        dx = 0.0
        if al[k]:
            dx = big_f(x, zl[k])
            x = x + dx
            delta[k + 1] = dx
        values[k + 1] = x
        if not abs(x) <= guard:
            status, last = ABORTED, k + 1
            break
        if al[k] and abs(dx) >= big_threshold:
            status, last = STOPPED, k + 1
            break
    return values[: last + 1], pre[: last + 1], delta[: last + 1], status


def euler_native(kinds, params, x0, dt, dw, is_atom, z, guard, big_threshold):
    form = NativeForm(int(kinds[0]), int(kinds[1]), int(kinds[2]), tuple(float(p) for p in params))
    sigma, b, big_f, comp = native_callables(form)
    return euler_generic(sigma, b, big_f, comp, x0, dt, dw, is_atom, z, guard, big_threshold)


def tanaka_terms(values, pre, delta, is_atom, a):
    """``(sign integral, jump correction)`` for level ``a``; sums run left to right.

    ``is_atom`` is per knot (index 0 unused).
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return 0.0, 0.0
    left = v[:-1]
    p = pre[1:]
    d = delta[1:]
    s_left = np.where(left - a > 0.0, 1.0, -1.0)
    s_pre = np.where(p - a > 0.0, 1.0, -1.0)
    c = s_left * (p - left) + s_pre * d
    sign_int = float(np.cumsum(np.concatenate(([0.0], c)))[-1])
    mask = np.asarray(is_atom[1:], dtype=bool)
    j = (np.abs(v[1:][mask] - a) - np.abs(p[mask] - a)) - s_pre[mask] * d[mask]
    jump_sum = float(np.cumsum(np.concatenate(([0.0], j)))[-1])
    return sign_int, jump_sum

