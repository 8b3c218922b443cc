"""Batched difference-norm sweeps (numba kernels).

Everything expensive in this package reduces to one pattern: sweep the
offset k = 1 .. K_max once, and for each k update either

* running maxima of region norms of the k-step difference (first or second
  order), snapshotted at each requested scale -> modulus profiles, or
* running sums of absolute differences per point, snapshotted at each
  requested scale -> ball-average (density) profiles.

Offsets of both signs are covered by one difference array: the (-k)-step
difference at x equals minus the (+k)-step difference at x - k dx (shifted
twice as far for second differences), so negative offsets are region shifts.

Callers pass a work span [lo, hi] of sample indices that is guaranteed
NaN-free and wide enough: every region start s must satisfy
``s - order*K_max >= lo`` and ``s + width - 1 + order*K_max <= hi``.

Sums run left to right inside the kernels, so results are bit-reproducible
for a fixed input; no fastmath is enabled anywhere.
"""

from __future__ import annotations

import numpy as np
from numba import njit

P_ONE, P_TWO, P_GEN = 1, 2, 0


@njit(cache=True)
def _diff_pow(v, lo, hi, k, order, pcode, pexp, d):
    """|k-step difference|^p of v on [lo, hi - order*k], into d (span-local)."""
    m = hi - lo + 1 - order * k
    if order == 1:
        for i in range(m):
            x = v[lo + i + k] - v[lo + i]
            if x < 0.0:
                x = -x
            if pcode == P_TWO:
                d[i] = x * x
            elif pcode == P_ONE:
                d[i] = x
            else:
                d[i] = x ** pexp
    else:
        for i in range(m):
            x = v[lo + i + 2 * k] - 2.0 * v[lo + i + k] + v[lo + i]
            if x < 0.0:
                x = -x
            if pcode == P_TWO:
                d[i] = x * x
            elif pcode == P_ONE:
                d[i] = x
            else:
                d[i] = x ** pexp
    return m


@njit(cache=True)
def _table_sum(v, lo, hi, starts, width, ks_sorted, order, pcode, pexp):
    """Running-max region p-sums over offsets, per scale.

    Returns (n_regions, n_scales); entry [j, c] is the max over
    1 <= k <= ks_sorted[c] and both offset signs of the p-th-power sum of the
    k-step difference over region j.  ks_sorted must be nondecreasing;
    entries equal to 0 yield 0.
    """
    nr = starts.size
    nk = ks_sorted.size
    out = np.zeros((nr, nk))
    run = np.zeros(nr)
    kmax = 0
    for c in range(nk):
        if ks_sorted[c] > kmax:
            kmax = ks_sorted[c]
    span = hi - lo + 1
    d = np.empty(span)
    c_arr = np.empty(span + 1)
    col = 0
    while col < nk and ks_sorted[col] == 0:
        col += 1
    for k in range(1, kmax + 1):
        m = _diff_pow(v, lo, hi, k, order, pcode, pexp, d)
        c_arr[0] = 0.0
        for i in range(m):
            c_arr[i + 1] = c_arr[i] + d[i]
        for j in range(nr):
            b = starts[j] - lo
            plus = c_arr[b + width] - c_arr[b]
            if plus > run[j]:
                run[j] = plus
            b2 = b - order * k
            minus = c_arr[b2 + width] - c_arr[b2]
            if minus > run[j]:
                run[j] = minus
        while col < nk and ks_sorted[col] == k:
            for j in range(nr):
                out[j, col] = run[j]
            col += 1
    return out


@njit(cache=True)
def _table_max(v, lo, hi, starts, width, ks_sorted, order):
    """Sup-norm variant of _table_sum (region maxima of |difference|)."""
    nr = starts.size
    nk = ks_sorted.size
    out = np.zeros((nr, nk))
    run = np.zeros(nr)
    kmax = 0
    for c in range(nk):
        if ks_sorted[c] > kmax:
            kmax = ks_sorted[c]
    span = hi - lo + 1
    d = np.empty(span)
    col = 0
    while col < nk and ks_sorted[col] == 0:
        col += 1
    for k in range(1, kmax + 1):
        _diff_pow(v, lo, hi, k, order, P_ONE, 1.0, d)
        for j in range(nr):
            b = starts[j] - lo
            mx = run[j]
            for i in range(b, b + width):
                if d[i] > mx:
                    mx = d[i]
            b2 = b - order * k
            for i in range(b2, b2 + width):
                if d[i] > mx:
                    mx = d[i]
            run[j] = mx
        while col < nk and ks_sorted[col] == k:
            for j in range(nr):
                out[j, col] = run[j]
            col += 1
    return out


@njit(cache=True)
def _density_table(v, lo, hi, i0, i1, ks_sorted, order):
    """Per-point sums of |difference| over all offsets up to each scale.

    Returns (n_scales, i1 - i0 + 1); entry [c, i] is
    sum over 1 <= |k| <= ks_sorted[c] of |k-step difference at point i0 + i|
    (the k = 0 term vanishes).  Multiply by dx for the ball average.
    """
    npts = i1 - i0 + 1
    nk = ks_sorted.size
    out = np.zeros((nk, npts))
    acc = np.zeros(npts)
    kmax = 0
    for c in range(nk):
        if ks_sorted[c] > kmax:
            kmax = ks_sorted[c]
    span = hi - lo + 1
    d = np.empty(span)
    col = 0
    while col < nk and ks_sorted[col] == 0:
        col += 1
    for k in range(1, kmax + 1):
        _diff_pow(v, lo, hi, k, order, P_ONE, 1.0, d)
        base = i0 - lo
        for i in range(npts):
            acc[i] += d[base + i] + d[base + i - order * k]
        while col < nk and ks_sorted[col] == k:
            for i in range(npts):
                out[col, i] = acc[i]
            col += 1
    return out


def pcode_of(p: float) -> tuple[int, float]:
    if p == 1:
        return P_ONE, 1.0
    if p == 2:
        return P_TWO, 2.0
    return P_GEN, float(p)


def modulus_table(values, lo, hi, starts, width, ks, order, p, dx):
    """Region moduli of smoothness at every scale, one sweep.

    ``ks`` is the per-scale offset cap (nondecreasing not required; the
    table is computed on the sorted unique caps and scattered back).
    Returns (n_regions, n_scales) of finished norms: for finite p the
    region Riemann p-norm, for p = inf the region sup.
    """
    ks = np.asarray(ks, dtype=np.int64)
    starts = np.asarray(starts, dtype=np.int64)
    order_idx = np.argsort(ks, kind="stable")
    ks_sorted = ks[order_idx]
    if np.isinf(p):
        tab = _table_max(np.asarray(values), lo, hi, starts, width,
                         ks_sorted, order)
    else:
        pcode, pexp = pcode_of(p)
        tab = _table_sum(np.asarray(values), lo, hi, starts, width,
                         ks_sorted, order, pcode, pexp)
        tab = (tab * dx) ** (1.0 / p)
    out = np.empty_like(tab)
    out[:, order_idx] = tab
    return out


def density_table(values, lo, hi, i0, i1, ks, order, dx):
    """Ball averages of |difference| per point and scale (one sweep)."""
    ks = np.asarray(ks, dtype=np.int64)
    order_idx = np.argsort(ks, kind="stable")
    tab = _density_table(np.asarray(values), lo, hi, i0, i1,
                         ks[order_idx], order)
    out = np.empty_like(tab)
    out[order_idx, :] = tab
    return out * dx
