"""Numba implementations of the hot kernels.

Same contracts as ``dotoc._kernels_numpy`` (the reference backend); see the
docstrings there.  All kernels parallelize over output rows only and never
reduce across threads, so results do not depend on the thread count.
"""

import warnings

import numpy as np

# stale TBB runtimes trigger a harmless fallback warning on the first
# parallel launch; the workqueue layer numba picks instead is fine
warnings.filterwarnings("ignore", message=".*TBB.*")

from numba import njit, prange


@njit(cache=True, parallel=True)
def rhs_apply(x, out, ci, hdiag, g, xmasks, gamma, channel, raising, dmasks, dunion):
    dim = x.shape[0]
    nx = xmasks.shape[0]
    nd = dmasks.shape[0]
    # popcount of i & dunion; every dissipator's anticommutator weight is a
    # function of these counts, which fuses it into the main pass
    pc = np.zeros(dim, dtype=np.int64)
    if channel != 0:
        for i in range(dim):
            v = i & dunion
            cnt = 0
            while v:
                v &= v - 1
                cnt += 1
            pc[i] = cnt
    for r in prange(dim):
        hr = hdiag[r]
        if channel == 0:
            for c in range(dim):
                acc = (hr - hdiag[c]) * x[r, c]
                for i in range(nx):
                    m = xmasks[i]
                    acc += g * (x[r, c ^ m] - x[r ^ m, c])
                out[r, c] = ci * acc
        elif channel == 2:
            for c in range(dim):
                acc = (hr - hdiag[c]) * x[r, c]
                for i in range(nx):
                    m = xmasks[i]
                    acc += g * (x[r, c ^ m] - x[r ^ m, c])
                out[r, c] = ci * acc - gamma * pc[r ^ c] * x[r, c]
        elif channel == 3:
            half = 0.5 * gamma
            for c in range(dim):
                acc = (hr - hdiag[c]) * x[r, c]
                for i in range(nx):
                    m = xmasks[i]
                    acc += g * (x[r, c ^ m] - x[r ^ m, c])
                out[r, c] = ci * acc - half * (nd + pc[r ^ c]) * x[r, c]
            for i in range(nd):
                m = dmasks[i]
                rm = r ^ m
                if r & m:
                    for c0 in range(0, dim, 2 * m):
                        for c in range(c0 + m, c0 + 2 * m):
                            out[r, c] += half * x[rm, c - m]
                else:
                    for c0 in range(0, dim, 2 * m):
                        for c in range(c0, c0 + m):
                            out[r, c] += half * x[rm, c + m]
        else:
            two = 2.0 * gamma
            for c in range(dim):
                acc = (hr - hdiag[c]) * x[r, c]
                for i in range(nx):
                    m = xmasks[i]
                    acc += g * (x[r, c ^ m] - x[r ^ m, c])
                w = 2 * nd - pc[r] - pc[c]
                out[r, c] = ci * acc - gamma * w * x[r, c]
            if raising:
                for i in range(nd):
                    m = dmasks[i]
                    if r & m == 0:
                        rm = r | m
                        for c0 in range(0, dim, 2 * m):
                            for c in range(c0, c0 + m):
                                out[r, c] += two * x[rm, c + m]
            else:
                for i in range(nd):
                    m = dmasks[i]
                    if r & m:
                        rm = r & ~m
                        for c0 in range(0, dim, 2 * m):
                            for c in range(c0 + m, c0 + 2 * m):
                                out[r, c] += two * x[rm, c - m]


@njit(cache=True, parallel=True)
def axpy(out, a, s, b):
    dim = a.shape[0]
    for r in prange(dim):
        for c in range(dim):
            out[r, c] = a[r, c] + s * b[r, c]


@njit(cache=True, parallel=True)
def axpy_acc(acc, s, k):
    dim = acc.shape[0]
    for r in prange(dim):
        for c in range(dim):
            acc[r, c] += s * k[r, c]


@njit(cache=True, parallel=True)
def symmetrize(x):
    # each unordered index pair is touched by exactly one row-thread
    dim = x.shape[0]
    for r in prange(dim):
        x[r, r] = complex(x[r, r].real, 0.0)
        for c in range(r + 1, dim):
            avg = 0.5 * (x[r, c] + np.conj(x[c, r]))
            x[r, c] = avg
            x[c, r] = np.conj(avg)


@njit(cache=True, parallel=True)
def zpair_partials(x, yt, zmasks):
    dim = x.shape[0]
    k = zmasks.shape[0]
    parts = np.empty((dim, k + 1), dtype=np.complex128)
    for r in prange(dim):
        u = np.empty(dim, dtype=np.complex128)
        base = 0.0 + 0.0j
        for c in range(dim):
            u[c] = x[r, c] * yt[r, c]
            base += u[c]
        parts[r, k] = base
        for j in range(k):
            m = zmasks[j]
            # sum over columns whose bit m is set: signed total is base - 2*s1
            s1 = 0.0 + 0.0j
            for c0 in range(m, dim, 2 * m):
                for c in range(c0, c0 + m):
                    s1 += u[c]
            val = base - 2.0 * s1
            if r & m:
                val = -val
            parts[r, j] = val
    return parts
