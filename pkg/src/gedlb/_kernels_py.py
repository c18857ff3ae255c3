"""Pure-Python kernels.  Mirrors the compiled module in `_kernels.pyx`; the
active implementation is chosen in `_native`."""

import numpy as np


def isotonic_nonincreasing(z):
    """Project ``z`` onto the non-increasing cone (pool adjacent violators).

    Returns argmin ||t - z||_2 subject to t[0] >= t[1] >= ... >= t[-1].
    """
    z = np.asarray(z, dtype=np.float64)
    n = z.shape[0]
    out = np.empty(n)
    if n == 0:
        return out
    bsum = np.empty(n)
    bcnt = np.empty(n, dtype=np.intp)
    nb = 0
    for i in range(n):
        bsum[nb] = z[i]
        bcnt[nb] = 1
        nb += 1
        # a later block with a larger mean violates non-increasing order
        while nb >= 2 and bsum[nb - 1] * bcnt[nb - 2] > bsum[nb - 2] * bcnt[nb - 1]:
            bsum[nb - 2] += bsum[nb - 1]
            bcnt[nb - 2] += bcnt[nb - 1]
            nb -= 1
    k = 0
    for b in range(nb):
        out[k:k + bcnt[b]] = bsum[b] / bcnt[b]
        k += bcnt[b]
    return out


def ged_search(a1, a2, include_diagonal):
    """Minimum pairwise mismatch count over all vertex bijections.

    ``a1`` and ``a2`` are equal-sized 0/1 symmetric matrices.  Counts unordered
    pairs (i < j), plus diagonal positions when ``include_diagonal`` is set,
    where the permuted ``a1`` differs from ``a2``.  Branch and bound on the
    partial assignment cost.
    """
    m1 = [list(map(int, row)) for row in np.asarray(a1)]
    m2 = [list(map(int, row)) for row in np.asarray(a2)]
    n = len(m2)
    if n == 0:
        return 0

    def perm_cost(perm):
        c = 0
        for i in range(n):
            if include_diagonal:
                c += m1[perm[i]][perm[i]] != m2[i][i]
            row = m1[perm[i]]
            for j in range(i):
                c += row[perm[j]] != m2[i][j]
        return c

    best = perm_cost(list(range(n)))
    used = [False] * n
    perm = [0] * n

    def rec(i, partial):
        nonlocal best
        if i == n:
            best = partial
            return
        row2 = m2[i]
        for v in range(n):
            if used[v]:
                continue
            c = partial
            if include_diagonal:
                c += m1[v][v] != row2[i]
            row1 = m1[v]
            for j in range(i):
                c += row1[perm[j]] != row2[j]
            if c < best:
                used[v] = True
                perm[i] = v
                rec(i + 1, c)
                used[v] = False

    rec(0, 0)
    return best
