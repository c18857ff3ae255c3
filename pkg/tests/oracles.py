"""Independent slow references used by unit and acceptance tests."""

from itertools import combinations

import numpy as np


def majorization_qp_oracle(x, lam):
    """Projection of x onto {y : y majorized by lam} by active-set enumeration.

    With x sorted descending the projection is sorted too, and the feasible
    set reduces to prefix-sum constraints cumsum(y)_k <= cumsum(lam)_k with
    equality at k = n.  For every subset of active prefix constraints the
    stationary point shifts x uniformly on each block between consecutive
    active cuts; the projection is the feasible candidate of least cost.
    Exponential in n, intended for n <= 8.
    """
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    n = x.size
    order = np.argsort(-x, kind="stable")
    xs = x[order]
    lams = -np.sort(-lam)
    target = np.cumsum(lams)
    best = None
    best_cost = np.inf
    for r in range(n):
        for cuts in combinations(range(1, n), r):
            bounds = list(cuts) + [n]
            y = np.empty(n)
            prev = 0
            prev_sum = 0.0
            for b in bounds:
                block = xs[prev:b]
                shift = (target[b - 1] - prev_sum - block.sum()) / (b - prev)
                y[prev:b] = block + shift
                prev = b
                prev_sum = target[b - 1]
            run = np.cumsum(y)
            if np.all(run[:-1] <= target[:-1] + 1e-9):
                cost = float(((y - xs) ** 2).sum())
                if cost < best_cost - 1e-15:
                    best_cost = cost
                    best = y
    assert best is not None
    assert np.all(np.diff(best) <= 1e-9), "projection of sorted input is sorted"
    out = np.empty(n)
    out[order] = best
    return out
