"""Edit-distance lower bounds from convex relaxations over invariant sets.

The core program minimizes half the entrywise l1 norm of E subject to
X + E = A2 and X constrained to an invariant set anchored at the first
graph.  Its optimum never exceeds the edit distance, because the permuted
adjacency of the first graph is always feasible.

Variable layout shared by both formulations (N = n(n+1)/2 svec coords):
coords 0..N-1 hold svec(X), N..2N-1 svec(E+), 2N..3N-1 svec(E-), and any
set auxiliaries follow from 3N.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .conic import ConeSpec, ConicProblem, Status, smat, solve, svec
from .errors import DimensionMismatch, NoConvergence, SolverFailure
from .graphs import adjacency, vertex_indexed
from .sets import (Intersection, SchurHorn, InvStability, MaxCut, Box01,
                   _entry_coeff, emit_conic_blocks, f_value, g_value, make_set)
from .spectra import eig_sym, project_schur_horn


class Direction(enum.Enum):
    G1_TO_G2 = "G1toG2"
    G2_TO_G1 = "G2toG1"
    MAX_OF_BOTH = "MaxOfBoth"


@dataclass
class BoundResult:
    """Lower bound in raw edit units together with the witnessing matrices."""

    lower_bound: float
    E_hat: np.ndarray
    X_hat: np.ndarray
    status: Status
    direction: Direction
    achieving: Direction = None


def _combine(g, kinds):
    members = tuple(make_set(g, k) for k in kinds)
    if not members:
        raise SolverFailure("no set kinds requested")
    return members[0] if len(members) == 1 else Intersection(members)


def _edit_weights(n, halved):
    nv = n * (n + 1) // 2
    w = np.full(nv, 1.0 / np.sqrt(2.0))
    for i in range(n):
        coord, _ = _entry_coeff(n, i, i)
        w[coord] = 0.5 if halved else 1.0
    return w


def _build(a2, blocks, halved, extra_nonneg=()):
    """Assemble the conic program for a target matrix and set blocks."""
    n = a2.shape[0]
    nv = n * (n + 1) // 2
    num_vars = 3 * nv + blocks.num_aux

    def remap(pairs):
        return [(v if v < nv else v + 2 * nv, c) for v, c in pairs]

    zero_rows, nonneg_rows, psd_rows = [], [], []
    b2 = svec(a2)
    for k in range(nv):
        zero_rows.append(([(k, 1.0), (nv + k, 1.0), (2 * nv + k, -1.0)],
                          float(b2[k])))
    zero_rows += [(remap(p), r) for p, r in blocks.zero_rows]
    for k in range(nv):
        nonneg_rows.append(([(nv + k, -1.0)], 0.0))
        nonneg_rows.append(([(2 * nv + k, -1.0)], 0.0))
    nonneg_rows += [(remap(p), r) for p, r in blocks.nonneg_rows]
    nonneg_rows += list(extra_nonneg)
    sizes = []
    for size, rows in blocks.psd_blocks:
        sizes.append(size)
        psd_rows += [(remap(p), r) for p, r in rows]

    all_rows = zero_rows + nonneg_rows + psd_rows
    data, ri, ci, rhs = [], [], [], []
    for r, (pairs, b) in enumerate(all_rows):
        rhs.append(b)
        for v, coef in pairs:
            ri.append(r)
            ci.append(v)
            data.append(coef)
    a = sp.csc_matrix((data, (ri, ci)), shape=(len(all_rows), num_vars))
    c = np.zeros(num_vars)
    w = _edit_weights(n, halved)
    c[nv:2 * nv] = w
    c[2 * nv:3 * nv] = w
    cones = ConeSpec(len(zero_rows), len(nonneg_rows), tuple(sizes))
    return ConicProblem(c, a, np.array(rhs), cones)


def formulate_p(a2, set_g1):
    """Conic form of the half-l1 program with X restricted to set_g1."""
    a2 = np.asarray(a2, dtype=np.float64)
    n = a2.shape[0]
    if a2.shape != (n, n):
        raise DimensionMismatch(f"target matrix shape {a2.shape} is not square")
    return _build(a2, emit_conic_blocks(set_g1, n), halved=True)


def _extract(sol, n, halved, direction):
    nv = n * (n + 1) // 2
    x = smat(sol.x[:nv])
    e = smat(sol.x[nv:2 * nv] - sol.x[2 * nv:3 * nv])
    if halved:
        value = 0.5 * float(np.abs(e).sum())
    else:
        value = float(np.abs(np.triu(e)).sum())
    return BoundResult(value, e, x, sol.status, direction)


def _solve_p(a2, s, direction, tol, max_iter):
    problem = formulate_p(a2, s)
    sol = solve(problem, tol=tol, max_iter=max_iter)
    if sol.status is not Status.OPTIMAL:
        raise SolverFailure(f"status {sol.status.value}, residuals {sol.residuals}")
    return _extract(sol, a2.shape[0], True, direction)


def lower_bound(g1, g2, kinds=("SH",), tol=1e-6, max_iter=100000):
    """Directed bound: edits needed to reach g2 from anything g1-equivalent."""
    if g1.n != g2.n:
        raise DimensionMismatch(f"vertex counts differ: {g1.n} vs {g2.n}")
    return _solve_p(adjacency(g2), _combine(g1, kinds), Direction.G1_TO_G2,
                    tol, max_iter)


def prepared_set(g, kind):
    """Build the invariant set for ``g`` once, for reuse across many solves."""
    return make_set(g, kind)


def bound_with_set(a2, set_g1, tol=1e-6, max_iter=100000):
    """Directed bound against a prebuilt invariant set."""
    return _solve_p(np.asarray(a2, dtype=np.float64), set_g1,
                    Direction.G1_TO_G2, tol, max_iter)


def symmetric_lower_bound(g1, g2, kinds=("SH",), tol=1e-6, max_iter=100000):
    """Larger of the two directed bounds."""
    fwd = lower_bound(g1, g2, kinds, tol, max_iter)
    rev = lower_bound(g2, g1, kinds, tol, max_iter)
    rev.direction = Direction.G2_TO_G1
    best = fwd if fwd.lower_bound >= rev.lower_bound else rev
    return BoundResult(best.lower_bound, best.E_hat, best.X_hat, best.status,
                       Direction.MAX_OF_BOTH, achieving=best.direction)


def _set_from_matrix(m, kind):
    kind = str(kind).upper()
    if kind == "SH":
        w, _ = eig_sym(m)
        return SchurHorn(tuple(w))
    if kind == "IS":
        return InvStability(min(f_value(m), 1.0))
    if kind == "MC":
        return MaxCut(max(g_value(m), 0.0))
    return make_set(None, kind)


def formulate_p_ext(a1v, a2v, set_g1):
    """Extended program over vertex-indexed matrices with presence coupling.

    The objective counts each upper-triangle edit once (diagonal included),
    and X carries vertex-presence indicators on its diagonal, so the box
    constraint and the couplings X_ij <= X_ii, X_ij <= X_jj are always on.
    """
    n = a1v.n
    if a2v.n != n:
        raise DimensionMismatch(f"padded sizes differ: {n} vs {a2v.n}")
    blocks = emit_conic_blocks(set_g1, n)
    blocks.extend(emit_conic_blocks(Box01(), n))
    coupling = []
    for i in range(n):
        ci, _ = _entry_coeff(n, i, i)
        for j in range(i + 1, n):
            cj, _ = _entry_coeff(n, j, j)
            cij, coef = _entry_coeff(n, i, j)
            coupling.append(([(cij, coef), (ci, -1.0)], 0.0))
            coupling.append(([(cij, coef), (cj, -1.0)], 0.0))
    return _build(a2v.entries, blocks, halved=False, extra_nonneg=coupling)


def _solve_p_ext(a1v, a2v, kinds, direction, tol, max_iter):
    members = tuple(_set_from_matrix(a1v.entries, k) for k in kinds)
    s = members[0] if len(members) == 1 else Intersection(members)
    problem = formulate_p_ext(a1v, a2v, s)
    sol = solve(problem, tol=tol, max_iter=max_iter)
    if sol.status is not Status.OPTIMAL:
        raise SolverFailure(f"status {sol.status.value}, residuals {sol.residuals}")
    return _extract(sol, a1v.n, False, direction)


def lower_bound_ext(g1, g2, kinds=("SH",), cost_per_edit=1.0, tol=1e-6,
                    max_iter=100000):
    """Size-agnostic bound on padded graphs, scaled by the per-edit cost."""
    n = max(g1.n, g2.n)
    a1v = vertex_indexed(g1, n)
    a2v = vertex_indexed(g2, n)
    fwd = _solve_p_ext(a1v, a2v, kinds, Direction.G1_TO_G2, tol, max_iter)
    rev = _solve_p_ext(a2v, a1v, kinds, Direction.G2_TO_G1, tol, max_iter)
    best = fwd if fwd.lower_bound >= rev.lower_bound else rev
    return BoundResult(cost_per_edit * best.lower_bound, best.E_hat,
                       best.X_hat, best.status, Direction.MAX_OF_BOTH,
                       achieving=best.direction)


def sh_admm(a2, lam, rho=1.0, tol=1e-8, max_iter=100000):
    """Fast path for the spectral set: two-block ADMM on the half-l1 program.

    Alternates the majorized-spectrum projection with soft-thresholding
    toward a2, with residual-balanced penalty updates.  The penalty is
    only adapted every 50 iterations; adapting it every step can lock the
    iteration into an exactly periodic doubling/halving cycle that makes
    no progress.
    """
    a2 = np.asarray(a2, dtype=np.float64)
    n = a2.shape[0]
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != (n,):
        raise DimensionMismatch(f"spectrum length {lam.shape} for n={n}")
    y = a2.copy()
    u = np.zeros_like(a2)
    scale = max(1.0, float(np.abs(a2).max()))
    for k in range(max_iter):
        x = project_schur_horn(y - u, lam)
        v = x + u
        diff = a2 - v
        w = np.sign(diff) * np.maximum(np.abs(diff) - 0.5 / rho, 0.0)
        y_next = a2 - w
        dual = rho * float(np.linalg.norm(y_next - y))
        y = y_next
        u += x - y
        primal = float(np.linalg.norm(x - y))
        if primal <= tol * scale * n and dual <= tol * scale * n:
            e = a2 - x
            return BoundResult(0.5 * float(np.abs(e).sum()), e, x,
                               Status.OPTIMAL, Direction.G1_TO_G2)
        if k % 50 == 49:
            if primal > 10.0 * dual and dual > 0.0:
                rho *= 2.0
                u /= 2.0
            elif dual > 10.0 * primal and primal > 0.0:
                rho /= 2.0
                u *= 2.0
    raise NoConvergence(f"ADMM did not converge in {max_iter} iterations")


def success_check(e_hat, e_star):
    """Recovery test: largest entry deviation below 0.01."""
    e_hat = np.asarray(e_hat, dtype=np.float64)
    e_star = np.asarray(e_star, dtype=np.float64)
    if e_hat.shape != e_star.shape:
        raise DimensionMismatch(f"shapes {e_hat.shape} vs {e_star.shape}")
    return bool(np.abs(e_hat - e_star).max() < 0.01)
