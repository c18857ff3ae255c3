"""First-order solver for standard-form cone programs.

Problems are min c'x subject to Ax + s = b, s in K, where K stacks a zero
cone, a nonnegative cone, and PSD blocks (in scaled upper-triangle
vectorization).  The solver runs ADMM on the homogeneous self-dual embedding:
every iteration is one solve with a fixed sparse quasi-definite matrix
(factorized once) plus one cone projection, after Ruiz equilibration of the
data.  Infeasibility certificates fall out of the embedding.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import BadParams, DimensionMismatch, NumericalBreakdown

_SQRT2 = np.sqrt(2.0)


def _tri_side(length):
    s = int((np.sqrt(8.0 * length + 1.0) - 1.0) / 2.0 + 0.5)
    if s * (s + 1) // 2 != length:
        raise DimensionMismatch(f"length {length} is not a triangular number")
    return s


def _svec_plan(s):
    rows, cols = np.triu_indices(s)
    scale = np.where(rows == cols, 1.0, _SQRT2)
    return rows, cols, scale


def svec(m):
    """Scaled upper-triangle vectorization: <svec(M), svec(N)> = Tr(MN)."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {m.shape}")
    rows, cols, scale = _svec_plan(m.shape[0])
    return m[rows, cols] * scale


def smat(v):
    """Inverse of svec."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch("expected a vector")
    s = _tri_side(v.shape[0])
    rows, cols, scale = _svec_plan(s)
    m = np.zeros((s, s))
    vals = v / scale
    m[rows, cols] = vals
    m[cols, rows] = vals
    return m


@dataclass(frozen=True)
class ConeSpec:
    zero_dim: int = 0
    nonneg_dim: int = 0
    psd_block_sizes: tuple = ()

    def __post_init__(self):
        if self.zero_dim < 0 or self.nonneg_dim < 0 or any(
                s <= 0 for s in self.psd_block_sizes):
            raise BadParams("cone dimensions must be nonnegative, PSD sizes positive")
        object.__setattr__(self, "psd_block_sizes", tuple(self.psd_block_sizes))

    @property
    def total_dim(self):
        return (self.zero_dim + self.nonneg_dim
                + sum(s * (s + 1) // 2 for s in self.psd_block_sizes))


@dataclass(frozen=True)
class ConicProblem:
    """min c'x  s.t.  Ax + s = b,  s in K."""

    c: np.ndarray
    A: sp.csc_matrix
    b: np.ndarray
    cones: ConeSpec

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).ravel()
        b = np.asarray(self.b, dtype=np.float64).ravel()
        a = sp.csc_matrix(self.A, dtype=np.float64)
        if a.shape != (b.shape[0], c.shape[0]):
            raise DimensionMismatch(
                f"A is {a.shape}, expected ({b.shape[0]}, {c.shape[0]})")
        if b.shape[0] != self.cones.total_dim:
            raise DimensionMismatch(
                f"|b| = {b.shape[0]} but cones specify {self.cones.total_dim}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "A", a)


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    MAX_ITERATIONS = "MaxIterations"
    PRIMAL_INFEASIBLE = "PrimalInfeasibleLikely"
    DUAL_INFEASIBLE = "DualInfeasibleLikely"


@dataclass
class Solution:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    objective: float
    status: Status
    residuals: tuple
    iterations: int


class _ConeWork:
    """Precomputed segment layout and batched PSD projection for one ConeSpec."""

    def __init__(self, cones):
        self.cones = cones
        self.zero = slice(0, cones.zero_dim)
        self.nonneg = slice(cones.zero_dim, cones.zero_dim + cones.nonneg_dim)
        offset = cones.zero_dim + cones.nonneg_dim
        by_size = {}
        self.psd_slices = []
        for s in cones.psd_block_sizes:
            length = s * (s + 1) // 2
            sl = slice(offset, offset + length)
            self.psd_slices.append(sl)
            by_size.setdefault(s, []).append(sl)
            offset += length
        self.psd_groups = []
        for s, slices in by_size.items():
            rows, cols, scale = _svec_plan(s)
            strict = rows != cols
            self.psd_groups.append((s, slices, rows, cols, scale, strict))

    def _project_psd_segments(self, v):
        for s, slices, rows, cols, scale, strict in self.psd_groups:
            segs = np.stack([v[sl] for sl in slices])
            mats = np.zeros((len(slices), s, s))
            vals = segs / scale
            mats[:, rows, cols] = vals
            mats[:, cols[strict], rows[strict]] = vals[:, strict]
            w, q = np.linalg.eigh(mats)
            np.maximum(w, 0.0, out=w)
            mats = (q * w[:, None, :]) @ q.transpose(0, 2, 1)
            out = mats[:, rows, cols] * scale
            for k, sl in enumerate(slices):
                v[sl] = out[k]

    def project_primal(self, v):
        """Projection onto K: zero segment zeroed, nonneg clamped, PSD per block."""
        v = np.array(v, dtype=np.float64)
        v[self.zero] = 0.0
        np.maximum(v[self.nonneg], 0.0, out=v[self.nonneg])
        self._project_psd_segments(v)
        return v

    def project_dual(self, v):
        """Projection onto K*: zero-cone segment is free, the rest as primal."""
        v = np.array(v, dtype=np.float64)
        np.maximum(v[self.nonneg], 0.0, out=v[self.nonneg])
        self._project_psd_segments(v)
        return v


def project_cone(cones, v):
    """Project ``v`` onto the cone K described by ``cones``."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != cones.total_dim:
        raise DimensionMismatch(f"|v| = {v.shape[0]} != {cones.total_dim}")
    return _ConeWork(cones).project_primal(v)


def _ruiz_equilibrate(a, work, sweeps=10):
    """Scale D A E toward unit row/column norms; PSD rows share one factor."""
    m, n = a.shape
    d = np.ones(m)
    e = np.ones(n)
    for _ in range(sweeps):
        aa = abs(a)
        rnorm = aa.max(axis=1).toarray().ravel() if m else np.zeros(0)
        for sl in work.psd_slices:
            block = rnorm[sl]
            rnorm[sl] = block.max() if block.size else 1.0
        rnorm[rnorm == 0] = 1.0
        dr = 1.0 / np.sqrt(rnorm)
        cnorm = aa.max(axis=0).toarray().ravel() if n else np.zeros(0)
        cnorm[cnorm == 0] = 1.0
        dc = 1.0 / np.sqrt(cnorm)
        a = sp.diags(dr) @ a @ sp.diags(dc)
        d *= dr
        e *= dc
    return a.tocsc(), d, e


def solve(problem, tol=1e-6, max_iter=50000, over_relax=1.5, scale=True,
          check_every=25):
    """Solve a ConicProblem; deterministic for fixed inputs and settings."""
    cones = problem.cones
    work = _ConeWork(cones)
    a0, b0, c0 = problem.A, problem.b, problem.c
    m, nvar = a0.shape

    if scale and m and nvar:
        a_s, d, e = _ruiz_equilibrate(a0.copy(), work)
    else:
        a_s, d, e = a0.tocsc(), np.ones(m), np.ones(nvar)
    bs = d * b0
    cs = e * c0
    col_norms = abs(a_s).max(axis=0).toarray().ravel() if nvar else np.zeros(0)
    row_norms = abs(a_s).max(axis=1).toarray().ravel() if m else np.zeros(0)
    sc_b = np.clip((col_norms.mean() if nvar else 1.0)
                   / max(np.linalg.norm(bs), 1e-6), 1e-6, 1e6)
    sc_c = np.clip((row_norms.mean() if m else 1.0)
                   / max(np.linalg.norm(cs), 1e-6), 1e-6, 1e6)
    bs = bs * sc_b
    cs = cs * sc_c

    kkt = sp.bmat([[sp.eye(nvar), a_s.T], [a_s, -sp.eye(m)]], format="csc")
    try:
        fac = splu(kkt)
    except RuntimeError as exc:
        raise NumericalBreakdown(f"KKT factorization failed: {exc}") from exc

    def msolve(zx, zy):
        sol = fac.solve(np.concatenate([zx, -zy]))
        return sol[:nvar], sol[nvar:]

    qx, qy = msolve(cs, bs)
    denom = 1.0 + cs @ qx + bs @ qy

    norm_b = np.linalg.norm(b0)
    norm_c = np.linalg.norm(c0)

    ux = np.zeros(nvar)
    uy = np.zeros(m)
    utau = 1.0
    vy = np.zeros(m)
    vtau = 0.0
    alpha = over_relax

    def unscaled_candidate(tau):
        x = e * (ux / tau) / sc_b
        y = d * (uy / tau) / sc_c
        s = (vy / tau) / d / sc_b
        return x, y, s

    def residuals_of(x, y, s):
        pres = np.linalg.norm(a0 @ x + s - b0) / (1.0 + norm_b)
        dres = np.linalg.norm(a0.T @ y + c0) / (1.0 + norm_c)
        ctx = c0 @ x
        bty = b0 @ y
        gap = abs(ctx + bty) / (1.0 + abs(ctx) + abs(bty))
        return pres, dres, gap, ctx

    def certificate_status():
        y_dir = d * uy
        bty = b0 @ y_dir
        if bty < -1e-12:
            if np.linalg.norm(a0.T @ y_dir) * max(norm_b, 1.0) <= -bty * tol:
                return Status.PRIMAL_INFEASIBLE
        x_dir = e * ux
        s_dir = vy / d
        ctx = c0 @ x_dir
        if ctx < -1e-12:
            if np.linalg.norm(a0 @ x_dir + s_dir) * max(norm_c, 1.0) <= -ctx * tol:
                return Status.DUAL_INFEASIBLE
        return None

    best = None
    iteration = 0
    for iteration in range(1, max_iter + 1):
        wx = ux
        wy = uy + vy
        wtau = utau + vtau
        px, py = msolve(wx, wy)
        ttau = (wtau + cs @ px + bs @ py) / denom
        utx = px - ttau * qx
        uty = py - ttau * qy
        # over-relaxed reflections
        rx = alpha * utx + (1.0 - alpha) * ux
        ry = alpha * uty + (1.0 - alpha) * uy
        rtau = alpha * ttau + (1.0 - alpha) * utau
        ux = rx
        new_uy = work.project_dual(ry - vy)
        new_utau = max(rtau - vtau, 0.0)
        vy = vy - ry + new_uy
        vtau = vtau - rtau + new_utau
        uy = new_uy
        utau = new_utau

        if iteration % check_every == 0 or iteration == max_iter:
            if not (np.isfinite(ux).all() and np.isfinite(uy).all()):
                raise NumericalBreakdown("iterate is not finite")
            scale_u = max(1.0, abs(ux).max(initial=0.0), abs(uy).max(initial=0.0))
            if utau > 1e-9 * scale_u:
                x, y, s = unscaled_candidate(utau)
                pres, dres, gap, ctx = residuals_of(x, y, s)
                best = Solution(x, y, s, float(ctx), Status.MAX_ITERATIONS,
                                (pres, dres, gap), iteration)
                if pres <= tol and dres <= tol and gap <= tol:
                    best.status = Status.OPTIMAL
                    return best
            else:
                status = certificate_status()
                if status is not None:
                    zero = np.zeros
                    return Solution(zero(nvar), zero(m), zero(m), np.nan,
                                    status, (np.inf, np.inf, np.inf), iteration)

    if best is not None:
        return best
    status = certificate_status()
    if status is None:
        status = Status.MAX_ITERATIONS
    return Solution(np.zeros(nvar), np.zeros(m), np.zeros(m), np.nan, status,
                    (np.inf, np.inf, np.inf), iteration)
