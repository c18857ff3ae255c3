"""Invariant convex sets: values of the invariant functions f and g,
membership tests, tangent-cone feasibility, and conic constraint blocks.

Constraint blocks are expressed over the svec coordinates of the symmetric
matrix variable X (indices 0..N-1, N = n(n+1)/2) plus per-set auxiliary
scalars (indices N..N+num_aux-1).  `relax` remaps them into full problems.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .conic import ConeSpec, ConicProblem, Status, solve, svec
from .errors import BadParams, DimensionMismatch, SolverFailure
from .graphs import adjacency
from .spectra import eig_sym

F_G_TOL = 1e-7


# ---------------------------------------------------------------------------
# set variants

@dataclass(frozen=True)
class SchurHorn:
    lam: tuple

    def __post_init__(self):
        lam = tuple(sorted((float(v) for v in self.lam), reverse=True))
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class InvStability:
    level: float

    def __post_init__(self):
        if not 0.0 < self.level <= 1.0:
            raise BadParams(f"stability level {self.level} outside (0, 1]")


@dataclass(frozen=True)
class MaxCut:
    level: float

    def __post_init__(self):
        if self.level < 0.0:
            raise BadParams(f"max-cut level {self.level} negative")


@dataclass(frozen=True)
class Box01:
    pass


@dataclass(frozen=True)
class Loopless:
    pass


@dataclass(frozen=True)
class Intersection:
    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise BadParams("empty intersection")
        if any(isinstance(m, Intersection) for m in members):
            raise BadParams("nested intersections are not allowed")
        object.__setattr__(self, "members", members)


# ---------------------------------------------------------------------------
# invariant function values

def _run(problem, tol, max_iter=200000):
    sol = solve(problem, tol=tol, max_iter=max_iter)
    if sol.status is not Status.OPTIMAL:
        raise SolverFailure(f"status {sol.status.value}, residuals {sol.residuals}")
    return sol


def _entry_coeff(n, i, j):
    """(svec coordinate, coefficient) such that coeff * v[coord] = X_ij."""
    i, j = min(i, j), max(i, j)
    coord = i * n - i * (i - 1) // 2 + (j - i)
    return coord, 1.0 if i == j else 1.0 / np.sqrt(2.0)


def f_value(a, tol=F_G_TOL):
    """min Tr(X(I+A)) s.t. X PSD, X >= 0 entrywise, 1'X1 = 1."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    nv = n * (n + 1) // 2
    c = svec(np.eye(n) + a)
    rows, rhs = [], []
    rows.append(list(zip(range(nv), svec(np.ones((n, n))))))
    rhs.append(1.0)
    for i in range(n):
        for j in range(i, n):
            coord, coef = _entry_coeff(n, i, j)
            rows.append([(coord, -coef)])
            rhs.append(0.0)
    for k in range(nv):
        rows.append([(k, -1.0)])
        rhs.append(0.0)
    problem = ConicProblem(c, _assemble(rows, nv), np.array(rhs),
                           ConeSpec(1, nv, (n,)))
    return float(_run(problem, tol).objective)


def g_value(a, tol=F_G_TOL):
    """max (1/4) Tr(A(11' - X)) s.t. X PSD, X_ii = 1."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    nv = n * (n + 1) // 2
    c = svec(a) / 4.0
    rows, rhs = [], []
    for i in range(n):
        coord, _ = _entry_coeff(n, i, i)
        rows.append([(coord, 1.0)])
        rhs.append(1.0)
    for k in range(nv):
        rows.append([(k, -1.0)])
        rhs.append(0.0)
    problem = ConicProblem(c, _assemble(rows, nv), np.array(rhs),
                           ConeSpec(n, 0, (n,)))
    sol = _run(problem, tol)
    return float(a.sum() / 4.0 - sol.objective)


def _assemble(rows, num_vars):
    data, ri, ci = [], [], []
    for r, pairs in enumerate(rows):
        for var, coef in pairs:
            ri.append(r)
            ci.append(var)
            data.append(coef)
    return sp.csc_matrix((data, (ri, ci)), shape=(len(rows), num_vars))


def make_set(g, kind):
    """Build the invariant set of the given kind anchored at graph ``g``."""
    kind = str(kind).upper()
    if kind == "SH":
        w, _ = eig_sym(adjacency(g))
        return SchurHorn(tuple(w))
    if kind == "IS":
        return InvStability(min(f_value(adjacency(g)), 1.0))
    if kind == "MC":
        return MaxCut(max(g_value(adjacency(g)), 0.0))
    if kind == "BOX":
        return Box01()
    if kind == "LOOPLESS":
        return Loopless()
    raise BadParams(f"unknown set kind {kind!r}")


# ---------------------------------------------------------------------------
# conic constraint blocks

@dataclass
class ConstraintBlocks:
    """Rows over [svec(X) coords | auxiliary scalars] in s = b - Ax form."""

    n: int
    num_aux: int = 0
    zero_rows: list = field(default_factory=list)    # (pairs, rhs)
    nonneg_rows: list = field(default_factory=list)
    psd_blocks: list = field(default_factory=list)   # (size, [(pairs, rhs), ...])

    def extend(self, other):
        if other.n != self.n:
            raise DimensionMismatch("cannot merge blocks of different dimension")
        shift = self.num_aux
        nv = self.n * (self.n + 1) // 2

        def remap(pairs):
            return [(v if v < nv else v + shift, c) for v, c in pairs]

        self.zero_rows += [(remap(p), r) for p, r in other.zero_rows]
        self.nonneg_rows += [(remap(p), r) for p, r in other.nonneg_rows]
        self.psd_blocks += [(s, [(remap(p), r) for p, r in rows])
                            for s, rows in other.psd_blocks]
        self.num_aux += other.num_aux
        return self


def _identity_svec(n):
    return svec(np.eye(n))


def _psd_rows(n, x_sign=0.0, const=None, aux_cols=None):
    """Rows of one PSD block of size n: s = const + x_sign*X + aux terms."""
    nv = n * (n + 1) // 2
    b = np.zeros(nv) if const is None else svec(const)
    rows = []
    for k in range(nv):
        pairs = []
        if x_sign:
            pairs.append((k, -x_sign))
        if aux_cols:
            for base, coeffs in aux_cols:
                if coeffs[k]:
                    pairs.append((base + k, -coeffs[k]))
        rows.append((pairs, float(b[k])))
    return rows


def emit_conic_blocks(s, n):
    """Constraint blocks for membership of X in the set ``s``."""
    nv = n * (n + 1) // 2
    blocks = ConstraintBlocks(n)
    if isinstance(s, Intersection):
        for member in s.members:
            blocks.extend(emit_conic_blocks(member, n))
        return blocks

    if isinstance(s, SchurHorn):
        lam = np.array(s.lam)
        if lam.shape[0] != n:
            raise DimensionMismatch(f"spectrum length {lam.shape[0]} != n={n}")
        prefix = np.cumsum(lam)
        diag_coords = [_entry_coeff(n, i, i)[0] for i in range(n)]
        blocks.zero_rows.append(([(c, 1.0) for c in diag_coords], float(prefix[-1])))
        if n >= 2:
            # top-1: lam_1*I - X PSD
            blocks.psd_blocks.append(
                (n, _psd_rows(n, x_sign=-1.0, const=prefix[0] * np.eye(n))))
        if n >= 3:
            # top-(n-1): X - (trace - prefix_{n-1})*I = X - lam_n*I PSD
            blocks.psd_blocks.append(
                (n, _psd_rows(n, x_sign=1.0,
                              const=-(prefix[-1] - prefix[-2]) * np.eye(n))))
        ident = _identity_svec(n)
        for k in range(2, n - 1):
            z = nv + blocks.num_aux
            zmat = z + 1
            blocks.num_aux += 1 + nv
            # Z - X + z*I PSD
            rows = []
            for t in range(nv):
                pairs = [(t, 1.0), (zmat + t, -1.0)]
                if ident[t]:
                    pairs.append((z, -ident[t]))
                rows.append((pairs, 0.0))
            blocks.psd_blocks.append((n, rows))
            # Z PSD
            blocks.psd_blocks.append(
                (n, [([(zmat + t, -1.0)], 0.0) for t in range(nv)]))
            # k*z + Tr(Z) <= prefix_k
            pairs = [(z, float(k))] + [(zmat + c, 1.0) for c in diag_coords]
            blocks.nonneg_rows.append((pairs, float(prefix[k - 1])))
        return blocks

    if isinstance(s, InvStability):
        mu0 = nv + blocks.num_aux
        blocks.num_aux += nv
        for i in range(n):
            for j in range(i, n):
                coord, coef = _entry_coeff(n, i, j)
                blocks.nonneg_rows.append(([(mu0 + coord, -coef)], 0.0))
        const = np.eye(n) - s.level * np.ones((n, n))
        b = svec(const)
        rows = []
        for k in range(nv):
            rows.append(([(k, -1.0), (mu0 + k, 1.0)], float(b[k])))
        blocks.psd_blocks.append((n, rows))
        return blocks

    if isinstance(s, MaxCut):
        d0 = nv + blocks.num_aux
        blocks.num_aux += n
        rows = []
        diag_coords = [_entry_coeff(n, i, i)[0] for i in range(n)]
        diag_pos = {c: i for i, c in enumerate(diag_coords)}
        for k in range(nv):
            pairs = [(k, -1.0)]
            if k in diag_pos:
                pairs.append((d0 + diag_pos[k], 1.0))
            rows.append((pairs, 0.0))
        blocks.psd_blocks.append((n, rows))
        ones_sv = svec(np.ones((n, n)))
        pairs = [(k, float(ones_sv[k]) / 4.0) for k in range(nv)]
        pairs += [(d0 + i, -0.25) for i in range(n)]
        blocks.nonneg_rows.append((pairs, float(s.level)))
        return blocks

    if isinstance(s, Box01):
        for i in range(n):
            for j in range(i, n):
                coord, coef = _entry_coeff(n, i, j)
                blocks.nonneg_rows.append(([(coord, -coef)], 0.0))
                blocks.nonneg_rows.append(([(coord, coef)], 1.0))
        return blocks

    if isinstance(s, Loopless):
        for i in range(n):
            coord, _ = _entry_coeff(n, i, i)
            blocks.zero_rows.append(([(coord, 1.0)], 0.0))
        return blocks

    raise BadParams(f"unknown set variant {type(s).__name__}")


# ---------------------------------------------------------------------------
# membership and tangent cone

def membership(s, m, tol=1e-6):
    """Test M in s, evaluating invariant functions for the IS/MC variants."""
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    if isinstance(s, Intersection):
        return all(membership(member, m, tol) for member in s.members)
    if isinstance(s, SchurHorn):
        lam = np.array(s.lam)
        if lam.shape[0] != n:
            raise DimensionMismatch("spectrum length mismatch")
        w, _ = eig_sym(m)
        prefix_w = np.cumsum(w)
        prefix_l = np.cumsum(lam)
        if abs(prefix_w[-1] - prefix_l[-1]) > tol:
            return False
        return bool((prefix_w[:-1] <= prefix_l[:-1] + tol).all())
    if isinstance(s, InvStability):
        return f_value(m) >= s.level - tol
    if isinstance(s, MaxCut):
        return g_value(m) <= s.level + tol
    if isinstance(s, Box01):
        return bool((m >= -tol).all() and (m <= 1.0 + tol).all())
    if isinstance(s, Loopless):
        return bool((np.abs(np.diag(m)) <= tol).all())
    raise BadParams(f"unknown set variant {type(s).__name__}")


def check_is_tangent(g, t, tol=1e-6):
    """Is T in the tangent cone of the stability set at adjacency(g)?

    Feasibility of T + I + A - f(A)*11' = mu + Lambda (mu >= 0 entrywise,
    Lambda PSD) is decided through the bounded reformulation
    min t s.t. C - mu + t*I PSD, mu >= 0: feasible iff the optimum is <= 0.
    """
    a = adjacency(g)
    n = g.n
    t_mat = np.asarray(t, dtype=np.float64)
    if t_mat.shape != (n, n):
        raise DimensionMismatch(f"T shape {t_mat.shape} != ({n},{n})")
    c_mat = t_mat + np.eye(n) + a - f_value(a) * np.ones((n, n))
    nv = n * (n + 1) // 2
    c = np.zeros(nv + 1)
    c[nv] = 1.0
    rows, rhs = [], []
    for i in range(n):
        for j in range(i, n):
            coord, coef = _entry_coeff(n, i, j)
            rows.append([(coord, -coef)])
            rhs.append(0.0)
    ident = _identity_svec(n)
    b = svec(c_mat)
    for k in range(nv):
        pairs = [(k, 1.0)]
        if ident[k]:
            pairs.append((nv, -ident[k]))
        rows.append(pairs)
        rhs.append(float(b[k]))
    problem = ConicProblem(c, _assemble(rows, nv + 1), np.array(rhs),
                           ConeSpec(0, nv, (n,)))
    sol = _run(problem, tol=1e-7)
    return float(sol.objective) <= tol
