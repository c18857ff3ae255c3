"""Dual certificates for exact recovery by the spectral-set relaxation.

The certificate Q = R + Delta combines a spectrally aligned part
R = sum_i gamma_i P_i with a correction Delta supported away from the
cross-eigenspace blocks, built by a fixed-point iteration.  When the
checks pass, the edit matrix is the unique optimum of the relaxation.

Gamma is decreasing across eigenspaces ordered by decreasing eigenvalue:
the normal-cone ordering requires the restriction of Q to earlier
eigenspaces to dominate later ones, and the gap conditions measure the
same differences, so both checkers share one orientation.
"""

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import DimensionMismatch, NotContracting, NotUniform
from .families import check_projector_diagonal_uniformity
from .graphs import adjacency
from .spectra import eig_sym, eigenspaces


@dataclass(frozen=True)
class CertificateParams:
    alpha: tuple
    gamma: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        gamma = tuple(float(g) for g in self.gamma)
        if len(alpha) != len(gamma):
            raise DimensionMismatch(
                f"alpha length {len(alpha)} != gamma length {len(gamma)}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", gamma)


@dataclass
class CertificateReport:
    rho: float
    xi_lower: float
    xi_upper: float
    condition_flags: dict
    margins: dict = field(default_factory=dict)
    Q: np.ndarray = None
    Delta: np.ndarray = None

    @property
    def all_passed(self):
        return all(self.condition_flags.values())


def _check_len(vec, es, name):
    if len(vec) != es.m:
        raise DimensionMismatch(f"{name} length {len(vec)} != m={es.m}")


def rho(gamma, es):
    """Largest entry magnitude of the spectrally aligned part."""
    _check_len(gamma, es, "gamma")
    r = sum(g * p for g, p in zip(gamma, es.projectors))
    return float(np.abs(r).max())


def _block_compress(w, alpha, es):
    """(I - sum_i alpha_i P_i . P_i) applied to w."""
    out = w.copy()
    for a, p in zip(alpha, es.projectors):
        if a:
            out -= a * (p @ w @ p)
    return out


def xi_upper(alpha, d, es):
    """Certified upper bound on the sparse-pattern gain of the residual map.

    Bound (a) expands I - sum alpha_i P_ii over cross blocks and damped
    diagonal blocks, each bounded entrywise through the incoherences.
    Bound (b) sharpens the one-hot case by routing the two cross terms
    that involve the selected eigenspace through a sqrt(d) estimate.
    """
    _check_len(alpha, es, "alpha")
    if d < 1:
        raise DimensionMismatch(f"pattern degree {d} < 1")
    mu = es.mu
    m = es.m
    cross = sum(mu[i] * mu[j] for i in range(m) for j in range(m) if i != j)
    diag = sum((1.0 - alpha[i]) * mu[i] ** 2 for i in range(m))
    generic = d * (cross + diag)
    hot = [i for i, a in enumerate(alpha) if abs(a - 1.0) <= 1e-12]
    if len(hot) != 1 or any(abs(a) > 1e-12 for i, a in enumerate(alpha)
                            if i != hot[0]):
        return float(generic)
    ell = hot[0]
    mixed = sum(2.0 * mu[i] * math.sqrt(d) for i in range(m) if i != ell)
    mixed += d * (sum(mu[i] ** 2 for i in range(m) if i != ell)
                  + sum(mu[i] * mu[j] for i in range(m) if i != ell
                        for j in range(m) if j not in (i, ell)))
    return float(min(generic, mixed))


def _pair_matrix(n, a, b):
    w = np.zeros((n, n))
    w[a, b] = w[b, a] = 1.0
    return w


def _regular_pattern(n, d, rng):
    """Random symmetric sign matrix with exactly d nonzeros per row."""
    d = min(d, n - 1)
    use_diag = (n * d) % 2 == 1
    deg = d - 1 if use_diag else d
    w = np.zeros((n, n))
    if deg > 0:
        h = nx.random_regular_graph(deg, n, seed=int(rng.integers(2 ** 31)))
        for a, b in h.edges():
            w[a, b] = w[b, a] = rng.choice((-1.0, 1.0))
    if use_diag or deg == 0:
        w[np.diag_indices(n)] = rng.choice((-1.0, 1.0), size=n)
    return w


def xi_lower(alpha, d, es, probes=16, seed=0):
    """Probe-certified lower bound on the same gain."""
    _check_len(alpha, es, "alpha")
    n = es.projectors[0].shape[0]
    best = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            w = _pair_matrix(n, a, b)
            best = max(best, float(np.abs(_block_compress(w, alpha, es)).max()))
    rng = np.random.default_rng(seed)
    for _ in range(probes):
        w = _regular_pattern(n, d, rng)
        gain = float(np.abs(_block_compress(w, alpha, es)).max())
        best = max(best, gain / float(np.abs(w).max()))
    return best


def xi_support(alpha, pairs, es):
    """Exact gain of the residual map over matrices supported on ``pairs``."""
    _check_len(alpha, es, "alpha")
    n = es.projectors[0].shape[0]
    total = np.zeros((n, n))
    for a, b in pairs:
        total += np.abs(_block_compress(_pair_matrix(n, a, b), alpha, es))
    return float(total.max()) if len(pairs) else 0.0


def _support_mask(n, pairs):
    mask = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        mask[a, b] = mask[b, a] = True
    return mask


def build_delta(es, edit, alpha, m_mat, tol=1e-12):
    """Solve the support-correction fixed point and compress it.

    Iterates Y <- M + (I - sum alpha_i P_ii)(P_Omega(Y)) and returns
    Delta = (sum alpha_i P_ii)(P_Omega(Y)), which annihilates the cross
    blocks exactly and matches M on the support by construction.
    """
    _check_len(alpha, es, "alpha")
    m_mat = np.asarray(m_mat, dtype=np.float64)
    n = m_mat.shape[0]
    mask = _support_mask(n, edit.pairs)
    if not mask.any():
        return np.zeros((n, n))
    y = m_mat.copy()
    prev_change = np.inf
    stall = 0
    for _ in range(100):
        z = np.where(mask, y, 0.0)
        y_next = m_mat + _block_compress(z, alpha, es)
        change = float(np.abs(y_next - y).max())
        y = y_next
        if change <= tol:
            break
        if change >= prev_change:
            stall += 1
            if stall >= 3:
                raise NotContracting(
                    f"iterate change {change:.3e} stopped decreasing")
        else:
            stall = 0
        prev_change = change
    else:
        raise NotContracting(f"no convergence to {tol} in 100 iterations")
    z = np.where(mask, y, 0.0)
    delta = np.zeros((n, n))
    for a, p in zip(alpha, es.projectors):
        if a:
            delta += a * (p @ z @ p)
    return delta


def check_sufficient(g, edit, params, tol=1e-8):
    """Evaluate the five exact-recovery conditions for one edit instance.

    The contraction condition uses the smaller of the generic degree
    bound and the exact support-restricted gain, both valid surrogates.
    """
    a = adjacency(g)
    es = eigenspaces(a)
    _check_len(params.alpha, es, "alpha")
    _check_len(params.gamma, es, "gamma")
    n = g.n
    e_star = edit.e_star(n)
    mask = _support_mask(n, edit.pairs)
    sign = np.sign(e_star)
    r = sum(gm * p for gm, p in zip(params.gamma, es.projectors))
    m_mat = np.where(mask, sign - r, 0.0)
    delta = build_delta(es, edit, params.alpha, m_mat, tol=min(tol * 1e-4, 1e-12))
    q = r + delta

    sign_defect = float(np.abs(np.where(mask, delta + r - sign, 0.0)).max())
    off_dl = float(np.abs(np.where(mask, 0.0, delta)).max())
    off_r = float(np.abs(np.where(mask, 0.0, r)).max())
    cross = 0.0
    for i in range(es.m):
        for j in range(es.m):
            if i != j:
                cross = max(cross, float(np.abs(
                    es.projectors[i] @ delta @ es.projectors[j]).max()))
    gaps = []
    for i in range(es.m - 1):
        pii = es.projectors[i] @ delta @ es.projectors[i]
        pjj = es.projectors[i + 1] @ delta @ es.projectors[i + 1]
        norms = float(np.linalg.norm(pii, 2) + np.linalg.norm(pjj, 2))
        gaps.append(params.gamma[i] - params.gamma[i + 1] - norms)
    xu = xi_upper(params.alpha, max(edit.d, 1), es)
    xs = xi_support(params.alpha, edit.pairs, es)
    xi_hat = min(xu, xs)

    flags = {
        "sign_match": sign_defect <= tol,
        "off_support": off_dl + off_r < 1.0,
        "cross_block": cross <= tol,
        "gamma_gaps": all(gp > 0.0 for gp in gaps) if gaps else True,
        "contraction": xi_hat < 1.0,
    }
    margins = {
        "sign_defect": sign_defect,
        "off_support_margin": 1.0 - (off_dl + off_r),
        "cross_block_max": cross,
        "gamma_gap_min": min(gaps) if gaps else np.inf,
        "xi_hat": xi_hat,
        "xi_support": xs,
        "rho": rho(params.gamma, es),
    }
    return CertificateReport(
        rho=margins["rho"],
        xi_lower=xi_lower(params.alpha, max(edit.d, 1), es, probes=4, seed=0),
        xi_upper=xu,
        condition_flags=flags,
        margins=margins,
        Q=q,
        Delta=delta,
    )


def check_normal_cone(q, a, tol=1e-8):
    """Does q certify a as the maximizer over its own spectral orbit?

    Requires commutation and strictly interlaced restriction spectra:
    each eigenspace of a (by decreasing eigenvalue) must carry larger
    q-restriction eigenvalues than the next.
    """
    q = np.asarray(q, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if q.shape != a.shape:
        raise DimensionMismatch(f"shapes {q.shape} vs {a.shape}")
    if float(np.abs(q @ a - a @ q).max()) > tol:
        return False
    w, v = eig_sym(a)
    es = eigenspaces(a)
    bases = []
    start = 0
    for mult in es.multiplicities:
        bases.append(v[:, start:start + mult])
        start += mult
    lo_prev = None
    for b in bases:
        restricted = np.linalg.eigvalsh(b.T @ q @ b)
        if lo_prev is not None and lo_prev <= restricted.max() + tol:
            return False
        lo_prev = restricted.min()
    return True


def check_theorem(g, d, params):
    """Population-level conditions from the degree-d recovery theorem."""
    es = eigenspaces(adjacency(g))
    _check_len(params.alpha, es, "alpha")
    _check_len(params.gamma, es, "gamma")
    xu = xi_upper(params.alpha, d, es)
    rh = rho(params.gamma, es)
    norm_margin = 1.0 - (2.0 * xu + rh)
    gap_margin = np.inf
    if xu < 1.0:
        for i in range(es.m - 1):
            lhs = ((params.alpha[i] + params.alpha[i + 1]) * (1.0 + rh) * d
                   / (1.0 - xu))
            gap_margin = min(gap_margin,
                             params.gamma[i] - params.gamma[i + 1] - lhs)
    else:
        gap_margin = -np.inf
    margins = {"norm_margin": norm_margin, "gap_margin": float(gap_margin)}
    ok = norm_margin > 0.0 and gap_margin > 0.0
    return ok, margins


def default_params(es, c1=0.5, eps=0.01):
    """One-hot alpha on the most incoherent eigenspace, spaced gamma.

    Consecutive differences follow gamma_i - gamma_{i+1} =
    c1 (alpha_i + alpha_{i+1}) / mubar^2 + eps, shifted so the selected
    eigenspace contributes nothing to the aligned part.
    """
    if not check_projector_diagonal_uniformity(es):
        raise NotUniform("projector diagonals are not uniform")
    mu = np.asarray(es.mu)
    ell = int(np.argmax(mu))
    mubar = float(np.sort(mu)[-2]) if es.m >= 2 else float(mu[0])
    alpha = tuple(1.0 if i == ell else 0.0 for i in range(es.m))
    gamma = np.zeros(es.m)
    for i in range(es.m - 2, -1, -1):
        gap = c1 * (alpha[i] + alpha[i + 1]) / mubar ** 2 + eps
        gamma[i] = gamma[i + 1] + gap
    gamma -= gamma[ell]
    return CertificateParams(alpha, tuple(gamma))


def corollary_bound(es, c=1.0):
    """Edits-per-vertex capacity floor(c*n/kappa) from the second-highest
    eigenvalue multiplicity kappa."""
    if not check_projector_diagonal_uniformity(es):
        raise NotUniform("projector diagonals are not uniform")
    n = es.projectors[0].shape[0]
    return int(math.floor(c * n / es.kappa))
