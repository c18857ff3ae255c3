"""Symmetric eigendecomposition, eigenspace grouping, and spectral projections."""

from dataclasses import dataclass

import numpy as np

from ._native import isotonic_nonincreasing
from .errors import AmbiguousClustering, BadParams, DimensionMismatch, NoConvergence

DEFAULT_GROUPING_TOL = 1e-6


def _symmetrize(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadParams(f"expected a square matrix, got shape {m.shape}")
    if np.abs(m - m.T).max(initial=0.0) > 1e-10 * max(1.0, np.abs(m).max(initial=0.0)):
        raise BadParams("matrix is not symmetric")
    return 0.5 * (m + m.T)


def eig_sym(m):
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix."""
    m = _symmetrize(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return w[::-1].copy(), v[:, ::-1].copy()


@dataclass(frozen=True)
class EigStructure:
    """Grouped eigendecomposition, eigenspaces in decreasing eigenvalue order."""

    distinct_values: np.ndarray
    multiplicities: tuple
    projectors: tuple
    mu: np.ndarray
    grouping_tol: float

    @property
    def m(self):
        return len(self.distinct_values)

    @property
    def ell(self):
        """Index of the eigenspace with the largest incoherence."""
        return int(np.argmax(self.mu))

    @property
    def kappa(self):
        """Second-highest multiplicity."""
        return sorted(self.multiplicities)[-2] if self.m > 1 else self.multiplicities[0]


def eigenspaces(m, tol=DEFAULT_GROUPING_TOL):
    """Group eigenvalues within tol*max(1, ||M||_2) into eigenspaces."""
    w, v = eig_sym(m)
    scale = max(1.0, np.abs(w).max(initial=0.0))
    gap = tol * scale
    groups = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    # separation between adjacent clusters must clearly exceed the merge scale
    for a, b in zip(groups, groups[1:]):
        if w[a[-1]] - w[b[0]] < 10 * gap:
            raise AmbiguousClustering(
                f"clusters separated by {w[a[-1]] - w[b[0]]:.3e} < 10*tol*scale")
    projectors = []
    values = []
    mults = []
    for g in groups:
        block = v[:, g]
        projectors.append(block @ block.T)
        values.append(float(w[g].mean()))
        mults.append(len(g))
    mu = np.array([np.sqrt(max(np.diag(p).max(), 0.0)) for p in projectors])
    return EigStructure(np.array(values), tuple(mults), tuple(projectors), mu, tol)


def incoherences(es):
    """mu_i = max_a ||P_i e_a||_2 for each eigenprojector."""
    return np.array([np.sqrt(max(np.diag(p).max(), 0.0)) for p in es.projectors])


def project_psd(m):
    """Nearest positive semidefinite matrix in Frobenius norm."""
    w, v = eig_sym(m)
    w = np.maximum(w, 0.0)
    out = (v * w) @ v.T
    return 0.5 * (out + out.T)


def project_majorization(x, lam):
    """Euclidean projection of x onto {y : y majorized by lam}.

    Sorting commutes with the projection, so: sort x descending (stable),
    project via isotonic regression of (sorted x - sorted lam) onto the
    non-increasing cone, un-sort.
    """
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    if x.shape != lam.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {lam.shape} differ")
    order = np.argsort(-x, kind="stable")
    xs = x[order]
    lams = -np.sort(-lam)
    t = isotonic_nonincreasing(xs - lams)
    y = np.empty_like(x)
    y[order] = xs - t
    return y


def project_schur_horn(m, lam):
    """Frobenius projection onto the Schur-Horn orbitope {X : lambda(X) majorized by lam}."""
    w, v = eig_sym(m)
    y = project_majorization(w, lam)
    out = (v * y) @ v.T
    return 0.5 * (out + out.T)
