"""Standard-form cone programs with hand-checkable answers."""

import numpy as np
import pytest
import scipy.sparse as sp

from gedlb.conic import (ConeSpec, ConicProblem, Solution, Status, project_cone,
                         smat, solve, svec)
from gedlb.errors import BadParams, DimensionMismatch

OBJ_TOL = 5e-5


def _solve(c, rows, b, cones, **kw):
    a = sp.csc_matrix(np.array(rows, dtype=float).reshape(len(b), len(c)))
    return solve(ConicProblem(np.array(c, float), a, np.array(b, float), cones), **kw)


def test_svec_smat_roundtrip():
    rng = np.random.default_rng(1)
    for n in (1, 2, 5):
        m = rng.standard_normal((n, n))
        m = m + m.T
        v = svec(m)
        assert v.shape == (n * (n + 1) // 2,)
        np.testing.assert_allclose(smat(v), m, atol=1e-12)
        w = rng.standard_normal((n, n))
        w = w + w.T
        np.testing.assert_allclose(svec(m) @ svec(w), np.trace(m @ w), atol=1e-10)


def test_smat_rejects_non_triangular_length():
    with pytest.raises(DimensionMismatch):
        smat(np.zeros(4))
    with pytest.raises(DimensionMismatch):
        svec(np.zeros((2, 3)))


def test_cone_spec_validation():
    with pytest.raises(BadParams):
        ConeSpec(zero_dim=-1)
    with pytest.raises(BadParams):
        ConeSpec(psd_block_sizes=(0,))
    assert ConeSpec(2, 3, (2, 3)).total_dim == 2 + 3 + 3 + 6


def test_problem_validation():
    a = sp.csc_matrix(np.ones((2, 1)))
    with pytest.raises(DimensionMismatch):
        ConicProblem(np.ones(1), a, np.ones(3), ConeSpec(zero_dim=3))
    with pytest.raises(DimensionMismatch):
        ConicProblem(np.ones(1), a, np.ones(2), ConeSpec(zero_dim=1))


def test_project_cone_segments():
    cones = ConeSpec(1, 2, (2,))
    v = np.array([5.0, -1.0, 2.0, -1.0, 0.0, -1.0])
    out = project_cone(cones, v)
    assert out[0] == 0.0
    np.testing.assert_allclose(out[1:3], [0.0, 2.0])
    w = np.linalg.eigvalsh(smat(out[3:]))
    assert w.min() >= -1e-12
    with pytest.raises(DimensionMismatch):
        project_cone(cones, np.zeros(5))


def test_single_equality():
    # min x  s.t.  x = 1
    sol = _solve([1.0], [[1.0]], [1.0], ConeSpec(zero_dim=1))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 1.0) < OBJ_TOL


def test_single_inequality():
    # min x  s.t.  x >= 2  (s = -2 + x >= 0 written as -x + s = -2)
    sol = _solve([1.0], [[-1.0]], [-2.0], ConeSpec(nonneg_dim=1))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 2.0) < OBJ_TOL


def test_two_variable_lp():
    # min x + 2y  s.t.  x + y = 1, x >= 0, y >= 0  ->  1 at (1, 0)
    sol = _solve([1.0, 2.0],
                 [[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
                 [1.0, 0.0, 0.0],
                 ConeSpec(zero_dim=1, nonneg_dim=2))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 1.0) < OBJ_TOL
    np.testing.assert_allclose(sol.x, [1.0, 0.0], atol=1e-4)


def test_maximization_sign():
    # max x  s.t.  x <= 1, as min -x
    sol = _solve([-1.0], [[1.0]], [1.0], ConeSpec(nonneg_dim=1))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - (-1.0)) < OBJ_TOL


def test_psd_offdiagonal_one():
    # min t  s.t.  [[t, 1], [1, t]] psd  ->  t = 1
    b = svec(np.array([[0.0, 1.0], [1.0, 0.0]]))
    col = -svec(np.eye(2))
    sol = _solve([1.0], col.reshape(3, 1), b, ConeSpec(psd_block_sizes=(2,)))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 1.0) < OBJ_TOL


def test_trace_above_identity():
    # min Tr X  s.t.  X - I psd  ->  2
    c = svec(np.eye(2))
    a = -np.eye(3)
    b = -svec(np.eye(2))
    sol = _solve(c, a, b, ConeSpec(psd_block_sizes=(2,)))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 2.0) < OBJ_TOL


def test_largest_eigenvalue():
    # min t  s.t.  t I - A psd, A the 2-cycle adjacency  ->  lambda_max = 1
    a2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    sol = _solve([1.0], (-svec(np.eye(2))).reshape(3, 1), -svec(a2),
                 ConeSpec(psd_block_sizes=(2,)))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 1.0) < OBJ_TOL


def test_mixed_cones():
    # min x + u  s.t.  x >= 1, u >= 2 (u as a 1x1 psd block)  ->  3
    sol = _solve([1.0, 1.0],
                 [[-1.0, 0.0], [0.0, -1.0]],
                 [-1.0, -2.0],
                 ConeSpec(nonneg_dim=1, psd_block_sizes=(1,)))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 3.0) < OBJ_TOL


def test_primal_infeasible():
    # x = 1 and x = 2 cannot both hold
    sol = _solve([1.0], [[1.0], [1.0]], [1.0, 2.0], ConeSpec(zero_dim=2))
    assert sol.status is Status.PRIMAL_INFEASIBLE


def test_dual_infeasible():
    # min -x  s.t.  x >= 0 is unbounded below
    sol = _solve([-1.0], [[-1.0]], [0.0], ConeSpec(nonneg_dim=1))
    assert sol.status is Status.DUAL_INFEASIBLE


def test_badly_scaled_data():
    # min x + 1e4 y  s.t.  1e4 x = 1, y >= 1e-4  ->  1.0001
    sol = _solve([1.0, 1e4],
                 [[1e4, 0.0], [0.0, -1.0]],
                 [1.0, -1e-4],
                 ConeSpec(zero_dim=1, nonneg_dim=1))
    assert sol.status is Status.OPTIMAL
    assert abs(sol.objective - 1.0001) < 1e-3


def test_deterministic_reruns():
    b = svec(np.array([[0.0, 1.0], [1.0, 0.0]]))
    col = -svec(np.eye(2))
    a = sp.csc_matrix(col.reshape(3, 1))
    prob = ConicProblem(np.array([1.0]), a, b, ConeSpec(psd_block_sizes=(2,)))
    first = solve(prob)
    second = solve(prob)
    assert np.array_equal(first.x, second.x)
    assert np.array_equal(first.y, second.y)
    assert first.objective == second.objective
    assert first.iterations == second.iterations


def test_max_iterations_status():
    sol = _solve([1.0, 2.0],
                 [[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
                 [1.0, 0.0, 0.0],
                 ConeSpec(zero_dim=1, nonneg_dim=2),
                 max_iter=2)
    assert isinstance(sol, Solution)
    assert sol.status is not Status.OPTIMAL
