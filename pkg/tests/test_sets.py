"""Invariant convex sets: function values, blocks, membership, tangency."""

from itertools import combinations

import numpy as np
import pytest

from gedlb.conic import ConeSpec, ConicProblem, Status, solve, svec
from gedlb.errors import BadParams, DimensionMismatch
from gedlb.families import extremal_e
from gedlb.graphs import Graph, adjacency
from gedlb.sets import (Box01, ConstraintBlocks, Intersection, InvStability,
                        Loopless, MaxCut, SchurHorn, _assemble, check_is_tangent,
                        emit_conic_blocks, f_value, g_value, make_set, membership)
from gedlb.spectra import project_schur_horn


def _complete(n):
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def _cycle(n):
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def _random_graph(rng, n, p=0.5):
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < p)
    return Graph(n, edges)


def _max_cut_brute(a):
    n = a.shape[0]
    best = 0.0
    for mask in range(1 << (n - 1)):
        side = np.array([(mask >> i) & 1 for i in range(n - 1)] + [0])
        cut = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                if side[i] != side[j]:
                    cut += a[i, j]
        best = max(best, cut)
    return best


def _stability_brute(g):
    non = set(g.edges)
    for size in range(g.n, 0, -1):
        for sub in combinations(range(g.n), size):
            if all((a, b) not in non for a, b in combinations(sub, 2)):
                return size
    return 0


# ---------------------------------------------------------------------------
# invariant function values

def test_f_complete_graphs():
    for n in (3, 5):
        assert abs(f_value(adjacency(_complete(n))) - 1.0) < 1e-6


def test_f_empty_graphs():
    for n in (3, 4, 5):
        assert abs(f_value(np.zeros((n, n))) - 1.0 / n) < 1e-5


def test_f_five_cycle():
    assert abs(f_value(adjacency(_cycle(5))) - 1.0 / np.sqrt(5)) < 1e-5


def test_g_zero_matrix():
    assert abs(g_value(np.zeros((4, 4)))) < 1e-8


def test_g_triangle():
    assert abs(g_value(adjacency(_complete(3))) - 2.25) < 1e-4


def test_g_single_edge():
    assert abs(g_value(adjacency(Graph(2, frozenset({(0, 1)})))) - 1.0) < 1e-5


def test_values_permutation_invariant():
    rng = np.random.default_rng(4)
    g = _random_graph(rng, 6)
    a = adjacency(g)
    for _ in range(3):
        perm = rng.permutation(6)
        ap = a[np.ix_(perm, perm)]
        assert abs(f_value(ap) - f_value(a)) < 1e-6
        assert abs(g_value(ap) - g_value(a)) < 1e-6


def test_f_monotone_in_edges():
    rng = np.random.default_rng(9)
    for _ in range(5):
        g = _random_graph(rng, 6)
        non = sorted(g.non_edges())
        if not non:
            continue
        i, j = non[int(rng.integers(len(non)))]
        a = adjacency(g)
        b = a.copy()
        b[i, j] = b[j, i] = 1.0
        assert f_value(b) >= f_value(a) - 1e-6


def test_g_monotone_in_edges():
    rng = np.random.default_rng(10)
    for _ in range(5):
        g = _random_graph(rng, 6)
        if not g.edges:
            continue
        edges = sorted(g.edges)
        i, j = edges[int(rng.integers(len(edges)))]
        a = adjacency(g)
        b = a.copy()
        b[i, j] = b[j, i] = 0.0
        assert g_value(b) <= g_value(a) + 1e-6


def test_bound_directions_against_brute_force():
    rng = np.random.default_rng(12)
    for _ in range(4):
        g = _random_graph(rng, 7)
        a = adjacency(g)
        assert g_value(a) >= _max_cut_brute(a) - 1e-6
        assert f_value(a) <= 1.0 / _stability_brute(g) + 1e-6


# ---------------------------------------------------------------------------
# variants and construction

def test_variant_validation():
    assert SchurHorn((-1.0, 2.0, -1.0)).lam == (2.0, -1.0, -1.0)
    with pytest.raises(BadParams):
        InvStability(0.0)
    with pytest.raises(BadParams):
        InvStability(1.5)
    with pytest.raises(BadParams):
        MaxCut(-0.1)
    with pytest.raises(BadParams):
        Intersection(())
    with pytest.raises(BadParams):
        Intersection((Intersection((Box01(),)),))


def test_make_set_examples():
    s = make_set(_complete(3), "SH")
    np.testing.assert_allclose(s.lam, [2.0, -1.0, -1.0], atol=1e-8)
    s = make_set(_complete(3), "MC")
    assert abs(s.level - 2.25) < 1e-4
    s = make_set(Graph(4, frozenset()), "IS")
    assert abs(s.level - 0.25) < 1e-5
    assert make_set(_complete(3), "Box") == Box01()
    assert make_set(_complete(3), "Loopless") == Loopless()
    with pytest.raises(BadParams):
        make_set(_complete(3), "XX")


def test_make_set_clamps_to_valid_levels():
    # numerically f(K_n) can land a hair above 1 and g of a near-empty
    # graph a hair below 0; construction must stay in the legal ranges
    s = make_set(_complete(6), "IS")
    assert s.level <= 1.0
    s = make_set(Graph(5, frozenset()), "MC")
    assert s.level >= 0.0


# ---------------------------------------------------------------------------
# constraint block structure

def test_blocks_schur_horn_small():
    b = emit_conic_blocks(SchurHorn((2.0, -1.0, -1.0)), 3)
    assert len(b.zero_rows) == 1
    assert len(b.nonneg_rows) == 0
    assert [s for s, _ in b.psd_blocks] == [3, 3]
    assert b.num_aux == 0


def test_blocks_schur_horn_middle_k():
    b = emit_conic_blocks(SchurHorn((3.0, 1.0, 0.0, -4.0)), 4)
    assert len(b.zero_rows) == 1
    assert len(b.nonneg_rows) == 1
    assert [s for s, _ in b.psd_blocks] == [4, 4, 4, 4]
    assert b.num_aux == 1 + 10


def test_blocks_inv_stability():
    b = emit_conic_blocks(InvStability(0.3), 4)
    assert len(b.nonneg_rows) == 10
    assert [s for s, _ in b.psd_blocks] == [4]
    assert b.num_aux == 10


def test_blocks_max_cut():
    b = emit_conic_blocks(MaxCut(1.5), 4)
    assert len(b.nonneg_rows) == 1
    assert [s for s, _ in b.psd_blocks] == [4]
    assert b.num_aux == 4


def test_blocks_box_loopless_intersection():
    assert len(emit_conic_blocks(Box01(), 3).nonneg_rows) == 12
    assert len(emit_conic_blocks(Loopless(), 3).zero_rows) == 3
    both = emit_conic_blocks(
        Intersection((SchurHorn((2.0, -1.0, -1.0)), Loopless())), 3)
    assert len(both.zero_rows) == 1 + 3
    assert [s for s, _ in both.psd_blocks] == [3, 3]


def test_blocks_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        emit_conic_blocks(SchurHorn((1.0, -1.0)), 3)


def _blocks_feasible(blocks, m):
    """Substitute X = m into the blocks and decide feasibility over the aux."""
    xs = svec(m)
    nv = xs.shape[0]
    rows, rhs = [], []
    sizes = []
    for pairs, r in blocks.zero_rows + blocks.nonneg_rows:
        fixed = sum(c * xs[v] for v, c in pairs if v < nv)
        rows.append([(v - nv, c) for v, c in pairs if v >= nv])
        rhs.append(r - fixed)
    for size, brows in blocks.psd_blocks:
        sizes.append(size)
        for pairs, r in brows:
            fixed = sum(c * xs[v] for v, c in pairs if v < nv)
            rows.append([(v - nv, c) for v, c in pairs if v >= nv])
            rhs.append(r - fixed)
    cones = ConeSpec(len(blocks.zero_rows), len(blocks.nonneg_rows), tuple(sizes))
    problem = ConicProblem(np.zeros(blocks.num_aux), _assemble(rows, blocks.num_aux),
                           np.array(rhs), cones)
    sol = solve(problem, tol=1e-7, max_iter=200000)
    if sol.status is Status.OPTIMAL:
        return True
    if sol.status is Status.PRIMAL_INFEASIBLE:
        return False
    raise AssertionError(f"inconclusive feasibility status {sol.status}")


def test_blocks_agree_with_membership_schur_horn():
    rng = np.random.default_rng(23)
    lam = np.array([3.0, 1.0, 0.0, -1.5, -2.5])
    s = SchurHorn(tuple(lam))
    blocks = emit_conic_blocks(s, 5)
    mean = lam.sum() / 5.0
    for _ in range(3):
        r = rng.standard_normal((5, 5))
        r = r + r.T
        inside = 0.5 * project_schur_horn(r, lam) + 0.5 * mean * np.eye(5)
        assert membership(s, inside)
        assert _blocks_feasible(blocks, inside)
    off_trace = np.diag(lam) + np.eye(5)
    spread = np.diag(lam + np.array([0.5, 0, 0, 0, -0.5]))
    for outside in (off_trace, spread):
        assert not membership(s, outside)
        assert not _blocks_feasible(blocks, outside)


def test_blocks_agree_with_membership_stability_and_cut():
    a5 = adjacency(_cycle(5))
    f5 = f_value(a5)
    assert membership(InvStability(f5 - 0.05), a5)
    assert _blocks_feasible(emit_conic_blocks(InvStability(f5 - 0.05), 5), a5)
    assert not membership(InvStability(f5 + 0.05), a5)
    assert not _blocks_feasible(emit_conic_blocks(InvStability(f5 + 0.05), 5), a5)

    a3 = adjacency(_complete(3))
    assert membership(MaxCut(2.35), a3)
    assert _blocks_feasible(emit_conic_blocks(MaxCut(2.35), 3), a3)
    assert not membership(MaxCut(2.15), a3)
    assert not _blocks_feasible(emit_conic_blocks(MaxCut(2.15), 3), a3)


# ---------------------------------------------------------------------------
# membership

def test_membership_schur_horn():
    rng = np.random.default_rng(31)
    g = _random_graph(rng, 6)
    a = adjacency(g)
    s = make_set(g, "SH")
    perm = rng.permutation(6)
    assert membership(s, a[np.ix_(perm, perm)])
    # the zero matrix is majorized by any zero-sum spectrum
    assert membership(make_set(_complete(3), "SH"), np.zeros((3, 3)))
    assert not membership(make_set(_complete(3), "SH"),
                          np.diag([2.5, -1.0, -1.5]))


def test_membership_function_variants():
    assert membership(MaxCut(2.25 + 1e-5), adjacency(_complete(3)))
    assert not membership(MaxCut(2.25), adjacency(_complete(4)))
    assert membership(InvStability(0.25), np.zeros((4, 4)))
    assert not membership(InvStability(0.9), np.zeros((4, 4)))


def test_membership_box_loopless_intersection():
    a = adjacency(_complete(3))
    assert membership(Box01(), a)
    assert not membership(Box01(), 2.0 * a)
    assert membership(Loopless(), a)
    assert not membership(Loopless(), np.eye(3))
    both = Intersection((make_set(_complete(3), "SH"), Loopless()))
    assert membership(both, a)
    assert not membership(both, np.eye(3))


# ---------------------------------------------------------------------------
# tangent cone of the stability set

def test_tangent_nonnegative_directions():
    rng = np.random.default_rng(40)
    g = _cycle(5)
    t = rng.uniform(0.0, 1.0, (5, 5))
    t = t + t.T
    assert check_is_tangent(g, t)
    assert check_is_tangent(g, np.zeros((5, 5)))


def test_tangent_triangle_edge_deletion_blocked():
    g = extremal_e(9)
    edges = sorted(g.edges)
    i, j = next(e for e in edges
                if any((min(e[0], k), max(e[0], k)) in g.edges
                       and (min(e[1], k), max(e[1], k)) in g.edges
                       for k in range(9) if k not in e))
    t = np.zeros((9, 9))
    t[i, j] = t[j, i] = -1.0
    assert not check_is_tangent(g, t)


def test_tangent_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        check_is_tangent(_cycle(5), np.zeros((4, 4)))
