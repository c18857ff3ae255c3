"""Named graph families and their spectral facts."""

from math import comb

import numpy as np
import pytest

from gedlb.errors import BadParams
from gedlb.families import (check_projector_diagonal_uniformity, check_srg,
                            extremal_e, gq24, hamming, johnson, kneser,
                            triangular, windmill)
from gedlb.graphs import adjacency
from gedlb.spectra import eigenspaces


def test_triangular_9_sizes():
    g = triangular(9)
    assert g.n == 36
    assert len(g.edges) == 252
    assert check_srg(g) == (36, 14, 7, 4)


def test_triangular_spectrum_multiplicities():
    es = eigenspaces(adjacency(triangular(9)))
    assert es.multiplicities == (1, 8, 27)
    assert np.allclose(es.distinct_values, (14.0, 5.0, -2.0))


def test_gq24_sizes_and_srg():
    g = gq24()
    assert g.n == 27
    assert len(g.edges) == 135
    assert check_srg(g) == (27, 10, 1, 5)
    es = eigenspaces(adjacency(g))
    assert es.multiplicities == (1, 20, 6)
    assert np.allclose(es.distinct_values, (10.0, 1.0, -5.0))


def test_windmill_sizes():
    g = windmill(4, 7)
    assert g.n == 25
    assert len(g.edges) == 84
    # hub is vertex 0 and touches everything
    assert g.degree(0) == 24
    assert check_srg(g) is None


def test_extremal_sizes():
    # chain of s cliques (sizes 3, with one or two 4s for the remainder)
    # linked by s - 1 bridge edges
    for n, edges in ((6, 7), (7, 10), (8, 13), (9, 11), (30, 39)):
        g = extremal_e(n)
        assert g.n == n
        assert len(g.edges) == edges, n


def test_extremal_9_maximal_stable_sets():
    # 2 * 3^(s-1) + 2^(s-1) maximal stable sets for n = 3s
    import networkx as nx

    g = extremal_e(9)
    comp = nx.complement(nx.Graph(list(g.edges)))
    comp.add_nodes_from(range(g.n))
    count = sum(1 for _ in nx.find_cliques(comp))
    assert count == 2 * 3 ** 2 + 2 ** 2


def test_johnson_multiplicities_formula():
    for k, l in ((5, 2), (6, 2), (6, 3)):
        g = johnson(k, l)
        assert g.n == comb(k, l)
        es = eigenspaces(adjacency(g))
        expected = tuple(
            comb(k, j) - (comb(k, j - 1) if j else 0) for j in range(l + 1))
        assert tuple(sorted(es.multiplicities)) == tuple(sorted(expected))


def test_johnson_k_1_is_complete():
    g = johnson(5, 1)
    assert g.n == 5 and len(g.edges) == 10


def test_kneser_petersen():
    g = kneser(5, 2)
    assert g.n == 10 and len(g.edges) == 15
    assert check_srg(g) == (10, 3, 0, 1)
    es = eigenspaces(adjacency(g))
    expected = tuple(
        comb(5, j) - (comb(5, j - 1) if j else 0) for j in range(3))
    assert tuple(sorted(es.multiplicities)) == tuple(sorted(expected))


def test_hamming_multiplicities_formula():
    for l, q in ((2, 3), (3, 2)):
        g = hamming(l, q)
        assert g.n == q ** l
        es = eigenspaces(adjacency(g))
        expected = tuple(comb(l, i) * (q - 1) ** i for i in range(l + 1))
        assert tuple(sorted(es.multiplicities)) == tuple(sorted(expected))


def test_hamming_2_2_is_c4():
    g = hamming(2, 2)
    assert g.n == 4 and len(g.edges) == 4
    assert all(g.degree(v) == 2 for v in range(4))


def test_check_srg_degenerate_cases():
    from gedlb.graphs import Graph
    assert check_srg(Graph(3)) is None                       # empty
    assert check_srg(johnson(4, 1)) is None                  # complete
    assert check_srg(Graph(3, frozenset({(0, 1)}))) is None  # irregular


def test_projector_diagonal_uniformity():
    assert check_projector_diagonal_uniformity(
        eigenspaces(adjacency(triangular(9))))
    assert check_projector_diagonal_uniformity(
        eigenspaces(adjacency(gq24())))
    assert check_projector_diagonal_uniformity(
        eigenspaces(adjacency(hamming(3, 2))))
    assert not check_projector_diagonal_uniformity(
        eigenspaces(adjacency(extremal_e(9))))
    assert not check_projector_diagonal_uniformity(
        eigenspaces(adjacency(windmill(4, 7))))


def test_family_bad_params():
    with pytest.raises(BadParams):
        johnson(2, 5)
    with pytest.raises(BadParams):
        windmill(0, 3)
    with pytest.raises(BadParams):
        extremal_e(2)
