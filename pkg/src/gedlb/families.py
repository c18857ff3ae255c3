"""Deterministic generators for the named graph families, plus validators."""

import itertools

import numpy as np

from ._gq24_table import EDGES as _GQ24_EDGES
from .errors import BadParams, ConstructionInvalid
from .graphs import Graph, adjacency


def johnson(k, l):
    """Vertices are the l-subsets of {0..k-1}; adjacent iff they share l-1 elements."""
    if not 0 < l < k:
        raise BadParams(f"johnson needs 0 < l < k, got ({k},{l})")
    verts = list(itertools.combinations(range(k), l))
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if len(set(u) & set(v)) == l - 1:
                edges.add((i, index[v]))
    return Graph(len(verts), frozenset(edges))


def kneser(k, l):
    """Same vertex set as johnson(k,l); adjacent iff the subsets are disjoint."""
    if not (l > 0 and k >= 2 * l):
        raise BadParams(f"kneser needs 0 < l and k >= 2l, got ({k},{l})")
    verts = list(itertools.combinations(range(k), l))
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if not set(u) & set(v):
                edges.add((i, index[v]))
    return Graph(len(verts), frozenset(edges))


def hamming(l, q):
    """Vertices are words in {0..q-1}^l; adjacent iff Hamming distance 1."""
    if l < 1 or q < 2:
        raise BadParams(f"hamming needs l >= 1 and q >= 2, got ({l},{q})")
    verts = list(itertools.product(range(q), repeat=l))
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for i, u in enumerate(verts):
        for pos in range(l):
            for sym in range(u[pos] + 1, q):
                w = u[:pos] + (sym,) + u[pos + 1:]
                edges.add((i, index[w]))
    return Graph(len(verts), frozenset(edges))


def triangular(k):
    """The triangular graph T(k) = J(k,2), srg(k(k-1)/2, 2(k-2), k-2, 4)."""
    if k < 4:
        raise BadParams(f"triangular needs k >= 4, got {k}")
    return johnson(k, 2)


def gq24():
    """Collinearity graph of the generalized quadrangle GQ(2,4), srg(27,10,1,5).

    Shipped as a frozen edge table (complement of the Schlafli graph) and
    re-validated on every call.
    """
    g = Graph(27, frozenset(_GQ24_EDGES))
    if check_srg(g) != (27, 10, 1, 5):
        raise ConstructionInvalid("embedded GQ(2,4) table failed srg(27,10,1,5) validation")
    return g


def windmill(m, n):
    """m copies of K_n glued at a single hub vertex (vertex 0)."""
    if m < 1 or n < 2:
        raise BadParams(f"windmill needs m >= 1 and n >= 2, got ({m},{n})")
    edges = set()
    for blade in range(m):
        verts = [0] + [1 + blade * (n - 1) + t for t in range(n - 1)]
        edges.update(itertools.combinations(verts, 2))
    return Graph(m * (n - 1) + 1, frozenset(edges))


def extremal_e(n):
    """Connected n-vertex graph maximizing the number of maximum stable sets.

    n = 3s+r: for r=0, s triangles; r=1, (s-1) triangles and one K4; r=2,
    (s-2) triangles and two K4s.  Triangles come first; the hub is vertex 0
    (lowest index of the first clique) and every later clique attaches its
    lowest-index vertex to the hub.
    """
    if n < 6:
        raise BadParams(f"extremal_e needs n >= 6, got {n}")
    s, r = divmod(n, 3)
    sizes = {0: [3] * s, 1: [3] * (s - 1) + [4], 2: [3] * (s - 2) + [4, 4]}[r]
    edges = set()
    start = 0
    for size in sizes:
        verts = range(start, start + size)
        edges.update(itertools.combinations(verts, 2))
        if start > 0:
            edges.add((0, start))
        start += size
    return Graph(n, frozenset(edges))


def check_srg(g):
    """srg parameters (n, r, d_a, d_na) if strongly regular, else None."""
    n = g.n
    if n < 2 or not g.edges or len(g.edges) == n * (n - 1) // 2:
        return None
    a = adjacency(g)
    deg = a.sum(axis=0)
    if len(set(deg)) != 1:
        return None
    common = a @ a
    adj_counts = {int(common[i, j]) for i, j in g.edges}
    non_counts = {int(common[i, j]) for i, j in g.non_edges()}
    if len(adj_counts) == 1 and len(non_counts) == 1:
        return (n, int(deg[0]), adj_counts.pop(), non_counts.pop())
    return None


def check_projector_diagonal_uniformity(es, tol=1e-8):
    """True iff every eigenprojector has a constant diagonal within tol.

    This is the consequence of vertex-transitivity that the certificate
    construction actually relies on.
    """
    for p in es.projectors:
        d = np.diag(p)
        if d.max() - d.min() > tol:
            return False
    return True
