"""Graph values, edit sets, and the exact brute-force edit-distance oracle."""

from dataclasses import dataclass, field

import numpy as np

from ._native import ged_search
from .errors import BadParams, InconsistentEdit, InfeasibleMix, TooLarge

EXACT_GED_BUDGET = 9
EXACT_GED_EXT_BUDGET = 8


def _normalize_pairs(pairs, n, what):
    out = set()
    for pair in pairs:
        i, j = pair
        if i == j:
            raise BadParams(f"self-loop {pair} in {what}")
        if not (0 <= i < n and 0 <= j < n):
            raise BadParams(f"endpoint out of range in {what}: {pair}")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Simple loopless unlabeled graph on vertices 0..n-1."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise BadParams(f"negative vertex count {self.n}")
        object.__setattr__(self, "edges", _normalize_pairs(self.edges, self.n, "edges"))

    def non_edges(self):
        return frozenset((i, j) for i in range(self.n) for j in range(i + 1, self.n)
                         if (i, j) not in self.edges)

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)


@dataclass(frozen=True)
class VertexIndexedAdjacency:
    """Symmetric 0/1 matrix with vertex-presence indicators on the diagonal."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.shape != (self.n, self.n):
            raise BadParams(f"entries shape {m.shape} does not match n={self.n}")
        if not np.array_equal(m, m.T) or not np.isin(m, (0.0, 1.0)).all():
            raise BadParams("entries must be a symmetric 0/1 matrix")
        present = np.diag(m) == 1.0
        off = m.copy()
        np.fill_diagonal(off, 0.0)
        bad = off.astype(bool) & ~(present[:, None] & present[None, :])
        if bad.any():
            raise BadParams("edge incident to an absent vertex")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class EditSet:
    """Edge additions and deletions; E* is +1 on adds, -1 on deletes."""

    adds: frozenset = field(default_factory=frozenset)
    deletes: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        mx = max((max(p) for p in set(self.adds) | set(self.deletes)), default=-1)
        object.__setattr__(self, "adds", _normalize_pairs(self.adds, mx + 1, "adds"))
        object.__setattr__(self, "deletes", _normalize_pairs(self.deletes, mx + 1, "deletes"))
        if self.adds & self.deletes:
            raise InconsistentEdit("adds and deletes overlap")

    @property
    def pairs(self):
        return self.adds | self.deletes

    @property
    def d(self):
        """Maximum number of edited pairs incident to any single vertex."""
        counts = {}
        for i, j in self.pairs:
            counts[i] = counts.get(i, 0) + 1
            counts[j] = counts.get(j, 0) + 1
        return max(counts.values(), default=0)

    def e_star(self, n):
        e = np.zeros((n, n))
        for i, j in self.adds:
            e[i, j] = e[j, i] = 1.0
        for i, j in self.deletes:
            e[i, j] = e[j, i] = -1.0
        return e


def adjacency(g):
    """Zero-diagonal 0/1 adjacency matrix of ``g``."""
    a = np.zeros((g.n, g.n))
    for i, j in g.edges:
        a[i, j] = a[j, i] = 1.0
    return a


def vertex_indexed(g, size=None):
    """Pad ``g`` to ``size`` vertices as a VertexIndexedAdjacency.

    The graph occupies the first ``g.n`` indices; padded vertices are absent
    (zero diagonal).
    """
    size = g.n if size is None else size
    if size < g.n:
        raise BadParams(f"cannot pad graph with {g.n} vertices into size {size}")
    m = np.zeros((size, size))
    for i, j in g.edges:
        m[i, j] = m[j, i] = 1.0
    for i in range(g.n):
        m[i, i] = 1.0
    return VertexIndexedAdjacency(size, m)


def apply_edits(g, e):
    """Graph whose adjacency is adjacency(g) + E*."""
    if not e.adds <= g.non_edges():
        raise InconsistentEdit("add targets an existing edge or invalid pair")
    if not e.deletes <= g.edges:
        raise InconsistentEdit("delete targets a non-edge")
    return Graph(g.n, (g.edges - e.deletes) | e.adds)


def random_edits(g, count, add_fraction, seed):
    """Uniformly sampled EditSet with round(count*add_fraction) additions.

    Rounding is half-down, so an odd budget at a 50/50 mix sends the extra
    edit to the delete side.  Deterministic given ``seed``.
    """
    if count < 0 or not 0.0 <= add_fraction <= 1.0:
        raise BadParams("count must be nonnegative and add_fraction in [0,1]")
    n_adds = int(count * add_fraction + 0.5 - 1e-12)
    n_dels = count - n_adds
    non_edges = sorted(g.non_edges())
    edges = sorted(g.edges)
    if n_adds > len(non_edges) or n_dels > len(edges):
        raise InfeasibleMix(
            f"need {n_adds} adds / {n_dels} deletes, graph has "
            f"{len(non_edges)} non-edges / {len(edges)} edges")
    rng = np.random.default_rng(seed)
    adds = [non_edges[k] for k in rng.permutation(len(non_edges))[:n_adds]]
    dels = [edges[k] for k in rng.permutation(len(edges))[:n_dels]]
    return EditSet(frozenset(adds), frozenset(dels))


def _degree_order(a, with_diag):
    key = a.sum(axis=0) + (np.diag(a) * a.shape[0] if with_diag else 0)
    return np.argsort(-key, kind="stable")


def exact_ged(g1, g2):
    """min over permutations P of (1/2)*||P A1 P^T - A2||_1, by branch and bound."""
    if g1.n != g2.n:
        raise BadParams(f"vertex counts differ: {g1.n} vs {g2.n}")
    if g1.n > EXACT_GED_BUDGET:
        raise TooLarge(f"n={g1.n} exceeds exact budget {EXACT_GED_BUDGET}")
    a1, a2 = adjacency(g1), adjacency(g2)
    # relabeling g2 by descending degree tightens pruning and changes nothing
    order = _degree_order(a2, with_diag=False)
    a2 = a2[np.ix_(order, order)]
    return int(ged_search(a1, a2, False))


def exact_ged_ext(g1, g2):
    """Extended edit distance with unit vertex insertions/deletions.

    Both graphs are padded to max(n1, n2) as vertex-indexed matrices; the
    distance counts differing upper-triangle entries, diagonal included,
    minimized over permutations.
    """
    size = max(g1.n, g2.n)
    if size > EXACT_GED_EXT_BUDGET:
        raise TooLarge(f"n={size} exceeds extended exact budget {EXACT_GED_EXT_BUDGET}")
    m1 = vertex_indexed(g1, size).entries
    m2 = vertex_indexed(g2, size).entries
    order = _degree_order(m2, with_diag=True)
    m2 = m2[np.ix_(order, order)]
    return int(ged_search(m1, m2, True))
