"""Clique hypergraphs: hyperedges are the dyads of a graph plus its maximal
cliques of size >= 3. Incidence matrices feed the spectral predictor encoder."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CliqueCapError
from .graph import Graph

DEFAULT_CLIQUE_CAP = 10 ** 6


class Hypergraph:
    """Node universe 0..n-1 plus a duplicate-free list of hyperedges.

    Hyperedges are stored as ascending node-id tuples; `index` maps the
    canonical tuple back to its position in `hyperedges`.
    """

    __slots__ = ("n", "hyperedges", "index")

    def __init__(self, n: int, hyperedges: Iterable[Sequence[int]]):
        self.n = n
        canon: list[tuple[int, ...]] = []
        index: dict[tuple[int, ...], int] = {}
        for he in hyperedges:
            t = tuple(sorted(he))
            if len(t) < 2:
                raise ValueError(f"hyperedge {t} has size < 2")
            if len(set(t)) != len(t):
                raise ValueError(f"hyperedge {t} has repeated nodes")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"hyperedge {t} outside node range 0..{n - 1}")
            if t in index:
                raise ValueError(f"duplicate hyperedge {t}")
            index[t] = len(canon)
            canon.append(t)
        self.hyperedges = tuple(canon)
        self.index = index

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    def __contains__(self, nodes) -> bool:
        return tuple(sorted(nodes)) in self.index

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m})"


def _degeneracy_order(g: Graph) -> list[int]:
    # peel minimum-degree vertices; ties by smallest id for determinism
    deg = {v: g.degree(v) for v in range(g.n)}
    buckets: list[set[int]] = [set() for _ in range(g.n)] if g.n else []
    for v, d in deg.items():
        buckets[d].add(v)
    order = []
    removed = set()
    lo = 0
    for _ in range(g.n):
        while lo < len(buckets) and not buckets[lo]:
            lo += 1
        v = min(buckets[lo])
        buckets[lo].discard(v)
        order.append(v)
        removed.add(v)
        for u in g.adj[v]:
            if u in removed:
                continue
            buckets[deg[u]].discard(u)
            deg[u] -= 1
            buckets[deg[u]].add(u)
            if deg[u] < lo:
                lo = deg[u]
    return order


def maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> list[tuple[int, ...]]:
    """All maximal cliques of g, as sorted tuples in lexicographic order.

    Pivoted Bron-Kerbosch over a degeneracy ordering. Raises CliqueCapError
    if more than `cap` cliques are found (pathological input guard).
    """
    out: list[tuple[int, ...]] = []

    def bk(r: list[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(tuple(sorted(r)))
            if len(out) > cap:
                raise CliqueCapError(f"more than {cap} maximal cliques")
            return
        pivot = max(p | x, key=lambda u: (len(p & g.adj[u]), -u))
        for v in sorted(p - g.adj[pivot]):
            bk(r + [v], p & g.adj[v], x & g.adj[v])
            p.remove(v)
            x.add(v)

    order = _degeneracy_order(g)
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = {u for u in g.adj[v] if pos[u] > pos[v]}
        earlier = {u for u in g.adj[v] if pos[u] < pos[v]}
        bk([v], later, earlier)
    return sorted(out)


def derive_hypergraph(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> Hypergraph:
    """Clique hypergraph of g: every edge as a dyad, plus every maximal
    clique of size >= 3. Dyads come first (sorted), then cliques."""
    hyperedges: list[tuple[int, ...]] = [(u, v) for u, v in g.edges]
    for c in maximal_cliques(g, cap=cap):
        if len(c) >= 3:
            hyperedges.append(c)
    return Hypergraph(g.n, hyperedges)


def incidence(h: Hypergraph) -> np.ndarray:
    """Dense 0/1 incidence matrix, shape n x |hyperedges|."""
    if h.m == 0:
        raise ValueError("hypergraph has no hyperedges")
    mat = np.zeros((h.n, h.m), dtype=np.float64)
    for j, he in enumerate(h.hyperedges):
        for i in he:
            mat[i, j] = 1.0
    return mat


def emit_hyperedges(h: Hypergraph, labels: Optional[Sequence[str]] = None) -> str:
    """Debug/export format: one hyperedge per line, comma-separated labels."""
    if labels is None:
        labels = [str(i) for i in range(h.n)]
    lines = [",".join(labels[i] for i in he) for he in h.hyperedges]
    return "\n".join(lines) + ("\n" if lines else "")
