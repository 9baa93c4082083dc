"""Synthetic hypergraphs with planted structure, used as learnability
benchmarks where a predictor must beat chance by a wide margin."""

from __future__ import annotations

import numpy as np

from .hypergraph import Hypergraph


def planted_community_hypergraph(n_nodes: int = 60, n_communities: int = 3,
                                 n_hyperedges: int = 60,
                                 sizes: tuple[int, ...] = (3, 4),
                                 seed: int = 0) -> Hypergraph:
    """Hyperedges drawn entirely inside equal-size node communities.

    Communities are contiguous id blocks; hyperedges are assigned to
    communities round-robin, with sizes drawn uniformly from `sizes` and
    members uniformly within the community (duplicates rejected).
    """
    if n_nodes % n_communities != 0:
        raise ValueError("n_nodes must be divisible by n_communities")
    block = n_nodes // n_communities
    if block < max(sizes):
        raise ValueError("communities too small for the requested sizes")
    rng = np.random.default_rng(seed)
    seen: set[tuple[int, ...]] = set()
    hyperedges: list[tuple[int, ...]] = []
    for i in range(n_hyperedges):
        comm = i % n_communities
        lo = comm * block
        while True:
            k = int(rng.choice(sizes))
            he = tuple(sorted(lo + rng.choice(block, size=k, replace=False)))
            if he not in seen:
                seen.add(he)
                hyperedges.append(he)
                break
    return Hypergraph(n_nodes, hyperedges)
