"""Dyad scoring heuristics on the observed graph, plus the mean lift that
turns any dyad scorer into a node-set scorer."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .graph import Graph

DyadScoreFn = Callable[[int, int], float]


def score_cn(g_obs: Graph, i: int, j: int) -> float:
    """Common-neighbor count |N(i) & N(j)|."""
    if i == j:
        raise ValueError("dyad endpoints must differ")
    return float(len(g_obs.adj[i] & g_obs.adj[j]))


def score_aa(g_obs: Graph, i: int, j: int) -> float:
    """Adamic-Adar: sum over common neighbors of 1/ln(degree).

    Common neighbors always have degree >= 2, so every term is finite.
    """
    if i == j:
        raise ValueError("dyad endpoints must differ")
    return float(sum(1.0 / math.log(g_obs.degree(w)) for w in g_obs.adj[i] & g_obs.adj[j]))


def score_null(i: int, j: int) -> float:
    return 0.5


class CommonNeighbors:
    name = "CN"
    probability_like = False

    def __init__(self, g_obs: Graph):
        self.g = g_obs

    def score(self, i: int, j: int) -> float:
        return score_cn(self.g, i, j)


class AdamicAdar:
    name = "AA"
    probability_like = False

    def __init__(self, g_obs: Graph):
        self.g = g_obs

    def score(self, i: int, j: int) -> float:
        return score_aa(self.g, i, j)


class NullTie:
    name = "Null"
    probability_like = True

    def __init__(self, g_obs: Graph = None):
        pass

    def score(self, i: int, j: int) -> float:
        return 0.5


class MatrixCompletion:
    """Rank-r symmetric spectral reconstruction of the observed adjacency.

    Eigenpairs are kept in order of descending |lambda| (positive sign wins
    ties), and reconstructed entries are clamped to [0,1].
    """

    name = "MatComp"
    probability_like = False

    def __init__(self, g_obs: Graph, rank: int = None):
        if rank is None:
            rank = min(16, g_obs.n - 1)
        if rank < 1 or rank > g_obs.n:
            raise ValueError(f"rank must be in 1..{g_obs.n}")
        self.rank = rank
        a = g_obs.adjacency_matrix()
        vals, vecs = np.linalg.eigh(a)
        order = sorted(range(len(vals)), key=lambda k: (-abs(vals[k]), -vals[k]))
        keep = order[:rank]
        recon = (vecs[:, keep] * vals[keep]) @ vecs[:, keep].T
        self._recon = (recon + recon.T) / 2.0  # exact dyad symmetry

    def score(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("dyad endpoints must differ")
        return float(min(1.0, max(0.0, self._recon[i, j])))


def fit_matcomp(g_obs: Graph, rank: int = None) -> MatrixCompletion:
    return MatrixCompletion(g_obs, rank)


def lift(scorer, s: Sequence[int]) -> float:
    """Mean of the dyad scores over all pairs inside s; identity for |s|=2."""
    nodes = tuple(s)
    if len(nodes) < 2:
        raise ValueError("lift needs a node-set of size >= 2")
    pair_scores = [scorer.score(u, v) for u, v in combinations(nodes, 2)]
    return float(sum(pair_scores) / len(pair_scores))
