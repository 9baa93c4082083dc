"""Hyperedge missingness simulation and candidate-set construction.

Masking partitions the hyperedge list into observed/missing with an exact
held-out count m = round(rho*|E|) (round-half-up). MCAR draws uniformly;
MNAR draws sequentially without replacement with weight proportional to the
highest degree among a hyperedge's members, so interactions of well-connected
actors are hidden preferentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CandidateError, DegenerateSplitError, SamplingError
from .graph import Graph
from .hypergraph import Hypergraph

MECHANISMS = ("MCAR", "MNAR")

NEGATIVE_ATTEMPT_BUDGET = 10 ** 4


@dataclass(frozen=True)
class MaskSplit:
    """Partition of hyperedge ids into observed and held-out sets."""

    observed: tuple[int, ...]
    missing: tuple[int, ...]
    rho: float
    mechanism: str
    seed: int


@dataclass(frozen=True)
class Candidate:
    nodes: tuple[int, ...]
    label: int
    provenance: str  # "held-out positive" | "sampled negative"


@dataclass(frozen=True)
class CandidateSet:
    items: tuple[Candidate, ...]

    def node_sets(self) -> list[tuple[int, ...]]:
        return [c.nodes for c in self.items]

    def labels(self) -> np.ndarray:
        return np.array([c.label for c in self.items], dtype=np.int64)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _weighted_draw_without_replacement(weights: np.ndarray, m: int,
                                       rng: np.random.Generator) -> list[int]:
    # successive draws: P(pick i) = w_i / sum(remaining w); cumsum walk keeps
    # the procedure identical to the textbook sequential scheme the
    # inclusion-probability oracle enumerates.
    alive = list(range(len(weights)))
    w = weights.astype(np.float64).copy()
    picked = []
    for _ in range(m):
        cum = np.cumsum(w[alive])
        r = rng.random() * cum[-1]
        k = int(np.searchsorted(cum, r, side="right"))
        k = min(k, len(alive) - 1)
        picked.append(alive.pop(k))
    return picked


def expansion_degrees(h: Hypergraph) -> np.ndarray:
    """Node degrees in the pairwise expansion of h (equals the source graph's
    degrees when h was derived from a graph, since cliques add no new pairs)."""
    pairs: set[tuple[int, int]] = set()
    for he in h.hyperedges:
        for a in range(len(he)):
            for b in range(a + 1, len(he)):
                pairs.add((he[a], he[b]))
    deg = np.zeros(h.n, dtype=np.int64)
    for u, v in pairs:
        deg[u] += 1
        deg[v] += 1
    return deg


def mask(h: Hypergraph, rho: float, mechanism: str, seed: int,
         mnar_alpha: float = 1.0) -> MaskSplit:
    """Hold out exactly round(rho*|E|) hyperedges.

    MCAR: uniform. MNAR: weight w(S) = (max member degree)^mnar_alpha, with
    degrees taken from the pairwise expansion of h. Deterministic given seed.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must be in (0,1)")
    if mechanism not in MECHANISMS:
        raise ValueError(f"mechanism must be one of {MECHANISMS}")
    if h.m < 2:
        raise ValueError("need at least 2 hyperedges to split")
    m = round_half_up(rho * h.m)
    if m == 0 or m == h.m:
        raise DegenerateSplitError(
            f"degenerate split: rho={rho} holds out {m} of {h.m} hyperedges")
    rng = np.random.default_rng(seed)
    if mechanism == "MCAR":
        weights = np.ones(h.m)
    else:
        deg = expansion_degrees(h)
        weights = np.array([float(max(deg[v] for v in he)) ** mnar_alpha
                            for he in h.hyperedges])
    picked = _weighted_draw_without_replacement(weights, m, rng)
    missing = tuple(sorted(picked))
    miss_set = set(missing)
    observed = tuple(i for i in range(h.m) if i not in miss_set)
    return MaskSplit(observed=observed, missing=missing, rho=rho,
                     mechanism=mechanism, seed=seed)


def observed_graph(h: Hypergraph, split: MaskSplit,
                   labels: Optional[Sequence[str]] = None) -> Graph:
    """Graph visible after masking: edge {u,v} iff some observed hyperedge
    contains both. Node set (and labels) unchanged; isolates allowed."""
    edges: set[tuple[int, int]] = set()
    for idx in split.observed:
        he = h.hyperedges[idx]
        for a in range(len(he)):
            for b in range(a + 1, len(he)):
                edges.add((he[a], he[b]))
    return Graph(h.n, edges, labels)


def observed_hypergraph(h: Hypergraph, split: MaskSplit) -> Hypergraph:
    return Hypergraph(h.n, [h.hyperedges[i] for i in split.observed])


def missing_hyperedges(h: Hypergraph, split: MaskSplit) -> list[tuple[int, ...]]:
    return [h.hyperedges[i] for i in split.missing]


def sample_negatives(h: Hypergraph, positives: Sequence[Sequence[int]],
                     ratio: int, seed: int) -> list[tuple[int, ...]]:
    """Size-matched negatives: for each positive of size k, `ratio` uniform
    k-subsets of V that are not hyperedges of h and not previously emitted."""
    if not positives:
        raise ValueError("positives must be nonempty")
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    rng = np.random.default_rng(seed)
    emitted: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    attempts_by_size: dict[int, int] = {}
    budget = NEGATIVE_ATTEMPT_BUDGET * ratio
    for pos in positives:
        k = len(pos)
        for _ in range(ratio):
            while True:
                attempts_by_size[k] = attempts_by_size.get(k, 0) + 1
                if attempts_by_size[k] > budget:
                    raise SamplingError(
                        f"could not sample a size-{k} non-hyperedge after "
                        f"{budget} attempts (graph too dense at that size)")
                cand = tuple(sorted(rng.choice(h.n, size=k, replace=False).tolist()))
                if cand in h.index or cand in emitted:
                    continue
                emitted.add(cand)
                out.append(cand)
                break
    return out


def hp_candidates(h: Hypergraph, split: MaskSplit, ratio: int, seed: int) -> CandidateSet:
    """Hyperlink-prediction candidates: held-out hyperedges as positives plus
    size-matched sampled negatives."""
    positives = missing_hyperedges(h, split)
    if not positives:
        raise CandidateError("no held-out hyperedges")
    negatives = sample_negatives(h, positives, ratio, seed)
    items = [Candidate(tuple(p), 1, "held-out positive") for p in positives]
    items += [Candidate(n, 0, "sampled negative") for n in negatives]
    return CandidateSet(tuple(items))


def lp_candidates(g: Graph, h: Hypergraph, split: MaskSplit, ratio: int,
                  seed: int) -> CandidateSet:
    """Link-prediction candidates: held-out dyads as positives, negatives
    drawn uniformly (without replacement) from the non-edges of the full g."""
    positives = [he for he in missing_hyperedges(h, split) if len(he) == 2]
    if not positives:
        raise CandidateError("no size-2 held-out hyperedges for the LP task")
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    non_edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)
                 if not g.has_edge(u, v)]
    need = ratio * len(positives)
    if need > len(non_edges):
        raise SamplingError(
            f"need {need} non-edge negatives but only {len(non_edges)} exist")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(non_edges), size=need, replace=False)
    items = [Candidate(tuple(p), 1, "held-out positive") for p in positives]
    items += [Candidate(non_edges[int(i)], 0, "sampled negative") for i in idx]
    return CandidateSet(tuple(items))


def dump_candidates(cs: CandidateSet, labels: Sequence[str]) -> str:
    """Debug CSV: `set;label;provenance`, node labels '|'-joined."""
    lines = ["set;label;provenance"]
    for c in cs.items:
        name = "|".join(labels[i] for i in c.nodes)
        lines.append(f"{name};{c.label};{c.provenance}")
    return "\n".join(lines) + "\n"
