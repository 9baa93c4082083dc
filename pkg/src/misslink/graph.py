"""Simple undirected graphs: ingestion, projection, summary stats, core extraction.

Node ids are dense integers 0..n-1 with a string label per node. All
operations here are pure; graphs are treated as immutable after construction.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ParseError

logger = logging.getLogger(__name__)

# Recognized first-line header pairs for csv-format edgelists (lowercased).
_CSV_HEADER_PAIRS = {
    ("source", "target"),
    ("from", "to"),
    ("u", "v"),
    ("node1", "node2"),
    ("id1", "id2"),
    ("sender", "recipient"),
}


class Graph:
    """Simple undirected graph: no self-loops, no multi-edges, dense ids."""

    __slots__ = ("n", "labels", "adj", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 labels: Optional[Sequence[str]] = None):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError("labels length must equal node count")
        self.n = n
        self.labels = tuple(labels)
        adj: list[set[int]] = [set() for _ in range(n)]
        edge_set: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside node range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            a, b = (u, v) if u < v else (v, u)
            edge_set.add((a, b))
            adj[a].add(b)
            adj[b].add(a)
        self.adj = adj
        self.edges = tuple(sorted(edge_set))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, u: int) -> set[int]:
        return self.adj[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adj]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def label_of(self, u: int) -> str:
        return self.labels[u]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class SummaryStats:
    """Node/edge/density/triangle summary of a graph."""

    nodes: int
    edges: int
    density: float
    triangles: int

    def table_row(self) -> tuple[int, int, str, int]:
        """Row formatted like the published summary table.

        Density is rounded to 4 decimals and printed with 6 digits, which is
        the convention the reference tables use (0.228571 prints as 0.228600).
        """
        return (self.nodes, self.edges, f"{round(self.density, 4):.6f}", self.triangles)


@dataclass(frozen=True)
class MessageRecord:
    sender: str
    recipient: str
    weight: int
    timestamp: Optional[str] = None


@dataclass(frozen=True)
class MessageLog:
    """Directed weighted sender-recipient records (timestamps kept opaque)."""

    records: tuple[MessageRecord, ...] = field(default_factory=tuple)


def _build_from_label_pairs(pairs: list[tuple[str, str]]) -> Graph:
    ids: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    dup = 0
    for a, b in pairs:
        ia = ids.setdefault(a, len(ids))
        ib = ids.setdefault(b, len(ids))
        e = (ia, ib) if ia < ib else (ib, ia)
        if e in edges:
            dup += 1
        edges.add(e)
    if dup:
        logger.warning("collapsed %d duplicate edge lines", dup)
    labels = [None] * len(ids)
    for lab, i in ids.items():
        labels[i] = lab
    return Graph(len(ids), edges, labels)


def parse_edgelist(text: str, fmt: str = "plain") -> Graph:
    """Parse a two-column edgelist into a Graph.

    Lines starting with '#' and blank lines are ignored. Duplicate and
    reversed-duplicate lines collapse to one edge; self-loop lines are dropped
    (warned) together with their node mention. fmt is "plain" (whitespace
    separated) or "csv" (comma separated, optional recognized header).
    """
    if fmt not in ("plain", "csv"):
        raise ValueError(f"unknown edgelist format {fmt!r}")
    pairs: list[tuple[str, str]] = []
    self_loops = 0
    first_data_line = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if fmt == "plain":
            toks = line.split()
        else:
            toks = [t.strip() for t in line.split(",")]
        if len(toks) != 2 or not all(toks):
            raise ParseError(f"line {lineno}: expected 2 node tokens, got {len(toks)}")
        if fmt == "csv" and first_data_line:
            first_data_line = False
            if (toks[0].lower(), toks[1].lower()) in _CSV_HEADER_PAIRS:
                continue
        first_data_line = False
        if toks[0] == toks[1]:
            self_loops += 1
            continue
        pairs.append((toks[0], toks[1]))
    if self_loops:
        logger.warning("dropped %d self-loop lines", self_loops)
    if not pairs:
        raise ParseError("no edges found in input")
    return _build_from_label_pairs(pairs)


def emit_edgelist(g: Graph) -> str:
    """Inverse of parse_edgelist up to edge-set identity (plain format)."""
    lines = [f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_message_log(text: str) -> MessageLog:
    """Parse a message-log CSV with header sender,recipient,weight[,timestamp]."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(f.strip() for f in r)]
    if not rows:
        raise ParseError("empty message log")
    header = [h.strip().lower() for h in rows[0]]
    if header[:3] != ["sender", "recipient", "weight"]:
        raise ParseError("message log must start with header sender,recipient,weight")
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) not in (3, 4):
            raise ParseError(f"line {lineno}: expected 3 or 4 fields, got {len(row)}")
        sender, recipient, weight = row[0].strip(), row[1].strip(), row[2].strip()
        try:
            w = int(weight)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: weight {weight!r} is not an integer") from exc
        if w < 1:
            raise ParseError(f"line {lineno}: weight must be >= 1")
        ts = row[3].strip() if len(row) == 4 else None
        records.append(MessageRecord(sender, recipient, w, ts))
    return MessageLog(tuple(records))


def project_messages(log: MessageLog) -> tuple[Graph, dict[str, int]]:
    """Time-aggregated undirected projection of a message log.

    An edge {i,j} exists if at least one message was observed in either
    direction. Self-messages are dropped. Also returns per-node volume
    (total sent+received message count, keyed by label).
    """
    if not log.records:
        raise ValueError("message log is empty")
    kept = [r for r in log.records if r.sender != r.recipient]
    dropped = len(log.records) - len(kept)
    if dropped:
        logger.warning("dropped %d self-message records", dropped)
    ids: dict[str, int] = {}
    volumes: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for r in kept:
        ia = ids.setdefault(r.sender, len(ids))
        ib = ids.setdefault(r.recipient, len(ids))
        volumes[r.sender] = volumes.get(r.sender, 0) + r.weight
        volumes[r.recipient] = volumes.get(r.recipient, 0) + r.weight
        edges.add((ia, ib) if ia < ib else (ib, ia))
    labels = [None] * len(ids)
    for lab, i in ids.items():
        labels[i] = lab
    return Graph(len(ids), edges, labels), volumes


def triangle_count(g: Graph) -> int:
    """Number of closed node triples (each triangle counted once)."""
    total = 0
    for u, v in g.edges:
        total += len(g.adj[u] & g.adj[v])
    return total // 3


def graph_stats(g: Graph) -> SummaryStats:
    """Summary statistics: nodes, edges, density, triangles."""
    if g.n < 2:
        raise ValueError("summary statistics need at least 2 nodes")
    density = 2.0 * g.m / (g.n * (g.n - 1))
    return SummaryStats(nodes=g.n, edges=g.m, density=density, triangles=triangle_count(g))


def core_k(g: Graph, volumes: Optional[Mapping[str, float]], k: int) -> Graph:
    """Induced subgraph on the k highest-volume nodes.

    volumes maps node label to activity (message volume); when None, degree in
    g is used. Ties break by ascending label. If g.n <= k the graph is
    returned unchanged.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.n <= k:
        return g
    if volumes is None:
        vol = {g.labels[i]: float(g.degree(i)) for i in range(g.n)}
    else:
        vol = {g.labels[i]: float(volumes.get(g.labels[i], 0)) for i in range(g.n)}
    order = sorted(range(g.n), key=lambda i: (-vol[g.labels[i]], g.labels[i]))
    keep = sorted(order[:k])
    remap = {old: new for new, old in enumerate(keep)}
    kept_set = set(keep)
    edges = [(remap[u], remap[v]) for u, v in g.edges if u in kept_set and v in kept_set]
    return Graph(k, edges, [g.labels[i] for i in keep])
