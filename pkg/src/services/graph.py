"""
Directed Erdos-Renyi communication graphs and the On-Off Markov edge process.
Edge (u, v) means v receives u's broadcast. Self-loops never exist.
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import Iterable

import numpy as np

from errors import InvalidParameter

logger = logging.getLogger(__name__)


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise InvalidParameter(f"{name} must lie in [0, 1], got {value}")


class DirectedGraph:
    """Immutable adjacency; row u of `adjacency` is u's out-neighbor set."""

    __slots__ = ("adjacency", "_out_adj")

    def __init__(self, adjacency: np.ndarray):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise InvalidParameter(f"adjacency must be a non-empty square matrix, got shape {adj.shape}")
        if adj.diagonal().any():
            raise InvalidParameter("self-loops are not allowed")
        adj.flags.writeable = False
        self.adjacency = adj
        self._out_adj = None

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def out_adj(self) -> tuple[int, ...]:
        """Out-neighbor bitsets, bit v of entry u set iff (u, v) is an edge."""
        if self._out_adj is None:
            packed = np.packbits(self.adjacency, axis=1, bitorder="little")
            self._out_adj = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return self._out_adj

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum())

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def out_neighbors(self, u: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.adjacency[u]).tolist())

    def in_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.adjacency[:, v]).tolist())

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    __hash__ = None

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, edges={self.edge_count})"


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> DirectedGraph:
    """Explicit construction for deterministic fixtures."""
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameter(f"edge ({u}, {v}) outside 0..{n - 1}")
        adj[u, v] = True
    return DirectedGraph(adj)


def complete(n: int) -> DirectedGraph:
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    return DirectedGraph(adj)


def empty(n: int) -> DirectedGraph:
    return DirectedGraph(np.zeros((n, n), dtype=bool))


def from_adjacency_text(text: str) -> DirectedGraph:
    """
    Fixture format: first line n, then one line per node listing its
    out-neighbor indices, space-separated, ascending.
    """
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise InvalidParameter("adjacency text is empty")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise InvalidParameter(f"first line must be the node count, got {lines[0]!r}")
    rows = lines[1:]
    if len(rows) < n or any(r.strip() for r in rows[n:]):
        raise InvalidParameter(f"expected {n} adjacency lines, got {len([r for r in rows if r.strip()])} non-empty")
    edges = []
    for u, line in enumerate(rows[:n]):
        try:
            targets = [int(tok) for tok in line.split()]
        except ValueError:
            raise InvalidParameter(f"node {u}: non-integer neighbor in {line!r}")
        if targets != sorted(set(targets)):
            raise InvalidParameter(f"node {u}: neighbors must be distinct and ascending")
        if u in targets:
            raise InvalidParameter(f"node {u}: self-loop")
        edges.extend((u, v) for v in targets)
    return from_edges(n, edges)


def to_adjacency_text(g: DirectedGraph) -> str:
    lines = [str(g.n)]
    for u in range(g.n):
        lines.append(" ".join(str(v) for v in np.flatnonzero(g.adjacency[u])))
    return "\n".join(lines) + "\n"


def generate_er(n: int, p: float, rng: np.random.Generator) -> DirectedGraph:
    """
    G(n, p): each ordered pair u != v independently present with probability p.
    One uniform is drawn per ordered pair in row-major order (diagonal draws
    are discarded), so a seed fixes the graph.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    _check_probability("p", p)
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    return DirectedGraph(adj)


def evolve(g: DirectedGraph, p: float, alpha: float, rng: np.random.Generator) -> DirectedGraph:
    """
    One On-Off Markov step: each ordered pair keeps its state with probability
    1 - alpha, otherwise is redrawn from Bernoulli(p).
    """
    _check_probability("p", p)
    _check_probability("alpha", alpha)
    if alpha == 0.0:
        return g
    n = g.n
    resample = rng.random((n, n)) < alpha
    fresh = rng.random((n, n)) < p
    adj = np.where(resample, fresh, g.adjacency)
    np.fill_diagonal(adj, False)
    return DirectedGraph(adj)


def in_degrees(g: DirectedGraph) -> list[int]:
    return g.adjacency.sum(axis=0).tolist()


def out_degrees(g: DirectedGraph) -> list[int]:
    return g.adjacency.sum(axis=1).tolist()


def two_hop_set(g: DirectedGraph, u: int, v: int) -> frozenset[int]:
    """M_uv: nodes w with u -> w and w -> v."""
    if u == v:
        raise InvalidParameter("two_hop_set needs distinct endpoints")
    return frozenset(np.flatnonzero(g.adjacency[u] & g.adjacency[:, v]).tolist())


def two_hop_counts(g: DirectedGraph) -> np.ndarray:
    """|M_uv| for every ordered pair; the diagonal is meaningless."""
    # float32 matmul is exact for counts below 2**24
    a = g.adjacency.astype(np.float32)
    return np.rint(a @ a).astype(np.int64)


def concentration_check(g: DirectedGraph, delta: float, p: float) -> tuple[bool, bool]:
    """Whether the realized graph lies in the degree (E1) and two-hop (E2) concentration events."""
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta}")
    _check_probability("p", p)
    n = g.n
    mean = n * p
    lo, hi = (1 - delta) * mean, (1 + delta) * mean
    d_in = g.adjacency.sum(axis=0)
    d_out = g.adjacency.sum(axis=1)
    e1 = bool(np.all((d_in > lo) & (d_in < hi)) and np.all((d_out > lo) & (d_out < hi)))

    if n < 2:
        return e1, True
    counts = two_hop_counts(g)
    off_diagonal = ~np.eye(n, dtype=bool)
    e2 = bool(np.all(counts[off_diagonal] > (1 - delta) * (n - 2) * p * p))
    return e1, e2


class GraphMode(str, Enum):
    STATIC = "static"
    MARKOV = "markov"


class GraphProcess:
    """
    The graph sequence G_1, G_2, ... seen by a trial. Static mode never changes
    `current`; Markov mode applies one evolve() step per advance().
    """

    def __init__(self, mode: GraphMode, p: float, alpha: float, current: DirectedGraph):
        _check_probability("p", p)
        _check_probability("alpha", alpha)
        self.mode = GraphMode(mode)
        self.p = p
        self.alpha = alpha if self.mode is GraphMode.MARKOV else 0.0
        self.current = current

    @classmethod
    def static(cls, g: DirectedGraph, p: float = 1.0) -> "GraphProcess":
        return cls(GraphMode.STATIC, p, 0.0, g)

    @classmethod
    def sample(cls, n: int, p: float, alpha: float, rng: np.random.Generator) -> "GraphProcess":
        """Fresh G(n, p); Markov when alpha > 0, started from stationarity."""
        g = generate_er(n, p, rng)
        mode = GraphMode.MARKOV if alpha > 0 else GraphMode.STATIC
        return cls(mode, p, alpha, g)

    @property
    def n(self) -> int:
        return self.current.n

    def advance(self, rng: np.random.Generator) -> DirectedGraph:
        if self.mode is GraphMode.MARKOV:
            self.current = evolve(self.current, self.p, self.alpha, rng)
        return self.current
