"""Bond percolation configurations on H(d, n) and their components.

Edges live inside coordinate lines, each line a complete graph on n
vertices, so a configuration is stored line by line as sorted ranks into the
canonical pair order of K_n (pair (a, b) with a < b has rank b*(b-1)/2 + a).
Sampling walks that order with geometric gaps, which reproduces independent
Bernoulli(p) edges exactly while doing work proportional to the number of
occupied edges only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hammingperc.graph import DomainError, HammingGraph
from hammingperc.rng import stream_rng

__all__ = [
    "ClusterStats",
    "OccupiedEdgeSet",
    "PercolationConfig",
    "UnionFind",
    "connected_components",
    "sample_configuration",
    "sample_edges",
    "z_geq",
]


@dataclass(frozen=True)
class PercolationConfig:
    """Percolation on H(d, n) at edge probability p = (1 + epsilon)/degree."""

    graph: HammingGraph
    epsilon: float
    seed: int = 0

    def __post_init__(self):
        omega = self.graph.degree
        if not -1.0 <= self.epsilon <= omega - 1.0:
            raise DomainError(
                f"epsilon={self.epsilon} puts p outside [0, 1]; "
                f"valid range is [-1, {omega - 1}]"
            )

    @property
    def p(self) -> float:
        return (1.0 + self.epsilon) / self.graph.degree


def pair_rank(a: int, b: int) -> int:
    """Canonical rank of the within-line position pair {a, b}."""
    if a == b:
        raise DomainError("a pair needs two distinct positions")
    if a > b:
        a, b = b, a
    return b * (b - 1) // 2 + a


def ranks_to_positions(ranks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert pair_rank for an array of ranks; returns (a, b) with a < b."""
    r = np.asarray(ranks, dtype=np.int64)
    b = ((1.0 + np.sqrt(8.0 * r + 1.0)) // 2).astype(np.int64)
    # one-step correction guards against float rounding at bucket edges
    b = np.where(b * (b - 1) // 2 > r, b - 1, b)
    b = np.where((b + 1) * b // 2 <= r, b + 1, b)
    a = r - b * (b - 1) // 2
    return a, b


def _skip_sample(rng, M: int, p: float) -> np.ndarray:
    """Sorted ranks of occupied slots among M independent Bernoulli(p) slots."""
    if p <= 0.0 or M == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(M, dtype=np.int64)
    chunks = []
    pos = -1
    # enough gap draws to clear M slots in one batch almost always
    size = int(M * p + 4.0 * math.sqrt(M * p) + 16.0)
    while True:
        ranks = pos + np.cumsum(rng.geometric(p, size=size))
        cut = int(np.searchsorted(ranks, M))
        if cut < ranks.size:
            chunks.append(ranks[:cut])
            break
        chunks.append(ranks)
        pos = int(ranks[-1])
    return chunks[0] if len(chunks) == 1 else np.concatenate(chunks)


@dataclass
class OccupiedEdgeSet:
    """Occupied intra-line edges of one configuration.

    ``ranks_by_line[i]`` holds the sorted canonical pair ranks of line i,
    lines being ordered as in :meth:`HammingGraph.lines`.  Global vertex
    pairs are derived on demand.
    """

    graph: HammingGraph
    ranks_by_line: list
    _pairs: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def total_occupied(self) -> int:
        return sum(len(r) for r in self.ranks_by_line)

    def line_at(self, pos: int):
        """Line object for flat line position pos (axis-major order)."""
        per_axis = self.graph.n ** (self.graph.d - 1)
        axis, index = divmod(pos, per_axis)
        return self.graph.line(axis, index)

    def pairs_by_line(self, pos: int) -> np.ndarray:
        """(m, 2) array of occupied global vertex pairs of one line, u < v."""
        members = self.line_at(pos).members
        a, b = ranks_to_positions(self.ranks_by_line[pos])
        return np.stack([members[a], members[b]], axis=1)

    def all_pairs(self) -> np.ndarray:
        if self._pairs is None:
            parts = [
                self.pairs_by_line(i)
                for i in range(len(self.ranks_by_line))
                if len(self.ranks_by_line[i])
            ]
            self._pairs = (
                np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
            )
        return self._pairs

    def to_text(self) -> str:
        """Debug serialization, one occupied edge per line: "axis index u v"."""
        rows = []
        for pos in range(len(self.ranks_by_line)):
            if not len(self.ranks_by_line[pos]):
                continue
            line = self.line_at(pos)
            for u, v in self.pairs_by_line(pos):
                rows.append(f"{line.axis} {line.index} {u} {v}")
        return "\n".join(rows)

    @classmethod
    def from_pairs(cls, graph: HammingGraph, pairs) -> "OccupiedEdgeSet":
        """Build from explicit vertex pairs (indices or coordinate tuples)."""
        per_axis = graph.n ** (graph.d - 1)
        ranks = [[] for _ in range(graph.num_lines())]
        for u, v in pairs:
            if not isinstance(u, (int, np.integer)):
                u = graph.vertex_index(u)
            if not isinstance(v, (int, np.integer)):
                v = graph.vertex_index(v)
            cu, cv = graph.vertex_coords(u), graph.vertex_coords(v)
            axes = [j for j in range(graph.d) if cu[j] != cv[j]]
            if len(axes) != 1:
                raise DomainError(f"vertices {cu} and {cv} are not adjacent")
            axis = axes[0]
            pos = axis * per_axis + graph.line_index_of(u, axis)
            ranks[pos].append(pair_rank(cu[axis], cv[axis]))
        out = []
        for pos, rs in enumerate(ranks):
            arr = np.array(sorted(rs), dtype=np.int64)
            if len(np.unique(arr)) != len(arr):
                raise DomainError(f"duplicate edge in line position {pos}")
            out.append(arr)
        return cls(graph=graph, ranks_by_line=out)

    @classmethod
    def from_text(cls, graph: HammingGraph, text: str) -> "OccupiedEdgeSet":
        pairs = []
        for row in text.splitlines():
            if not row.strip():
                continue
            _axis, _index, u, v = row.split()
            pairs.append((int(u), int(v)))
        return cls.from_pairs(graph, pairs)


def sample_edges(g: HammingGraph, p: float, rng) -> OccupiedEdgeSet:
    """Independent Bernoulli(p) edges of H(d, n) drawn from ``rng``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability {p} outside [0, 1]")
    M = g.n * (g.n - 1) // 2
    ranks = [_skip_sample(rng, M, p) for _ in range(g.num_lines())]
    return OccupiedEdgeSet(graph=g, ranks_by_line=ranks)


def sample_configuration(cfg: PercolationConfig, stream: int = 0) -> OccupiedEdgeSet:
    """Draw one configuration: every edge occupied independently with
    probability p, via geometric skips along each line's pair order."""
    return sample_edges(cfg.graph, cfg.p, stream_rng(cfg.seed, stream))


class UnionFind:
    """Disjoint sets over range(V), path halving plus union by size."""

    def __init__(self, num_items: int):
        self.parent = list(range(num_items))
        self.size = [1] * num_items

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(self, u: int, v: int) -> bool:
        """Merge the sets of u and v; True if they were distinct."""
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        return True

    def union_pairs(self, pairs) -> None:
        """Merge along an iterable of (u, v) pairs (hot path, inlined finds)."""
        parent = self.parent
        size = self.size
        for u, v in pairs:
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            if u != v:
                if size[u] < size[v]:
                    u, v = v, u
                parent[v] = u
                size[u] += size[v]

    def roots(self) -> list[int]:
        parent = self.parent
        return [v for v in range(len(parent)) if parent[v] == v]

    def component_sizes(self) -> np.ndarray:
        """All component sizes, largest first."""
        parent = self.parent
        size = self.size
        out = sorted((size[v] for v in range(len(parent)) if parent[v] == v),
                     reverse=True)
        return np.array(out, dtype=np.int64)

    def labels(self) -> np.ndarray:
        """Per-item root, fully compressing every path on the way."""
        parent = self.parent
        lab = np.empty(len(parent), dtype=np.int64)
        for v in range(len(parent)):
            r = v
            while parent[r] != r:
                r = parent[r]
            w = v  # compress the walked path
            while parent[w] != r:
                parent[w], w = r, parent[w]
            lab[v] = r
        return lab


@dataclass(frozen=True)
class ClusterStats:
    """Component sizes of one configuration, largest first."""

    sizes: np.ndarray
    cmax: int
    c2: int
    labels: np.ndarray | None = None  # per-vertex component root, on request

    def __post_init__(self):
        if self.sizes.size and (np.diff(self.sizes) > 0).any():
            raise DomainError("sizes must be sorted descending")


def connected_components(occupied: OccupiedEdgeSet,
                         keep_labels: bool = False) -> ClusterStats:
    """Union-find over the occupied edges of one configuration."""
    uf = UnionFind(occupied.graph.num_vertices)
    uf.union_pairs(occupied.all_pairs().tolist())
    sizes = uf.component_sizes()
    return ClusterStats(
        sizes=sizes,
        cmax=int(sizes[0]),
        c2=int(sizes[1]) if sizes.size > 1 else 0,
        labels=uf.labels() if keep_labels else None,
    )


def z_geq(stats: ClusterStats, k: int) -> int:
    """Number of vertices lying in components of size at least k."""
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    s = stats.sizes
    return int(s[s >= k].sum())
