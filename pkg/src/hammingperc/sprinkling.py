"""Two-round edge exposure: a thinned first round plus a sprinkle.

Splitting Bernoulli(p) edges into two independent rounds leaves the combined
configuration exactly Bernoulli(p) per edge: round one keeps an edge with
probability p_minus = (p - s) / (1 - s), round two occupies each still-vacant
edge with probability s = eta / degree, and the union is occupied with
probability p_minus + (1 - p_minus) * s = p.  The report records the large
first-round clusters, how widely each spreads over horizontal lines, and
whether the sprinkle welds all of them into a single component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hammingperc.graph import DomainError
from hammingperc.percolation import (
    OccupiedEdgeSet,
    PercolationConfig,
    UnionFind,
    _skip_sample,
    ranks_to_positions,
    sample_edges,
)
from hammingperc.rng import stream_rng

__all__ = ["SprinklingReport", "two_round_exposure"]


@dataclass(frozen=True)
class SprinklingReport:
    """Outcome of one two-round exposure.

    A first-round cluster counts as large when it holds at least
    ceil(eta * V) vertices (at least 1 when eta == 0), and a horizontal line
    is good for a cluster when it carries at least eta * V / (4n) of its
    vertices.
    """

    p_minus: float
    eta: float
    clusters_before: np.ndarray = field(compare=False)  # large sizes, desc
    z_prime: int  # vertices covered by the large clusters
    good_lines_before: np.ndarray | None = field(compare=False)  # d=2 only
    merged_after: bool
    cmax_after: int
    occupied_before: int
    occupied_after: int
    edges_after: OccupiedEdgeSet | None = field(default=None, compare=False)


def _complement_ranks(occ: np.ndarray, M: int, rate: float, rng) -> np.ndarray:
    """Bernoulli(rate) subset of the M - len(occ) vacant slots, as ranks.

    Slot q of the complement maps to rank q + (number of occupied ranks
    jumped over); a single pointer walk handles all picks in ascending
    order.
    """
    picks = _skip_sample(rng, M - len(occ), rate)
    if not picks.size:
        return picks
    out = np.empty(picks.size, dtype=np.int64)
    occupied = occ.tolist()
    ptr = 0
    for i, q in enumerate(picks.tolist()):
        while ptr < len(occupied) and occupied[ptr] <= q + ptr:
            ptr += 1
        out[i] = q + ptr
    return out


def two_round_exposure(cfg: PercolationConfig, eta: float, stream: int = 0,
                       keep_edges: bool = False) -> SprinklingReport:
    """Expose one configuration in two rounds and report the merge outcome.

    Round one samples every edge at the reduced probability p_minus and its
    components are measured; round two sprinkles each vacant edge at rate
    eta / degree and the large first-round clusters are checked for having
    merged.  Both rounds consume the single stream ``stream`` of cfg.seed,
    so a report is reproducible from (cfg, eta, stream) alone.  With
    ``keep_edges`` the combined configuration is returned as well.
    """
    g = cfg.graph
    V = g.num_vertices
    n = g.n
    p = cfg.p
    if eta < 0.0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    rate = eta / g.degree
    if rate >= 1.0 or rate > p:
        raise DomainError(
            f"sprinkle rate eta/degree = {rate:.6g} must stay below 1 "
            f"and at most p = {p:.6g}"
        )
    p_minus = (p - rate) / (1.0 - rate)

    rng = stream_rng(cfg.seed, stream)
    first = sample_edges(g, p_minus, rng)
    uf = UnionFind(V)
    uf.union_pairs(first.all_pairs().tolist())

    threshold = max(1, math.ceil(eta * V))
    by_size = sorted(
        ((uf.size[r], r) for r in uf.roots() if uf.size[r] >= threshold),
        key=lambda t: (-t[0], t[1]),
    )
    large_roots = [r for _, r in by_size]
    clusters_before = np.array([s for s, _ in by_size], dtype=np.int64)
    z_prime = int(clusters_before.sum())

    good_lines = None
    if g.d == 2:
        labels = uf.labels() if large_roots else None
        first_coord = np.arange(V, dtype=np.int64) % n
        need = eta * V / (4.0 * n)
        good_lines = np.array(
            [
                int((np.bincount(first_coord[labels == r], minlength=n)
                     >= need).sum())
                for r in large_roots
            ],
            dtype=np.int64,
        )

    # round two: sprinkle the vacant slots of every line, same stream
    M = n * (n - 1) // 2
    combined = [] if keep_edges else None
    chunks = []
    sprinkled = 0
    for pos in range(g.num_lines()):
        occ = first.ranks_by_line[pos]
        extra = _complement_ranks(occ, M, rate, rng)
        sprinkled += int(extra.size)
        if extra.size:
            a, b = ranks_to_positions(extra)
            members = first.line_at(pos).members
            chunks.append(np.stack([members[a], members[b]], axis=1))
        if keep_edges:
            merged_ranks = (
                np.sort(np.concatenate([occ, extra])) if extra.size else occ
            )
            combined.append(merged_ranks)
    if chunks:
        uf.union_pairs(np.concatenate(chunks).tolist())

    after = {uf.find(r) for r in large_roots}
    return SprinklingReport(
        p_minus=p_minus,
        eta=eta,
        clusters_before=clusters_before,
        z_prime=z_prime,
        good_lines_before=good_lines,
        merged_after=len(after) <= 1,
        cmax_after=int(uf.component_sizes()[0]),
        occupied_before=first.total_occupied,
        occupied_after=first.total_occupied + sprinkled,
        edges_after=(
            OccupiedEdgeSet(graph=g, ranks_by_line=combined)
            if keep_edges else None
        ),
    )
