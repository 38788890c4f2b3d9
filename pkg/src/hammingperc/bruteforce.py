"""Exact cluster functionals by exhaustive configuration enumeration.

Every edge subset of a small graph is visited once, as a bit counter over
the canonical edge list.  All statistics are accumulated as exact integers
bucketed by the number of occupied edges, so a single sweep is independent
of p: evaluating at any p is then a weighted sum over at most edge_count+1
buckets.  This is the ground truth the Monte Carlo estimators are tested
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, fsum

import numpy as np

from hammingperc.graph import DomainError, HammingGraph

__all__ = ["ExactSweep", "MAX_EDGES", "exact_expectation", "sweep_components"]

# 2**24 configurations is the enumeration budget
MAX_EDGES = 24


@dataclass(frozen=True)
class ExactSweep:
    """Exact integer aggregates of one exhaustive sweep of H(d, n).

    Bucket j collects the configurations with exactly j occupied edges:

    * ``config_counts[j]``: number of such configurations (= C(E, j)),
    * ``cmax_total[j]``: sum of largest component sizes,
    * ``c2_total[j]``: sum of second-largest component sizes,
    * ``size_hist[j][s]``: total number of vertices lying in components of
      size s (so each configuration contributes V across all s),
    * ``vertex_hist[j][v][s]``: number of configurations where the component
      of vertex v has size s.
    """

    graph: HammingGraph
    config_counts: tuple
    cmax_total: tuple
    c2_total: tuple
    size_hist: tuple
    vertex_hist: tuple

    def weights(self, p):
        """Probability of one configuration from each bucket, exact for
        Fraction p and correctly rounded for float p."""
        E = self.graph.edge_count
        if isinstance(p, Fraction):
            q = 1 - p
            return [p**j * q ** (E - j) for j in range(E + 1)]
        return [p**j * (1.0 - p) ** (E - j) for j in range(E + 1)]


def _canonical_edges(g: HammingGraph) -> list[tuple[int, int]]:
    # line by line; within a line pairs ordered by (larger, smaller) position
    edges = []
    for line in g.lines():
        m = line.members
        for b in range(len(m)):
            for a in range(b):
                edges.append((int(m[a]), int(m[b])))
    return edges


@lru_cache(maxsize=8)
def sweep_components(g: HammingGraph) -> ExactSweep:
    """Visit all 2**edge_count configurations of g once.

    Refuses graphs beyond the enumeration budget.  The result is cached:
    the sweep does not depend on p.
    """
    E = g.edge_count
    if E > MAX_EDGES:
        raise DomainError(
            f"exhaustive enumeration needs 2**{E} configurations; "
            f"the budget is 2**{MAX_EDGES} (edge_count <= {MAX_EDGES})"
        )
    V = g.num_vertices
    edges = _canonical_edges(g)

    config_counts = [0] * (E + 1)
    cmax_total = [0] * (E + 1)
    c2_total = [0] * (E + 1)
    size_hist = [[0] * (V + 1) for _ in range(E + 1)]
    vertex_hist = [[[0] * (V + 1) for _ in range(V)] for _ in range(E + 1)]

    ident = list(range(V))
    for mask in range(1 << E):
        parent = ident.copy()
        size = [1] * V
        m = mask
        while m:
            e = (m & -m).bit_length() - 1
            m &= m - 1
            u, v = edges[e]
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

        occ = mask.bit_count()
        config_counts[occ] += 1
        shist = size_hist[occ]
        vhist = vertex_hist[occ]
        best = second = 0
        for v in range(V):
            r = v
            while parent[r] != r:
                r = parent[r]
            s = size[r]
            vhist[v][s] += 1
            if r == v:
                shist[s] += s
                if s > best:
                    best, second = s, best
                elif s > second:
                    second = s
        cmax_total[occ] += best
        c2_total[occ] += second

    freeze = lambda rows: tuple(tuple(r) for r in rows)
    return ExactSweep(
        graph=g,
        config_counts=tuple(config_counts),
        cmax_total=tuple(cmax_total),
        c2_total=tuple(c2_total),
        size_hist=freeze(size_hist),
        vertex_hist=tuple(freeze(v) for v in vertex_hist),
    )


def exact_expectation(g, p, functional, k=None, vertex=None, exact=False):
    """Exact value of a cluster functional of H(d, n) at edge probability p.

    Parameters
    ----------
    g : HammingGraph
        Graph with edge_count <= MAX_EDGES.
    p : float or Fraction
        Edge occupation probability in [0, 1].
    functional : str
        One of "cmax" (E[largest component]), "chi" (E[|C(v)|], the same for
        every v), "cluster_tail" (P(|C(vertex)| >= k)) or "z_geq"
        (E[number of vertices in components of size >= k]).
    k : int, optional
        Size threshold, required for cluster_tail and z_geq.
    vertex : int, optional
        Root vertex for cluster_tail; any vertex gives the same value, the
        argument exists so transitivity itself can be checked.
    exact : bool
        With a Fraction p, return the exact rational value instead of float.

    Returns
    -------
    float, or Fraction when ``exact``.
    """
    if not 0 <= p <= 1:
        raise DomainError(f"edge probability {p} outside [0, 1]")
    sweep = sweep_components(g)
    E = g.edge_count
    V = g.num_vertices
    if exact and not isinstance(p, Fraction):
        p = Fraction(p)
    w = sweep.weights(p)

    # internal sanity: the 2**E configuration weights partition unity
    total = sum(c * wj for c, wj in zip(sweep.config_counts, w))
    if abs(float(total) - 1.0) > 1e-12:
        raise RuntimeError(f"configuration weights sum to {total!r}, not 1")

    if functional == "cmax":
        per_bucket = sweep.cmax_total
    elif functional == "chi":
        # sum_v |C(v)| = sum over components of size**2; divide by V at the end
        per_bucket = [
            sum(s * h[s] for s in range(1, V + 1)) for h in sweep.size_hist
        ]
    elif functional == "z_geq":
        if k is None or k < 1:
            raise DomainError("z_geq needs a threshold k >= 1")
        per_bucket = [sum(h[k:]) for h in sweep.size_hist]
    elif functional == "cluster_tail":
        if k is None or k < 1:
            raise DomainError("cluster_tail needs a threshold k >= 1")
        if vertex is None:
            # transitivity: average over v of P(|C(v)| >= k) equals any single one
            per_bucket = [sum(h[k:]) for h in sweep.size_hist]
            out = _combine(per_bucket, w, exact)
            return out / V
        per_bucket = [sum(b[vertex][k:]) for b in sweep.vertex_hist]
    else:
        raise DomainError(f"unknown functional {functional!r}")

    out = _combine(per_bucket, w, exact)
    if functional == "chi":
        out = out / V
    return out


def _combine(per_bucket, weights, exact):
    if exact:
        return sum(a * wj for a, wj in zip(per_bucket, weights))
    return fsum(float(a) * float(wj) for a, wj in zip(per_bucket, weights))
