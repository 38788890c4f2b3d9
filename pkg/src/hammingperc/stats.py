"""Monte-Carlo estimation layer over configurations and explorations.

Every estimator pulls one RNG stream per replica index, so two quantities
computed at the same (seed, replica) reuse the same randomness.  Tail
estimates at nested caps are coupled monotone for that reason: the k-th
success indicator is a nonincreasing function of k along a fixed stream.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from hammingperc import calibration
from hammingperc.branching import GWSpec, survival_probability
from hammingperc.exploration import ExplorationEngine
from hammingperc.graph import DomainError
from hammingperc.percolation import (
    PercolationConfig,
    connected_components,
    sample_configuration,
    z_geq,
)
from hammingperc.rng import stream_rng

__all__ = [
    "Estimate",
    "ReplicaSummary",
    "Report",
    "duality_diagnostic",
    "estimate_chi",
    "estimate_cluster_tail",
    "giant_lln_report",
    "replica_summary",
    "wilson_interval",
    "z_concentration_report",
]


def wilson_interval(successes: int, trials: int,
                    z: float = 1.96) -> tuple[float, float]:
    """Score interval for a Bernoulli mean; behaves sanely near 0 and 1."""
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError(f"bad Bernoulli counts {successes}/{trials}")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials
                    + z * z / (4.0 * trials * trials))
        / denom
    )
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class Estimate:
    """Point estimate with its spread and a 95% interval."""

    mean: float
    std_error: float
    n_samples: int
    ci95_low: float
    ci95_high: float

    @classmethod
    def from_samples(cls, values) -> "Estimate":
        """Sample mean with a normal-approximation interval."""
        xs = np.asarray(values, dtype=float)
        if xs.size < 1:
            raise DomainError("need at least one sample")
        mean = float(xs.mean())
        se = (
            float(xs.std(ddof=1) / math.sqrt(xs.size)) if xs.size > 1 else 0.0
        )
        return cls(mean, se, int(xs.size), mean - 1.96 * se, mean + 1.96 * se)

    @classmethod
    def bernoulli(cls, successes: int, trials: int) -> "Estimate":
        """Fraction of successes with a Wilson interval (tails sit near 0)."""
        lo, hi = wilson_interval(successes, trials)
        phat = successes / trials
        se = math.sqrt(phat * (1.0 - phat) / trials)
        return cls(phat, se, trials, lo, hi)


@dataclass(frozen=True)
class ReplicaSummary:
    """Component statistics of one full-configuration replica."""

    seed: int  # stream index the replica was drawn from
    cmax: int
    c2: int
    z_geq_table: tuple  # ((k, Z_{>=k}), ...) with k strictly increasing
    good_lines: tuple = ()
    wall_time: float = 0.0

    def __post_init__(self):
        if self.cmax < self.c2:
            raise DomainError("cmax smaller than the second component")
        ks = [k for k, _ in self.z_geq_table]
        zs = [z for _, z in self.z_geq_table]
        if any(a >= b for a, b in zip(ks, ks[1:])):
            raise DomainError("thresholds must increase strictly")
        if any(a < b for a, b in zip(zs, zs[1:])):
            raise DomainError("Z values cannot increase with k")


def replica_summary(cfg: PercolationConfig, replica: int,
                    ks=()) -> ReplicaSummary:
    """Sample one configuration on stream ``replica`` and summarize it."""
    t0 = time.perf_counter()
    stats = connected_components(sample_configuration(cfg, stream=replica))
    table = tuple((int(k), z_geq(stats, int(k))) for k in sorted(set(ks)))
    return ReplicaSummary(
        seed=replica,
        cmax=stats.cmax,
        c2=stats.c2,
        z_geq_table=table,
        wall_time=time.perf_counter() - t0,
    )


def estimate_chi(cfg: PercolationConfig, samples: int,
                 stream_base: int = 0) -> Estimate:
    """Mean cluster size of a uniformly random vertex, explored to cap V.

    The graph is vertex-transitive, so the origin does not matter for the
    law; random origins just decorrelate the replica streams.  The cap V is
    exact, never a truncation.
    """
    if samples < 1:
        raise DomainError(f"need samples >= 1, got {samples}")
    g = cfg.graph
    engine = ExplorationEngine(cfg)
    sizes = np.empty(samples)
    for r in range(samples):
        rng = stream_rng(cfg.seed, stream_base + r)
        origin = g.vertex_coords(int(rng.integers(g.num_vertices)))
        sizes[r] = engine.run(origin, cap=g.num_vertices,
                              rng=rng).cluster_size_capped
    return Estimate.from_samples(sizes)


def estimate_cluster_tail(cfg: PercolationConfig, k: int, samples: int,
                          stream_base: int = 0) -> Estimate:
    """P(|C(v)| >= k) as the fraction of explorations reaching size k.

    Runs are capped at k, which leaves the reach-k indicator exact, and at
    a fixed stream the indicator is nonincreasing in k.
    """
    g = cfg.graph
    if not 1 <= k <= g.num_vertices:
        raise DomainError(f"need 1 <= k <= {g.num_vertices}, got {k}")
    if samples < 1:
        raise DomainError(f"need samples >= 1, got {samples}")
    engine = ExplorationEngine(cfg)
    hits = 0
    for r in range(samples):
        rng = stream_rng(cfg.seed, stream_base + r)
        origin = g.vertex_coords(int(rng.integers(g.num_vertices)))
        hits += engine.run(origin, cap=k, rng=rng).cluster_size_capped >= k
    return Estimate.bernoulli(int(hits), samples)


@dataclass
class Report:
    """Replica-level experiment outcome with its thresholds spelled out."""

    experiment: str
    params: dict
    per_replica: list
    summary: dict
    thresholds: dict
    passed: bool | None  # None marks a purely informational report

    def to_json(self) -> str:
        payload = {
            "experiment": self.experiment,
            "params": self.params,
            "per_replica": self.per_replica,
            "summary": self.summary,
            "thresholds": self.thresholds,
            "pass": self.passed,
        }
        return json.dumps(payload, indent=2)

    def csv_rows(self) -> tuple[list[str], list[list[str]]]:
        """Header and one formatted row per replica."""
        if not self.per_replica:
            return [], []
        header = list(self.per_replica[0])
        rows = [
            [_format_cell(row[name]) for name in header]
            for row in self.per_replica
        ]
        return header, rows


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    return str(value)


def _threshold(name: str) -> dict:
    return dict(calibration.CALIBRATION[name])


def z_concentration_report(cfg: PercolationConfig, k: int,
                           replicas: int) -> Report:
    """Across-replica spread of Z_{>=k}, normalized by eps*V."""
    if replicas < 2:
        raise DomainError(f"need replicas >= 2, got {replicas}")
    summaries = [replica_summary(cfg, r, ks=(k,)) for r in range(replicas)]
    zs = np.array([s.z_geq_table[0][1] for s in summaries], dtype=float)
    V = cfg.graph.num_vertices
    eps = cfg.epsilon
    sd = float(zs.std(ddof=1))
    normalized = sd / (abs(eps) * V) if eps != 0.0 else None
    limit = calibration.Z_CONCENTRATION_THRESHOLD
    return Report(
        experiment="z_concentration",
        params={"d": cfg.graph.d, "n": cfg.graph.n, "epsilon": eps,
                "seed": cfg.seed, "k": k, "replicas": replicas},
        per_replica=[
            {"replica": s.seed, "z": s.z_geq_table[0][1],
             "wall_time": s.wall_time}
            for s in summaries
        ],
        summary={"z_mean": float(zs.mean()), "z_sd": sd,
                 "normalized_sd": normalized},
        thresholds={"normalized_sd_max": _threshold(
            "z_concentration_threshold")},
        passed=None if normalized is None else bool(normalized <= limit),
    )


def giant_lln_report(cfg: PercolationConfig, replicas: int) -> Report:
    """Median largest-component fraction against its two references.

    The refined reference is the survival probability of the matching
    branching process; the leading-order reference is 2*eps.
    """
    if cfg.epsilon <= 0.0:
        raise DomainError("the largest-component law needs epsilon > 0")
    if replicas < 1:
        raise DomainError(f"need replicas >= 1, got {replicas}")
    summaries = [replica_summary(cfg, r) for r in range(replicas)]
    V = cfg.graph.num_vertices
    eps = cfg.epsilon
    fractions = np.array([s.cmax / V for s in summaries])
    zeta = survival_probability(GWSpec(cfg.graph.degree, cfg.p))
    median = float(np.median(fractions))
    band = calibration.GIANT_MEDIAN_BAND
    lo, hi = calibration.GIANT_RATIO_BRACKET
    ratio_zeta = median / zeta
    ratio_two_eps = median / (2.0 * eps)
    return Report(
        experiment="giant_lln",
        params={"d": cfg.graph.d, "n": cfg.graph.n, "epsilon": eps,
                "seed": cfg.seed, "replicas": replicas},
        per_replica=[
            {"replica": s.seed, "cmax": s.cmax, "c2": s.c2,
             "cmax_fraction": s.cmax / V, "wall_time": s.wall_time}
            for s in summaries
        ],
        summary={
            "median_fraction": median,
            "survival_reference": zeta,
            "ratio_to_survival": ratio_zeta,
            "ratio_to_two_eps": ratio_two_eps,
            "replica_fraction_within_survival_band": float(
                np.mean(np.abs(fractions / zeta - 1.0) <= band)),
            "replica_fraction_within_two_eps_bracket": float(
                np.mean((fractions / (2.0 * eps) >= lo)
                        & (fractions / (2.0 * eps) <= hi))),
        },
        thresholds={
            "survival_band": _threshold("giant_median_band"),
            "two_eps_bracket": _threshold("giant_ratio_bracket"),
        },
        passed=bool(abs(ratio_zeta - 1.0) <= band
                    and lo <= ratio_two_eps <= hi),
    )


def duality_diagnostic(cfg: PercolationConfig, replicas: int) -> Report:
    """Second-component sizes scaled by eps^2 / (2 log(eps^3 V)).

    Purely informational: the scaling is a conjectured law, so the report
    never carries a pass/fail verdict.
    """
    eps = cfg.epsilon
    V = cfg.graph.num_vertices
    if eps <= 0.0 or eps ** 3 * V <= 1.0:
        raise DomainError(
            "the second-component diagnostic needs eps > 0 and eps^3 V > 1"
        )
    if replicas < 1:
        raise DomainError(f"need replicas >= 1, got {replicas}")
    summaries = [replica_summary(cfg, r) for r in range(replicas)]
    scale = eps * eps / (2.0 * math.log(eps ** 3 * V))
    ratios = np.array([s.c2 * scale for s in summaries])
    return Report(
        experiment="duality_diagnostic",
        params={"d": cfg.graph.d, "n": cfg.graph.n, "epsilon": eps,
                "seed": cfg.seed, "replicas": replicas},
        per_replica=[
            {"replica": s.seed, "c2": s.c2, "scaled_c2": float(r),
             "wall_time": s.wall_time}
            for s, r in zip(summaries, ratios)
        ],
        summary={
            "median_scaled_c2": float(np.median(ratios)),
            "mean_scaled_c2": float(ratios.mean()),
        },
        thresholds={},
        passed=None,
    )
