"""Command-line front end: plans, seeded replica runs, CSV/JSON output.

A plan captures everything an experiment needs; running the same plan with
the same master seed reproduces the CSV output byte for byte (timing and
timestamps live only in the JSON record).  Exit codes: 0 ok, 1 acceptance
failure, 2 usage error, 3 numeric-domain error.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from hammingperc import __version__, acceptance
from hammingperc.branching import GWSpec, survival_probability, tail_probability
from hammingperc.exploration import explore_cluster
from hammingperc.graph import DomainError, HammingGraph
from hammingperc.percolation import PercolationConfig
from hammingperc.sprinkling import two_round_exposure
from hammingperc.stats import replica_summary

__all__ = [
    "CSV_HEADER",
    "ExperimentPlan",
    "RunRecord",
    "main",
    "parse_plan",
    "run",
    "serialize_plan",
    "supercritical_regime_check",
]

EXPERIMENTS = ("simulate", "explore", "sprinkle", "gw", "verify", "sweep")
ETA_RULES = ("explicit", "sqrt_eps_v_sixth")
CSV_HEADER = ("experiment", "d", "n", "epsilon", "eta", "seed", "replica",
              "cmax", "c2", "z_k", "z_value")


@dataclass(frozen=True)
class ExperimentPlan:
    """Fully-resolved description of one experiment invocation."""

    experiment: str
    d: int = 2
    n: int = 10
    epsilons: tuple = (0.1,)
    eta_rule: str = "sqrt_eps_v_sixth"
    eta: float | None = None
    k_thresholds: tuple = ()
    replicas: int = 1
    master_seed: int = 0
    threads: int = 1
    out_csv: str | None = None
    out_json: str | None = None
    gw_N: int | None = None
    tail_ell: int | None = None

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise DomainError(f"unknown experiment {self.experiment!r}")
        if self.eta_rule not in ETA_RULES:
            raise DomainError(f"unknown eta rule {self.eta_rule!r}")
        if self.eta_rule == "explicit" and self.eta is None:
            raise DomainError("eta_rule 'explicit' needs an eta value")
        if self.replicas < 1:
            raise DomainError(f"need replicas >= 1, got {self.replicas}")
        if self.threads < 1:
            raise DomainError(f"need threads >= 1, got {self.threads}")
        if self.experiment == "gw":
            if not self.gw_N or self.gw_N < 1:
                raise DomainError("gw needs --N >= 1")
            if not self.tail_ell or self.tail_ell < 1:
                raise DomainError("gw needs --tail >= 1")
        if not self.epsilons:
            raise DomainError("need at least one epsilon")
        if self.experiment != "sweep" and len(self.epsilons) != 1:
            raise DomainError(
                f"{self.experiment} takes a single epsilon; "
                "ranges belong to sweep"
            )


@dataclass
class RunRecord:
    """One finished run: the echoed plan plus ordered rows and summary."""

    plan: ExperimentPlan
    rows: list
    summary: dict
    warnings: list
    version: str
    timestamp: str
    total_seconds: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "plan": _plan_to_dict(self.plan),
                "rows": [dict(zip(CSV_HEADER, row)) for row in self.rows],
                "summary": self.summary,
                "warnings": self.warnings,
                "version": self.version,
                "timestamp": self.timestamp,
                "total_seconds": self.total_seconds,
            },
            indent=2,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(CSV_HEADER) + "\n")
        for row in self.rows:
            out.write(",".join(row) + "\n")
        return out.getvalue()


def _fmt(value) -> str:
    """Cell formatting: shortest round-trip decimals, blanks for None."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _plan_to_dict(plan: ExperimentPlan) -> dict:
    out = {
        "experiment": plan.experiment,
        "d": plan.d,
        "n": plan.n,
        "eps": ",".join(repr(float(e)) for e in plan.epsilons),
        "eta_rule": plan.eta_rule,
        "replicas": plan.replicas,
        "seed": plan.master_seed,
        "threads": plan.threads,
    }
    if plan.eta is not None:
        out["eta"] = repr(float(plan.eta))
    if plan.k_thresholds:
        out["k"] = ",".join(str(k) for k in plan.k_thresholds)
    if plan.out_csv:
        out["out_csv"] = plan.out_csv
    if plan.out_json:
        out["out_json"] = plan.out_json
    if plan.gw_N is not None:
        out["N"] = plan.gw_N
    if plan.tail_ell is not None:
        out["tail"] = plan.tail_ell
    return out


def serialize_plan(plan: ExperimentPlan) -> str:
    """Flat key = value text under a [plan] section."""
    lines = ["[plan]"]
    lines += [f"{key} = {value}" for key, value in _plan_to_dict(plan).items()]
    return "\n".join(lines) + "\n"


def parse_epsilons(text: str) -> tuple:
    """Accept a single value, a comma list, or a start:stop:step range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"bad epsilon range {text!r}, want lo:hi:step")
        lo, hi, step = (float(v) for v in parts)
        if step <= 0 or hi < lo:
            raise DomainError(f"bad epsilon range {text!r}")
        count = int(round((hi - lo) / step)) + 1
        values = [lo + i * step for i in range(count)]
        return tuple(v for v in values if v <= hi + 1e-12)
    return tuple(float(v) for v in text.split(",") if v.strip())


def parse_plan(text: str) -> ExperimentPlan:
    """Inverse of serialize_plan; also reads hand-written config files."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep key case: N (trials) differs from n
    parser.read_string(text)
    if not parser.has_section("plan"):
        raise DomainError("config needs a [plan] section")
    section = parser["plan"]
    get = section.get
    plan = ExperimentPlan(
        experiment=get("experiment", "simulate"),
        d=section.getint("d", 2),
        n=section.getint("n", 10),
        epsilons=parse_epsilons(get("eps", "0.1")),
        eta_rule=get("eta_rule", "sqrt_eps_v_sixth"),
        eta=section.getfloat("eta") if get("eta") is not None else None,
        k_thresholds=tuple(
            int(v) for v in get("k", "").split(",") if v.strip()
        ),
        replicas=section.getint("replicas", 1),
        master_seed=section.getint("seed", 0),
        threads=section.getint("threads", 1),
        out_csv=get("out_csv") or None,
        out_json=get("out_json") or None,
        gw_N=section.getint("N") if get("N") is not None else None,
        tail_ell=section.getint("tail") if get("tail") is not None else None,
    )
    plan.validate()
    return plan


def resolve_eta(plan: ExperimentPlan, epsilon: float, V: int) -> float:
    if plan.eta_rule == "explicit":
        return float(plan.eta)
    if epsilon <= 0.0:
        raise DomainError(
            "the sqrt_eps_v_sixth eta rule needs epsilon > 0"
        )
    return math.sqrt(epsilon) * V ** (-1.0 / 6.0)


def supercritical_regime_check(plan: ExperimentPlan) -> list[str]:
    """Warnings for epsilons outside the supercritical working range."""
    if plan.experiment in ("gw", "verify"):
        return []
    V = plan.n ** plan.d
    lower = math.log(V) ** (1.0 / 3.0) * V ** (-1.0 / 3.0)
    notes = []
    for eps in plan.epsilons:
        if eps == 0.0:
            notes.append(
                "eps=0 sits inside the critical window; the giant-component"
                " law does not apply"
            )
        elif eps < lower:
            notes.append(
                f"eps={eps:g} is below (log V)^(1/3) V^(-1/3) ~ {lower:.3g};"
                f" outside the supercritical regime"
            )
        elif eps > 0.5:
            notes.append(
                f"eps={eps:g} is above 0.5; outside the moderate"
                f" supercritical regime"
            )
    return notes


def _simulate_task(args: tuple) -> tuple:
    d, n, eps, seed, replica, ks = args
    cfg = PercolationConfig(HammingGraph(d, n), epsilon=eps, seed=seed)
    summary = replica_summary(cfg, replica, ks)
    return summary.cmax, summary.c2, summary.z_geq_table


def _run_simulate(plan: ExperimentPlan) -> tuple[list, dict]:
    tasks = [
        (plan.d, plan.n, eps, plan.master_seed, r, plan.k_thresholds)
        for eps in plan.epsilons
        for r in range(plan.replicas)
    ]
    if plan.threads > 1:
        with ProcessPoolExecutor(max_workers=plan.threads) as pool:
            results = list(pool.map(_simulate_task, tasks))
    else:
        results = [_simulate_task(t) for t in tasks]

    rows = []
    cmax_by_eps: dict[float, list] = {}
    for (d, n, eps, seed, replica, _ks), (cmax, c2, table) in zip(
        tasks, results
    ):
        cmax_by_eps.setdefault(eps, []).append(cmax)
        base = [plan.experiment, _fmt(d), _fmt(n), _fmt(float(eps)), "",
                _fmt(seed), _fmt(replica), _fmt(cmax), _fmt(c2)]
        if table:
            rows += [base + [_fmt(k), _fmt(z)] for k, z in table]
        else:
            rows.append(base + ["", ""])
    summary = {
        "replicas": plan.replicas,
        "median_cmax_by_epsilon": {
            repr(float(eps)): float(np.median(v))
            for eps, v in cmax_by_eps.items()
        },
    }
    return rows, summary


def _run_explore(plan: ExperimentPlan) -> tuple[list, dict]:
    eps = plan.epsilons[0]
    g = HammingGraph(plan.d, plan.n)
    cfg = PercolationConfig(g, epsilon=eps, seed=plan.master_seed)
    if plan.k_thresholds:
        cap = max(plan.k_thresholds)
    else:
        cap = math.ceil(resolve_eta(plan, eps, g.num_vertices)
                        * g.num_vertices)
    rows = []
    reached = 0
    for r in range(plan.replicas):
        res = explore_cluster(cfg, (0, 0), cap=cap, stream=r)
        reached += res.cluster_size_capped >= cap
        rows.append([
            plan.experiment, _fmt(plan.d), _fmt(plan.n), _fmt(float(eps)),
            "", _fmt(plan.master_seed), _fmt(r),
            _fmt(res.cluster_size_capped), "", _fmt(cap), _fmt(res.T),
        ])
    summary = {
        "cap": cap,
        "reached_cap_fraction": reached / plan.replicas,
    }
    return rows, summary


def _run_sprinkle(plan: ExperimentPlan) -> tuple[list, dict]:
    eps = plan.epsilons[0]
    g = HammingGraph(plan.d, plan.n)
    cfg = PercolationConfig(g, epsilon=eps, seed=plan.master_seed)
    eta = resolve_eta(plan, eps, g.num_vertices)
    threshold = max(1, math.ceil(eta * g.num_vertices))
    rows = []
    merged = 0
    for r in range(plan.replicas):
        rep = two_round_exposure(cfg, eta=eta, stream=r)
        merged += rep.merged_after
        rows.append([
            plan.experiment, _fmt(plan.d), _fmt(plan.n), _fmt(float(eps)),
            _fmt(eta), _fmt(plan.master_seed), _fmt(r),
            _fmt(rep.cmax_after), "", _fmt(threshold), _fmt(rep.z_prime),
        ])
    summary = {
        "eta": eta,
        "large_cluster_threshold": threshold,
        "merged_fraction": merged / plan.replicas,
    }
    return rows, summary


def _run_gw(plan: ExperimentPlan) -> tuple[list, dict]:
    eps = plan.epsilons[0]
    spec = GWSpec(plan.gw_N, (1.0 + eps) / plan.gw_N)
    value = tail_probability(spec, plan.tail_ell)
    zeta = survival_probability(spec)
    print(f"P(total progeny >= {plan.tail_ell}) = {value:.15g}")
    print(f"survival probability = {zeta:.15g}")
    rows = [[
        plan.experiment, "", "", _fmt(float(eps)), "",
        _fmt(plan.master_seed), "0", "", "", _fmt(plan.tail_ell),
        _fmt(value),
    ]]
    return rows, {"tail_probability": value, "survival_probability": zeta}


def _run_verify(plan: ExperimentPlan) -> tuple[list, dict, bool]:
    rows = []
    results = []
    for check in acceptance.ALL_CRITERIA:
        result = check()
        results.append(result)
        print(result.line(), flush=True)
        rows.append([
            plan.experiment, "", "", "", "", _fmt(plan.master_seed),
            _fmt(result.number), "", "", _fmt(result.number),
            _fmt(int(result.passed)),
        ])
    passed = all(r.passed for r in results)
    print(f"{'ALL PASS' if passed else 'FAILURES PRESENT'} "
          f"({sum(r.passed for r in results)}/{len(results)} criteria, "
          f"{sum(r.seconds for r in results):.0f}s)")
    summary = {
        "passed": passed,
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed,
             "details": r.details, "seconds": r.seconds}
            for r in results
        ],
    }
    return rows, summary, passed


def run(plan: ExperimentPlan) -> tuple[RunRecord, int]:
    """Execute a validated plan; returns the record and an exit code."""
    plan.validate()
    warnings = supercritical_regime_check(plan)
    for note in warnings:
        print(f"warning: {note}", file=sys.stderr)
    t0 = time.perf_counter()
    code = 0
    if plan.experiment in ("simulate", "sweep"):
        rows, summary = _run_simulate(plan)
    elif plan.experiment == "explore":
        rows, summary = _run_explore(plan)
    elif plan.experiment == "sprinkle":
        rows, summary = _run_sprinkle(plan)
    elif plan.experiment == "gw":
        rows, summary = _run_gw(plan)
    else:
        rows, summary, ok = _run_verify(plan)
        code = 0 if ok else 1
    record = RunRecord(
        plan=plan,
        rows=rows,
        summary=summary,
        warnings=warnings,
        version=__version__,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        total_seconds=time.perf_counter() - t0,
    )
    if plan.experiment not in ("gw", "verify"):
        print(f"{plan.experiment}: d={plan.d} n={plan.n} "
              f"eps={','.join(repr(float(e)) for e in plan.epsilons)} "
              f"replicas={plan.replicas} seed={plan.master_seed}")
        for key, value in summary.items():
            print(f"  {key} = {value}")
        print(f"  rows = {len(rows)}, {record.total_seconds:.2f}s")
    if plan.out_csv:
        with open(plan.out_csv, "w", newline="") as fh:
            fh.write(record.to_csv())
    if plan.out_json:
        with open(plan.out_json, "w") as fh:
            fh.write(record.to_json())
    return record, code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamming-perc",
        description="Percolation experiments on Hamming graphs H(d, n).",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--eps", type=str, default=None,
                       help="value, comma list, or lo:hi:step range")
        p.add_argument("--eta", type=float, default=None,
                       help="explicit sprinkle intensity; default rule is"
                            " sqrt(eps) * V^(-1/6)")
        p.add_argument("--k", type=str, default=None,
                       help="comma list of component-size thresholds")
        p.add_argument("--replicas", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default from HP_THREADS)")
        p.add_argument("--out-csv", type=str, default=None)
        p.add_argument("--out-json", type=str, default=None)
        p.add_argument("--config", type=str, default=None,
                       help="flat key = value plan file; flags win")
        if name == "gw":
            p.add_argument("--N", type=int, default=None,
                           help="offspring trial count")
            p.add_argument("--tail", type=int, default=None,
                           help="tail threshold to evaluate")
    return parser


def _plan_from_args(args: argparse.Namespace) -> ExperimentPlan:
    if args.config:
        with open(args.config) as fh:
            plan = parse_plan(fh.read())
        plan = replace(plan, experiment=args.experiment)
    else:
        plan = ExperimentPlan(experiment=args.experiment)
    updates = {}
    if args.d is not None:
        updates["d"] = args.d
    if args.n is not None:
        updates["n"] = args.n
    if args.eps is not None:
        updates["epsilons"] = parse_epsilons(args.eps)
    if args.eta is not None:
        updates["eta"] = args.eta
        updates["eta_rule"] = "explicit"
    if args.k is not None:
        updates["k_thresholds"] = tuple(
            int(v) for v in args.k.split(",") if v.strip()
        )
    if args.replicas is not None:
        updates["replicas"] = args.replicas
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.threads is not None:
        updates["threads"] = args.threads
    elif os.environ.get("HP_THREADS"):
        updates["threads"] = int(os.environ["HP_THREADS"])
    if args.out_csv is not None:
        updates["out_csv"] = args.out_csv
    if args.out_json is not None:
        updates["out_json"] = args.out_json
    if getattr(args, "N", None) is not None:
        updates["gw_N"] = args.N
    if getattr(args, "tail", None) is not None:
        updates["tail_ell"] = args.tail
    plan = replace(plan, **updates)
    plan.validate()
    return plan


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        plan = _plan_from_args(args)
        _record, code = run(plan)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
