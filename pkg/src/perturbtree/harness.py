"""Seeded experiment sweeps, exhaustive universality checks, and threshold search."""

from __future__ import annotations

import csv
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterator, Sequence

from scipy.stats import binomtest

from .embed import EmbedError, embed_spanning_tree, oracle_embed
from .seeding import derive_seed
from .enumerate import canonical_form, enumerate_free_trees
from .expansion import prune_to_expander, verify_expander_sampled
from .generators import alpha_graph, generate_binomial, generate_tree
from .graph import Graph, GraphError, embedding_violation, union
from .params import Params

GRID_KEYS = ("n", "alpha", "Delta", "D", "C", "family")
SUMMARY_COLUMNS = (
    "n", "alpha", "Delta", "C", "D", "family", "seeds", "successes",
    "mean_swaps", "min_reservoir", "mean_wall_ms",
)


@dataclass
class ExperimentConfig:
    """Grid and run knobs. Grid keys take lists; every combination is a cell.

    ``beta`` and ``eps_prime`` override the derived constants when set;
    ``cert_eps``/``cert_trials`` configure the sampled expansion certificate
    recorded for the pruned random graph (``cert_trials = 0`` skips it).
    """

    n: list[int] = field(default_factory=lambda: [200])
    alpha: list[float] = field(default_factory=lambda: [0.3])
    Delta: list[int] = field(default_factory=lambda: [3])
    D: list[float] = field(default_factory=lambda: [64.0])
    C: list[float] = field(default_factory=lambda: [2.0])
    family: list[str] = field(default_factory=lambda: ["path"])
    dense_family: str = "bipartite"
    seeds: int = 1
    reservoir_threshold: int = 0
    retries: int = 10
    budget_factor: int = 50
    paper_exact: bool = False
    beta: float | None = None
    eps_prime: float | None = None
    cert_eps: float = 0.05
    cert_trials: int = 200
    attach: str = "neighbor"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in GRID_KEYS:
            if key in data and not isinstance(data[key], list):
                data[key] = [data[key]]
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def cells(self) -> list[dict]:
        return [dict(zip(GRID_KEYS, combo)) for combo in itertools.product(*(getattr(self, k) for k in GRID_KEYS))]

    def params_for(self, cell: dict) -> Params:
        overrides = {}
        if self.beta is not None:
            overrides["beta"] = self.beta
        if self.eps_prime is not None:
            overrides["eps_prime"] = self.eps_prime
        return Params(
            cell["alpha"], cell["Delta"], cell["C"], cell["D"], overrides=overrides,
            paper_exact=self.paper_exact, reservoir_threshold=self.reservoir_threshold,
            retries=self.retries, budget_factor=self.budget_factor,
        )


def cell_seed(master_seed: int, cell: dict, index: int) -> int:
    return derive_seed(master_seed, tuple(sorted(cell.items())), index)


def run_trial(config: ExperimentConfig, cell: dict, index: int, master_seed: int) -> tuple[dict, float]:
    """One seeded instance. Returns the record and its wall time in ms (kept apart so records replay exactly)."""
    seed = cell_seed(master_seed, cell, index)
    n, alpha, Delta, D, C = cell["n"], cell["alpha"], cell["Delta"], cell["D"], cell["C"]
    record = {**cell, "dense_family": config.dense_family, "seed_index": index, "seed": seed}
    params = config.params_for(cell)
    record["params"] = params.as_dict()
    start = time.perf_counter()
    g_alpha = alpha_graph(config.dense_family, n, alpha, derive_seed(seed, "dense"))
    g = prune_to_expander(generate_binomial(n, min(1.0, D / n), derive_seed(seed, "random")), D, C)
    if config.cert_trials:
        cert = verify_expander_sampled(g, D / n, config.cert_eps, C, config.cert_trials, derive_seed(seed, "cert"))
        record["certificate"] = cert.verdict
    else:
        record["certificate"] = None
    tree = generate_tree(n, cell["family"], Delta, derive_seed(seed, "tree"))
    try:
        emb, trace = embed_spanning_tree(tree, g, g_alpha, params, derive_seed(seed, "embed"), audit=False, attach=config.attach)
    except (EmbedError, GraphError) as exc:
        record.update(success=False, phase=getattr(exc, "phase", "setup"), error=str(exc),
                      swaps=None, min_reservoir=None)
    else:
        problem = embedding_violation(tree, union(g_alpha, g), emb, spanning=True)
        record.update(
            success=problem is None, phase=None if problem is None else "validate", error=problem,
            swaps=len(trace.swaps), min_reservoir=trace.min_reservoir_after_phase2,
        )
    return record, (time.perf_counter() - start) * 1000


def _trial_star(args):
    return run_trial(*args)


def run_sweep(
    config: ExperimentConfig, master_seed: int = 0, workers: int = 1, timings: list | None = None
) -> Iterator[dict]:
    """Yield one record per (cell, seed) in grid order.

    Records are a pure function of ``(config, master_seed)``. Wall times are
    appended to ``timings`` when given.
    """
    jobs = [(config, cell, i, master_seed) for cell in config.cells() for i in range(config.seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = pool.map(_trial_star, jobs)
            for rec, ms in results:
                if timings is not None:
                    timings.append(ms)
                yield rec
    else:
        for job in jobs:
            rec, ms = run_trial(*job)
            if timings is not None:
                timings.append(ms)
            yield rec


def record_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def summarize(records: Sequence[dict], timings: Sequence[float] | None = None) -> list[dict]:
    groups: dict[tuple, list[int]] = {}
    for i, rec in enumerate(records):
        key = tuple(rec[k] for k in GRID_KEYS)
        groups.setdefault(key, []).append(i)
    rows = []
    for key, idx in groups.items():
        cell = dict(zip(GRID_KEYS, key))
        recs = [records[i] for i in idx]
        ok = [r for r in recs if r["success"]]
        swaps = [r["swaps"] for r in ok]
        res = [r["min_reservoir"] for r in ok]
        walls = [timings[i] for i in idx] if timings else []
        rows.append({
            **cell,
            "seeds": len(recs),
            "successes": len(ok),
            "mean_swaps": round(sum(swaps) / len(swaps), 3) if swaps else "",
            "min_reservoir": min(res) if res else "",
            "mean_wall_ms": round(sum(walls) / len(walls), 3) if walls else "",
        })
    return rows


def write_sweep(config: ExperimentConfig, out_dir: str | Path, master_seed: int = 0, workers: int = 1) -> list[dict]:
    """Run a sweep into ``out_dir``: ``records.jsonl``, ``timings.jsonl`` and ``summary.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    timings: list[float] = []
    with open(out / "records.jsonl", "w") as rf:
        for rec in run_sweep(config, master_seed, workers, timings):
            rf.write(record_line(rec) + "\n")
            rf.flush()
            records.append(rec)
    with open(out / "timings.jsonl", "w") as tf:
        for rec, ms in zip(records, timings):
            tf.write(json.dumps({"seed": rec["seed"], "wall_ms": round(ms, 3)}) + "\n")
    rows = summarize(records, timings)
    with open(out / "summary.csv", "w", newline="") as cf:
        writer = csv.DictWriter(cf, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return rows


# -- universality ----------------------------------------------------------


@dataclass
class UniversalityResult:
    universal: bool
    table: list[tuple[str, bool]]  # (canonical form, embeds)


def universality_check_exhaustive(h: Graph, Delta: int) -> UniversalityResult:
    """Run the oracle on every tree of ``T(n, Delta)``, ``n = |V(h)|``."""
    if h.n > 12:
        raise GraphError("universality check is limited to n <= 12")
    table = [(canonical_form(t), oracle_embed(t, h) is not None) for t in enumerate_free_trees(h.n, Delta)]
    return UniversalityResult(all(ok for _, ok in table), table)


# -- threshold search --------------------------------------------------------


@dataclass
class RatePoint:
    D: float
    successes: int
    trials: int
    low: float
    high: float

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


@dataclass
class ThresholdEstimate:
    D: float
    points: list[RatePoint]


class BracketError(ValueError):
    pass


def success_rate(config: ExperimentConfig, D: float, master_seed: int) -> RatePoint:
    cfg = ExperimentConfig(**{**asdict(config), "D": [D]})
    recs = list(run_sweep(cfg, master_seed))
    k = sum(r["success"] for r in recs)
    ci = binomtest(k, len(recs)).proportion_ci(0.95, method="wilson") if recs else None
    return RatePoint(D, k, len(recs), ci.low if ci else 0.0, ci.high if ci else 1.0)


def estimate_threshold(
    config: ExperimentConfig, target_rate: float, D_grid: Sequence[float], master_seed: int = 0
) -> ThresholdEstimate:
    """Smallest grid value of ``D`` whose empirical success rate reaches ``target_rate``.

    Assumes the rate is non-decreasing in ``D`` and bisects over the sorted
    grid; each evaluated point carries a 95% Wilson interval.
    """
    grid = sorted(D_grid)
    if not grid:
        raise BracketError("empty D grid")
    if target_rate <= 0:
        return ThresholdEstimate(grid[0], [])
    cache: dict[int, RatePoint] = {}

    def point(i):
        if i not in cache:
            cache[i] = success_rate(config, grid[i], master_seed)
        return cache[i]

    if point(len(grid) - 1).rate < target_rate:
        raise BracketError(f"success rate {point(len(grid) - 1).rate:.3f} at D = {grid[-1]} is below the target")
    lo, hi = -1, len(grid) - 1  # rate(grid[hi]) >= target; everything at or below lo is below it
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if point(mid).rate >= target_rate:
            hi = mid
        else:
            lo = mid
    return ThresholdEstimate(grid[hi], [cache[i] for i in sorted(cache)])
