"""Experiment configuration, algorithm registry, and CSV result emission.

A run is a grid over (algorithm, k, seed) cells on one dataset/objective.
Cells execute sequentially in sorted order and each produces exactly one
result row, so repeated runs emit identical CSV bodies (modulo the
informational wall_ms column).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import baselines, datasets, distributed, modefinding, objectives, streaming
from .core import CountingOracle, ModularCost, RegularizedInstance, Solution

RESULT_FIELDS = ("dataset", "algorithm", "k", "eps", "delta", "m", "seed",
                 "f_value", "g_value", "ell_value", "oracle_calls", "wall_ms",
                 "provenance")
RESULT_HEADER = ",".join(RESULT_FIELDS)

ROUND_FIELDS = ("dataset", "algorithm", "k", "eps", "m", "seed", "round",
                "pool_sets", "pool_elements", "shard_sizes", "oracle_calls")


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    algorithm: str
    k: int
    eps: float
    delta: float
    m: int
    seed: int
    f_value: float
    g_value: float
    ell_value: float
    oracle_calls: int
    wall_ms: float
    provenance: str


@dataclass
class ExperimentConfig:
    """Flat run description; every key can come from a config file or a flag."""

    dataset: str = ""
    objective: str = "vertex-cover"
    algos: tuple[str, ...] = ("greedy",)
    ks: tuple[int, ...] = (5,)
    eps: float = 0.1
    delta: float = 0.1
    machines: int = 2
    seeds: tuple[int, ...] = (0,)
    stream_order: str = "natural"
    out: str | None = None
    q: int = 6
    alpha: float = 1.0
    r: float = 1.0
    gamma: float = 0.0
    costs: str | None = None
    header: bool = False

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: config must be a flat JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
        cfg = cls()
        for key, val in raw.items():
            if key in ("algos", "ks", "seeds"):
                val = tuple(val)
            setattr(cfg, key, val)
        return cfg

    def override(self, **updates) -> "ExperimentConfig":
        """CLI flags win over file values; None updates are ignored."""
        real = {k: v for k, v in updates.items() if v is not None}
        return replace(self, **real)

    def validate(self) -> None:
        if not self.dataset:
            raise ValueError("no dataset given")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}; "
                             f"known: {sorted(OBJECTIVES)}")
        for a in self.algos:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; known: {sorted(ALGORITHMS)}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise ValueError("need at least one budget k >= 1")
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.machines < 1:
            raise ValueError("machine count must be >= 1")


def _build_vertex_cover(cfg: ExperimentConfig):
    graph = datasets.load_edge_list(cfg.dataset)
    oracle = objectives.VertexCoverOracle(graph)
    if cfg.costs:
        cost = ModularCost(datasets.load_cost_vector(cfg.costs))
    else:
        cost = objectives.vertex_cover_cost(graph.out_degrees(), cfg.q)
    return oracle, cost


def _similarity(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.dataset.endswith(".sim.csv"):
        return datasets.load_similarity_matrix(cfg.dataset, header=cfg.header)
    X = datasets.load_feature_matrix(cfg.dataset, header=cfg.header)
    return objectives.similarity_from_features(X)


def _external_cost(cfg: ExperimentConfig, n: int) -> ModularCost:
    if cfg.costs:
        arr = datasets.load_cost_vector(cfg.costs)
        if arr.shape[0] != n:
            raise ValueError(f"cost vector length {arr.shape[0]} != ground set {n}")
        return ModularCost(arr)
    return ModularCost(np.zeros(n))


def _build_facility(cfg: ExperimentConfig):
    M = _similarity(cfg)
    oracle = objectives.FacilityLocationOracle(M)
    return oracle, _external_cost(cfg, oracle.n)


def _build_logdet(cfg: ExperimentConfig):
    M = _similarity(cfg)
    oracle = objectives.LogDetOracle(M, alpha=cfg.alpha)
    return oracle, _external_cost(cfg, oracle.n)


def _build_coverage(cfg: ExperimentConfig):
    triples = datasets.load_score_table(cfg.dataset)
    n = 1 + max(e for _, e, _ in triples) if triples else 0
    if n == 0:
        raise ValueError(f"{cfg.dataset}: empty score table")
    oracle = objectives.SaturatingCoverageOracle(triples, n)
    return oracle, _external_cost(cfg, n)


def _build_slc_mode(cfg: ExperimentConfig):
    L = datasets.load_similarity_matrix(cfg.dataset, header=cfg.header)
    slc = modefinding.SlcInstance(L, d=L.shape[0])
    weak = slc.weak_instance(cfg.gamma)
    oracle = modefinding.SurrogateOracle(weak)
    return oracle, oracle.cost


OBJECTIVES = {
    "vertex-cover": _build_vertex_cover,
    "facility-location": _build_facility,
    "log-det": _build_logdet,
    "saturating-coverage": _build_coverage,
    "slc-mode": _build_slc_mode,
}


@dataclass
class RunContext:
    stream: list[int]
    eps: float
    delta: float
    machines: int
    seed: int
    r: float
    round_metrics: list = field(default_factory=list)


def _algo_greedy(instance, ctx):
    return Solution.evaluate(instance, baselines.vanilla_greedy(instance), "greedy")


def _algo_distorted_greedy(instance, ctx):
    return Solution.evaluate(instance, distributed.distorted_greedy(instance),
                             "distorted-greedy")


def _algo_sieve(instance, ctx):
    return baselines.sieve_streaming(ctx.stream, instance, ctx.eps)


def _algo_threshold_streaming(instance, ctx):
    bank = streaming.ThresholdBank(ctx.r, instance.k, ctx.eps)
    for u in ctx.stream:
        bank.step(u, instance)
    return bank.finish(instance, f"threshold-streaming[r={ctx.r:.6g}]")


def _algo_distorted_streaming(instance, ctx):
    return streaming.distorted_streaming(ctx.stream, instance, ctx.eps, ctx.delta)


def _algo_distributed(instance, ctx):
    config = distributed.DistributedConfig(ctx.machines, ctx.eps, ctx.seed)
    return distributed.run_distributed(instance, config, metrics=ctx.round_metrics)


def _algo_brute_force(instance, ctx):
    best, _ = baselines.brute_force_opt(instance)
    return Solution.evaluate(instance, best, "brute-force")


ALGORITHMS = {
    "greedy": _algo_greedy,
    "distorted-greedy": _algo_distorted_greedy,
    "sieve": _algo_sieve,
    "threshold-streaming": _algo_threshold_streaming,
    "distorted-streaming": _algo_distorted_streaming,
    "distributed": _algo_distributed,
    "brute-force": _algo_brute_force,
}


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def run_experiment(cfg: ExperimentConfig):
    """Run all (algorithm, k, seed) cells; returns (rows, round_metrics_rows)."""
    cfg.validate()
    oracle, cost = OBJECTIVES[cfg.objective](cfg)
    label = os.path.basename(cfg.dataset)
    rows: list[ResultRow] = []
    round_rows: list[tuple] = []
    cells = sorted((a, k, s) for a in set(cfg.algos) for k in set(cfg.ks)
                   for s in set(cfg.seeds))
    for algo, k, seed in cells:
        counting = CountingOracle(oracle)
        instance = RegularizedInstance(counting, cost, k)
        ctx = RunContext(
            stream=datasets.resolve_stream_order(cfg.stream_order, oracle.n, seed),
            eps=cfg.eps, delta=cfg.delta, machines=cfg.machines, seed=seed,
            r=cfg.r)
        start = time.perf_counter()
        sol = ALGORITHMS[algo](instance, ctx)
        wall_ms = (time.perf_counter() - start) * 1000.0
        rows.append(ResultRow(label, algo, k, cfg.eps, cfg.delta, cfg.machines,
                              seed, sol.f_value, sol.g_value, sol.ell_value,
                              counting.calls, wall_ms, sol.provenance))
        for rm in ctx.round_metrics:
            round_rows.append((label, algo, k, cfg.eps, cfg.machines, seed,
                               rm.round_index, rm.pool_sets, rm.pool_elements,
                               ";".join(str(s) for s in rm.shard_sizes),
                               rm.oracle_calls))
    if cfg.out:
        emit_results(rows, cfg.out)
        if round_rows:
            emit_round_metrics(round_rows, cfg.out + ".rounds.csv")
    return rows, round_rows


def _atomic_write(text: str, path) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_results(rows, path) -> None:
    """Write the result CSV (fixed header, 9 significant digits, atomic)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in RESULT_FIELDS])
    _atomic_write(buf.getvalue(), path)


def emit_round_metrics(round_rows, path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROUND_FIELDS)
    for row in round_rows:
        writer.writerow([_fmt(x) for x in row])
    _atomic_write(buf.getvalue(), path)


def parse_results(path) -> list[ResultRow]:
    """Read back an emitted result CSV into typed rows."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != RESULT_FIELDS:
            raise ValueError(f"{path}: unexpected header {header}")
        for rec in reader:
            vals = dict(zip(RESULT_FIELDS, rec))
            out.append(ResultRow(
                dataset=vals["dataset"], algorithm=vals["algorithm"],
                k=int(vals["k"]), eps=float(vals["eps"]),
                delta=float(vals["delta"]), m=int(vals["m"]),
                seed=int(vals["seed"]), f_value=float(vals["f_value"]),
                g_value=float(vals["g_value"]), ell_value=float(vals["ell_value"]),
                oracle_calls=int(vals["oracle_calls"]),
                wall_ms=float(vals["wall_ms"]), provenance=vals["provenance"]))
    return out
