"""Seeded experiment driver: single trials, grid sweeps, CSV output."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from .graph import Graph, read_edge_list
from .instances import (
    ParamSet,
    build_f_graph,
    enumerate_specs,
    format_spec,
    make_bipartite_host,
    make_random_dense_host,
    parse_spec,
    random_spec,
    sample_gnp,
)
from .pipeline import embed_full
from .rng import derive_seed

CSV_COLUMNS = ("seed", "n", "p", "alpha", "ell", "host", "spec", "outcome", "retries", "ms")
AGG_COLUMNS = ("n", "p", "p_mult", "alpha", "ell", "trials", "successes", "rate", "stderr", "mean_retries")
OUTCOMES = frozenset(
    {"success", "fail:input", "fail:decompose", "fail:core", "fail:middle", "fail:switch", "fail:verify"}
)
HOSTS = ("bipartite", "random-dense", "complete", "file")
TARGETS = ("spec", "random-spec", "all-specs")
P_UNITS = ("abs", "n^-2/3", "n^-5/6", "ell", "n^-1")


def p_unit_value(unit: str, n: int, ell: int) -> float:
    """Size of one p-grid unit; ``ell`` means ``n^{-(ell-1)/ell}``."""
    if unit == "abs":
        return 1.0
    if unit == "n^-2/3":
        return n ** (-2 / 3)
    if unit == "n^-5/6":
        return n ** (-5 / 6)
    if unit == "ell":
        return n ** (-(ell - 1) / ell)
    if unit == "n^-1":
        return 1.0 / n
    raise ValueError(f"unknown p unit {unit!r}; choose from {P_UNITS}")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    n: int
    p: float
    alpha: float
    ell: int
    host: str
    spec: str
    outcome: str
    retries: int
    ms: float

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")

    @property
    def success(self) -> bool:
        return self.outcome == "success"

    def row(self) -> list:
        return [self.seed, self.n, f"{self.p:.6g}", f"{self.alpha:g}", self.ell, self.host, self.spec,
                self.outcome, self.retries, f"{self.ms:.1f}"]


@dataclass(frozen=True)
class TrialConfig:
    """One fully resolved trial."""

    n: int
    p: float
    alpha: float
    ell: int
    seed: int
    host: str = "bipartite"
    spec: str | None = None
    host_file: str | None = None
    overrides: dict = field(default_factory=dict)

    def validate(self) -> "TrialConfig":
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p = {self.p} outside [0, 1]")
        if self.host not in HOSTS:
            raise ValueError(f"unknown host kind {self.host!r}")
        if self.host == "file" and not self.host_file:
            raise ValueError("host kind 'file' needs host_file")
        return self


@dataclass
class SweepConfig:
    n: list[int] = field(default_factory=lambda: [60])
    p: list[float] = field(default_factory=lambda: [1.0])
    p_unit: str = "n^-2/3"
    alpha: list[float] = field(default_factory=lambda: [0.1])
    ell: list[int] = field(default_factory=lambda: [3])
    trials: int = 10
    base_seed: int = 0
    host: str = "bipartite"
    host_file: str | None = None
    target: str = "spec"
    spec: str | None = None
    workers: int = 1
    overrides: dict = field(default_factory=dict)

    def validate(self) -> "SweepConfig":
        for name in ("n", "p", "alpha", "ell"):
            if not getattr(self, name):
                raise ValueError(f"grid {name!r} is empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.p_unit not in P_UNITS:
            raise ValueError(f"unknown p unit {self.p_unit!r}")
        if self.host not in HOSTS:
            raise ValueError(f"unknown host kind {self.host!r}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target mode {self.target!r}")
        if self.target == "spec" and self.spec is None:
            raise ValueError("target 'spec' needs a spec")
        if self.host == "file" and not self.host_file:
            raise ValueError("host kind 'file' needs host_file")
        known = {f.name for f in fields(ParamSet)}
        bad = set(self.overrides) - known
        if bad:
            raise ValueError(f"unknown parameter overrides {sorted(bad)}")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise ValueError(f"unknown sweep config keys {sorted(bad)}")
        data = dict(data)
        for name in ("n", "p", "alpha", "ell"):
            if name in data and not isinstance(data[name], (list, tuple)):
                data[name] = [data[name]]
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def cells(self) -> list[tuple[int, float, float, float, int]]:
        """Grid cells as ``(n, p_mult, p, alpha, ell)`` in deterministic order."""
        out = []
        for n in self.n:
            for ell in self.ell:
                for alpha in self.alpha:
                    for mult in self.p:
                        p = min(1.0, mult * p_unit_value(self.p_unit, n, ell))
                        out.append((int(n), float(mult), p, float(alpha), int(ell)))
        return out


def build_host(cfg: TrialConfig) -> tuple[Graph, Graph]:
    """``(G, G_alpha)`` for a trial; the random part uses its own derived seed.

    The ``complete`` kind makes both parts ``K_n`` so the host is complete
    in every sense the pipeline uses (switching searches G alone).
    """
    n = cfg.n
    if cfg.host == "complete":
        return Graph.complete(n), Graph.complete(n)
    if cfg.host == "bipartite":
        g_alpha = make_bipartite_host(n, cfg.alpha)
    elif cfg.host == "random-dense":
        g_alpha = make_random_dense_host(n, cfg.alpha, derive_seed(cfg.seed, 1))
    else:
        g_alpha = read_edge_list(cfg.host_file)
        if g_alpha.n != n:
            raise ValueError(f"host file has {g_alpha.n} vertices, trial wants {n}")
    g = sample_gnp(n, cfg.p, derive_seed(cfg.seed, 2))
    return g, g_alpha


def _resolve_spec(cfg: TrialConfig):
    if cfg.spec is None:
        return random_spec(cfg.n, cfg.ell, derive_seed(cfg.seed, 3))
    return parse_spec(cfg.spec)


def run_trial(cfg: TrialConfig) -> TrialRecord:
    """Build host and target, run the pipeline, verify, and record the outcome."""
    cfg.validate()
    if cfg.host == "complete":
        cfg = replace(cfg, p=1.0)
    spec = _resolve_spec(cfg)
    if spec.n != cfg.n:
        raise ValueError(f"spec {format_spec(spec)} has {spec.n} vertices, trial wants {cfg.n}")
    params = ParamSet.practical(cfg.n, cfg.alpha, ell=cfg.ell, p=cfg.p, **cfg.overrides)
    start = time.perf_counter()
    g, g_alpha = build_host(cfg)
    f = build_f_graph(spec)
    result = embed_full(f, g, g_alpha, params, seed=derive_seed(cfg.seed, 4))
    ms = (time.perf_counter() - start) * 1000
    return TrialRecord(cfg.seed, cfg.n, cfg.p, cfg.alpha, cfg.ell, cfg.host, format_spec(spec),
                       result.outcome, result.retries, ms)


def expand(cfg: SweepConfig) -> list[tuple[int, TrialConfig]]:
    """All trials of a sweep as ``(cell index, config)``; seeds come from ``(base, cell, trial)``."""
    cfg.validate()
    out = []
    for ci, (n, _mult, p, alpha, ell) in enumerate(cfg.cells()):
        if cfg.target == "all-specs":
            specs = [format_spec(s) for s in enumerate_specs(n, ell)]
        elif cfg.target == "spec":
            specs = [cfg.spec]
        else:
            specs = [None]
        for ti in range(cfg.trials):
            for si, spec in enumerate(specs):
                seed = derive_seed(cfg.base_seed, ci, ti, si) if len(specs) > 1 else derive_seed(cfg.base_seed, ci, ti)
                out.append((ci, TrialConfig(n, p, alpha, ell, seed, cfg.host, spec, cfg.host_file, dict(cfg.overrides))))
    return out


def sweep(cfg: SweepConfig) -> tuple[list[TrialRecord], list[dict]]:
    """Run every trial; records come back in index order whatever the completion order."""
    jobs = expand(cfg)
    configs = [tc for _, tc in jobs]
    if cfg.workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(run_trial, configs, chunksize=max(1, len(configs) // (8 * cfg.workers))))
    else:
        records = [run_trial(tc) for tc in configs]
    cells = cfg.cells()
    by_cell: dict[int, list[TrialRecord]] = {}
    for (ci, _), rec in zip(jobs, records):
        by_cell.setdefault(ci, []).append(rec)
    aggs = [aggregate(cells[ci], by_cell.get(ci, [])) for ci in range(len(cells))]
    return records, aggs


def aggregate(cell, records: Sequence[TrialRecord]) -> dict:
    n, mult, p, alpha, ell = cell
    t = len(records)
    s = sum(r.success for r in records)
    rate = s / t if t else 0.0
    se = math.sqrt(rate * (1 - rate) / t) if t else 0.0
    mean_retries = sum(r.retries for r in records) / t if t else 0.0
    return {"n": n, "p": p, "p_mult": mult, "alpha": alpha, "ell": ell, "trials": t, "successes": s,
            "rate": rate, "stderr": se, "mean_retries": mean_retries}


def records_csv(records: Iterable[TrialRecord], *, with_time: bool = True) -> str:
    """CSV text; ``with_time=False`` blanks the wall-time column for determinism checks."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        row = r.row()
        if not with_time:
            row[-1] = ""
        w.writerow(row)
    return buf.getvalue()


def aggregates_csv(aggs: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=AGG_COLUMNS, lineterminator="\n")
    w.writeheader()
    for a in aggs:
        w.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in a.items()})
    return buf.getvalue()


def write_sweep(records, aggs, out: str | Path) -> tuple[Path, Path]:
    """Write ``out`` (trial rows) and ``<stem>.agg.csv`` next to it."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    agg_path = out.with_name(out.stem + ".agg.csv")
    out.write_text(records_csv(records))
    agg_path.write_text(aggregates_csv(aggs))
    return out, agg_path


def monotone_violations(rates: Sequence[float], trials: Sequence[int], width: float = 2.0) -> list[tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, where rate ``j`` falls below rate ``i`` by more than ``width`` standard errors."""
    bad = []
    for i in range(len(rates)):
        for j in range(i + 1, len(rates)):
            ri, rj = rates[i], rates[j]
            se = math.sqrt(ri * (1 - ri) / trials[i] + rj * (1 - rj) / trials[j])
            if rj < ri - width * se - 1e-12:
                bad.append((i, j))
    return bad


def minimal_multiplier(aggs: Sequence[dict], threshold: float = 0.5) -> float | None:
    """Smallest ``p_mult`` whose success rate reaches ``threshold``."""
    hits = [a["p_mult"] for a in aggs if a["rate"] >= threshold]
    return min(hits) if hits else None


__all__ = [
    "AGG_COLUMNS", "CSV_COLUMNS", "HOSTS", "OUTCOMES", "P_UNITS", "TARGETS",
    "SweepConfig", "TrialConfig", "TrialRecord",
    "aggregate", "aggregates_csv", "build_host", "expand", "minimal_multiplier", "monotone_violations",
    "p_unit_value", "records_csv", "run_trial", "sweep", "write_sweep",
]
