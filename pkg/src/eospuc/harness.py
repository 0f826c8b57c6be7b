"""Experiment sweeps: run each method on generated instances and score it.

Every (instance, method) cell gets its own oracle. Wall times cover the
method itself (including its final solve and any repair queries) but not
instance generation or the reference solve.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

from .baselines import fao, priority_greedy
from .basis import LanguageConfig
from .instance_gen import GenConfig, generate
from .learn_optimize import run as learn_optimize
from .model import Instance, is_feasible
from .oracle import HiddenOracle
from .optsol import SolveResult, solve

METHODS = ("PG", "FAO", "LO", "REF")


@dataclass
class ExperimentConfig:
    n_values: list[int] = field(default_factory=lambda: [10, 20])
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    Q: int = 100
    fao_budget: int = 100
    t_iter: float = 2.0
    t_final: float = 2.0
    t_reference: float = 20.0
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    record_time: bool = True
    workers: int = 1
    fao_random_proposals: bool = False
    gen: dict = field(default_factory=dict)  # extra GenConfig fields

    def __post_init__(self) -> None:
        self.methods = [m.upper() for m in self.methods]
        if not self.n_values or not self.seeds or not self.methods:
            raise ValueError("n_values, seeds and methods must be non-empty")
        if self.Q < 1 or self.fao_budget < 1:
            raise ValueError("Q and fao_budget must be >= 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")

    @classmethod
    def full_scale(cls) -> ExperimentConfig:
        return cls(n_values=[10, 20, 30, 40, 50], t_iter=20.0, t_final=20.0, t_reference=120.0)

    @classmethod
    def from_json(cls, d: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)


@dataclass
class MetricsRow:
    n: int
    seed: int
    method: str
    value: float
    ref_value: float
    gap_pct: float
    main_queries: int
    partial_queries: int
    q_star: int | None
    wall_time: float
    frac: float | None
    ref_proven: bool
    feasible: bool = True
    status: str = "ok"


@dataclass(frozen=True)
class Case:
    n: int
    seed: int
    instance: Instance
    hidden: frozenset
    lang: LanguageConfig


def reference_solve(inst: Instance, hidden: Iterable, t_reference: float) -> SolveResult:
    return solve(inst, hidden, t_reference)


def exact_frac(learned: Iterable, hidden: Iterable) -> float:
    """Share of hidden constraints learned with identical family, scope and parameters."""
    hidden = frozenset(hidden)
    if not hidden:
        raise ValueError("hidden model is empty")
    return len(frozenset(learned) & hidden) / len(hidden)


def gap_pct(ref_value: float, value: float) -> float:
    if ref_value <= 0:
        return 0.0
    return (ref_value - value) / ref_value * 100.0


def _run_method(
    method: str, case: Case, cfg: ExperimentConfig, ref: SolveResult, trace_dir: Path | None
) -> MetricsRow:
    inst, hidden = case.instance, case.hidden
    oracle = HiddenOracle(inst, hidden)
    q_star = frac = None
    if method == "REF":
        e, value, main, partial, wall = ref.assignment, ref.value, 0, 0, ref.elapsed
    elif method == "PG":
        r = priority_greedy(inst, oracle)
        e, value, main, partial, wall = r.assignment, r.value, r.main_queries, 0, r.wall_time
    elif method == "FAO":
        r = fao(
            inst, oracle, case.lang, cfg.fao_budget, cfg.t_final, case.seed,
            t_iter=cfg.t_iter, random_proposals=cfg.fao_random_proposals,
        )
        e, value, main, partial, wall = r.assignment, r.value, r.main_queries, r.partial_queries, r.wall_time
        frac = exact_frac(r.learned, hidden)
    else:
        best, trace = learn_optimize(inst, oracle, case.lang, cfg.Q, cfg.t_iter, cfg.t_final, case.seed)
        e, value = best, trace.best_value
        main, partial, wall = trace.main_queries, trace.partial_queries, trace.wall_time
        q_star = trace.q_star
        frac = exact_frac(trace.learned_final, hidden)
        if trace_dir is not None:
            path = trace_dir / f"lo_n{case.n}_s{case.seed}.jsonl"
            trace.write(path, path.with_suffix(".summary.json"))
    return MetricsRow(
        n=case.n,
        seed=case.seed,
        method=method,
        value=float(value),
        ref_value=float(ref.value),
        gap_pct=gap_pct(ref.value, value),
        main_queries=main,
        partial_queries=partial,
        q_star=q_star,
        wall_time=wall if cfg.record_time else 0.0,
        frac=frac,
        ref_proven=ref.proven_optimal,
        feasible=is_feasible(hidden, e),
    )


def _run_case(case: Case, cfg: ExperimentConfig, trace_dir: Path | None = None) -> list[MetricsRow]:
    ref = reference_solve(case.instance, case.hidden, cfg.t_reference)
    rows = []
    for method in cfg.methods:
        try:
            rows.append(_run_method(method, case, cfg, ref, trace_dir))
        except Exception as exc:  # noqa: BLE001 - a failed cell must not abort the sweep
            rows.append(
                MetricsRow(
                    case.n, case.seed, method, math.nan, float(ref.value), math.nan, 0, 0, None,
                    0.0, None, ref.proven_optimal, False, f"failed: {type(exc).__name__}: {exc}",
                )
            )
    return rows


def generated_cases(cfg: ExperimentConfig) -> list[Case]:
    cases = []
    for n in cfg.n_values:
        for seed in cfg.seeds:
            inst, hidden, lang = generate(GenConfig(n=n, seed=seed, **cfg.gen))
            cases.append(Case(n, seed, inst, hidden, lang))
    return cases


def run_experiment(
    cfg: ExperimentConfig,
    cases: Sequence[Case] | None = None,
    trace_dir: str | Path | None = None,
) -> list[MetricsRow]:
    """Run every requested method on every case; rows come back in canonical order.

    With ``trace_dir`` set, each Learn&Optimize run also writes its trace there.
    """
    if cases is None:
        cases = generated_cases(cfg)
    tdir = None if trace_dir is None else Path(trace_dir)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            chunks = list(pool.map(_run_case, cases, [cfg] * len(cases), [tdir] * len(cases)))
    else:
        chunks = [_run_case(c, cfg, tdir) for c in cases]
    order = {m: i for i, m in enumerate(METHODS)}
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.n, r.seed, order[r.method]))
    return rows


ROW_FIELDS = [f.name for f in fields(MetricsRow)]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Iterable[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in rows:
        w.writerow([_fmt(getattr(r, name)) for name in ROW_FIELDS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[MetricsRow]:
    def opt(cast):
        return lambda s: None if s == "" else cast(s)

    def boolean(s):
        return s == "true"

    casts = {
        "n": int, "seed": int, "method": str, "value": float, "ref_value": float,
        "gap_pct": float, "main_queries": int, "partial_queries": int,
        "q_star": opt(int), "wall_time": float, "frac": opt(float),
        "ref_proven": boolean, "feasible": boolean, "status": str,
    }
    reader = csv.DictReader(io.StringIO(text))
    return [MetricsRow(**{k: casts[k](v) for k, v in rec.items()}) for rec in reader]


def _mean(xs: list[float]) -> float:
    return statistics.fmean(xs) if xs else math.nan


def _std(xs: list[float]) -> float:
    return statistics.stdev(xs) if len(xs) > 1 else 0.0


SUMMARY_FIELDS = [
    "n", "method", "runs", "gap_mean", "gap_std", "main_mean", "q_star_mean",
    "time_mean", "frac_mean", "speedup", "ref_dagger",
]


def summarize(rows: Iterable[MetricsRow]) -> list[dict]:
    """Per (n, method) means with sample std of the gap; plus FAO/LO speedup."""
    groups: dict[tuple[int, str], list[MetricsRow]] = {}
    for r in rows:
        if r.status == "ok":
            groups.setdefault((r.n, r.method), []).append(r)
    order = {m: i for i, m in enumerate(METHODS)}
    out = []
    for (n, method) in sorted(groups, key=lambda k: (k[0], order[k[1]])):
        rs = groups[(n, method)]
        gaps = [r.gap_pct for r in rs]
        qs = [r.q_star for r in rs if r.q_star is not None]
        fr = [r.frac for r in rs if r.frac is not None]
        out.append({
            "n": n,
            "method": method,
            "runs": len(rs),
            "gap_mean": _mean(gaps),
            "gap_std": _std(gaps),
            "main_mean": _mean([r.main_queries for r in rs]),
            "q_star_mean": _mean(qs) if qs else None,
            "time_mean": _mean([r.wall_time for r in rs]),
            "frac_mean": _mean(fr) if fr else None,
            "speedup": None,
            "ref_dagger": not all(r.ref_proven for r in rs),
        })
    by_key = {(s["n"], s["method"]): s for s in out}
    for n in sorted({s["n"] for s in out}):
        f, lo = by_key.get((n, "FAO")), by_key.get((n, "LO"))
        if f and lo and lo["time_mean"] > 0:
            lo["speedup"] = f["time_mean"] / lo["time_mean"]
    return out


def summary_to_csv(summary: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for s in summary:
        w.writerow([_fmt(s[k]) for k in SUMMARY_FIELDS])
    return buf.getvalue()


def write_results(rows: list[MetricsRow], out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = out / "results.csv"
    results.write_text(rows_to_csv(rows))
    summary = out / "summary.csv"
    summary.write_text(summary_to_csv(summarize(rows)))
    return results, summary


def config_to_json(cfg: ExperimentConfig) -> str:
    return json.dumps(asdict(cfg), indent=2, sort_keys=True)
