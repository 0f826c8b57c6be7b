"""Command line entry point: ``eospuc {gen,solve,run,experiment,trace-plot-data}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import fields
from pathlib import Path

from .baselines import fao, priority_greedy
from .basis import LanguageConfig
from .harness import ExperimentConfig, reference_solve, run_experiment, summarize, write_results
from .instance_gen import GenConfig, count_nonvacuous, generate
from .learn_optimize import run as learn_optimize
from .model import (
    constraint_from_json,
    constraint_to_json,
    instance_from_json,
    instance_to_json,
    sorted_constraints,
)
from .oracle import HiddenOracle
from .optsol import brute_force, solve


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def load_constraints(path: str) -> frozenset:
    """Accepts a bare list of constraints or ``{"constraints": [...]}``."""
    data = _read_json(path)
    if isinstance(data, dict):
        data = data["constraints"]
    return frozenset(constraint_from_json(c) for c in data)


def cmd_gen(args) -> int:
    cfg = GenConfig(
        n=args.n,
        seed=args.seed,
        window_len_lo=args.window_len_lo,
        window_len_hi=args.window_len_hi,
        cap_k=args.cap_k,
        cap_w=args.cap_w,
    )
    inst, hidden, lang = generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "instance.json", instance_to_json(inst))
    # kept apart so experiment code never reads the hidden model by accident
    _write_json(
        out / "hidden.json",
        {"constraints": [constraint_to_json(c) for c in sorted_constraints(hidden)]},
    )
    _write_json(out / "lang.json", lang.to_json())
    print(json.dumps({"n": inst.n, "horizon": inst.horizon, "hidden": len(hidden),
                      "non_vacuous_sep": count_nonvacuous(inst, hidden), "out": str(out)}))
    return 0


def cmd_solve(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    S = load_constraints(args.constraints) if args.constraints else frozenset()
    res = brute_force(inst, S) if args.brute_force else solve(inst, S, args.time_limit, args.seed)
    print(json.dumps(res.to_json()))
    return 0


def cmd_run(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    hidden = load_constraints(args.hidden)
    oracle = HiddenOracle(inst, hidden)
    method = args.method
    if method == "ref":
        res = reference_solve(inst, hidden, args.t_ref)
        out = {"best_value": res.value, "best": list(res.assignment.slots), "proven": res.proven_optimal}
    elif method == "pg":
        out = priority_greedy(inst, oracle).summary()
    else:
        lang = LanguageConfig.from_json(_read_json(args.lang))
        if method == "fao":
            out = fao(inst, oracle, lang, args.fao_budget, args.t_final, args.seed, t_iter=args.t_iter).summary()
        else:
            _, trace = learn_optimize(inst, oracle, lang, args.q_cutoff, args.t_iter, args.t_final, args.seed)
            out = trace.summary()
            if args.trace_out:
                path = Path(args.trace_out)
                trace.write(path, path.with_suffix(".summary.json"))
    out["oracle"] = oracle.stats().to_json()
    print(json.dumps(out))
    return 0


def _experiment_config(args) -> ExperimentConfig:
    base = ExperimentConfig.full_scale() if args.full_scale else ExperimentConfig()
    d = {f.name: getattr(base, f.name) for f in fields(ExperimentConfig)}
    if args.config:
        d.update(_read_json(args.config))
    overrides = {
        "n_values": args.n_values,
        "seeds": args.seeds,
        "Q": args.q_cutoff,
        "fao_budget": args.fao_budget,
        "t_iter": args.t_iter,
        "t_final": args.t_final,
        "t_reference": args.t_ref,
        "methods": args.methods,
        "workers": args.workers,
    }
    d.update({k: v for k, v in overrides.items() if v is not None})
    if args.no_timing:
        d["record_time"] = False
    return ExperimentConfig.from_json(d)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    out = Path(args.out)
    rows = run_experiment(cfg, trace_dir=out / "traces" if "LO" in cfg.methods else None)
    results, summary = write_results(rows, out)
    failed = [r for r in rows if r.status != "ok"]
    for s in summarize(rows):
        print(
            f"n={s['n']:<3} {s['method']:<4} gap={s['gap_mean']:6.2f}% (±{s['gap_std']:.2f})"
            f" main={s['main_mean']:6.1f} time={s['time_mean']:.3f}s"
            + (f" speedup={s['speedup']:.1f}x" if s["speedup"] else "")
            + (" †" if s["ref_dagger"] else "")
        )
    print(f"wrote {results} and {summary}; {len(failed)} failed rows")
    return 1 if (failed and args.strict) else 0


def cmd_trace_plot_data(args) -> int:
    lines = Path(args.trace).read_text().splitlines()
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "v_L", "best_so_far", "rejected"])
        for line in lines:
            if line.strip():
                rec = json.loads(line)
                w.writerow([rec["q"], rec["v_L"], rec["best_value_so_far"], 0 if rec["verdict"] else 1])
    finally:
        if args.out:
            fh.close()
    return 0


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eospuc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance and its hidden model")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--window-len-lo", type=int, default=2)
    g.add_argument("--window-len-hi", type=int, default=6)
    g.add_argument("--cap-k", type=int)
    g.add_argument("--cap-w", type=int)
    g.add_argument("--out", required=True, help="directory for instance/hidden/lang JSON")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="maximise priority under a constraint file")
    s.add_argument("--instance", required=True)
    s.add_argument("--constraints", help="JSON list of constraints (default: none)")
    s.add_argument("--time-limit", type=float, default=20.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--brute-force", action="store_true")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("run", help="run one method against a hidden model")
    r.add_argument("--method", choices=["pg", "fao", "lo", "ref"], required=True)
    r.add_argument("--instance", required=True)
    r.add_argument("--hidden", required=True)
    r.add_argument("--lang", help="language JSON (fao, lo)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--q-cutoff", type=int, default=100)
    r.add_argument("--fao-budget", type=int, default=100)
    r.add_argument("--t-iter", type=float, default=20.0)
    r.add_argument("--t-final", type=float, default=20.0)
    r.add_argument("--t-ref", type=float, default=120.0)
    r.add_argument("--trace-out", help="JSONL path for the Learn&Optimize trace")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="sweep methods over sizes and seeds")
    e.add_argument("--config", help="JSON file with ExperimentConfig fields")
    e.add_argument("--out", default="out")
    e.add_argument("--n-values", type=_int_list)
    e.add_argument("--seeds", type=_int_list, help="e.g. 0-19 or 0,3,7")
    e.add_argument("--seed", dest="seeds", type=_int_list, help=argparse.SUPPRESS)
    e.add_argument("--methods", type=lambda t: [m for m in t.split(",") if m])
    e.add_argument("--q-cutoff", type=int)
    e.add_argument("--fao-budget", type=int)
    e.add_argument("--t-iter", type=float)
    e.add_argument("--t-final", type=float)
    e.add_argument("--t-ref", type=float)
    e.add_argument("--workers", type=int)
    e.add_argument("--full-scale", action="store_true", help="n up to 50, 20 s solves, 120 s reference")
    e.add_argument("--no-timing", action="store_true", help="write 0 wall times for byte-stable output")
    e.add_argument("--strict", action="store_true", help="exit nonzero if any row failed")
    e.set_defaults(func=cmd_experiment)

    t = sub.add_parser("trace-plot-data", help="convergence CSV from a trace JSONL")
    t.add_argument("--trace", required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_trace_plot_data)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run" and args.method in ("fao", "lo") and not args.lang:
        build_parser().error("--lang is required for fao and lo")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
