"""Command-line entry point: generate, validate, solve, bench, export-lp, render, exact.

Exit codes: 0 success, 1 infeasible or invalid input, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from statistics import mean

from .alns import AlnsConfig, number, run
from .feasibility import load_schedule, save_schedule, validate
from .instance import SIZE_CLASSES, GeneratorConfig, InstanceError, generate_instance, load_instance, save_instance
from .objective import ObjectiveWeights, evaluate
from .oracle import Limits, export_lp, solve_exact
from .render import render_svg

COLUMNS = ("instance", "iterations", "runs", "Avg", "Best", "Time(s)", "AGap%", "BGap%", "|M|")


def _r2(x: float | None) -> float | None:
    return None if x is None else round(float(x), 2)


def gap(reference, value) -> float | None:
    """Percent shortfall of ``value`` below ``reference``; negative means better."""
    if reference is None or reference == 0:
        return None
    return (float(reference) - float(value)) / abs(float(reference)) * 100


@dataclass
class BenchRow:
    instance: str
    iterations: int
    runs: int
    avg: float
    best: float
    time: float
    agap: float | None
    bgap: float | None
    assigned: float

    def __post_init__(self):
        # rows hold exactly what the CSV shows, so summaries re-derive identically
        self.avg, self.best, self.time = _r2(self.avg), _r2(self.best), _r2(self.time)
        self.agap, self.bgap, self.assigned = _r2(self.agap), _r2(self.bgap), _r2(self.assigned)

    def cells(self) -> list[str]:
        def f(x):
            return "" if x is None else f"{x:.2f}"
        return [self.instance, str(self.iterations), str(self.runs), f(self.avg), f(self.best),
                f(self.time), f(self.agap), f(self.bgap), f(self.assigned)]


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def summary(self) -> BenchRow:
        def m(attr):
            vals = [getattr(r, attr) for r in self.rows]
            return None if not vals or any(v is None for v in vals) else mean(vals)
        its = {r.iterations for r in self.rows}
        return BenchRow("Average", its.pop() if len(its) == 1 else 0, sum(r.runs for r in self.rows),
                        m("avg") or 0.0, m("best") or 0.0, m("time") or 0.0, m("agap"), m("bgap"),
                        m("assigned") or 0.0)

    def summaries_by_iterations(self) -> list[BenchRow]:
        out = []
        for its in sorted({r.iterations for r in self.rows}):
            sub = BenchReport([r for r in self.rows if r.iterations == its]).summary()
            sub.iterations = its
            out.append(sub)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.cells())
        for s in self.summaries_by_iterations():
            w.writerow(s.cells())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> BenchReport:
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            if rec["instance"] == "Average":
                continue

            def opt(k):
                return float(rec[k]) if rec[k] != "" else None
            rows.append(BenchRow(rec["instance"], int(rec["iterations"]), int(rec["runs"]),
                                 float(rec["Avg"]), float(rec["Best"]), float(rec["Time(s)"]),
                                 opt("AGap%"), opt("BGap%"), float(rec["|M|"])))
        return cls(rows)


def _aggregate(name: str, iterations: int, values: list, times: list[float], assigned: list[int],
               reference) -> BenchRow:
    avg = mean(float(v) for v in values)
    best = max(float(v) for v in values)
    return BenchRow(name, iterations, len(values), avg, best, mean(times), gap(reference, avg),
                    gap(reference, best), mean(assigned))


# --------------------------------------------------------------------------
# argument handling


def _parse_seeds(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            a, b = part.split("-", 1) if not part.startswith("-") else (part, part)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _config_from_args(args) -> AlnsConfig:
    cfg = AlnsConfig.load(args.config) if args.config else AlnsConfig()
    changes = {}
    if args.iterations is not None:
        changes["iterations"] = args.iterations
    if args.weights is not None:
        changes["weights"] = ObjectiveWeights.parse(args.weights)
    if args.alns_plus:
        changes["successor_mode"] = True
    if args.eps3 is not None:
        changes["eps3"] = args.eps3
    return cfg.replace(**changes) if changes else cfg


def _search_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON file with AlnsConfig fields")
    p.add_argument("--seeds", type=_parse_seeds, default=None, help="e.g. 1-10 or 1,4,7")
    p.add_argument("--seed", type=int, default=None, help="single seed (shorthand for --seeds N)")
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--weights", default=None, help="w1,w2,wg,wc,ww or a setting name")
    p.add_argument("--alns-plus", action="store_true", help="successor matching and destruction")
    p.add_argument("--eps3", type=float, default=None)
    p.add_argument("--no-timing", action="store_true", help="write 0 for times (byte-stable output)")
    return p


def _seeds(args) -> list[int]:
    if args.seeds is not None:
        return args.seeds
    if args.seed is not None:
        return [args.seed]
    return list(range(1, 11))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    search = _search_parent()

    g = sub.add_parser("generate", help="write a synthetic instance")
    g.add_argument("--class", dest="size", required=True, choices=sorted(SIZE_CLASSES))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--successor-fraction", type=float, default=GeneratorConfig.successor_fraction)
    g.add_argument("--mandatory-fraction", type=float, default=GeneratorConfig.mandatory_fraction)

    v = sub.add_parser("validate", help="check a schedule; prints a JSON report")
    v.add_argument("--instance", required=True)
    v.add_argument("--schedule", required=True)

    s = sub.add_parser("solve", parents=[search], help="run the search over seeds")
    s.add_argument("--instance", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--reference", type=float, default=None, help="reference value for gaps")

    b = sub.add_parser("bench", parents=[search], help="run a suite over an iteration ladder")
    b.add_argument("--suite", required=True, help="directory of instance files")
    b.add_argument("--reference", default=None,
                   help="JSON {instance name: value}; default is the best value found in the bench")
    b.add_argument("--ladder", default=None, help="comma-separated iteration counts")
    b.add_argument("--out", required=True, help="CSV report path")
    b.add_argument("--log-dir", default=None)

    e = sub.add_parser("export-lp", help="write the binary program in LP format")
    e.add_argument("--instance", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--weights", default="Control")

    r = sub.add_parser("render", help="draw a schedule as SVG")
    r.add_argument("--instance", required=True)
    r.add_argument("--schedule", required=True)
    r.add_argument("--out", required=True)

    x = sub.add_parser("exact", help="solve a tiny instance exactly")
    x.add_argument("--instance", required=True)
    x.add_argument("--out", default=None, help="write the optimal schedule here")
    x.add_argument("--weights", default="Control")
    x.add_argument("--max-nodes", type=int, default=Limits.max_nodes)
    x.add_argument("--time-limit", type=float, default=Limits.time_limit)
    return parser


# --------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    cfg = GeneratorConfig(successor_fraction=args.successor_fraction,
                          mandatory_fraction=args.mandatory_fraction)
    inst = generate_instance(args.size, args.seed, cfg)
    save_instance(inst, args.out)
    print(inst.name)
    return 0


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    report = validate(load_schedule(inst, args.schedule))
    print(report.to_json())
    return 0 if report.ok else 1


def solve_runs(inst, config: AlnsConfig, seeds: list[int], timing: bool = True,
               checkpoints: list[int] | None = None):
    """Run each seed; returns per-seed results and wall times."""
    results, times = [], []
    for seed in seeds:
        t0 = time.perf_counter()
        res = run(inst, config.replace(rng_seed=seed), checkpoints=checkpoints or ())
        times.append(time.perf_counter() - t0 if timing else 0.0)
        results.append(res)
    return results, times


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    config = _config_from_args(args)
    seeds = _seeds(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results, times = solve_runs(inst, config, seeds, timing=not args.no_timing)
    for seed, res in zip(seeds, results):
        lines = res.log_lines({"seed": seed, "iterations": config.iterations})
        (out / f"{inst.name}_s{seed}.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    best = max(range(len(results)), key=lambda i: (results[i].best_value, -i))
    save_schedule(results[best].best, out / f"{inst.name}_best.json")
    row = _aggregate(inst.name, config.iterations, [r.best_value for r in results], times,
                     [r.breakdown.assigned for r in results], args.reference)
    report = BenchReport([row])
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    (out / "config.json").write_text(json.dumps(config.to_dict(), indent=1) + "\n", encoding="utf-8")
    sys.stdout.write(report.to_csv())
    return 0


def cmd_bench(args) -> int:
    config = _config_from_args(args)
    seeds = _seeds(args)
    ladder = sorted(int(x) for x in args.ladder.split(",")) if args.ladder else [config.iterations]
    config = config.replace(iterations=ladder[-1])
    refs = json.loads(Path(args.reference).read_text()) if args.reference else None
    files = sorted(Path(args.suite).glob("*.json"))
    if not files:
        print(f"no instance files in {args.suite}", file=sys.stderr)
        return 1
    insts = [(f, load_instance(f)) for f in files]
    names = [inst.name for _, inst in insts]
    per_instance = []
    for f, inst in insts:
        # generated names can collide; fall back to the file name then
        label = inst.name if names.count(inst.name) == 1 else f.stem
        results, _ = solve_runs(inst, config, seeds, checkpoints=ladder)
        if args.log_dir:
            d = Path(args.log_dir)
            d.mkdir(parents=True, exist_ok=True)
            for seed, res in zip(seeds, results):
                (d / f"{label}_s{seed}.jsonl").write_text("\n".join(res.log_lines({"seed": seed})) + "\n")
        per_instance.append((label, results))
    rows = []
    for name, results in sorted(per_instance, key=lambda x: x[0]):
        ref = refs.get(name) if refs is not None else max(r.best_value for r in results)
        for k, its in enumerate(ladder):
            vals = [r.trace[k][1] for r in results]
            times = [0.0 if args.no_timing else r.trace[k][2] for r in results]
            assigned = [r.trace[k][3] for r in results]
            rows.append(_aggregate(name, its, vals, times, assigned, ref))
    report = BenchReport(rows)
    Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    sys.stdout.write(report.to_csv())
    return 0


def cmd_export_lp(args) -> int:
    inst = load_instance(args.instance)
    export_lp(inst, ObjectiveWeights.parse(args.weights), args.out)
    return 0


def cmd_render(args) -> int:
    inst = load_instance(args.instance)
    sched = load_schedule(inst, args.schedule)
    report = validate(sched)
    if not report.ok:
        print(report.to_json(), file=sys.stderr)
        print("refusing to render an infeasible schedule", file=sys.stderr)
        return 1
    Path(args.out).write_text(render_svg(sched), encoding="utf-8")
    return 0


def cmd_exact(args) -> int:
    inst = load_instance(args.instance)
    weights = ObjectiveWeights.parse(args.weights)
    res = solve_exact(inst, weights, Limits(args.max_nodes, args.time_limit))
    if args.out:
        save_schedule(res.optimal_schedule, args.out)
    b = evaluate(res.optimal_schedule, weights)
    print(json.dumps({"instance": inst.name, "optimal_value": number(res.optimal_value),
                      "proven": res.proven, "nodes": res.nodes_explored, "assigned": b.assigned}))
    return 0


COMMANDS = {
    "generate": cmd_generate, "validate": cmd_validate, "solve": cmd_solve, "bench": cmd_bench,
    "export-lp": cmd_export_lp, "render": cmd_render, "exact": cmd_exact,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InstanceError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
