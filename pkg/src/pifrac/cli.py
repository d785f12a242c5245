"""Command-line entry point: ``pifrac {digits,gen,stats,scatter,gasr,bench}``.

Every command that writes files also writes ``<output>.manifest``, a flat
``key=value`` record of the resolved parameters, outputs and run time.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pifrac import bbp, benchmarks, gasr, sampling, table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FILE = 3
EXIT_ACCURACY = 4

# Best fitness / Neval reported for the six-function suite, keyed by (function, dims):
# (v-PSO mean best, v-PSO spread, GASR best, GASR Neval)
LITERATURE = {
    ("ackley", 10): ("-1.84e-15", "2.9e-16", "-5.762878e-4", 656308),
    ("ackley", 20): ("-2.84e-15", "1.5e-16", "-1.161337e-2", 328243),
    ("ackley", 30): ("-4.93e-15", "3.4e-16", "-6.988124e-3", 457978),
    ("cosine_mixture", 10): ("1", "0", "0.9999997", 457978),
    ("cosine_mixture", 20): ("2", "0", "1.9999993", 457978),
    ("cosine_mixture", 30): ("3", "0", "2.9999981", 394558),
    ("exponential", 10): ("1", "0", "0.9999999", 361090),
    ("exponential", 20): ("1", "3e-18", "0.9999999", 294763),
    ("exponential", 30): ("1", "1e-17", "0.9999999", 328243),
    ("griewank", 10): ("-0.020", "0.006", "-0.004429", 492372),
    ("griewank", 20): ("-0.0026", "0.002", "-0.015874", 361090),
    ("griewank", 30): ("-8.8568e-4", "0.001", "-0.002139", 457978),
    ("rastrigin", 10): ("0", "0", "-1.057361e-4", 425640),
    ("rastrigin", 20): ("0", "0", "-1.203252e-3", 394558),
    ("rastrigin", 30): ("-5.6843e-16", "1e-15", "-9.932735e-5", 492372),
    ("schwefel", 10): ("-620.8131", "50.4", "-7.753379e-4", 457978),
    ("schwefel", 20): ("-1.3384e+3", "68.5", "-7.666976e-4", 394558),
    ("schwefel", 30): ("-2.1395e+3", "103.3", "-9.400238e-3", 294763),
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def write_manifest(path: Path, command: str, params: dict, outputs: list[Path], seconds: float, extra: dict | None = None) -> Path:
    lines = [f"command={command}"]
    lines += [f"param.{k}={v}" for k, v in sorted(params.items())]
    lines += [f"output={p}" for p in outputs]
    for k, v in (extra or {}).items():
        lines.append(f"{k}={v}")
    lines.append(f"timing.seconds={seconds:.3f}")
    path = Path(str(path) + ".manifest")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _params(args: argparse.Namespace) -> dict:
    out = {}
    for k, v in vars(args).items():
        if k in ("func", "command"):
            continue
        out[k] = ",".join(map(str, v)) if isinstance(v, list) else v
    return out


def _load(path: str | None) -> table.PiFractionTable:
    if path is None:
        return table.fixture_table()
    try:
        return table.load_table(path)
    except table.TableError as exc:
        raise CliError(str(exc), EXIT_FILE) from exc


# -- commands -------------------------------------------------------------------


def cmd_digits(args) -> int:
    block = bbp.hex_digits_at(
        args.position, args.count, precision_bits=args.precision_bits, reanchor=not args.no_reanchor
    )
    print(block.digits)
    return EXIT_OK


def cmd_gen(args) -> int:
    t0 = time.perf_counter()
    tab = table.build_table(args.count, args.window, args.start, guard_digits=args.guard, workers=args.workers)
    out = table.save_table(tab, args.out)
    write_manifest(
        out,
        "gen",
        _params(args),
        [out],
        time.perf_counter() - t0,
        {"backend": bbp.BACKEND, "first_fraction": tab.text(1)},
    )
    print(f"wrote {tab.count} fractions to {out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    t0 = time.perf_counter()
    tab = _load(args.table)
    stats = table.distribution_stats(tab, args.bins)
    created = _dt.datetime.now().isoformat(timespec="seconds") if args.timestamp else None
    out = table.write_stats(stats, args.out, created=created)
    extra = {"created": created} if created else {}
    if tab.count >= 10 * args.bins:
        chi2 = table.chi_square_uniformity(tab, args.bins)
        extra["chi_square"] = f"{chi2:.6f}"
        print(f"chi-square ({args.bins} bins): {chi2:.4f}")
    write_manifest(out, "stats", _params(args), [out], time.perf_counter() - t0, extra)
    print(f"mean: {stats.mean:.15f}  fractions: {stats.total_points}")
    return EXIT_OK


def cmd_scatter(args) -> int:
    t0 = time.perf_counter()
    spec = sampling.ScatterSpec(args.dims, args.points, args.dim_a, args.dim_b, args.source)
    state = None
    extra = {}
    if args.source == "pifrac":
        tab = _load(args.table)
        start = args.start_index
        if args.clock_start:
            start = sampling.clock_start_index(tab)
            extra["clock_start_index"] = start
        state = sampling.SamplerState(tab, start, args.increment)
    out, matrix = sampling.scatter_export(spec, state, args.out, seed=args.seed, plot_script=args.plot_script)
    xs, ys = matrix[:, args.dim_a - 1], matrix[:, args.dim_b - 1]
    try:
        r = sampling.pearson(xs, ys)
    except sampling.UndefinedCorrelationError:
        r = float("nan")
    a16 = sampling.branch_alignment(xs, ys, 16, 1e-6)
    a256 = sampling.branch_alignment(xs, ys, 256, 1e-5)
    extra.update(pearson=f"{r:.12f}", alignment16=a16, alignment256=a256)
    outputs = [out] + ([out.with_suffix(".plt")] if args.plot_script else [])
    write_manifest(out, "scatter", _params(args), outputs, time.perf_counter() - t0, extra)
    print(f"pearson {r:.6f}  alignment16 {a16:.4f}  alignment256 {a256:.4f}")
    return EXIT_OK


def _spec(args) -> benchmarks.BenchmarkSpec:
    try:
        return benchmarks.default_spec(args.function, args.dims, wide_rastrigin=getattr(args, "wide_rastrigin", False))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def cmd_gasr(args) -> int:
    t0 = time.perf_counter()
    spec = _spec(args)
    tab = _load(args.table)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    results, reports = [], []
    for r in range(args.repeats):
        offset = args.index_offset + r * args.offset_step
        cfg = gasr.GasrConfig(
            spec,
            tab,
            population=args.population,
            generations=args.generations,
            early_termination=not args.no_early_termination,
            index_offset=offset,
        )
        res = gasr.run(cfg)
        path = outdir / f"{spec.id}_{spec.dims}D_Run{r + 1}.txt"
        gasr.write_report(res, cfg, path, run_id=f"run{r + 1}-offset{offset}")
        results.append(res)
        reports.append(path)
        print(f"run {r + 1}: offset {offset}  best {res.best_fitness!r}  evaluations {res.evaluations}")
    best = gasr.best_of(results)
    summary = outdir / f"{spec.id}_{spec.dims}D_summary.txt"
    lines = [f"{spec.dims}D {spec.id}: {args.repeats} run(s), population {args.population}, generations {args.generations}"]
    lines += [
        f"run {i + 1} best {r.best_fitness!r} evaluations {r.evaluations} generations {r.last_generation + 1}"
        for i, r in enumerate(results)
    ]
    lines.append(
        f"best-of: run {best + 1} best {results[best].best_fitness!r} "
        f"total evaluations {sum(r.evaluations for r in results)}"
    )
    summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(lines[-1])
    write_manifest(summary, "gasr", _params(args), reports + [summary], time.perf_counter() - t0)
    return EXIT_OK


def _bench_one(job):
    name, dims, population, generations, table_path = job
    tab = _load(table_path)
    cfg = gasr.GasrConfig(benchmarks.default_spec(name, dims), tab, population=population, generations=generations)
    return name, gasr.run(cfg)


def cmd_bench(args) -> int:
    t0 = time.perf_counter()
    names = [benchmarks.default_spec(n, args.dims).id for n in args.functions]
    jobs = [(n, args.dims, args.population, args.generations, args.table) for n in names]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            done = list(pool.map(_bench_one, jobs))
    else:
        done = [_bench_one(j) for j in jobs]
    budget = gasr.evaluation_budget(args.population, args.generations)
    header = (
        f"# GASR desk-scale suite: dims {args.dims}, population {args.population}, "
        f"generations {args.generations}, evaluation budget {budget}\n"
        "# lit_* columns are literature values (v-PSO mean/spread and the published GASR run), not computed here\n"
        "function\tdims\tbest_fitness\tneval\tgenerations\tlit_vpso_best\tlit_vpso_spread\tlit_gasr_best\tlit_gasr_neval"
    )
    rows = [header]
    for name, res in done:
        lit = LITERATURE.get((name, args.dims), ("-", "-", "-", "-"))
        rows.append(
            f"{name}\t{args.dims}\t{res.best_fitness:.9e}\t{res.evaluations}\t{res.last_generation + 1}\t"
            + "\t".join(str(v) for v in lit)
        )
    out = Path(args.out)
    out.write_text("\n".join(rows) + "\n", encoding="utf-8")
    print("\n".join(rows[1:]))
    write_manifest(out, "bench", _params(args), [out], time.perf_counter() - t0)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pifrac", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("digits", help="print hex digits of pi starting at a position")
    d.add_argument("--position", type=_positive, required=True)
    d.add_argument("--count", type=_nonneg, required=True)
    d.add_argument("--precision-bits", type=_positive, default=bbp.DEFAULT_PRECISION_BITS)
    d.add_argument("--no-reanchor", action="store_true", help="single series evaluation; fails if precision runs out")
    d.set_defaults(func=cmd_digits)

    g = sub.add_parser("gen", help="build and save a fraction table")
    g.add_argument("--count", type=_positive, required=True)
    g.add_argument("--window", type=_positive, default=table.DEFAULT_WINDOW)
    g.add_argument("--start", type=_positive, default=1)
    g.add_argument("--guard", type=_nonneg, default=table.DEFAULT_GUARD_DIGITS)
    g.add_argument("--workers", type=_positive, default=1)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="PDF/CDF report for a fraction table")
    s.add_argument("--table", help="fraction table file (default: bundled 10,000-fraction fixture)")
    s.add_argument("--bins", type=_positive, default=1000)
    s.add_argument("--out", required=True)
    s.add_argument("--timestamp", action="store_true", help="record the creation time (output no longer reproducible)")
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("scatter", help="two-coordinate scatter data from a sampling source")
    c.add_argument("--source", choices=sampling.SOURCES, default="pifrac")
    c.add_argument("--dims", type=_positive, default=30)
    c.add_argument("--points", type=_positive, default=1000)
    c.add_argument("--increment", type=_positive, default=1)
    c.add_argument("--dim-a", type=_positive, default=27)
    c.add_argument("--dim-b", type=_positive, default=28)
    c.add_argument("--start-index", type=_positive, default=1)
    c.add_argument("--clock-start", action="store_true", help="derive the start index from the wall clock")
    c.add_argument("--seed", type=_nonneg, default=0, help="seed for the prng source")
    c.add_argument("--table")
    c.add_argument("--plot-script", action="store_true", help="also write a gnuplot script next to the data")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_scatter)

    r = sub.add_parser("gasr", help="run GASR on one benchmark function")
    r.add_argument("--function", required=True)
    r.add_argument("--dims", type=_positive)
    r.add_argument("--population", type=_positive, default=2500)
    r.add_argument("--generations", type=_positive, default=100)
    r.add_argument("--table")
    r.add_argument("--index-offset", type=_nonneg, default=0)
    r.add_argument("--offset-step", type=_positive, default=100_003, help="index offset added per repeat")
    r.add_argument("--repeats", type=_positive, default=1)
    r.add_argument("--no-early-termination", action="store_true")
    r.add_argument("--wide-rastrigin", action="store_true", help="rastrigin on [-10, 10]")
    r.add_argument("--out", required=True, help="output directory")
    r.set_defaults(func=cmd_gasr)

    b = sub.add_parser("bench", help="run the six-function suite and tabulate results")
    b.add_argument("--dims", type=_positive, default=10)
    b.add_argument("--population", type=_positive, default=200)
    b.add_argument("--generations", type=_positive, default=100)
    b.add_argument("--functions", nargs="+", default=list(benchmarks.SUITE))
    b.add_argument("--table")
    b.add_argument("--jobs", type=_positive, default=1)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except bbp.AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (table.TableError, OSError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
