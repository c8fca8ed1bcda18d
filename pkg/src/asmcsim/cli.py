"""Command-line harness: run simulations, recompute metrics, compare controllers.

Exit codes: 0 success, 2 configuration or file-format error, 3 simulation
divergence.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .engine import DivergenceError, SimConfig, run, with_seed
from .metrics import MetricsSummary, format_summary
from .scenario import ScenarioError, load_scenario
from .traceio import (
    TraceFormatError,
    read_trace_csv,
    summarize_matrix,
    summarize_trace,
    write_summary,
    write_summary_kv,
    write_trace_csv,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asmcsim",
        description="Two-link arm trajectory tracking simulator",
    )
    parser.add_argument("--version", action="version", version=f"asmcsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and write trace + summary")
    p_run.add_argument("scenario", help="scenario file (INI)")
    p_run.add_argument("--seed", type=int, default=None, help="override disturbance seed")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.add_argument(
        "--controller", choices=("asmc", "pd"), default=None, help="override controller kind"
    )
    p_run.add_argument(
        "--decimation", type=int, default=None, help="override trace log decimation"
    )
    p_run.add_argument("--plot", action="store_true", help="also render SVG figures")
    p_run.add_argument("--kv", action="store_true", help="also write flat key=value summary")
    p_run.set_defaults(handler=cmd_run)

    p_metrics = sub.add_parser("metrics", help="recompute the summary from a trace CSV")
    p_metrics.add_argument("trace", help="trace.csv produced by the run command")
    p_metrics.set_defaults(handler=cmd_metrics)

    p_cmp = sub.add_parser("compare", help="sweep seeds for both controllers")
    p_cmp.add_argument("scenario", help="scenario file (INI)")
    p_cmp.add_argument("--seeds", default="0..4", help="inclusive seed range N..M")
    p_cmp.add_argument("--jobs", type=int, default=1, help="parallel simulation workers")
    p_cmp.set_defaults(handler=cmd_compare)
    return parser


def cmd_run(args) -> int:
    cfg = load_scenario(
        args.scenario,
        seed=args.seed,
        controller=args.controller,
        log_decimation=args.decimation,
    )
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    trace = run(cfg)
    write_trace_csv(outdir / "trace.csv", trace)
    summary = summarize_trace(trace)
    write_summary(outdir / "summary.txt", summary, trace.meta)
    if args.kv:
        write_summary_kv(outdir / "summary.kv", summary, trace.meta)
    if args.plot:
        from .plots import save_all

        save_all(trace, outdir, trace.meta)

    print(format_summary(summary))
    log.info("wrote %s", outdir / "trace.csv")
    return EXIT_OK


def cmd_metrics(args) -> int:
    _, matrix = read_trace_csv(args.trace)
    print(format_summary(summarize_matrix(matrix)))
    return EXIT_OK


def parse_seed_range(spec: str) -> list[int]:
    spec = spec.strip()
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(spec)
    except ValueError as exc:
        raise ScenarioError(f"bad seed range '{spec}': {exc}") from exc
    if hi < lo:
        raise ScenarioError(f"empty seed range '{spec}'")
    return list(range(lo, hi + 1))


def _sweep_worker(job: tuple[SimConfig, str, int]) -> tuple[str, int, MetricsSummary]:
    cfg, kind, seed = job
    trace = run(cfg)
    return kind, seed, summarize_trace(trace)


def sweep(cfg: SimConfig, seeds: list[int], jobs: int = 1) -> dict[str, list[MetricsSummary]]:
    """Run both controllers over the seed list; summaries keyed by controller."""
    tasks = [
        (replace(with_seed(cfg, seed), controller=kind), kind, seed)
        for kind in ("asmc", "pd")
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_worker, tasks))
    else:
        results = [_sweep_worker(t) for t in tasks]

    out: dict[str, list[MetricsSummary]] = {"asmc": [], "pd": []}
    for kind, _, summary in results:
        out[kind].append(summary)
    return out


def format_sweep(results: dict[str, list[MetricsSummary]], seeds: list[int]) -> str:
    lines = [f"seeds: {seeds[0]}..{seeds[-1]} ({len(seeds)} runs per controller)"]
    header = f"{'metric':<20}{'controller':<12}{'link1 mean±std':>22}{'link2 mean±std':>22}"
    lines.append(header)
    for name, unit in MetricsSummary.FIELDS:
        for kind in ("asmc", "pd"):
            values = np.array([getattr(s, name) for s in results[kind]])
            mean = values.mean(axis=0)
            std = values.std(axis=0)
            lines.append(
                f"{name + ' (' + unit + ')':<20}{kind:<12}"
                f"{mean[0]:>13.6f} ±{std[0]:<7.4f}"
                f"{mean[1]:>13.6f} ±{std[1]:<7.4f}"
            )
    return "\n".join(lines)


def cmd_compare(args) -> int:
    seeds = parse_seed_range(args.seeds)
    cfg = load_scenario(args.scenario)
    results = sweep(cfg, seeds, jobs=args.jobs)
    print(format_sweep(results, seeds))
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ScenarioError, TraceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"simulation diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
