"""Command-line entry point for reproducible experiment runs.

Subcommands: ``generate`` (synthetic data from an experiment config file),
``detect`` (score an edge-stream CSV), ``eval`` (Hits@n against a ground
truth file) and ``bench`` (named benchmark families, mean/std tables).
Every run writes a JSON manifest next to its outputs recording the exact
command, resolved seed, and produced files.

Exit codes: 0 success, 2 invalid configuration or usage, 3 I/O failure,
4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .baselines import activity_detect, aggregate_scores
from .benchmarks import DEFAULT_TRIALS, FAMILIES, run_family
from .detector import (
    DetectorConfig,
    lad_detect,
    ranked_steps,
    read_scores_csv,
    write_scores_csv,
)
from .evaluation import format_report_table, hits_at_n, write_report_csv
from .generators import generate_experiment
from .graphs import parse_edge_stream, write_edge_stream
from .multiview import PowerMeanConfig, multilad_spectra, multilad_detect, write_spectrum_csv
from .schedules import load_experiment_config
from .spectral import ConvergenceError

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SOLVER = 4

METHOD_CHOICES = ("lad", "multilad", "activity", "maxlad", "meanlad")


class UsageError(ValueError):
    """Invalid configuration or flag combination (exit code 2)."""


@dataclass
class RunManifest:
    """Record of one CLI run, sufficient to repeat it identically."""

    command: list
    config: str | None
    seed: int | None
    outputs: list = field(default_factory=list)
    version: str = __version__
    duration_s: float = 0.0

    def write(self, path):
        doc = {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "outputs": self.outputs,
            "version": self.version,
            "duration_s": self.duration_s,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        return path


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("LAD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"LAD_SEED must be an integer, got {env!r}") from None
    return 0


def _parse_k(text):
    if text == "full":
        return None
    try:
        k = int(text)
    except ValueError:
        raise UsageError(f"--k expects an integer or 'full', got {text!r}") from None
    if k < 1:
        raise UsageError("--k must be >= 1")
    return k


def _write_truth(truth, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,kind\n")
        for t in sorted(truth):
            fh.write(f"{t},{truth[t]}\n")


def _read_truth(path):
    truth = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#") or line == "t,kind":
                continue
            t_str, _, kind = line.partition(",")
            truth[int(t_str)] = kind or "change_point"
    if not truth:
        raise UsageError(f"ground truth file {path} contains no rows")
    return truth


def cmd_generate(args):
    manifest = RunManifest(command=sys.argv[1:], config=args.config, seed=None)
    t0 = time.perf_counter()
    schedule, gen = load_experiment_config(args.config)
    if args.seed is not None or os.environ.get("LAD_SEED") is not None:
        from dataclasses import replace

        gen = replace(gen, seed=_resolve_seed(args))
    manifest.seed = gen.seed
    graph, truth = generate_experiment(schedule, gen)
    truth_path = args.truth or _sibling(args.out, ".truth.csv")
    write_edge_stream(graph, args.out)
    _write_truth(truth, truth_path)
    manifest.outputs = [args.out, truth_path]
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(_sibling(args.out, ".manifest.json"))
    print(f"wrote {args.out} (T={graph.num_steps}, views={graph.num_views}) "
          f"and {truth_path} ({len(truth)} anomalies)")
    return 0


def _sibling(path, suffix):
    base, _, _ = str(path).rpartition(".")
    return (base or str(path)) + suffix


def _detect_series(args, graph, seed):
    det = DetectorConfig(
        w_short=args.ws,
        w_long=args.wl,
        k=_parse_k(args.k),
        laplacian=args.laplacian,
        tol=args.tol,
    )
    if args.method != "multilad" and args.p is not None:
        raise UsageError("--p is only meaningful with --method multilad")
    if args.method != "multilad" and args.dump_spectrum:
        raise UsageError("--dump-spectrum is only available with --method multilad")
    if args.method == "multilad":
        det = DetectorConfig(det.w_short, det.w_long, det.k, "normalized", det.tol)
        pm = PowerMeanConfig(args.p if args.p is not None else -10.0)
        if args.dump_spectrum:
            spectra = multilad_spectra(graph, det, pm, rng=seed)
            write_spectrum_csv(spectra, args.dump_spectrum)
        return multilad_detect(graph, det, pm, rng=seed)
    if args.method in ("maxlad", "meanlad"):
        per_view = [
            lad_detect(graph.view(r), det, rng=seed) for r in range(graph.num_views)
        ]
        return aggregate_scores(per_view, "max" if args.method == "maxlad" else "mean")
    if args.view >= graph.num_views:
        raise UsageError(
            f"--view {args.view} out of range for {graph.num_views} views"
        )
    view = graph.view(args.view)
    if args.method == "activity":
        return activity_detect(view, args.ws)
    return lad_detect(view, det, rng=seed)


def cmd_detect(args):
    manifest = RunManifest(command=sys.argv[1:], config=args.input, seed=None)
    t0 = time.perf_counter()
    seed = _resolve_seed(args)
    manifest.seed = seed
    with open(args.input, "r", encoding="utf-8") as fh:
        graph = parse_edge_stream(fh)
    series = _detect_series(args, graph, seed)
    write_scores_csv(series, args.out)
    manifest.outputs = [args.out] + (
        [args.dump_spectrum] if args.dump_spectrum else []
    )
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(_sibling(args.out, ".manifest.json"))
    print(f"wrote {args.out} ({len(series)} steps, method={args.method})")
    return 0


def cmd_eval(args):
    manifest = RunManifest(command=sys.argv[1:], config=args.scores, seed=None)
    t0 = time.perf_counter()
    series = read_scores_csv(args.scores)
    truth = _read_truth(args.truth)
    if max(truth) >= len(series):
        raise UsageError(
            f"truth step {max(truth)} out of range for {len(series)} scored steps"
        )
    hits = hits_at_n(series, set(truth), args.n)
    top = ranked_steps(series)[: args.n].tolist()
    out = args.out or _sibling(args.scores, ".eval.csv")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("n,hits,top_steps\n")
        fh.write(f"{args.n},{hits!r},{';'.join(str(t) for t in top)}\n")
    manifest.outputs = [out]
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(_sibling(out, ".manifest.json"))
    print(f"hits@{args.n} = {hits}")
    print(f"top-{args.n} steps: {', '.join(str(t) for t in top)}")
    return 0


def _parse_float_list(text):
    return tuple(float(v) for v in text.split(","))


def cmd_bench(args):
    manifest = RunManifest(command=sys.argv[1:], config=None, seed=None)
    t0 = time.perf_counter()
    seed = _resolve_seed(args)
    manifest.seed = seed
    opts = {}
    if args.noise is not None:
        opts["noise"] = _parse_float_list(args.noise)
    if args.cout is not None:
        opts["cout"] = _parse_float_list(args.cout)
    if args.p is not None:
        opts["p"] = _parse_float_list(args.p)
    if args.views is not None:
        views = tuple(int(v) for v in args.views.split(","))
        opts["views"] = views if len(views) > 1 else views[0]
    reports = run_family(
        args.experiment, trials=args.trials, seed=seed, jobs=args.jobs, **opts
    )
    out = args.out or f"{args.experiment}-report.csv"
    write_report_csv(reports, out)
    manifest.outputs = [out]
    manifest.duration_s = time.perf_counter() - t0
    manifest.write(_sibling(out, ".manifest.json"))
    print(format_report_table(reports))
    print(f"wrote {out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lapcpd",
        description="Laplacian-spectrum change point detection for dynamic graphs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="generate synthetic data from a config file")
    p.add_argument("config", help="experiment config JSON")
    p.add_argument("--out", required=True, help="edge-stream CSV output path")
    p.add_argument("--truth", help="ground truth output path (default: <out>.truth.csv)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="score an edge-stream CSV")
    p.add_argument("input", help="edge-stream CSV")
    p.add_argument("--method", required=True, choices=METHOD_CHOICES)
    p.add_argument("--out", required=True, help="score CSV output path")
    p.add_argument("--ws", type=int, default=5, help="short window length")
    p.add_argument("--wl", type=int, default=10, help="long window length")
    p.add_argument("--k", default="full", help="signature length or 'full'")
    p.add_argument(
        "--laplacian",
        choices=("unnormalized", "normalized"),
        default="unnormalized",
        help="Laplacian kind for lad/maxlad/meanlad (multilad is always normalized)",
    )
    p.add_argument("--p", type=float, help="power mean order (multilad only)")
    p.add_argument("--tol", type=float, default=1e-8, help="solver tolerance")
    p.add_argument("--view", type=int, default=0,
                   help="view index for single-view methods on multi-view input")
    p.add_argument("--dump-spectrum", help="write aggregated spectra CSV (multilad)")
    p.add_argument("--seed", type=int, help="solver seed (default LAD_SEED or 0)")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="evaluate scores against ground truth")
    p.add_argument("scores", help="score CSV from detect")
    p.add_argument("truth", help="ground truth file (t,kind)")
    p.add_argument("--n", type=int, default=7, help="ranking depth for hits@n")
    p.add_argument("--out", help="report CSV path (default: <scores>.eval.csv)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run a named benchmark family")
    p.add_argument("experiment", choices=sorted(FAMILIES))
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, help="base seed (default LAD_SEED or 0)")
    p.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    p.add_argument("--noise", help="comma-separated noise levels (noise sweep)")
    p.add_argument("--cout", help="comma-separated c_out values (cout sweep)")
    p.add_argument("--views", help="comma-separated view counts (view sweeps)")
    p.add_argument("--p", help="comma-separated power orders (p ablation)")
    p.add_argument("--out", help="report CSV path (default: <experiment>-report.csv)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
