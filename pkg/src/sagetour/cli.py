"""Command-line entry point.

Subcommands: tour (export a frame sequence), serve (live WebSocket
session), diagnose (area-uniformity checks), sample (synthetic ball
data), curves (analytic curve tables).  Every subcommand is
deterministic given its flags; seeds are flags.

Exit codes: 0 success, 1 diagnostic failure, 2 usage error, 3 data
error, 4 I/O error.  Failures print one machine-parsable line:
``error: <category>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .dataset import Dataset, PreprocessSpec, load_csv, pca_reduce, preprocess, sample_ball
from .diagnostics import area_uniformity, curve_table
from .pipeline import TourRun, dataset_hash, export_frames, label_colors, render_static, run_tour
from .sage import SageParams
from .server import DEFAULT_FPS, serve
from .tourpath import PathConfig

KS_TOLERANCE = 0.01


def _add_data_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("data", help="CSV file with a header row")
    sub.add_argument("--label-column", default=None, help="column holding class labels")
    sub.add_argument("--no-center", action="store_true", help="skip centering")
    sub.add_argument(
        "--scale",
        choices=("variance", "range", "none"),
        default="variance",
        help="column scaling mode (default: variance)",
    )
    sub.add_argument("--pca", type=int, default=None, metavar="K",
                     help="reduce to the first K principal components, re-standardized")


def _add_sage_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--gamma", type=float, default=1.0,
                     help="effective-dimension tuning factor (default: 1)")
    sub.add_argument("--R", type=float, default=None,
                     help="trim radius (default: max row norm of the data)")
    sub.add_argument("--half-range", type=float, default=None,
                     help="canvas divisor (default: follows R)")


def _add_path_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="tour path seed (default: 0)")
    sub.add_argument("--step-angle", type=float, default=0.05,
                     help="radians per interpolation step (default: 0.05)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sagetour", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sagetour {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    tour = commands.add_parser("tour", help="run a tour offline and export the frames")
    _add_data_args(tour)
    _add_sage_args(tour)
    _add_path_args(tour)
    tour.add_argument("--frames", type=int, default=500, help="frame budget (default: 500)")
    tour.add_argument("--out", default="tour_out", help="output directory (default: tour_out)")
    tour.add_argument("--format", choices=("jsonl", "csv-per-frame"), default="jsonl",
                      help="export format (default: jsonl)")
    tour.add_argument("--svg-every", type=int, default=None, metavar="N",
                      help="also render every Nth frame to SVG")
    tour.set_defaults(func=cmd_tour)

    srv = commands.add_parser("serve", help="serve a live steerable tour session")
    _add_data_args(srv)
    _add_sage_args(srv)
    _add_path_args(srv)
    srv.add_argument("--bind", default="127.0.0.1:8765", help="host:port (default: 127.0.0.1:8765)")
    srv.add_argument("--fps", type=float, default=DEFAULT_FPS,
                     help=f"frames per second (default: {DEFAULT_FPS:g})")
    srv.set_defaults(func=cmd_serve)

    diag = commands.add_parser("diagnose", help="area-uniformity checks against Uniform(0,1)")
    source = diag.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", default=None, help="CSV file to diagnose")
    source.add_argument("--synthetic-ball", nargs="+", default=None, metavar="KEY=VAL",
                        help="synthesize uniform ball data, e.g. p=10 n=100000 R=1")
    diag.add_argument("--label-column", default=None, help="label column of --data")
    _add_sage_args(diag)
    diag.add_argument("--seed", type=int, default=0, help="sampling/projection seed (default: 0)")
    diag.set_defaults(func=cmd_diagnose)

    sample = commands.add_parser("sample", help="write a uniform p-ball sample as CSV")
    sample.add_argument("--n", type=int, default=10000, help="points (default: 10000)")
    sample.add_argument("--p", type=int, default=10, help="dimension (default: 10)")
    sample.add_argument("--R", type=float, default=1.0, help="radius (default: 1)")
    sample.add_argument("--seed", type=int, default=0, help="seed (default: 0)")
    sample.add_argument("--out", default="ball.csv", help="output CSV (default: ball.csv)")
    sample.set_defaults(func=cmd_sample)

    curves = commands.add_parser("curves", help="tabulate an analytic curve as CSV")
    curves.add_argument("--kind", choices=("projected", "full", "transform"), required=True)
    curves.add_argument("--p", type=float, required=True, help="dimension (real, positive)")
    curves.add_argument("--R", type=float, default=1.0, help="radius (default: 1)")
    curves.add_argument("--grid", type=int, default=101, help="grid size (default: 101)")
    curves.add_argument("--mc", type=int, default=0, metavar="N",
                        help="add a Monte-Carlo column from N ball samples")
    curves.add_argument("--seed", type=int, default=0, help="Monte-Carlo seed (default: 0)")
    curves.add_argument("--out", default="curves.csv", help="output CSV (default: curves.csv)")
    curves.set_defaults(func=cmd_curves)

    return parser


def _prepare_dataset(args) -> Dataset:
    ds = load_csv(args.data, label_column=args.label_column)
    spec = PreprocessSpec(center=not args.no_center, scale_mode=args.scale)
    ds = preprocess(ds, spec)
    if args.pca is not None:
        ds, captured = pca_reduce(ds, args.pca)
        print(f"pca: kept {ds.p} components capturing {captured:.4f} of the variance")
        ds = preprocess(ds, PreprocessSpec(center=True, scale_mode="variance"))
    return ds


def _params_for(args, ds: Dataset) -> SageParams:
    return SageParams.from_data(ds.values, gamma=args.gamma, R=args.R, half_range=args.half_range)


def cmd_tour(args) -> int:
    ds = _prepare_dataset(args)
    params = _params_for(args, ds)
    run = TourRun(
        dataset=ds,
        path=PathConfig(step_angle=args.step_angle, seed=args.seed),
        params=params,
        frame_budget=args.frames,
    )
    frames = run_tour(run)
    out = Path(args.out)
    if args.svg_every is not None:
        out.mkdir(parents=True, exist_ok=True)
        frames = list(frames)
        colors = label_colors(ds.labels)
        for frame in frames[:: args.svg_every]:
            render_static(frame, out / f"frame_{frame.frame_index:06d}.svg",
                          labels=ds.labels, colors=colors)
    manifest = export_frames(frames, out, fmt=args.format, seed=args.seed,
                             data_hash=dataset_hash(ds.values))
    print(f"wrote {manifest['frame_count']} frames to {out} ({args.format}, seed {args.seed})")
    return 0


def cmd_serve(args) -> int:
    ds = _prepare_dataset(args)
    params = _params_for(args, ds)
    print(f"serving n={ds.n} p={ds.p} on ws://{args.bind}/tour (seed {args.seed})")
    serve(ds, bind=args.bind, params=params, step_angle=args.step_angle,
          seed=args.seed, fps=args.fps)
    return 0


def _parse_ball_spec(tokens: list[str]) -> dict:
    spec = {"p": 10, "n": 100000, "R": 1.0}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in spec:
            raise ValueError(f"bad --synthetic-ball token {token!r}; use p=, n=, R=")
        spec[key] = float(value) if key == "R" else int(value)
    return spec


def cmd_diagnose(args) -> int:
    if args.synthetic_ball is not None:
        spec = _parse_ball_spec(args.synthetic_ball)
        ds = sample_ball(spec["n"], spec["p"], spec["R"], seed=args.seed)
        default_scale = spec["R"]
        source = f"synthetic ball p={spec['p']} n={spec['n']} R={spec['R']:g}"
    else:
        ds = load_csv(args.data, label_column=args.label_column)
        default_scale = None
        source = args.data
    params = SageParams.from_data(
        ds.values,
        gamma=args.gamma,
        R=args.R if args.R is not None else default_scale,
        half_range=args.half_range,
    )
    stat = area_uniformity(ds.values, params, seed=args.seed)
    verdict = "PASS" if stat < KS_TOLERANCE else "FAIL"
    if params.p_eff == 2:
        print("note: p_eff=2, the radial transform is the identity")
    print(
        f"area-uniformity source={source!r} n={ds.n} p_eff={params.p_eff:g} "
        f"R={params.R:g} ks={stat:.5f} tolerance={KS_TOLERANCE} {verdict}"
    )
    return 0 if verdict == "PASS" else 1


def cmd_sample(args) -> int:
    ds = sample_ball(args.n, args.p, args.R, seed=args.seed)
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(ds.column_names)
            for row in ds.values:
                writer.writerow([repr(float(v)) for v in row])
    except OSError as exc:
        raise OSError(f"writing sample to {args.out}: {exc}") from exc
    print(f"wrote {ds.n} x {ds.p} ball sample to {args.out} (R={args.R:g}, seed {args.seed})")
    return 0


def cmd_curves(args) -> int:
    table = curve_table(args.kind, args.p, R=args.R, grid_size=args.grid,
                        mc_samples=args.mc, seed=args.seed)
    table.write_csv(args.out)
    print(f"wrote {args.kind} curve (p={args.p:g}, R={args.R:g}, {args.grid} points) to {args.out}")
    return 0


def main(argv=None) -> int:
    level = os.environ.get("SAGETOUR_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
