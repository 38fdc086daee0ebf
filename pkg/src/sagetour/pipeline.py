"""Compose dataset -> tour path -> display transform into frame streams.

``run_tour`` is a pull-based generator, so downstream consumers (export,
serving) get back-pressure for free: nothing is computed until asked for
and at most one frame is in flight per consumer.

The jsonl export format is the stable interchange schema, one record per
line::

    {"frame_index": int, "basis": [[...], ...],   # p rows of 2, row-major
     "points": [[x, y], ...],
     "params": {"gamma": g, "R": R, "half_range": s}}

Floats are written at full precision, so reload-and-recompute round
trips are exact.  Manifests carry no timestamps: identical inputs must
produce byte-identical output trees.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .sage import SageParams, apply_sage
from .tourpath import PathConfig, frame_stream

# Matplotlib tab10, a safe categorical default.
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

DEFAULT_POINT_COLOR = "#1f77b4"
GUIDE_RADIUS = 0.9


@dataclass(frozen=True)
class ProjectedFrame:
    """One tour step: canvas coordinates plus the basis and params behind them."""

    coords: np.ndarray
    frame_index: int
    basis: np.ndarray
    params: SageParams


@dataclass(frozen=True)
class TourRun:
    """Everything needed to (re)produce a frame sequence."""

    dataset: Dataset
    path: PathConfig
    params: SageParams
    frame_budget: int = 500

    def __post_init__(self) -> None:
        if self.frame_budget < 1:
            raise ValueError("frame_budget must be >= 1")
        if self.params.p_input != self.dataset.p:
            raise ValueError(
                f"params expect p={self.params.p_input} but dataset has p={self.dataset.p}"
            )


def run_tour(run: TourRun) -> Iterator[ProjectedFrame]:
    """Yield up to frame_budget transformed frames, deterministic per seed."""
    values = run.dataset.values
    frames = itertools.islice(frame_stream(run.dataset.p, run.path), run.frame_budget)
    for index, basis in enumerate(frames):
        coords = apply_sage(values @ basis, run.params)
        yield ProjectedFrame(coords=coords, frame_index=index, basis=basis, params=run.params)


def dataset_hash(values: np.ndarray) -> str:
    """SHA-256 of the matrix bytes (shape-prefixed, row-major float64)."""
    v = np.ascontiguousarray(values, dtype=np.float64)
    digest = hashlib.sha256()
    digest.update(f"{v.shape[0]}x{v.shape[1]}:".encode())
    digest.update(v.tobytes())
    return digest.hexdigest()


def _params_dict(params: SageParams) -> dict:
    return {
        "gamma": params.gamma,
        "R": params.R,
        "half_range": params.effective_half_range,
    }


def frame_record(frame: ProjectedFrame) -> dict:
    """Plain-dict form of a frame, matching the jsonl schema."""
    return {
        "frame_index": frame.frame_index,
        "basis": frame.basis.tolist(),
        "points": frame.coords.tolist(),
        "params": _params_dict(frame.params),
    }


def export_frames(
    frames: Iterable[ProjectedFrame],
    out_dir,
    fmt: str = "jsonl",
    seed: int | None = None,
    data_hash: str | None = None,
) -> dict:
    """Write a frame sequence plus manifest.json; returns the manifest.

    fmt "jsonl" writes one frames.jsonl with the full schema;
    "csv-per-frame" writes frame_NNNNNN.csv files holding x,y columns
    (basis and params then live only in the manifest-less CSVs, so jsonl
    is the format that round-trips).
    """
    if fmt not in ("jsonl", "csv-per-frame"):
        raise ValueError("fmt must be 'jsonl' or 'csv-per-frame'")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files: list[str] = []
        count = 0
        if fmt == "jsonl":
            target = out / "frames.jsonl"
            with open(target, "w") as fh:
                for frame in frames:
                    fh.write(json.dumps(frame_record(frame)) + "\n")
                    count += 1
            files.append(target.name)
        else:
            for frame in frames:
                name = f"frame_{frame.frame_index:06d}.csv"
                with open(out / name, "w") as fh:
                    fh.write("x,y\n")
                    for x, y in frame.coords:
                        fh.write(f"{float(x)!r},{float(y)!r}\n")
                files.append(name)
                count += 1
        manifest = {
            "format": fmt,
            "frame_count": count,
            "files": files,
            "seed": seed,
            "dataset_sha256": data_hash,
        }
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
        return manifest
    except OSError as exc:
        raise OSError(f"writing frames to {out}: {exc}") from exc


def read_frames_jsonl(path) -> list[ProjectedFrame]:
    """Load frames back from a jsonl export."""
    frames = []
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            basis = np.asarray(rec["basis"], dtype=float)
            params = SageParams(
                p_input=basis.shape[0],
                R=rec["params"]["R"],
                gamma=rec["params"]["gamma"],
                half_range=rec["params"]["half_range"],
            )
            frames.append(
                ProjectedFrame(
                    coords=np.asarray(rec["points"], dtype=float),
                    frame_index=int(rec["frame_index"]),
                    basis=basis,
                    params=params,
                )
            )
    return frames


def label_colors(labels: Iterable[str] | None) -> dict[str, str]:
    """Assign palette colors to the distinct labels, first-seen order."""
    if labels is None:
        return {}
    colors: dict[str, str] = {}
    for label in labels:
        if label not in colors:
            colors[label] = PALETTE[len(colors) % len(PALETTE)]
    return colors


def render_static(
    frame: ProjectedFrame,
    out,
    labels: Iterable[str] | None = None,
    colors: dict[str, str] | None = None,
    size: int = 600,
) -> None:
    """Write one frame as an SVG scatter on the [-1, 1] square canvas.

    Axis-free, with a guide circle at radius 0.9.  The writer is plain
    string assembly so identical frames produce byte-identical files.
    """
    labels = list(labels) if labels is not None else None
    if labels is not None and len(labels) != len(frame.coords):
        raise ValueError("labels length must match the number of points")
    if colors is None:
        colors = label_colors(labels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        'viewBox="-1 -1 2 2">\n',
        '<rect x="-1" y="-1" width="2" height="2" fill="white"/>\n',
        f'<circle cx="0" cy="0" r="{GUIDE_RADIUS}" fill="none" stroke="#999999" '
        'stroke-width="0.004"/>\n',
    ]
    for i, (x, y) in enumerate(frame.coords):
        color = DEFAULT_POINT_COLOR
        if labels is not None:
            color = colors.get(labels[i], DEFAULT_POINT_COLOR)
        # SVG y axis points down; flip so data y grows upward.
        parts.append(f'<circle cx="{x:.6f}" cy="{-y:.6f}" r="0.008" fill="{color}"/>\n')
    parts.append("</svg>\n")
    try:
        with open(out, "w") as fh:
            fh.write("".join(parts))
    except OSError as exc:
        raise OSError(f"writing SVG to {out}: {exc}") from exc
