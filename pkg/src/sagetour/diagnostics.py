"""Quantitative checks for the display transform.

Empirical radial CDFs, a Kolmogorov-Smirnov uniformity statistic (the
oracle behind the equal-volume-to-equal-area claim), analytic curve
tables, transformed concentric-circle radii, and hexagonal density
binning for crowding comparisons.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .dataset import sample_ball
from .sage import (
    CANVAS_FILL,
    SageParams,
    apply_sage,
    radial_transform,
    relative_p_volume,
    relative_projected_volume,
)
from .tourpath import random_frame

CURVE_KINDS = ("projected", "full", "transform")


def ks_uniformity(values) -> float:
    """Sup distance between the empirical CDF of ``values`` and Uniform(0,1).

    The classic one-sample statistic: with order statistics x_(1..n),
    D = max_i max(i/n - x_(i), x_(i) - (i-1)/n).
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise ValueError("need at least one value")
    if v[0] < 0 or v[-1] > 1:
        raise ValueError("values must lie in [0, 1]")
    n = v.size
    steps = np.arange(1, n + 1) / n
    return float(max((steps - v).max(), (v - steps + 1.0 / n).max()))


def area_uniformity(values: np.ndarray, params: SageParams, seed: int = 0) -> float:
    """K-S statistic of squared transformed radii against Uniform(0,1).

    Projects the data with one random frame, runs the full display
    transform, recovers the pre-canvas radii, and tests (r'/R)^2 for
    uniformity.  Near zero for data uniform in a p-ball when
    p_eff matches p; this is the end-to-end check that equal volume maps
    to equal area.
    """
    values = np.asarray(values, dtype=float)
    basis = random_frame(values.shape[1], seed)
    coords = apply_sage(values @ basis, params)
    radii = np.hypot(coords[:, 0], coords[:, 1]) * (params.effective_half_range / CANVAS_FILL)
    # Undoing the canvas scale can overshoot R by an ulp; clip the ratio.
    fractions = np.clip((radii / params.R) ** 2, 0.0, 1.0)
    return ks_uniformity(fractions)


@dataclass(frozen=True)
class RadialCdfTable:
    """Analytic (and optionally Monte-Carlo) curve on an even radius grid."""

    kind: str
    p: float
    R: float
    r_grid: np.ndarray
    analytic: np.ndarray
    empirical: np.ndarray | None = None
    mc_samples: int = 0
    seed: int = 0

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["r", "value"] + (["empirical"] if self.empirical is not None else [])
            writer.writerow(header)
            for i, r in enumerate(self.r_grid):
                row = [repr(float(r)), repr(float(self.analytic[i]))]
                if self.empirical is not None:
                    row.append(repr(float(self.empirical[i])))
                writer.writerow(row)


def curve_table(
    kind: str,
    p: float,
    R: float = 1.0,
    grid_size: int = 101,
    mc_samples: int = 0,
    seed: int = 0,
) -> RadialCdfTable:
    """Tabulate one of the display curves on an even r-grid over [0, R].

    kind "projected" is the projected-volume CDF, "full" the volume
    fraction in p-space, "transform" the remapped radius itself (equal to
    the input column at p = 2).  ``mc_samples > 0`` adds a Monte-Carlo
    column for the two CDF kinds (integer p only): the fraction of
    uniform p-ball samples below each grid radius, measured on the
    projected radius or the full-space norm respectively.
    """
    if kind not in CURVE_KINDS:
        raise ValueError(f"kind must be one of {CURVE_KINDS}")
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    grid = np.linspace(0.0, R, grid_size)
    if kind == "projected":
        analytic = relative_projected_volume(grid, p, R)
    elif kind == "full":
        analytic = relative_p_volume(grid, p, R)
    else:
        analytic = radial_transform(grid, p, R)
    empirical = None
    if mc_samples > 0:
        if kind == "transform":
            raise ValueError("Monte-Carlo column applies to the CDF kinds only")
        if p != int(p) or p < 2:
            raise ValueError("Monte-Carlo column needs an integer p >= 2")
        points = sample_ball(mc_samples, int(p), R, seed).values
        if kind == "projected":
            radii = np.hypot(points[:, 0], points[:, 1])
        else:
            radii = np.linalg.norm(points, axis=1)
        radii.sort()
        empirical = np.searchsorted(radii, grid, side="right") / mc_samples
    return RadialCdfTable(
        kind=kind,
        p=p,
        R=R,
        r_grid=grid,
        analytic=analytic,
        empirical=empirical,
        mc_samples=mc_samples,
        seed=seed,
    )


def transformed_circles(p_eff: float, R: float = 1.0, k: int = 5) -> np.ndarray:
    """Remapped radii of k equidistant circles i*R/k, i = 1..k.

    Identity at p_eff = 2; the circles crowd toward R as p_eff grows.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    radii = np.arange(1, k + 1) * (R / k)
    return radial_transform(radii, p_eff, R)


@dataclass(frozen=True)
class HexbinGrid:
    """Counts on a pointy-top hexagonal lattice in axial coordinates.

    ``bin_width`` is the horizontal distance between neighboring bin
    centers in the same row (so the hexagon circumradius is
    bin_width / sqrt(3)).  Bins are listed in sorted (q, r) order, which
    makes grids byte-reproducible.
    """

    q: np.ndarray
    r: np.ndarray
    counts: np.ndarray
    bin_width: float

    @property
    def log_counts(self) -> np.ndarray:
        return np.log(self.counts)

    @property
    def centers(self) -> np.ndarray:
        size = self.bin_width / math.sqrt(3.0)
        x = size * (math.sqrt(3.0) * self.q + math.sqrt(3.0) / 2.0 * self.r)
        y = size * 1.5 * self.r
        return np.column_stack([x, y])

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["q", "r", "count"])
            for q, r, c in zip(self.q, self.r, self.counts):
                writer.writerow([int(q), int(r), int(c)])


def hexbin(points: np.ndarray, bin_width: float) -> HexbinGrid:
    """Assign 2-D points to pointy-top hexagonal bins and count per bin.

    Uses the standard axial mapping and cube rounding: fractional axial
    coordinates are extended to (x, y, z) with x + y + z = 0, rounded
    per-component, and the component with the largest rounding error is
    recomputed from the other two.  Counts always sum to the number of
    input points.
    """
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("expected an (n, 2) coordinate matrix")
    size = bin_width / math.sqrt(3.0)
    qf = (math.sqrt(3.0) / 3.0 * points[:, 0] - points[:, 1] / 3.0) / size
    rf = (2.0 / 3.0 * points[:, 1]) / size
    sf = -qf - rf
    q = np.round(qf)
    r = np.round(rf)
    s = np.round(sf)
    dq = np.abs(q - qf)
    dr = np.abs(r - rf)
    ds = np.abs(s - sf)
    fix_q = (dq > dr) & (dq > ds)
    fix_r = ~fix_q & (dr > ds)
    q[fix_q] = -r[fix_q] - s[fix_q]
    r[fix_r] = -q[fix_r] - s[fix_r]
    axial = np.column_stack([q, r]).astype(np.int64)
    bins, counts = np.unique(axial, axis=0, return_counts=True)
    return HexbinGrid(q=bins[:, 0], r=bins[:, 1], counts=counts, bin_width=bin_width)


def default_bin_width(points: np.ndarray, divisions: int = 40) -> float:
    """Bin width covering the larger coordinate extent in ``divisions`` bins."""
    points = np.asarray(points, dtype=float)
    extent = float(np.ptp(points, axis=0).max())
    if extent == 0.0:
        return 1.0
    return extent / divisions
