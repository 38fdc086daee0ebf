"""Tabular ingestion, preprocessing, PCA reduction, and benchmark sampling.

Everything here is pure given its inputs (plus an explicit seed), and
``Dataset`` values are frozen read-only arrays, so datasets can be shared
freely across threads and tour sessions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd


class DataWarning(UserWarning):
    """Non-fatal data issues: dropped rows, constant columns, low rank."""


@dataclass(frozen=True)
class Dataset:
    """An n x p numeric matrix with named columns and optional row labels.

    Labels are category identifiers used only for coloring; they take no
    part in any computation.
    """

    values: np.ndarray
    column_names: tuple[str, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        n, p = values.shape
        if n < 1 or p < 2:
            raise ValueError(f"need n >= 1 and p >= 2, got {n} x {p}")
        if not np.isfinite(values).all():
            raise ValueError("values contain non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        names = tuple(str(c) for c in self.column_names)
        if len(names) != p:
            raise ValueError(f"expected {p} column names, got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError("column names must be distinct")
        object.__setattr__(self, "column_names", names)
        if self.labels is not None:
            labels = tuple(str(v) for v in self.labels)
            if len(labels) != n:
                raise ValueError(f"expected {n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PreprocessSpec:
    """How to condition columns before touring.

    scale_mode "variance" divides by the sample standard deviation,
    "range" by max - min, "none" leaves the scale alone.  Constant
    columns keep a divisor of 1 (never divide by zero) and are reported
    with a DataWarning.
    """

    center: bool = True
    scale_mode: str = "variance"

    _MODES = ("variance", "range", "none")

    def __post_init__(self) -> None:
        if self.scale_mode not in self._MODES:
            raise ValueError(f"scale_mode must be one of {self._MODES}")


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Read a comma-delimited file with a header row into a Dataset.

    Only numeric columns are kept; ``label_column`` (if given) is pulled
    out as row labels before the numeric filter.  Rows containing any
    non-finite value are dropped with a DataWarning stating the count.
    """
    frame = pd.read_csv(path)
    labels_raw = None
    if label_column is not None:
        if label_column not in frame.columns:
            raise ValueError(f"label column {label_column!r} not found in {path}")
        labels_raw = frame[label_column]
        frame = frame.drop(columns=[label_column])
    numeric = frame.select_dtypes(include=[np.number])
    if numeric.shape[1] < 2:
        raise ValueError(
            f"{path} has {numeric.shape[1]} numeric column(s); need at least 2"
        )
    values = numeric.to_numpy(dtype=float)
    keep = np.isfinite(values).all(axis=1)
    dropped = int((~keep).sum())
    if dropped:
        warnings.warn(
            f"dropped {dropped} row(s) with non-finite values from {path}",
            DataWarning,
            stacklevel=2,
        )
    values = values[keep]
    if values.shape[0] == 0:
        raise ValueError(f"{path} is empty after dropping non-finite rows")
    labels = None
    if labels_raw is not None:
        labels = tuple(str(v) for v in labels_raw[keep])
    return Dataset(values, tuple(numeric.columns), labels)


def preprocess(d: Dataset, spec: PreprocessSpec) -> Dataset:
    """Center and/or rescale columns per the spec; returns a new Dataset.

    Idempotent: reapplying the same spec leaves values unchanged up to
    rounding noise.
    """
    values = np.array(d.values, dtype=float)
    if spec.center:
        values -= values.mean(axis=0)
    if spec.scale_mode != "none":
        with np.errstate(invalid="ignore"):
            if spec.scale_mode == "variance":
                divisor = values.std(axis=0, ddof=1) if d.n > 1 else np.zeros(d.p)
            else:
                divisor = values.max(axis=0) - values.min(axis=0)
        constant = ~np.isfinite(divisor) | (divisor == 0)
        if constant.any():
            names = [d.column_names[i] for i in np.flatnonzero(constant)]
            warnings.warn(
                f"constant column(s) left unscaled: {', '.join(names)}",
                DataWarning,
                stacklevel=2,
            )
            divisor = np.where(constant, 1.0, divisor)
        values /= divisor
    return Dataset(values, d.column_names, d.labels)


def pca_reduce(d: Dataset, k: int) -> tuple[Dataset, float]:
    """Project onto the top-k principal components of the sample covariance.

    Returns the n x k score matrix (columns PC1.. ordered by decreasing
    eigenvalue) and the fraction of total variance captured.  Components
    are sign-fixed so each one's largest-magnitude loading is positive.
    If the covariance is rank deficient, only the available components
    are kept (with a DataWarning).
    """
    if not 2 <= k <= d.p:
        raise ValueError(f"k must be in [2, {d.p}], got {k}")
    if d.n < 2:
        raise ValueError("PCA needs at least 2 rows")
    centered = d.values - d.values.mean(axis=0)
    cov = (centered.T @ centered) / (d.n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    eigvecs = eigvecs[:, order]
    rank = int((eigvals > eigvals[0] * 1e-12).sum()) if eigvals[0] > 0 else 0
    if rank < k:
        warnings.warn(
            f"covariance has rank {rank} < k={k}; keeping {rank} component(s)",
            DataWarning,
            stacklevel=2,
        )
        k = rank
    if k < 2:
        raise ValueError("fewer than 2 non-degenerate components available")
    components = eigvecs[:, :k]
    flip = components[np.abs(components).argmax(axis=0), np.arange(k)] < 0
    components = components * np.where(flip, -1.0, 1.0)
    scores = centered @ components
    captured = float(eigvals[:k].sum() / eigvals.sum())
    names = tuple(f"PC{i + 1}" for i in range(k))
    return Dataset(scores, names, d.labels), captured


def sample_ball(n: int, p: int, R: float = 1.0, seed: int = 0) -> Dataset:
    """n points uniform in the p-ball of radius R, deterministic per seed.

    Directions come from normalized standard Gaussians; radii are
    R * U^(1/p), which is exact and rejection-free in any dimension.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if p < 2:
        raise ValueError("p must be >= 2")
    if not R > 0:
        raise ValueError("R must be positive")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n, p))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = R * rng.random(n) ** (1.0 / p)
    names = tuple(f"x{i + 1}" for i in range(p))
    return Dataset(directions * radii[:, None], names)
