"""Radial transform that reverses crowding in 2-D projections.

Points sampled in a high-dimensional ball pile up near the center of any
2-D linear projection: the fraction of the ball's volume that projects
inside a centered disk of radius r is

    v2(r; p, R) = 1 - (1 - (r/R)^2)^(p/2)

which rises steeply near r = 0 as p grows, while the fraction of volume
actually *within* radius r in the full space, vp(r; p, R) = (r/R)^p,
collapses toward the edge.  Remapping each projected radius through

    r' = R * sqrt(v2(r; p_eff, R))

sends equal p-dimensional volume to equal projected area, which undoes
the pile-up.  ``apply_sage`` wires the whole per-frame treatment
together: center, trim to R, remap radii, rescale to the canvas.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Fraction of the [-1, 1] canvas that the radius R maps to, leaving a margin
# so markers at the trim radius stay inside the plot area.
CANVAS_FILL = 0.9


class SageWarning(UserWarning):
    """Raised for legal-but-suspect parameter choices (e.g. p_eff < 2)."""


def _check_radius_domain(r: np.ndarray, R: float) -> None:
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    if np.any(r > R):
        raise ValueError(f"radius exceeds R={R}; trim first (see trim_radius)")


def _survival(r: np.ndarray, p: float, R: float) -> np.ndarray:
    """(1 - (r/R)^2)^(p/2), evaluated as exp(p/2 * log1p(-(r/R)^2)).

    The log1p form stays accurate for large p and r close to R, where the
    direct power underflows through a badly rounded base.  At r = R the
    log is -inf and exp gives an exact 0.
    """
    q = (r / R) ** 2
    with np.errstate(divide="ignore"):
        return np.exp(0.5 * p * np.log1p(-q))


def relative_projected_volume(r, p: float, R: float = 1.0):
    """Fraction of a p-ball's volume projecting inside a disk of radius r.

    Equals the radial CDF of projected radii for data uniform in the
    p-ball of radius R.  Accepts scalar or array ``r`` in [0, R]; ``p``
    may be any positive real (fractional effective dimensions included).
    """
    if p <= 0 or R <= 0:
        raise ValueError("p and R must be positive")
    r_arr = np.asarray(r, dtype=float)
    _check_radius_domain(r_arr, R)
    out = 1.0 - _survival(r_arr, p, R)
    return float(out) if r_arr.ndim == 0 else out


def relative_p_volume(r, p: float, R: float = 1.0):
    """Fraction of a p-ball's volume within radius r: (r/R)^p."""
    if p <= 0 or R <= 0:
        raise ValueError("p and R must be positive")
    r_arr = np.asarray(r, dtype=float)
    _check_radius_domain(r_arr, R)
    out = (r_arr / R) ** p
    return float(out) if r_arr.ndim == 0 else out


def inverse_projected_volume_2d(x, R: float = 1.0):
    """Radius at which a disk holds fraction ``x`` of a 2-ball's volume.

    Inverts ``relative_projected_volume(.; 2, R)``: the solution of
    (r/R)^2 = x, i.e. R*sqrt(x).  Defined for x in [0, 1].
    """
    if R <= 0:
        raise ValueError("R must be positive")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or np.any(x_arr > 1):
        raise ValueError("volume fraction must lie in [0, 1]")
    out = R * np.sqrt(x_arr)
    return float(out) if x_arr.ndim == 0 else out


def radial_transform(r, p_eff: float, R: float = 1.0):
    """Remap a projected radius so equal p-dim volume covers equal area.

    r' = R * sqrt(1 - (1 - (r/R)^2)^(p_eff/2)).  Monotone nondecreasing,
    maps [0, R] onto [0, R], and collapses to the identity at p_eff = 2.
    For p_eff < 2 the remap inverts (pushes points toward the rim); that
    regime is permitted but flagged by ``SageParams.focus_inverted``.
    """
    if p_eff <= 0 or R <= 0:
        raise ValueError("p_eff and R must be positive")
    r_arr = np.asarray(r, dtype=float)
    _check_radius_domain(r_arr, R)
    out = R * np.sqrt(1.0 - _survival(r_arr, p_eff, R))
    return float(out) if r_arr.ndim == 0 else out


def trim_radius(r, R: float):
    """Clamp radii to the display scale R: min(r, R)."""
    r_arr = np.asarray(r, dtype=float)
    out = np.minimum(r_arr, R)
    return float(out) if r_arr.ndim == 0 else out


def to_polar(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(n, 2) Euclidean coordinates -> (radii, angles in [-pi, pi])."""
    xy = np.asarray(xy, dtype=float)
    return np.hypot(xy[..., 0], xy[..., 1]), np.arctan2(xy[..., 1], xy[..., 0])


def from_polar(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Radii and angles -> (n, 2) Euclidean coordinates."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def default_R(values: np.ndarray) -> float:
    """Default display scale: the maximum row norm of the (centered) data."""
    values = np.asarray(values, dtype=float)
    return float(np.linalg.norm(values, axis=1).max())


@dataclass(frozen=True)
class SageParams:
    """Tuning state of the display transform, snapshotted per frame.

    ``half_range = None`` means "track R": the canvas divisor follows R
    whenever R changes, which is the default coupling.  Setting an
    explicit half_range pins the canvas scale independently of trimming.
    """

    p_input: int
    R: float
    gamma: float = 1.0
    half_range: float | None = None

    def __post_init__(self) -> None:
        if self.p_input < 1:
            raise ValueError("p_input must be >= 1")
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.half_range is not None and not self.half_range > 0:
            raise ValueError("half_range must be positive")
        if self.p_eff < 2:
            warnings.warn(
                f"p_eff = {self.p_eff:g} < 2: the transform inverts and "
                "shifts focus away from the center",
                SageWarning,
                stacklevel=2,
            )

    @property
    def p_eff(self) -> float:
        """Effective dimension used in the transform: gamma * p_input."""
        return self.gamma * self.p_input

    @property
    def focus_inverted(self) -> bool:
        """True when p_eff < 2 and the remap demagnifies the center."""
        return self.p_eff < 2

    @property
    def effective_half_range(self) -> float:
        """Canvas divisor actually in force (half_range, or R when tracking)."""
        return self.R if self.half_range is None else self.half_range

    @classmethod
    def from_data(
        cls,
        values: np.ndarray,
        gamma: float = 1.0,
        R: float | None = None,
        half_range: float | None = None,
    ) -> "SageParams":
        """Build params for a data matrix, defaulting R to its max row norm."""
        values = np.asarray(values, dtype=float)
        if R is None:
            R = default_R(values)
            if R == 0:
                raise ValueError("data has zero spread; set R explicitly")
        return cls(p_input=values.shape[1], R=R, gamma=gamma, half_range=half_range)


def effective_dim(params: SageParams) -> float:
    """gamma * p_input for the given params (see SageParams.p_eff)."""
    return params.p_eff


def apply_sage(y: np.ndarray, params: SageParams) -> np.ndarray:
    """Transform one frame of projected data onto the plotting canvas.

    Steps: center Y on its column means, trim radii to R, remap them with
    ``radial_transform`` at p_eff, and scale by CANVAS_FILL / half_range.
    Radii are remapped by rescaling each centered row, which preserves
    every point's angle exactly and keeps r = 0 points at the origin.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or y.shape[1] != 2:
        raise ValueError("expected an (n, 2) projected matrix")
    if not np.isfinite(y).all():
        raise ValueError("projected matrix contains non-finite values")
    centered = y - y.mean(axis=0)
    r = np.hypot(centered[:, 0], centered[:, 1])
    r_new = radial_transform(trim_radius(r, params.R), params.p_eff, params.R)
    safe_r = np.where(r > 0, r, 1.0)
    factor = np.where(r > 0, r_new / safe_r, 0.0)
    factor *= CANVAS_FILL / params.effective_half_range
    return centered * factor[:, None]
