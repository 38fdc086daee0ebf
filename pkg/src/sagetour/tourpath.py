"""Grand-tour path: random target planes joined by geodesic interpolation.

A tour step is a p x 2 basis with orthonormal columns.  Between randomly
drawn target planes we move along the geodesic of 2-planes: decompose
start'*end by SVD to get principal angles and paired directions, then
rotate each paired direction by a fraction of its angle.  The
interpolated basis is rotated back into the start frame's
parameterization so the rendered axes never jump at segment boundaries,
even though the target plane's own parameterization is arbitrary.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

# Orthonormality slack tolerated on any emitted basis.
ORTHONORMAL_TOL = 1e-9
# Target planes closer than this (largest principal angle) are redrawn.
MIN_SEGMENT_ANGLE = 1e-8


def frame_error(basis: np.ndarray) -> float:
    """Max-norm deviation of basis'*basis from the 2x2 identity."""
    basis = np.asarray(basis, dtype=float)
    return float(np.abs(basis.T @ basis - np.eye(2)).max())


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Canonical angles between the planes of two bases, ascending in [0, pi/2]."""
    cosines = np.linalg.svd(a.T @ b, compute_uv=False)
    return np.arccos(np.clip(cosines, -1.0, 1.0))


def plane_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between the planes spanned by a and b."""
    return float(principal_angles(a, b)[-1])


def projector_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm difference of the orthogonal projectors onto the two planes."""
    return float(np.abs(a @ a.T - b @ b.T).max())


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_frame(p: int, seed) -> np.ndarray:
    """Uniformly random 2-plane basis in p-space, deterministic per seed.

    Orthonormalizes two independent standard Gaussian vectors
    (Gram-Schmidt with one re-orthogonalization pass); near-collinear
    draws are resampled.  Accepts an integer seed or a Generator so a
    stream of frames can share one source.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    rng = _as_rng(seed)
    while True:
        g = rng.standard_normal((p, 2))
        norms = np.linalg.norm(g, axis=0)
        if norms.min() == 0.0:
            continue
        if abs(g[:, 0] @ g[:, 1]) / (norms[0] * norms[1]) > 1 - 1e-12:
            continue
        v0 = g[:, 0] / norms[0]
        w = g[:, 1] - v0 * (v0 @ g[:, 1])
        w -= v0 * (v0 @ w)
        return np.column_stack([v0, w / np.linalg.norm(w)])


@dataclass(frozen=True)
class PathConfig:
    """Interpolation granularity and reproducibility knobs for a tour."""

    step_angle: float = 0.05
    seed: int = 0
    max_targets: int | None = None

    def __post_init__(self) -> None:
        if not 0 < self.step_angle < math.pi / 2:
            raise ValueError("step_angle must be in (0, pi/2)")
        if self.max_targets is not None and self.max_targets < 1:
            raise ValueError("max_targets must be >= 1 when given")


@dataclass(frozen=True)
class GeodesicPath:
    """Precomputed geodesic between the planes of two bases.

    ``start_aligned`` holds the start basis rotated into the
    parameterization paired with ``principal_angles``; ``complement``
    holds the matching unit directions orthogonal to the start plane
    (zero columns where the angle vanishes).  ``rot_start``/``rot_end``
    are the within-plane rotations aligning each endpoint basis with the
    paired parameterization.
    """

    start: np.ndarray
    end: np.ndarray
    principal_angles: np.ndarray
    start_aligned: np.ndarray
    complement: np.ndarray
    rot_start: np.ndarray
    rot_end: np.ndarray

    @property
    def length(self) -> float:
        """Geodesic angle: sqrt of the summed squared principal angles."""
        return float(np.sqrt((self.principal_angles**2).sum()))


def plan_geodesic(a: np.ndarray, b: np.ndarray) -> GeodesicPath:
    """Set up the plane geodesic from basis a to basis b (same p).

    Identical planes are legal: all angles come out zero and
    interpolation degenerates to the identity.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("bases must have the same shape")
    u, cosines, vt = np.linalg.svd(a.T @ b)
    angles = np.arccos(np.clip(cosines, -1.0, 1.0))
    aligned = a @ u
    end_aligned = b @ vt.T
    complement = np.zeros_like(aligned)
    for i in range(2):
        w = end_aligned[:, i] - aligned @ (aligned.T @ end_aligned[:, i])
        w -= aligned @ (aligned.T @ w)
        norm = np.linalg.norm(w)
        if norm > 1e-9:
            complement[:, i] = w / norm
    return GeodesicPath(
        start=a,
        end=b,
        principal_angles=angles,
        start_aligned=aligned,
        complement=complement,
        rot_start=u,
        rot_end=vt.T,
    )


def interpolate(path: GeodesicPath, t: float) -> np.ndarray:
    """Basis at fraction t along the geodesic, t in [0, 1].

    Column i is start_aligned_i*cos(t*angle_i) + complement_i*sin(t*angle_i),
    rotated back by rot_start' so t = 0 reproduces the start basis exactly.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    ang = t * path.principal_angles
    basis = path.start_aligned * np.cos(ang) + path.complement * np.sin(ang)
    return basis @ path.rot_start.T


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def frame_stream(p: int, cfg: PathConfig) -> Iterator[np.ndarray]:
    """Lazily yield tour frames: random targets, geodesic steps between.

    Each segment emits ceil(total geodesic angle / step_angle) frames
    (the shared boundary frame is emitted once), so consecutive planes
    never differ by more than step_angle.  Deterministic for a fixed
    config.  For p = 2 there is only one plane, so segments become
    within-plane rotations toward each target's first axis; the stream
    keeps the same cadence contract.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    rng = np.random.default_rng(cfg.seed)
    current = random_frame(p, rng)
    yield current
    segments = 0
    while cfg.max_targets is None or segments < cfg.max_targets:
        target = random_frame(p, rng)
        if p == 2:
            spin = math.atan2(
                current[0, 0] * target[1, 0] - current[1, 0] * target[0, 0],
                current[:, 0] @ target[:, 0],
            )
            if abs(spin) < MIN_SEGMENT_ANGLE:
                continue
            steps = math.ceil(abs(spin) / cfg.step_angle)
            start = current
            for i in range(1, steps + 1):
                current = start @ _rotation(spin * i / steps)
                yield current
            segments += 1
            continue
        path = plan_geodesic(current, target)
        if path.principal_angles.max() < MIN_SEGMENT_ANGLE:
            continue
        steps = math.ceil(path.length / cfg.step_angle)
        for i in range(1, steps + 1):
            current = interpolate(path, i / steps)
            yield current
        segments += 1
