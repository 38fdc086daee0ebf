"""Grand tour engine with a crowding-reversing radial display transform."""

from .dataset import Dataset, DataWarning, PreprocessSpec, load_csv, pca_reduce, preprocess, sample_ball
from .diagnostics import (
    HexbinGrid,
    RadialCdfTable,
    area_uniformity,
    curve_table,
    hexbin,
    ks_uniformity,
    transformed_circles,
)
from .pipeline import (
    ProjectedFrame,
    TourRun,
    export_frames,
    read_frames_jsonl,
    render_static,
    run_tour,
)
from .sage import (
    SageParams,
    SageWarning,
    apply_sage,
    default_R,
    effective_dim,
    inverse_projected_volume_2d,
    radial_transform,
    relative_p_volume,
    relative_projected_volume,
    trim_radius,
)
from .server import apply_params_live, create_app, serve
from .tourpath import (
    GeodesicPath,
    PathConfig,
    frame_stream,
    interpolate,
    plan_geodesic,
    random_frame,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DataWarning",
    "GeodesicPath",
    "HexbinGrid",
    "PathConfig",
    "PreprocessSpec",
    "ProjectedFrame",
    "RadialCdfTable",
    "SageParams",
    "SageWarning",
    "TourRun",
    "apply_params_live",
    "apply_sage",
    "area_uniformity",
    "create_app",
    "curve_table",
    "default_R",
    "effective_dim",
    "export_frames",
    "frame_stream",
    "hexbin",
    "interpolate",
    "inverse_projected_volume_2d",
    "ks_uniformity",
    "load_csv",
    "pca_reduce",
    "plan_geodesic",
    "preprocess",
    "radial_transform",
    "random_frame",
    "read_frames_jsonl",
    "relative_p_volume",
    "relative_projected_volume",
    "render_static",
    "run_tour",
    "sample_ball",
    "serve",
    "transformed_circles",
    "trim_radius",
]
