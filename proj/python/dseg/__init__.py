"""Line segment detection with a Kalman-filtered line model."""

from ._core import (
    DetectorParams,
    Error,
    GradientField,
    HierarchicalParams,
    Segment,
    add_noise,
    carve_intervals,
    compute_gradient,
    detect,
    detect_hierarchical,
    distance,
    match,
    read_image,
    segments_from_json,
    segments_to_json,
    similarity,
)

__all__ = [
    "DetectorParams",
    "Error",
    "GradientField",
    "HierarchicalParams",
    "Segment",
    "add_noise",
    "carve_intervals",
    "compute_gradient",
    "detect",
    "detect_hierarchical",
    "distance",
    "match",
    "read_image",
    "segments_from_json",
    "segments_to_json",
    "similarity",
]
