"""Weighted template matching.

Grayscale images cross the boundary as 2-D float64 numpy arrays of shape
[height, width] with intensities on the 0..255 scale. The extension module
carries the implementation; this package only re-exports it.
"""

from ._core import (
    Annotation,
    DegenerateTemplateError,
    DegenerateWindowError,
    GrayImage,
    NoValidWindowError,
    ParseError,
    PlacementError,
    Template,
    WeightMap,
    detection_error,
    detection_rate,
    exponential_map,
    extract_template,
    fast_match,
    gaussian_map,
    generate_corpus,
    generate_scene,
    map_for_template,
    match_ensemble,
    match_template,
    ncc,
    read_pgm,
    run_experiment,
    score_map,
    uniform_map,
    weighted_ncc,
    write_pgm,
)

__all__ = [
    "Annotation",
    "DegenerateTemplateError",
    "DegenerateWindowError",
    "GrayImage",
    "NoValidWindowError",
    "ParseError",
    "PlacementError",
    "Template",
    "WeightMap",
    "detection_error",
    "detection_rate",
    "exponential_map",
    "extract_template",
    "fast_match",
    "gaussian_map",
    "generate_corpus",
    "generate_scene",
    "map_for_template",
    "match_ensemble",
    "match_template",
    "ncc",
    "read_pgm",
    "run_experiment",
    "score_map",
    "uniform_map",
    "weighted_ncc",
    "write_pgm",
]
