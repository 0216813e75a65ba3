"""Covariograms of planar convex bodies and the constructions around them."""

from .chords import chord_length_distribution, chord_set, kbar_length
from .covariogram import (
    CovariogramField,
    covariogram,
    covariogram_grid,
    covariogram_mc,
    cross_covariogram,
    dk_map,
)
from .errors import CovkitError
from .geometry import (
    Polygon,
    congruence_distance,
    convex_hull,
    difference_body,
    hausdorff,
    nikodym,
)
from .smooth import SmoothBody, body_from_curvature, circle
from .symmetry import check_pair, detect_local_symmetries, flip_arcs

__version__ = "0.1.0"

__all__ = [
    "CovariogramField",
    "CovkitError",
    "Polygon",
    "SmoothBody",
    "body_from_curvature",
    "check_pair",
    "chord_length_distribution",
    "chord_set",
    "circle",
    "congruence_distance",
    "convex_hull",
    "covariogram",
    "covariogram_grid",
    "covariogram_mc",
    "cross_covariogram",
    "detect_local_symmetries",
    "difference_body",
    "dk_map",
    "flip_arcs",
    "hausdorff",
    "kbar_length",
    "nikodym",
]
