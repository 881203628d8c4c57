"""speccon: spectrum-congruency edge detection and evaluation.

The edge strength of a pixel is the congruency of mean-centered,
area-resampled patches taken around it at several scales: the norm of
their sum over the sum of their norms, minus a noise threshold tied to
the mean energy. High congruency means every scale sees the same local
structure, which is what an edge looks like and what noise does not.
"""

from .canny import canny, canny_strength
from .congruency import (
    EPS_GUARD,
    EnergyMaps,
    NoiseModel,
    OrthonormalBasis,
    congruency_of_vectors,
    field_energy,
    noise_threshold,
    project,
    spectrum_congruency_map,
    spectrum_congruency_map_naive,
)
from .image import (
    GradientField,
    SummedAreaTable,
    gaussian_smooth,
    integral_image,
    sobel_gradients,
    to_grayscale,
)
from .metrics import (
    EvalReport,
    PRCurve,
    distance_transform,
    evaluate_pair,
    fom,
    match_edges,
    ods_ois,
    prf,
)
from .patches import (
    DEFAULT_SCALES,
    SCALE_PRESETS,
    ScaleSet,
    downsample_patch,
    extract_patch,
    patch_field,
    patch_field_naive,
    remove_dc,
)
from .synth import SynthScene, add_gaussian_noise, make_shapes
from .thinning import binarize, nms

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SCALES",
    "EPS_GUARD",
    "EnergyMaps",
    "EvalReport",
    "GradientField",
    "NoiseModel",
    "OrthonormalBasis",
    "PRCurve",
    "SCALE_PRESETS",
    "ScaleSet",
    "SummedAreaTable",
    "SynthScene",
    "add_gaussian_noise",
    "binarize",
    "canny",
    "canny_strength",
    "congruency_of_vectors",
    "distance_transform",
    "downsample_patch",
    "evaluate_pair",
    "extract_patch",
    "field_energy",
    "fom",
    "gaussian_smooth",
    "integral_image",
    "make_shapes",
    "match_edges",
    "nms",
    "noise_threshold",
    "ods_ois",
    "patch_field",
    "patch_field_naive",
    "prf",
    "project",
    "remove_dc",
    "sobel_gradients",
    "spectrum_congruency_map",
    "spectrum_congruency_map_naive",
    "to_grayscale",
]
