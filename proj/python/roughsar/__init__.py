"""Rough-interface GPR SAR simulation, ground-bounce removal and Kirchhoff imaging."""

import json as _json

from ._core import (
    ConfigError,
    NumericalError,
    RoughSurface,
    __version__,
    add_noise,
    detect_knee,
    field_down,
    field_up,
    flat_surface,
    generate_surface,
    hankel1_0,
    hankel1_1,
    illumination,
    km_image,
    mobius,
    modified_km,
    remove_ground_bounce,
    simulate,
    singular_values,
    surface_from_arrays,
)
from ._core import run_pipeline as _run_pipeline


def run_pipeline(config_path, out_dir):
    return _json.loads(_run_pipeline(str(config_path), str(out_dir)))


__all__ = [
    "ConfigError",
    "NumericalError",
    "RoughSurface",
    "__version__",
    "add_noise",
    "detect_knee",
    "field_down",
    "field_up",
    "flat_surface",
    "generate_surface",
    "hankel1_0",
    "hankel1_1",
    "illumination",
    "km_image",
    "mobius",
    "modified_km",
    "remove_ground_bounce",
    "run_pipeline",
    "simulate",
    "singular_values",
    "surface_from_arrays",
]
