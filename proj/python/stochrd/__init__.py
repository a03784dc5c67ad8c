"""Python bindings for the stochrd numerics library."""

import json

from ._core import (
    CalibrationFailure,
    DivergenceError,
    Grid,
    InvalidArgument,
    ModelSpec,
    WienerPath,
    WindowExceeded,
    __version__,
    absorbing_radius,
    execute,
    hausdorff_semidist,
    l2_norm,
    phi,
    solve,
    validate_dissipativity_json,
    z_value,
)


def validate_dissipativity(spec, samples=41):
    """Structural checks on the nonlinearity as a dict."""
    return json.loads(validate_dissipativity_json(spec, samples))


__all__ = [
    "CalibrationFailure",
    "DivergenceError",
    "Grid",
    "InvalidArgument",
    "ModelSpec",
    "WienerPath",
    "WindowExceeded",
    "__version__",
    "absorbing_radius",
    "execute",
    "hausdorff_semidist",
    "l2_norm",
    "phi",
    "solve",
    "validate_dissipativity",
    "z_value",
]
