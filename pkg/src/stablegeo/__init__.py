"""Exact invariants and geography of Gorenstein stable surfaces built from glued tiles."""

from stablegeo.errors import (
    PreconditionError,
    RangeError,
    StableGeoError,
    StructuralError,
    UnsupportedError,
)

__version__ = "0.1.0"

__all__ = [
    "PreconditionError",
    "RangeError",
    "StableGeoError",
    "StructuralError",
    "UnsupportedError",
]
