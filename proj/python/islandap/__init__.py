"""Asymptotic-preserving solver for anisotropic diffusion with closed field lines."""

from ._core import (
    IslandapError,
    ProblemSpec,
    convergence_csv,
    example1,
    example2,
    grid_spacing,
    solve,
    trace,
)

__all__ = [
    "IslandapError",
    "ProblemSpec",
    "convergence_csv",
    "example1",
    "example2",
    "grid_spacing",
    "solve",
    "trace",
]
