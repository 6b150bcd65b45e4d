"""Monte Carlo laboratory for one-dimensional SDEs with jumps driven by shared noise."""

from .kernels import BACKEND
from .noise import LevyMeasure, NoiseRealization, TimeGrid, realize
from .model import SdeSpec, builtin, custom
from .solver import JumpPath, SolveConfig, coupled_solve, segmented_solve, solve

__all__ = [
    "BACKEND",
    "LevyMeasure",
    "NoiseRealization",
    "TimeGrid",
    "realize",
    "SdeSpec",
    "builtin",
    "custom",
    "JumpPath",
    "SolveConfig",
    "solve",
    "coupled_solve",
    "segmented_solve",
]
