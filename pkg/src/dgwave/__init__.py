"""Discontinuous Galerkin schemes for u_t + u_x = 0: operators, time marching,
Bloch-wave dispersion analysis and reproducible experiments."""

from .dg_core import DGState, FluxKind, SchemeConfig, alpha_star, project_initial
from .mesh import PeriodicMesh1D, perturbed_mesh, uniform_mesh
from .time_march import MarchConfig, Trajectory, advance, measure_error

__all__ = [
    "DGState",
    "FluxKind",
    "SchemeConfig",
    "alpha_star",
    "project_initial",
    "PeriodicMesh1D",
    "perturbed_mesh",
    "uniform_mesh",
    "MarchConfig",
    "Trajectory",
    "advance",
    "measure_error",
]

__version__ = "0.1.0"
