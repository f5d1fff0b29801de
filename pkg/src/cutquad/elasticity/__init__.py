"""Immersed plane-strain elasticity on trimmed B-spline discretizations."""
from .benchmarks import ElasticityResult, convergence_order, convergence_study, run_benchmark
from .bspline import BsplineSpace
from .exact import (
    Material,
    PlateHoleCase,
    manufactured_body_force,
    manufactured_exact,
    plate_hole_exact,
    plate_hole_traction,
)
from .fem import DisplacementField, LinearSystem, apply_boundary_conditions, assemble, relative_l2_error, solve

__all__ = [
    "BsplineSpace",
    "DisplacementField",
    "ElasticityResult",
    "LinearSystem",
    "Material",
    "PlateHoleCase",
    "apply_boundary_conditions",
    "assemble",
    "convergence_order",
    "convergence_study",
    "manufactured_body_force",
    "manufactured_exact",
    "plate_hole_exact",
    "plate_hole_traction",
    "relative_l2_error",
    "run_benchmark",
    "solve",
]
