"""Cut-cell quadrature with implicit (level-set) and parametric (NURBS) interfaces."""
from .cases import get_case
from .geometry import (
    BackgroundMesh,
    Cell,
    Circle,
    CurveSegment,
    HalfPlane,
    ImplicitRegion,
    NurbsCurve,
    ParametricRegion,
    Polynomial,
    circle_region,
    polygon_region,
)
from .integration import (
    CellStatus,
    area_convergence_study,
    boundary_quadrature,
    classify_cells,
    domain_quadrature,
    integrate,
    robustness_sweep,
)
from .quad_implicit import cell_quadrature_implicit, interface_quadrature_implicit
from .quad_parametric import build_tiles, cell_quadrature_parametric, interface_quadrature_parametric, tile_quadrature
from .rules import QuadratureRule

__version__ = "0.1.0"

__all__ = [
    "BackgroundMesh",
    "Cell",
    "CellStatus",
    "Circle",
    "CurveSegment",
    "HalfPlane",
    "ImplicitRegion",
    "NurbsCurve",
    "ParametricRegion",
    "Polynomial",
    "QuadratureRule",
    "area_convergence_study",
    "boundary_quadrature",
    "build_tiles",
    "cell_quadrature_implicit",
    "cell_quadrature_parametric",
    "circle_region",
    "classify_cells",
    "domain_quadrature",
    "get_case",
    "integrate",
    "interface_quadrature_implicit",
    "interface_quadrature_parametric",
    "polygon_region",
    "robustness_sweep",
    "tile_quadrature",
]
