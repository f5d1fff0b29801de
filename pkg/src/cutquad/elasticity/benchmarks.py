"""Plate-with-hole and manufactured square-plate benchmarks."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..cases import plate_hole_case, square_plate_case
from ..geometry import BackgroundMesh
from ..integration import boundary_quadrature, domain_quadrature
from .bspline import BsplineSpace
from .exact import (
    Material,
    PlateHoleCase,
    manufactured_body_force,
    manufactured_exact,
    manufactured_traction,
    plate_hole_exact,
    plate_hole_traction,
)
from .fem import (
    Traction,
    apply_boundary_conditions,
    assemble,
    dirichlet_dofs,
    edge_normal,
    edge_rule,
    relative_l2_error,
    solve,
)

ELASTICITY_HEADER = ("case", "backend", "p", "h", "n_dofs", "n_quad_points", "rel_l2_error", "cond_estimate")
ELASTICITY_CASES = ("plate-hole", "square-plate")


@dataclass(frozen=True)
class ElasticityResult:
    case: str
    backend: str
    p: int
    h: float
    n_dofs: int
    n_quad_points: int
    rel_l2_error: float
    cond_estimate: float

    def row(self) -> list[str]:
        f = lambda x: format(float(x), ".17g")  # noqa: E731
        return [self.case, self.backend, str(self.p), f(self.h), str(self.n_dofs), str(self.n_quad_points), f(self.rel_l2_error), f(self.cond_estimate)]


def _zero(pts):
    return np.zeros(len(np.atleast_2d(pts)))


def plate_hole_constraints(space: BsplineSpace) -> dict[int, float]:
    """Symmetry conditions: u_y = 0 along the bottom edge, u_x = 0 along the left edge."""
    out = dirichlet_dofs(space, "bottom", 1, _zero)
    out.update(dirichlet_dofs(space, "left", 0, _zero))
    return out


def square_plate_constraints(space: BsplineSpace) -> dict[int, float]:
    """Both components fixed to the projected manufactured trace on bottom, left and right."""
    out: dict[int, float] = {}
    for edge in ("bottom", "left", "right"):
        for comp in (0, 1):
            out.update(dirichlet_dofs(space, edge, comp, lambda p, c=comp: manufactured_exact(p)[:, c]))
    return out


def run_benchmark(
    case: str,
    backend: str,
    p: int,
    h: float,
    q: int | None = None,
    material: Material = Material(),
    plate: PlateHoleCase = PlateHoleCase(),
    threads: int | None = None,
    estimate_condition: bool = True,
) -> ElasticityResult:
    q = p + 2 if q is None else q
    mesh = BackgroundMesh.unit_square(h)
    space = BsplineSpace(mesh, p)
    if case == "plate-hole":
        iface = plate_hole_case(plate.R_i).region(backend)
        tractions = [
            Traction(edge_rule(mesh, e, q), lambda x, n=edge_normal(e): plate_hole_traction(x, n, material, plate))
            for e in ("top", "right")
        ]
        body = None
        constraints = plate_hole_constraints(space)
        exact = lambda x: plate_hole_exact(x, material, plate)  # noqa: E731
    elif case == "square-plate":
        iface = square_plate_case().region(backend)
        top = boundary_quadrature(mesh, iface, q, threads)
        tractions = [Traction(top, lambda x: manufactured_traction(x, (0.0, 1.0), material))]
        body = lambda x: manufactured_body_force(x, material)  # noqa: E731
        constraints = square_plate_constraints(space)
        exact = manufactured_exact
    else:
        raise ValueError(f"unknown elasticity case {case!r}; choose from {', '.join(ELASTICITY_CASES)}")
    dq = domain_quadrature(mesh, iface, q, threads)
    system = assemble(space, mesh, iface, material, q, body, tractions, quadrature=dq)
    apply_boundary_conditions(system, constraints)
    field = solve(system, estimate_condition)
    err = relative_l2_error(field, exact, mesh, iface, q, quadrature=dq)
    return ElasticityResult(case, backend, p, h, field.n_free, len(dq), err, field.cond_estimate)


def convergence_study(case: str, backend: str, p: int, h_list: Iterable[float], **kw) -> list[ElasticityResult]:
    return [run_benchmark(case, backend, p, h, **kw) for h in h_list]


def convergence_order(h: Sequence[float], err: Sequence[float]) -> float:
    """Least-squares slope of log(err) against log(h)."""
    x = np.log(np.asarray(h, dtype=float))
    y = np.log(np.asarray(err, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def format_elasticity_csv(results: Iterable[ElasticityResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ELASTICITY_HEADER)
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()


def backend_ratio(a: float, b: float) -> float:
    return max(a, b) / min(a, b) if min(a, b) > 0 else math.inf
