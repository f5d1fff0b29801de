"""Built-in benchmark geometries, each in implicit and parametric form."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .geometry import (
    Circle,
    CurveSegment,
    HalfPlane,
    ImplicitRegion,
    InterfaceSpec,
    ParametricRegion,
    arc_curve,
    circle_region,
    line_curve,
    polygon_region,
)

CIRCLE_CENTER = (0.5, 0.5)
CIRCLE_RADIUS = 0.2

SEMI_RADIUS = 0.25
SEMI_CENTER = (0.1768, 0.1768)
SEMI_OFFSET = 0.3536

LINE_START = 0.5
HOLE_RADIUS = 0.25
TRIM_Y = 0.75

BACKENDS = ("implicit", "parametric")


@dataclass(frozen=True)
class Case:
    """A named geometry with both interface descriptions and its exact area."""

    name: str
    implicit: ImplicitRegion
    parametric: ParametricRegion
    area: float

    def region(self, backend: str) -> InterfaceSpec:
        if backend == "implicit":
            return self.implicit
        if backend == "parametric":
            return self.parametric
        raise ValueError(f"unknown backend {backend!r}")


def circle_case(center=CIRCLE_CENTER, radius: float = CIRCLE_RADIUS) -> Case:
    cx, cy = center
    return Case(
        "circle",
        ImplicitRegion((Circle(cx, cy, radius),)),
        circle_region(center, radius),
        math.pi * radius**2,
    )


def semicircle_case() -> Case:
    """Half disc cut off by the line x + y = 0.3536 through the disc center.

    The retained half is the one on the far side of the line from the origin.
    """
    cx, cy = SEMI_CENTER
    R = SEMI_RADIUS
    implicit = ImplicitRegion((HalfPlane(-1.0, -1.0, -SEMI_OFFSET), Circle(cx, cy, R)))
    a0, a1 = -0.25 * math.pi, 0.75 * math.pi
    arc = arc_curve(SEMI_CENTER, R, a0, a1)
    p0 = (cx + R * math.cos(a0), cy + R * math.sin(a0))
    p1 = (cx + R * math.cos(a1), cy + R * math.sin(a1))
    chord = line_curve(p1, p0)
    parametric = ParametricRegion((CurveSegment(arc), CurveSegment(chord)))
    return Case("semicircle", implicit, parametric, 0.5 * math.pi * R**2)


def line_case(x: float = LINE_START) -> Case:
    """Part of the unit square left of the vertical line at ``x``.

    The parametric loop extends below, above and left of the square so only
    the line itself crosses the mesh.
    """
    implicit = ImplicitRegion((HalfPlane(1.0, 0.0, x),))
    parametric = polygon_region([(-0.5, -0.5), (x, -0.5), (x, 1.5), (-0.5, 1.5)])
    return Case("line", implicit, parametric, x)


def triangle_case(alpha: float = 0.0) -> Case:
    """Triangle O, A, V with V = (0, 0.5) rotated clockwise by ``alpha`` (radians)."""
    O, A = (0.0, 0.0), (0.5, 0.0)
    V = (0.5 * math.sin(alpha), 0.5 * math.cos(alpha))
    implicit = ImplicitRegion((HalfPlane.left_of(O, A), HalfPlane.left_of(A, V), HalfPlane.left_of(V, O)))
    return Case("triangle", implicit, polygon_region([O, A, V]), 0.125 * math.cos(alpha))


def plate_hole_case(radius: float = HOLE_RADIUS) -> Case:
    """Unit square minus the quarter disc of the given radius at the origin."""
    implicit = ImplicitRegion((Circle(0.0, 0.0, radius, sign=-1.0),))
    r = radius
    pts = [(r, 0.0), (r, -0.5), (1.5, -0.5), (1.5, 1.5), (-0.5, 1.5), (-0.5, r), (0.0, r)]
    segs = [CurveSegment(line_curve(pts[k], pts[k + 1])) for k in range(len(pts) - 1)]
    segs.append(CurveSegment(arc_curve((0.0, 0.0), r, 0.5 * math.pi, 0.0)))
    return Case("plate-hole", implicit, ParametricRegion(tuple(segs)), 1.0 - 0.25 * math.pi * r**2)


def square_plate_case(trim: float = TRIM_Y) -> Case:
    """Unit square trimmed to ``y < trim``."""
    implicit = ImplicitRegion((HalfPlane(0.0, 1.0, trim),))
    parametric = polygon_region([(-0.5, -0.5), (1.5, -0.5), (1.5, trim), (-0.5, trim)])
    return Case("square-plate", implicit, parametric, trim)


BUILTIN: dict[str, Callable[[], Case]] = {
    "circle": circle_case,
    "semicircle": semicircle_case,
    "line": line_case,
    "triangle": triangle_case,
    "plate-hole": plate_hole_case,
    "square-plate": square_plate_case,
}


def get_case(name: str) -> Case:
    try:
        return BUILTIN[name]()
    except KeyError:
        raise ValueError(f"unknown case {name!r}; choose from {', '.join(BUILTIN)}") from None
