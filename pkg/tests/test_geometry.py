import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutquad.geometry import (
    BackgroundMesh,
    Cell,
    Circle,
    CurveSegment,
    GeometryError,
    HalfPlane,
    ImplicitRegion,
    NurbsCurve,
    ParametricRegion,
    Polynomial,
    arc_curve,
    circle_curve,
    circle_region,
    line_curve,
    polygon_region,
)
from oracles import shoelace

unit = st.floats(0.0, 1.0)


def test_mesh_from_h():
    m = BackgroundMesh.unit_square(0.25)
    assert (m.nx, m.ny) == (4, 4)
    assert m.cell(1, 2).bounds == pytest.approx((0.25, 0.5, 0.5, 0.75))
    assert len(list(m.cells())) == 16
    assert m.tol == pytest.approx(1e-10)


@pytest.mark.parametrize("h", [0.0, -0.1, 0.3])
def test_mesh_rejects_bad_h(h):
    with pytest.raises(GeometryError):
        BackgroundMesh.unit_square(h)


def test_cell_subdivide_tiles_parent():
    c = Cell(0, 0, 0.0, 0.5, 0.25, 0.75)
    kids = c.subdivide()
    assert len(kids) == 4
    assert sum(k.area for k in kids) == pytest.approx(c.area)


def test_degenerate_cell():
    with pytest.raises(GeometryError):
        Cell(0, 0, 1.0, 1.0, 0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(unit)
def test_rational_circle_lies_on_circle(t):
    c = circle_curve((0.5, 0.5), 0.2)
    lo, hi = c.domain
    x, y = c.evaluate(lo + t * (hi - lo))
    assert math.hypot(x - 0.5, y - 0.5) == pytest.approx(0.2, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3.0, 3.0), st.floats(0.1, 3.0), unit)
def test_arc_endpoints_and_radius(a0, sweep, t):
    arc = arc_curve((0.1, -0.2), 0.7, a0, a0 + sweep)
    lo, hi = arc.domain
    assert np.allclose(arc.evaluate(lo), (0.1 + 0.7 * math.cos(a0), -0.2 + 0.7 * math.sin(a0)), atol=1e-13)
    assert np.allclose(arc.evaluate(hi), (0.1 + 0.7 * math.cos(a0 + sweep), -0.2 + 0.7 * math.sin(a0 + sweep)), atol=1e-13)
    x, y = arc.evaluate(lo + t * (hi - lo))
    assert math.hypot(x - 0.1, y + 0.2) == pytest.approx(0.7, abs=1e-13)


def test_curve_derivative_matches_difference():
    c = arc_curve((0.0, 0.0), 1.0, 0.2, 2.5)
    lo, hi = c.domain
    for xi in np.linspace(lo + 0.01, hi - 0.01, 7):
        e = 1e-6
        fd = (np.array(c.evaluate(xi + e)) - np.array(c.evaluate(xi - e))) / (2 * e)
        assert np.allclose(c.derivative(xi), fd, atol=1e-7)


@pytest.mark.parametrize(
    "kw",
    [
        dict(degree=0, knots=[0, 1], control_points=[[0, 0]]),
        dict(degree=1, knots=[0, 0, 1], control_points=[[0, 0], [1, 0]]),
        dict(degree=1, knots=[0, 1, 1, 1], control_points=[[0, 0], [1, 0]]),
        dict(degree=1, knots=[0, 0, 1, 1], control_points=[[0, 0], [1, 0]], weights=[1, -1]),
    ],
)
def test_nurbs_validation(kw):
    with pytest.raises(GeometryError):
        NurbsCurve(**kw)


def test_segment_interval_checked():
    with pytest.raises(GeometryError):
        CurveSegment(line_curve((0, 0), (1, 0)), 0.5, 0.5)


def test_open_loop_rejected():
    segs = (CurveSegment(line_curve((0, 0), (1, 0))), CurveSegment(line_curve((1, 0), (1, 1))))
    with pytest.raises(GeometryError, match="not closed"):
        ParametricRegion(segs)


def test_clockwise_loop_normalized():
    cw = polygon_region([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert cw.orientation == -1
    assert cw.signed_area() == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(unit, unit), min_size=3, max_size=3))
def test_triangle_signed_area_matches_shoelace(v):
    a = shoelace(v)
    if abs(a) < 1e-6:
        return
    assert polygon_region(v).signed_area() == pytest.approx(abs(a), rel=1e-12)


def test_circle_loop_area_and_winding():
    r = circle_region((0.5, 0.5), 0.2)
    assert r.signed_area() == pytest.approx(math.pi * 0.04, rel=1e-14)
    inside = r.contains(np.array([[0.5, 0.5], [0.65, 0.5], [0.9, 0.9]]))
    assert inside.tolist() == [True, True, False]


@settings(max_examples=50, deadline=None)
@given(unit, unit)
def test_constraint_gradients(x, y):
    cons = [
        Circle(0.3, 0.6, 0.2),
        Circle(0.0, 0.0, 0.25, sign=-1.0),
        HalfPlane(1.0, -2.0, 0.3),
        Polynomial(np.array([[0.1, 1.0, 0.0], [-2.0, 0.0, 0.0], [3.0, 0.0, 0.0]])),
    ]
    p = np.array([[x, y]])
    e = 1e-6
    for c in cons:
        g = np.asarray(c.gradient(p)).reshape(2)
        fx = (c.value(p + [e, 0]) - c.value(p - [e, 0])) / (2 * e)
        fy = (c.value(p + [0, e]) - c.value(p - [0, e])) / (2 * e)
        assert np.allclose(g, [float(fx[0]), float(fy[0])], atol=1e-6)


def test_region_indicator():
    reg = ImplicitRegion((Circle(0.5, 0.5, 0.2), HalfPlane(1.0, 0.0, 0.5)))
    ind = reg.indicator(np.array([[0.45, 0.5], [0.55, 0.5], [0.1, 0.1]]))
    assert np.asarray(ind, dtype=bool).tolist() == [True, False, False]


def test_halfplane_left_of_sign():
    h = HalfPlane.left_of((0, 0), (1, 0))
    assert h.value(np.array([[0.5, 1.0]]))[0] > 0
    assert h.value(np.array([[0.5, -1.0]]))[0] < 0
