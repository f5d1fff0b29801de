import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cutquad.geometry import Cell, Circle, HalfPlane, ImplicitRegion, Polynomial
from cutquad.quad_implicit import cell_quadrature_implicit, interface_quadrature_implicit
from oracles import clipped_area, quarter_disc_area, shoelace

UNIT = Cell(0, 0, 0.0, 1.0, 0.0, 1.0)
coord = st.floats(-0.5, 1.5)


def _triangle_region(v):
    return ImplicitRegion(tuple(HalfPlane.left_of(v[k], v[(k + 1) % 3]) for k in range(3)))


def test_inside_cell_is_tensor_rule():
    r = cell_quadrature_implicit(ImplicitRegion((HalfPlane(1.0, 0.0, 5.0),)), UNIT, 3)
    assert len(r) == 9
    assert r.total == pytest.approx(1.0, abs=1e-15)


def test_outside_cell_is_empty():
    r = cell_quadrature_implicit(ImplicitRegion((Circle(5.0, 5.0, 0.1),)), UNIT, 3)
    assert len(r) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=3))
def test_triangle_cell_area_matches_clipping(v):
    a = shoelace(v)
    assume(abs(a) > 1e-3)
    if a < 0:
        v = v[::-1]
    exact = clipped_area(v, 0.0, 1.0, 0.0, 1.0)
    got = cell_quadrature_implicit(_triangle_region(v), UNIT, 2).total
    assert got == pytest.approx(exact, rel=1e-10, abs=1e-9)  # slivers thinner than the geometric tolerance vanish


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.3, 1.3), st.floats(0.05, 2.0))
def test_linear_moment_exact(c, slope):
    # x-moment of {y < c + slope (x - 0.5)} inside the unit cell
    reg = ImplicitRegion((HalfPlane(-slope, 1.0, c - 0.5 * slope),))
    r = cell_quadrature_implicit(reg, UNIT, 3)
    xs = np.linspace(0, 1, 200001)
    h = np.clip(c + slope * (xs - 0.5), 0.0, 1.0)
    ref = np.trapezoid(xs * h, xs)
    assert float(np.sum(r.weights * r.points[:, 0])) == pytest.approx(ref, abs=1e-9)


def test_quarter_disc_high_order():
    r = 0.6
    got = cell_quadrature_implicit(ImplicitRegion((Circle(0.0, 0.0, r),)), UNIT, 12).total
    assert got == pytest.approx(quarter_disc_area(r), rel=1e-12)


def test_hole_inside_single_cell():
    """Two roots on most height lines."""
    reg = ImplicitRegion((Circle(0.5, 0.5, 0.2, sign=-1.0),))
    got = cell_quadrature_implicit(reg, UNIT, 12).total
    assert got == pytest.approx(1.0 - math.pi * 0.04, rel=1e-12)


def test_disc_inside_single_cell():
    reg = ImplicitRegion((Circle(0.5, 0.5, 0.2),))
    got = cell_quadrature_implicit(reg, UNIT, 12).total
    assert got == pytest.approx(math.pi * 0.04, rel=1e-12)


def test_points_lie_in_region():
    reg = ImplicitRegion((Circle(0.5, 0.5, 0.3), HalfPlane(1.0, 1.0, 1.1)))
    r = cell_quadrature_implicit(reg, UNIT, 5)
    assert np.all(r.weights > 0)
    assert np.all(np.asarray(reg.indicator(r.points), dtype=bool) | (np.min([c.value(r.points) for c in reg.constraints], axis=0) > -1e-12))


def test_polynomial_parabola_area():
    # y < 0.2 + x^2 on the unit cell; the parabola leaves through the top at x = sqrt(0.8)
    P = Polynomial(np.array([[0.2, -1.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
    got = cell_quadrature_implicit(ImplicitRegion((P,)), UNIT, 4).total
    xt = math.sqrt(0.8)
    assert got == pytest.approx(0.2 * xt + xt**3 / 3.0 + (1.0 - xt), rel=1e-13)


def test_interface_length_of_circle():
    reg = ImplicitRegion((Circle(0.5, 0.5, 0.2),))
    r = interface_quadrature_implicit(reg, UNIT, 16)
    assert r.total == pytest.approx(2 * math.pi * 0.2, rel=1e-9)
    d = np.hypot(r.points[:, 0] - 0.5, r.points[:, 1] - 0.5)
    assert np.allclose(d, 0.2, atol=1e-12)


def test_interface_length_of_segment():
    reg = ImplicitRegion((HalfPlane(1.0, 1.0, 1.0),))
    r = interface_quadrature_implicit(reg, UNIT, 2)
    assert r.total == pytest.approx(math.sqrt(2.0), rel=1e-13)


def test_invalid_order():
    with pytest.raises(ValueError):
        cell_quadrature_implicit(ImplicitRegion((Circle(0.5, 0.5, 0.2),)), UNIT, 0)
