import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutquad.geometry import BackgroundMesh, Circle, HalfPlane, ImplicitRegion, ParametricRegion
from cutquad.integration import domain_quadrature
from cutquad.specfile import SpecError, parse_interface

IMPLICIT = """\
type: implicit
domain: {origin: [0, 0], width: 1, height: 1}
constraints:
  - circle: {cx: 0.5, cy: 0.5, r: 0.2}
  - halfplane: {a: 1, b: 0, c: 0.5}
"""

PARAMETRIC = """\
type: parametric
segments:
  - degree: 1
    knots: [0, 0, 1, 1]
    points: [[0.2, 0.2], [0.8, 0.2]]
  - degree: 2
    knots: [0, 0, 0, 1, 1, 1]
    points: [[0.8, 0.2], [0.8, 0.8], [0.2, 0.8]]
    weights: [1, 0.7071067811865476, 1]
  - degree: 1
    knots: [0, 0, 1, 1]
    points: [[0.2, 0.8], [0.2, 0.2]]
"""


def test_implicit_file():
    f = parse_interface(IMPLICIT)
    assert f.kind == "implicit"
    assert isinstance(f.region, ImplicitRegion)
    assert isinstance(f.region.constraints[0], Circle)
    assert isinstance(f.region.constraints[1], HalfPlane)
    area = domain_quadrature(BackgroundMesh.unit_square(0.25), f.region, 6).rule.total
    assert area == pytest.approx(0.5 * math.pi * 0.04, rel=1e-6)


def test_parametric_file():
    f = parse_interface(PARAMETRIC)
    assert f.kind == "parametric" and isinstance(f.region, ParametricRegion)
    # square side 0.6 minus the segment cut off by the quarter-ellipse-like rational arc
    assert f.region.signed_area() > 0


def test_poly_constraint():
    text = "type: implicit\nconstraints:\n  - poly: {degree: 1, coeffs: [[0.5, 0], [-1, 0]]}\n"
    f = parse_interface(text)
    assert domain_quadrature(BackgroundMesh.unit_square(0.25), f.region, 2).rule.total == pytest.approx(0.5)


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("type: implicit\nconstraints:\n  - circle: {cx: 0.5, cy: 0.5}\n", 3, "constraints[0].circle.r"),
        ("type: implicit\nconstraints:\n  - circle: {cx: 0.5, cy: x, r: 1}\n", 3, "constraints[0].circle.cy"),
        ("type: implicit\nconstraints:\n  - ellipse: {a: 1}\n", 3, "constraints[0].ellipse"),
        ("type: cubic\n", 1, "type"),
        ("type: implicit\ndomain: {width: -1}\nconstraints:\n  - halfplane: {a: 1, b: 0, c: 0}\n", 2, "domain.width"),
        ("type: parametric\nsegments:\n  - degree: 1\n    knots: [0, 1]\n    points: [[0, 0], [1, 0]]\n", 3, "segments[0]"),
    ],
)
def test_errors_name_line_and_field(text, line, field):
    with pytest.raises(SpecError) as info:
        parse_interface(text)
    assert info.value.line == line
    assert info.value.field == field
    assert f"line {line}" in str(info.value) and field in str(info.value)


def test_open_loop_reported():
    text = PARAMETRIC.rsplit("  - degree: 1", 1)[0]
    with pytest.raises(SpecError, match="segments"):
        parse_interface(text)


def test_malformed_yaml():
    with pytest.raises(SpecError, match="line"):
        parse_interface("type: implicit\nconstraints: [\n")


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(0.3, 0.7), st.floats(0.3, 0.7))
def test_circle_round_trip(r, cx, cy):
    text = f"type: implicit\nconstraints:\n  - circle: {{cx: {cx!r}, cy: {cy!r}, r: {r!r}}}\n"
    c = parse_interface(text).region.constraints[0]
    assert (c.cx, c.cy, c.r) == (cx, cy, r)
