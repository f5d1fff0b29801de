"""Interface-spec files (YAML).

Implicit::

    type: implicit
    domain: {origin: [0, 0], width: 1, height: 1}   # optional
    constraints:
      - circle: {cx: 0.5, cy: 0.5, r: 0.2, sign: 1}
      - halfplane: {a: 1, b: 0, c: 0.5}              # sign * (c - a x - b y)
      - poly: {degree: 1, coeffs: [[0.5, 0], [-1, 0]], sign: 1}

``coeffs[i][j]`` multiplies x^i y^j. ``sign`` defaults to 1.

Parametric (one closed loop)::

    type: parametric
    segments:
      - degree: 1
        knots: [0, 0, 1, 1]
        points: [[0, 0], [1, 0]]
        weights: [1, 1]       # optional, default all ones
        interval: [0, 1]      # optional, default whole knot range
      - ...

Errors carry the line number and the dotted field path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .geometry import (
    Circle,
    CurveSegment,
    GeometryError,
    HalfPlane,
    ImplicitRegion,
    InterfaceSpec,
    NurbsCurve,
    ParametricRegion,
    Polynomial,
)


class SpecError(ValueError):
    def __init__(self, msg: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class Domain:
    origin: tuple[float, float] = (0.0, 0.0)
    width: float = 1.0
    height: float = 1.0


@dataclass(frozen=True)
class InterfaceFile:
    kind: str
    region: InterfaceSpec
    domain: Domain


def _line(node) -> int:
    return node.start_mark.line + 1


def _fail(node, path: str, msg: str):
    raise SpecError(msg, _line(node), path)


def _mapping(node, path: str) -> dict[str, tuple]:
    if not isinstance(node, yaml.MappingNode):
        _fail(node, path, "expected a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            _fail(k, path, "mapping keys must be plain names")
        if k.value in out:
            _fail(k, f"{path}.{k.value}" if path else k.value, "duplicate key")
        out[k.value] = (k, v)
    return out


def _sequence(node, path: str) -> list:
    if not isinstance(node, yaml.SequenceNode):
        _fail(node, path, "expected a list")
    return list(node.value)


def _number(node, path: str) -> float:
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, path, "expected a number")
    try:
        val = float(node.value)
    except ValueError:
        _fail(node, path, f"expected a number, got {node.value!r}")
    if not np.isfinite(val):
        _fail(node, path, "number must be finite")
    return val


def _integer(node, path: str) -> int:
    val = _number(node, path)
    if val != int(val):
        _fail(node, path, f"expected an integer, got {node.value!r}")
    return int(val)


def _numbers(node, path: str) -> list[float]:
    return [_number(v, f"{path}[{k}]") for k, v in enumerate(_sequence(node, path))]


def _require(m: dict, key: str, parent_node, path: str):
    if key not in m:
        _fail(parent_node, f"{path}.{key}" if path else key, "missing required field")
    return m[key][1]


def _check_keys(m: dict, allowed: set[str], path: str):
    for key, (knode, _) in m.items():
        if key not in allowed:
            _fail(knode, f"{path}.{key}" if path else key, f"unknown field (allowed: {', '.join(sorted(allowed))})")


def _parse_domain(node, path: str) -> Domain:
    m = _mapping(node, path)
    _check_keys(m, {"origin", "width", "height"}, path)
    origin = (0.0, 0.0)
    if "origin" in m:
        vals = _numbers(m["origin"][1], f"{path}.origin")
        if len(vals) != 2:
            _fail(m["origin"][1], f"{path}.origin", "origin needs two coordinates")
        origin = (vals[0], vals[1])
    width = _number(m["width"][1], f"{path}.width") if "width" in m else 1.0
    height = _number(m["height"][1], f"{path}.height") if "height" in m else 1.0
    for name, val in (("width", width), ("height", height)):
        if val <= 0:
            _fail(m[name][1], f"{path}.{name}", "must be positive")
    return Domain(origin, width, height)


def _parse_constraint(node, path: str):
    m = _mapping(node, path)
    if len(m) != 1:
        _fail(node, path, "each constraint is a single-key mapping: circle, halfplane or poly")
    (kind, (knode, body)), = m.items()
    sub = f"{path}.{kind}"
    fields = _mapping(body, sub)
    sign = _number(fields["sign"][1], f"{sub}.sign") if "sign" in fields else 1.0
    if sign not in (1.0, -1.0):
        _fail(fields["sign"][1], f"{sub}.sign", "sign must be 1 or -1")
    if kind == "circle":
        _check_keys(fields, {"cx", "cy", "r", "sign"}, sub)
        cx, cy, r = (_number(_require(fields, k, body, sub), f"{sub}.{k}") for k in ("cx", "cy", "r"))
        if r <= 0:
            _fail(fields["r"][1], f"{sub}.r", "radius must be positive")
        return Circle(cx, cy, r, sign)
    if kind == "halfplane":
        _check_keys(fields, {"a", "b", "c", "sign"}, sub)
        a, b, c = (_number(_require(fields, k, body, sub), f"{sub}.{k}") for k in ("a", "b", "c"))
        if a == 0 and b == 0:
            _fail(body, sub, "a and b cannot both be zero")
        return HalfPlane(a, b, c, sign)
    if kind == "poly":
        _check_keys(fields, {"degree", "coeffs", "sign"}, sub)
        deg = _integer(_require(fields, "degree", body, sub), f"{sub}.degree")
        cnode = _require(fields, "coeffs", body, sub)
        rows = [_numbers(r, f"{sub}.coeffs[{k}]") for k, r in enumerate(_sequence(cnode, f"{sub}.coeffs"))]
        if deg < 1 or len(rows) != deg + 1 or any(len(r) != deg + 1 for r in rows):
            _fail(cnode, f"{sub}.coeffs", f"expected a {deg + 1} x {deg + 1} grid for degree {deg}")
        return Polynomial(np.array(rows), sign)
    _fail(knode, sub, f"unknown constraint type {kind!r} (use circle, halfplane or poly)")


def _parse_segment(node, path: str) -> CurveSegment:
    m = _mapping(node, path)
    _check_keys(m, {"degree", "knots", "points", "weights", "interval"}, path)
    deg = _integer(_require(m, "degree", node, path), f"{path}.degree")
    knots = _numbers(_require(m, "knots", node, path), f"{path}.knots")
    pnode = _require(m, "points", node, path)
    points = []
    for k, pn in enumerate(_sequence(pnode, f"{path}.points")):
        xy = _numbers(pn, f"{path}.points[{k}]")
        if len(xy) != 2:
            _fail(pn, f"{path}.points[{k}]", "control points need two coordinates")
        points.append(xy)
    weights = _numbers(m["weights"][1], f"{path}.weights") if "weights" in m else [1.0] * len(points)
    try:
        curve = NurbsCurve(deg, np.array(knots), np.array(points), np.array(weights))
    except (GeometryError, ValueError) as exc:
        _fail(node, path, str(exc))
    if "interval" in m:
        iv = _numbers(m["interval"][1], f"{path}.interval")
        if len(iv) != 2:
            _fail(m["interval"][1], f"{path}.interval", "interval needs two values")
        try:
            return CurveSegment(curve, iv[0], iv[1])
        except (GeometryError, ValueError) as exc:
            _fail(m["interval"][1], f"{path}.interval", str(exc))
    return CurveSegment(curve)


def parse_interface(text: str) -> InterfaceFile:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise SpecError(f"malformed YAML: {exc.problem}", mark.line + 1 if mark else None) from exc
    if root is None:
        raise SpecError("empty interface file", 1)
    top = _mapping(root, "")
    kind_node = _require(top, "type", root, "")
    if not isinstance(kind_node, yaml.ScalarNode) or kind_node.value not in ("implicit", "parametric"):
        _fail(kind_node, "type", "type must be 'implicit' or 'parametric'")
    kind = kind_node.value
    domain = _parse_domain(top["domain"][1], "domain") if "domain" in top else Domain()
    if kind == "implicit":
        _check_keys(top, {"type", "domain", "constraints"}, "")
        cnode = _require(top, "constraints", root, "")
        items = _sequence(cnode, "constraints")
        if not items:
            _fail(cnode, "constraints", "at least one constraint is required")
        region: InterfaceSpec = ImplicitRegion(tuple(_parse_constraint(c, f"constraints[{k}]") for k, c in enumerate(items)))
    else:
        _check_keys(top, {"type", "domain", "segments"}, "")
        snode = _require(top, "segments", root, "")
        items = _sequence(snode, "segments")
        if not items:
            _fail(snode, "segments", "at least one segment is required")
        segs = tuple(_parse_segment(s, f"segments[{k}]") for k, s in enumerate(items))
        try:
            region = ParametricRegion(segs)
        except GeometryError as exc:
            _fail(snode, "segments", str(exc))
    return InterfaceFile(kind, region, domain)


def load_interface(path) -> InterfaceFile:
    with open(path) as fh:
        return parse_interface(fh.read())
