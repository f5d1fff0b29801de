"""Reference values computed without any package code.

Raster indicator areas, shoelace and polygon clipping, and a textbook
bilinear element stiffness.
"""
from __future__ import annotations

import math

import numpy as np

RASTER_N = 4096


# ---------------------------------------------------------------------------
# closed-form indicator fields (f > 0 inside), one per built-in geometry
# ---------------------------------------------------------------------------


def _circle(cx, cy, r):
    return lambda x, y: r * r - (x - cx) ** 2 - (y - cy) ** 2


def _halfplane_left_of(A, B):
    (ax, ay), (bx, by) = A, B
    return lambda x, y: (bx - ax) * (y - ay) - (by - ay) * (x - ax)


def indicator_fields(name: str):
    """List of scalar fields whose common positive set is the geometry."""
    if name == "circle":
        return [_circle(0.5, 0.5, 0.2)]
    if name == "semicircle":
        return [lambda x, y: x + y - 0.3536, _circle(0.1768, 0.1768, 0.25)]
    if name == "line":
        return [lambda x, y: 0.5 - x]
    if name == "triangle":
        O, A, V = (0.0, 0.0), (0.5, 0.0), (0.0, 0.5)
        return [_halfplane_left_of(O, A), _halfplane_left_of(A, V), _halfplane_left_of(V, O)]
    if name == "plate-hole":
        return [lambda x, y: x * x + y * y - 0.0625]
    if name == "square-plate":
        return [lambda x, y: 0.75 - y]
    raise KeyError(name)


def raster_area(fields, n: int = RASTER_N, band: float = 1e-12) -> float:
    """Cell-centered n x n sampling of the unit square.

    Samples with all fields > band count 1; samples where the smallest field
    lies within ``band`` of zero count 1/2 (points exactly on an edge).
    """
    c = (np.arange(n) + 0.5) / n
    total = 0.0
    for start in range(0, n, 256):
        y = c[start : start + 256][:, None]
        x = c[None, :]
        m = np.full((len(y), n), np.inf)
        for f in fields:
            m = np.minimum(m, f(x, y))
        total += np.count_nonzero(m > band) + 0.5 * np.count_nonzero(np.abs(m) <= band)
    return total / n**2


# ---------------------------------------------------------------------------
# polygons
# ---------------------------------------------------------------------------


def shoelace(vertices) -> float:
    v = [tuple(map(float, p)) for p in vertices]
    s = 0.0
    for (x0, y0), (x1, y1) in zip(v, v[1:] + v[:1]):
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def clip_polygon(vertices, x0, x1, y0, y1):
    """Sutherland-Hodgman clip of a polygon to an axis-aligned box."""

    def clip(poly, inside, intersect):
        out = []
        for k in range(len(poly)):
            cur, prev = poly[k], poly[k - 1]
            if inside(cur):
                if not inside(prev):
                    out.append(intersect(prev, cur))
                out.append(cur)
            elif inside(prev):
                out.append(intersect(prev, cur))
        return out

    def at_x(xv):
        return lambda p, q: (xv, p[1] + (q[1] - p[1]) * (xv - p[0]) / (q[0] - p[0]))

    def at_y(yv):
        return lambda p, q: (p[0] + (q[0] - p[0]) * (yv - p[1]) / (q[1] - p[1]), yv)

    poly = [tuple(map(float, p)) for p in vertices]
    for inside, inter in (
        (lambda p: p[0] >= x0, at_x(x0)),
        (lambda p: p[0] <= x1, at_x(x1)),
        (lambda p: p[1] >= y0, at_y(y0)),
        (lambda p: p[1] <= y1, at_y(y1)),
    ):
        if not poly:
            break
        poly = clip(poly, inside, inter)
    return poly


def clipped_area(vertices, x0, x1, y0, y1) -> float:
    poly = clip_polygon(vertices, x0, x1, y0, y1)
    return abs(shoelace(poly)) if len(poly) >= 3 else 0.0


# ---------------------------------------------------------------------------
# circles
# ---------------------------------------------------------------------------


def disc_area(r: float) -> float:
    return math.pi * r * r


def quarter_disc_area(r: float) -> float:
    return 0.25 * math.pi * r * r


# ---------------------------------------------------------------------------
# elasticity
# ---------------------------------------------------------------------------


def q4_stiffness(a: float, b: float, E: float, nu: float) -> np.ndarray:
    """Plane-strain bilinear rectangle [0,a] x [0,b], 2x2 Gauss.

    Node order (0,0), (a,0), (0,b), (a,b); dofs (ux, uy) per node.
    """
    lam = E * nu / ((1 + nu) * (1 - 2 * nu))
    mu = E / (2 * (1 + nu))
    D = [[lam + 2 * mu, lam, 0.0], [lam, lam + 2 * mu, 0.0], [0.0, 0.0, mu]]
    g = [0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0)]
    K = [[0.0] * 8 for _ in range(8)]
    for s in g:
        for t in g:
            # shape functions N = (1-s)(1-t), s(1-t), (1-s)t, st on the unit square
            dNds = [-(1 - t), (1 - t), -t, t]
            dNdt = [-(1 - s), -s, (1 - s), s]
            dNdx = [v / a for v in dNds]
            dNdy = [v / b for v in dNdt]
            B = [[0.0] * 8 for _ in range(3)]
            for k in range(4):
                B[0][2 * k] = dNdx[k]
                B[1][2 * k + 1] = dNdy[k]
                B[2][2 * k] = dNdy[k]
                B[2][2 * k + 1] = dNdx[k]
            w = 0.25 * a * b
            for i in range(8):
                for j in range(8):
                    acc = 0.0
                    for r in range(3):
                        for c in range(3):
                            acc += B[r][i] * D[r][c] * B[c][j]
                    K[i][j] += w * acc
    return np.array(K)


def kirsch_stress(x: float, y: float, T: float, R: float) -> np.ndarray:
    """Cartesian stress of the infinite plate with a hole (textbook polar form)."""
    r = math.hypot(x, y)
    th = math.atan2(y, x)
    a2, a4 = (R / r) ** 2, (R / r) ** 4
    c2, s2 = math.cos(2 * th), math.sin(2 * th)
    srr = 0.5 * T * (1 - a2) + 0.5 * T * (1 - 4 * a2 + 3 * a4) * c2
    stt = 0.5 * T * (1 + a2) - 0.5 * T * (1 + 3 * a4) * c2
    srt = -0.5 * T * (1 + 2 * a2 - 3 * a4) * s2
    c, s = math.cos(th), math.sin(th)
    Q = np.array([[c, -s], [s, c]])
    return Q @ np.array([[srr, srt], [srt, stt]]) @ Q.T


def manufactured_field(x, y):
    s = math.sin(2 * math.pi * x) * math.sin(2 * math.pi * y)
    return s, s
