"""Background mesh, NURBS curves, implicit constraints and region types.

Conventions
-----------
* An implicit constraint ``f`` retains the points where ``f > 0``.
* Parametric loops are stored counterclockwise, interior on the left.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .rules import gauss01

GEO_TOL = 1e-10


class Point2(NamedTuple):
    x: float
    y: float


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# mesh
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    i: int
    j: int
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise GeometryError(f"degenerate cell bounds {self.bounds}")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x0, self.x1, self.y0, self.y1)

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> Point2:
        return Point2(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def tol(self) -> float:
        return GEO_TOL * max(self.width, self.height)

    def contains(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return (
            (pts[:, 0] >= self.x0 - tol)
            & (pts[:, 0] <= self.x1 + tol)
            & (pts[:, 1] >= self.y0 - tol)
            & (pts[:, 1] <= self.y1 + tol)
        )

    def subdivide(self) -> list["Cell"]:
        xm = 0.5 * (self.x0 + self.x1)
        ym = 0.5 * (self.y0 + self.y1)
        return [
            Cell(self.i, self.j, self.x0, xm, self.y0, ym),
            Cell(self.i, self.j, xm, self.x1, self.y0, ym),
            Cell(self.i, self.j, self.x0, xm, ym, self.y1),
            Cell(self.i, self.j, xm, self.x1, ym, self.y1),
        ]


@dataclass(frozen=True)
class BackgroundMesh:
    """Axis-aligned ``nx`` x ``ny`` grid over ``[x0, x0+width] x [y0, y0+height]``."""

    origin: Point2
    width: float
    height: float
    nx: int
    ny: int

    def __post_init__(self):
        object.__setattr__(self, "origin", Point2(float(self.origin[0]), float(self.origin[1])))
        if self.nx < 1 or self.ny < 1:
            raise GeometryError("cell counts must be positive")
        if not (self.width > 0 and self.height > 0):
            raise GeometryError("domain extents must be positive")

    @classmethod
    def unit_square(cls, h: float) -> "BackgroundMesh":
        return cls.from_h(h)

    @classmethod
    def from_h(cls, h: float, origin=(0.0, 0.0), width: float = 1.0, height: float = 1.0):
        """Mesh of square cells of size ``h``; ``h`` must divide both extents."""
        if h <= 0:
            raise GeometryError(f"cell size must be positive, got {h}")
        nx = round(width / h)
        ny = round(height / h)
        if nx < 1 or ny < 1 or abs(nx * h - width) > 1e-9 * width or abs(ny * h - height) > 1e-9 * height:
            raise GeometryError(f"h={h} does not divide the domain {width} x {height}")
        return cls(Point2(*origin), width, height, nx, ny)

    @property
    def hx(self) -> float:
        return self.width / self.nx

    @property
    def hy(self) -> float:
        return self.height / self.ny

    @property
    def tol(self) -> float:
        return GEO_TOL * max(self.width, self.height)

    @property
    def area(self) -> float:
        return self.width * self.height

    def xlines(self) -> np.ndarray:
        return self.origin.x + self.hx * np.arange(self.nx + 1)

    def ylines(self) -> np.ndarray:
        return self.origin.y + self.hy * np.arange(self.ny + 1)

    def cell(self, i: int, j: int) -> Cell:
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise IndexError((i, j))
        xs, ys = self.xlines(), self.ylines()
        return Cell(i, j, float(xs[i]), float(xs[i + 1]), float(ys[j]), float(ys[j + 1]))

    def cells(self) -> Iterator[Cell]:
        """Cells in row-major order: rows of constant j, i varying fastest."""
        for j in range(self.ny):
            for i in range(self.nx):
                yield self.cell(i, j)

    def centers(self) -> np.ndarray:
        xs = self.origin.x + self.hx * (np.arange(self.nx) + 0.5)
        ys = self.origin.y + self.hy * (np.arange(self.ny) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])


# ---------------------------------------------------------------------------
# NURBS
# ---------------------------------------------------------------------------


def find_span(n: int, p: int, u: float, U: np.ndarray) -> int:
    """Knot span index of ``u`` for ``n`` basis functions (last span is closed)."""
    if u >= U[n]:
        return n - 1
    if u <= U[p]:
        return p
    return int(np.searchsorted(U, u, side="right") - 1)


def basis_funs_ders(span: int, u: float, p: int, U: np.ndarray, nd: int = 1) -> np.ndarray:
    """Nonzero B-spline basis values and derivatives up to order ``nd``.

    Returns array (nd+1, p+1); row k holds the k-th derivatives of
    N_{span-p..span}.
    """
    ndu = np.zeros((p + 1, p + 1))
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = u - U[span + 1 - j]
        right[j] = U[span + j] - u
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved
    ders = np.zeros((nd + 1, p + 1))
    ders[0] = ndu[:, p]
    a = np.zeros((2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, nd + 1):
            d = 0.0
            rk, pk = r - k, p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1
    fac = p
    for k in range(1, nd + 1):
        ders[k] *= fac
        fac *= p - k
    return ders


@lru_cache(maxsize=None)
def _binomials(p: int) -> np.ndarray:
    return np.array([math.comb(p, i) for i in range(p + 1)], dtype=float)


def bernstein_basis(p: int, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float).reshape(-1, 1)
    i = np.arange(p + 1)
    return _binomials(p) * s**i * (1.0 - s) ** (p - i)


@dataclass(frozen=True, eq=False)
class RationalBezier:
    """One knot span of a NURBS curve in homogeneous Bernstein form.

    ``hom[k] = (w_k x_k, w_k y_k, w_k)``; the Bernstein variable is
    ``(xi - lo) / (hi - lo)``.
    """

    hom: np.ndarray
    lo: float
    hi: float

    @property
    def degree(self) -> int:
        return len(self.hom) - 1

    def _local(self, xi):
        return (np.asarray(xi, dtype=float) - self.lo) / (self.hi - self.lo)

    def homogeneous(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Homogeneous value and derivative (w.r.t. xi), each (m, 3)."""
        s = np.atleast_1d(self._local(xi))
        p = self.degree
        val = bernstein_basis(p, s) @ self.hom
        if p == 0:
            return val, np.zeros_like(val)
        dh = p * (self.hom[1:] - self.hom[:-1]) / (self.hi - self.lo)
        der = bernstein_basis(p - 1, s) @ dh
        return val, der

    def point(self, xi) -> np.ndarray:
        val, _ = self.homogeneous(xi)
        return val[:, :2] / val[:, 2:3]

    def derivative(self, xi) -> np.ndarray:
        val, der = self.homogeneous(xi)
        w = val[:, 2:3]
        return (der[:, :2] * w - val[:, :2] * der[:, 2:3]) / w**2

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        pts = self.hom[:, :2] / self.hom[:, 2:3]
        return (pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())


@dataclass(frozen=True, eq=False)
class NurbsCurve:
    degree: int
    knots: np.ndarray
    control_points: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        p = int(self.degree)
        U = np.asarray(self.knots, dtype=float)
        P = np.asarray(self.control_points, dtype=float).reshape(-1, 2)
        n = len(P)
        W = np.ones(n) if self.weights is None else np.asarray(self.weights, dtype=float)
        if p < 1:
            raise GeometryError("NURBS degree must be >= 1")
        if len(U) != n + p + 1:
            raise GeometryError(f"expected {n + p + 1} knots for {n} control points of degree {p}, got {len(U)}")
        if np.any(np.diff(U) < 0):
            raise GeometryError("knot vector must be nondecreasing")
        if not (np.all(U[: p + 1] == U[0]) and np.all(U[-p - 1 :] == U[-1])):
            raise GeometryError("knot vector must be open (end knots repeated degree+1 times)")
        if U[-1] <= U[0]:
            raise GeometryError("knot vector has zero length")
        if len(W) != n:
            raise GeometryError("one weight per control point required")
        if np.any(W <= 0) or not np.all(np.isfinite(W)):
            raise GeometryError("weights must be positive and finite")
        if not np.all(np.isfinite(P)):
            raise GeometryError("control points must be finite")
        object.__setattr__(self, "degree", p)
        object.__setattr__(self, "knots", U)
        object.__setattr__(self, "control_points", P)
        object.__setattr__(self, "weights", W)

    @property
    def n(self) -> int:
        return len(self.control_points)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.knots[0]), float(self.knots[-1])

    def _check(self, xi: float) -> float:
        a, b = self.domain
        xi = float(xi)
        if not (a <= xi <= b) or not math.isfinite(xi):
            raise ValueError(f"parameter {xi} outside knot range [{a}, {b}]")
        return xi

    def rational_basis(self, xi: float, nd: int = 0) -> tuple[int, np.ndarray]:
        """Span index and rational basis values R (and first derivative if nd=1)."""
        xi = self._check(xi)
        p, U = self.degree, self.knots
        span = find_span(self.n, p, xi, U)
        N = basis_funs_ders(span, xi, p, U, max(nd, 1))
        w = self.weights[span - p : span + 1]
        Wsum = N[0] @ w
        R = N[0] * w / Wsum
        if nd == 0:
            return span, R[None, :]
        dW = N[1] @ w
        dR = (N[1] * w * Wsum - N[0] * w * dW) / Wsum**2
        return span, np.vstack([R, dR])

    def evaluate(self, xi: float) -> Point2:
        span, R = self.rational_basis(xi)
        p = self.degree
        pt = R[0] @ self.control_points[span - p : span + 1]
        return Point2(float(pt[0]), float(pt[1]))

    def derivative(self, xi: float) -> np.ndarray:
        span, R = self.rational_basis(xi, nd=1)
        p = self.degree
        return R[1] @ self.control_points[span - p : span + 1]

    def reversed(self) -> "NurbsCurve":
        a, b = self.domain
        return NurbsCurve(self.degree, (a + b - self.knots)[::-1], self.control_points[::-1], self.weights[::-1])

    @cached_property
    def bezier_spans(self) -> tuple[RationalBezier, ...]:
        """Rational Bezier pieces by knot insertion, one per nonzero knot span."""
        p = self.degree
        U = list(self.knots)
        Pw = np.column_stack([self.control_points * self.weights[:, None], self.weights])
        interior = sorted(set(self.knots[p + 1 : -p - 1].tolist()))
        for u in interior:
            mult = sum(1 for k in U if k == u)
            for _ in range(p - mult):
                U, Pw = _insert_knot(U, Pw, p, u)
        U = np.asarray(U)
        spans = []
        nseg = (len(Pw) - 1) // p
        breaks = [U[0]] + interior + [U[-1]]
        for k in range(nseg):
            spans.append(RationalBezier(Pw[k * p : k * p + p + 1].copy(), float(breaks[k]), float(breaks[k + 1])))
        return tuple(spans)


def _insert_knot(U: list, Pw: np.ndarray, p: int, u: float):
    """Boehm single knot insertion on homogeneous control points."""
    n = len(Pw)
    k = find_span(n, p, u, np.asarray(U))
    s = sum(1 for t in U if t == u)
    Q = np.zeros((n + 1, Pw.shape[1]))
    Q[: k - p + 1] = Pw[: k - p + 1]
    Q[k - s + 1 :] = Pw[k - s :]
    for i in range(k - p + 1, k - s + 1):
        alpha = (u - U[i]) / (U[i + p] - U[i])
        Q[i] = alpha * Pw[i] + (1.0 - alpha) * Pw[i - 1]
    U = U[: k + 1] + [u] + U[k + 1 :]
    return U, Q


def evaluate_curve(curve: NurbsCurve, xi: float) -> Point2:
    return curve.evaluate(xi)


def evaluate_curve_derivative(curve: NurbsCurve, xi: float) -> np.ndarray:
    return curve.derivative(xi)


@dataclass(frozen=True, eq=False)
class CurveSegment:
    """Parameter interval ``[a, b]`` of a NURBS curve."""

    curve: NurbsCurve
    a: float = None
    b: float = None

    def __post_init__(self):
        lo, hi = self.curve.domain
        a = lo if self.a is None else float(self.a)
        b = hi if self.b is None else float(self.b)
        if not (lo <= a < b <= hi):
            raise GeometryError(f"segment interval [{a}, {b}] not inside knot range [{lo}, {hi}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def start(self) -> Point2:
        return self.curve.evaluate(self.a)

    @property
    def end(self) -> Point2:
        return self.curve.evaluate(self.b)

    def reversed(self) -> "CurveSegment":
        lo, hi = self.curve.domain
        return CurveSegment(self.curve.reversed(), lo + hi - self.b, lo + hi - self.a)

    def spans(self) -> list[tuple[RationalBezier, float, float]]:
        """(span, t0, t1) for every Bezier span overlapping ``[a, b]``."""
        out = []
        for span in self.curve.bezier_spans:
            t0, t1 = max(span.lo, self.a), min(span.hi, self.b)
            if t1 > t0:
                out.append((span, t0, t1))
        return out


# ---------------------------------------------------------------------------
# curve builders
# ---------------------------------------------------------------------------


def line_curve(A, B) -> NurbsCurve:
    return NurbsCurve(1, [0.0, 0.0, 1.0, 1.0], [A, B])


def arc_curve(center, radius: float, start: float, end: float) -> NurbsCurve:
    """Exact rational quadratic arc from angle ``start`` to ``end`` (radians).

    The sweep may be negative (clockwise). Each piece spans at most a quarter
    turn with middle weight cos(delta/2).
    """
    sweep = end - start
    if sweep == 0 or radius <= 0:
        raise GeometryError("arc needs nonzero sweep and positive radius")
    npieces = max(1, math.ceil(abs(sweep) / (0.5 * math.pi) - 1e-12))
    delta = sweep / npieces
    cx, cy = float(center[0]), float(center[1])
    w_mid = math.cos(0.5 * delta)
    pts, wts = [], []
    for k in range(npieces):
        t0 = start + k * delta
        tm = t0 + 0.5 * delta
        if k == 0:
            pts.append((cx + radius * math.cos(t0), cy + radius * math.sin(t0)))
            wts.append(1.0)
        pts.append((cx + radius / w_mid * math.cos(tm), cy + radius / w_mid * math.sin(tm)))
        wts.append(w_mid)
        t1 = t0 + delta
        if k == npieces - 1:
            t1 = end
        pts.append((cx + radius * math.cos(t1), cy + radius * math.sin(t1)))
        wts.append(1.0)
    knots = [0.0] * 3
    for k in range(1, npieces):
        knots += [k / npieces] * 2
    knots += [1.0] * 3
    return NurbsCurve(2, knots, pts, wts)


def circle_curve(center, radius: float) -> NurbsCurve:
    """Full circle, 9 control points, four quarter arcs starting at angle 0."""
    return arc_curve(center, radius, 0.0, 2.0 * math.pi)


# ---------------------------------------------------------------------------
# implicit constraints
# ---------------------------------------------------------------------------


class ImplicitConstraint:
    """Scalar field with value and gradient; ``f > 0`` is inside.

    ``degree`` is the per-coordinate polynomial degree, or None for a general
    smooth function.
    """

    degree: int | None = None

    def value(self, pts) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, pts) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, pts):
        return self.value(pts)


def _xy(pts):
    pts = np.asarray(pts, dtype=float)
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite evaluation point")
    return pts[..., 0], pts[..., 1]


@dataclass(frozen=True)
class Circle(ImplicitConstraint):
    """``sign * (r^2 - (x-cx)^2 - (y-cy)^2)``; sign +1 keeps the disc."""

    cx: float
    cy: float
    r: float
    sign: float = 1.0
    degree = 2

    def value(self, pts):
        x, y = _xy(pts)
        return self.sign * (self.r**2 - (x - self.cx) ** 2 - (y - self.cy) ** 2)

    def gradient(self, pts):
        x, y = _xy(pts)
        return np.stack([-2.0 * self.sign * (x - self.cx), -2.0 * self.sign * (y - self.cy)], axis=-1)


@dataclass(frozen=True)
class HalfPlane(ImplicitConstraint):
    """``sign * (c - a*x - b*y)``."""

    a: float
    b: float
    c: float
    sign: float = 1.0
    degree = 1

    @classmethod
    def left_of(cls, A, B) -> "HalfPlane":
        """Points strictly left of the directed line A -> B."""
        (ax, ay), (bx, by) = A, B
        dx, dy = bx - ax, by - ay
        # cross(B-A, p-A) = dx*(y-ay) - dy*(x-ax) = c - a x - b y
        return cls(a=dy, b=-dx, c=dy * ax - dx * ay)

    def value(self, pts):
        x, y = _xy(pts)
        return self.sign * (self.c - self.a * x - self.b * y)

    def gradient(self, pts):
        x, _ = _xy(pts)
        g = np.array([-self.sign * self.a, -self.sign * self.b])
        return np.broadcast_to(g, np.shape(x) + (2,)).copy()


@dataclass(frozen=True, eq=False)
class Polynomial(ImplicitConstraint):
    """``sign * sum_ij coeffs[i, j] x^i y^j`` with a square coefficient grid."""

    coeffs: np.ndarray
    sign: float = 1.0

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if c.shape[0] != c.shape[1]:
            raise GeometryError("polynomial coefficient grid must be (d+1) x (d+1)")
        if not np.all(np.isfinite(c)):
            raise GeometryError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def value(self, pts):
        x, y = _xy(pts)
        return self.sign * np.polynomial.polynomial.polyval2d(x, y, self.coeffs)

    def gradient(self, pts):
        x, y = _xy(pts)
        P = np.polynomial.polynomial
        cx = P.polyder(self.coeffs, axis=0)
        cy = P.polyder(self.coeffs, axis=1)
        return self.sign * np.stack([P.polyval2d(x, y, cx), P.polyval2d(x, y, cy)], axis=-1)


@dataclass(frozen=True, eq=False)
class SmoothConstraint(ImplicitConstraint):
    """Arbitrary differentiable field given by callables on (..., 2) arrays."""

    func: Callable
    grad: Callable
    degree: int | None = None

    def value(self, pts):
        _xy(pts)
        return np.asarray(self.func(np.asarray(pts, dtype=float)), dtype=float)

    def gradient(self, pts):
        _xy(pts)
        return np.asarray(self.grad(np.asarray(pts, dtype=float)), dtype=float)


def evaluate_constraint(c: ImplicitConstraint, p) -> float:
    return float(c.value(np.asarray(p, dtype=float)))


def constraint_gradient(c: ImplicitConstraint, p) -> np.ndarray:
    return np.asarray(c.gradient(np.asarray(p, dtype=float)), dtype=float)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImplicitRegion:
    """``{p : f_k(p) > 0 for all k}``."""

    constraints: tuple[ImplicitConstraint, ...]

    def __post_init__(self):
        cons = tuple(self.constraints)
        if not cons:
            raise GeometryError("implicit region needs at least one constraint")
        object.__setattr__(self, "constraints", cons)

    def indicator(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        inside = np.ones(pts.shape[:-1], dtype=bool)
        for c in self.constraints:
            inside &= c.value(pts) > 0
        return inside


@dataclass(frozen=True, eq=False)
class ParametricRegion:
    """Single closed loop of curve segments, normalized to counterclockwise.

    ``orientation`` records the orientation of the loop as given (+1 ccw,
    -1 cw); ``segments`` always holds the ccw loop.
    """

    segments: tuple[CurveSegment, ...]
    orientation: int = field(default=0)

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise GeometryError("parametric region needs at least one segment")
        pts = np.array([[s.start, s.end] for s in segs]).reshape(-1, 4)
        extent = float(np.ptp(pts[:, [0, 2]])) if len(segs) else 1.0
        extent = max(extent, float(np.ptp(pts[:, [1, 3]])), 1e-300)
        tol = GEO_TOL * max(extent, 1.0)
        for k, s in enumerate(segs):
            nxt = segs[(k + 1) % len(segs)]
            gap = math.dist(s.end, nxt.start)
            if gap > tol:
                what = "loop is not closed" if k == len(segs) - 1 else f"segments {k} and {k + 1} do not chain"
                raise GeometryError(f"{what} (gap {gap:.3e} > {tol:.3e})")
        area = _loop_signed_area(segs)
        if abs(area) <= tol**2:
            raise GeometryError("loop encloses zero area")
        given = 1 if area > 0 else -1
        if area < 0:
            segs = tuple(s.reversed() for s in reversed(segs))
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "orientation", given)

    @cached_property
    def spans(self) -> tuple[tuple[int, RationalBezier, float, float], ...]:
        """(segment index, span, t0, t1) in loop order."""
        out = []
        for k, seg in enumerate(self.segments):
            for span, t0, t1 in seg.spans():
                out.append((k, span, t0, t1))
        return tuple(out)

    @cached_property
    def polyline(self) -> np.ndarray:
        """Dense closed polyline used for winding-number tests."""
        chunks = []
        for _, span, t0, t1 in self.spans:
            m = 2 if span.degree == 1 and np.allclose(span.hom[:, 2], span.hom[0, 2]) else 65
            t = np.linspace(t0, t1, m)[:-1]
            chunks.append(span.point(t))
        chunks.append(chunks[0][:1])
        return np.vstack(chunks)

    def signed_area(self) -> float:
        return _loop_signed_area(self.segments)

    def winding_number(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        V = self.polyline
        total = np.zeros(len(pts))
        for start in range(0, len(V) - 1, 512):
            a = V[start : start + 512][None, :, :] - pts[:, None, :]
            b = V[start + 1 : start + 513][None, :, :] - pts[:, None, :]
            k = min(a.shape[1], b.shape[1])
            a, b = a[:, :k], b[:, :k]
            cross = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
            dot = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]
            total += np.arctan2(cross, dot).sum(axis=1)
        return np.rint(total / (2.0 * math.pi)).astype(int)

    def contains(self, pts) -> np.ndarray:
        return self.winding_number(pts) != 0

    def complement_loop(self) -> "ParametricRegion":
        """Same loop traversed clockwise, interpreted as the outside."""
        return _ReversedRegion(self)


def _loop_signed_area(segs: Sequence[CurveSegment]) -> float:
    s, w = gauss01(12)
    total = 0.0
    for seg in segs:
        for span, t0, t1 in seg.spans():
            t = t0 + (t1 - t0) * s
            p = span.point(t)
            d = span.derivative(t)
            total += 0.5 * (t1 - t0) * float(np.sum(w * (p[:, 0] * d[:, 1] - p[:, 1] * d[:, 0])))
    return total


class _ReversedRegion(ParametricRegion):
    """Complement of a ccw loop: the loop run clockwise, outside retained."""

    def __init__(self, base: ParametricRegion):
        object.__setattr__(self, "segments", tuple(s.reversed() for s in reversed(base.segments)))
        object.__setattr__(self, "orientation", -1)
        object.__setattr__(self, "base", base)

    def contains(self, pts) -> np.ndarray:
        return ~self.base.contains(pts)


InterfaceSpec = Union[ImplicitRegion, ParametricRegion]


def polygon_region(vertices) -> ParametricRegion:
    """Closed polygon of degree-1 segments."""
    V = [tuple(map(float, v)) for v in vertices]
    segs = [CurveSegment(line_curve(V[k], V[(k + 1) % len(V)])) for k in range(len(V))]
    return ParametricRegion(tuple(segs))


def circle_region(center, radius: float) -> ParametricRegion:
    return ParametricRegion((CurveSegment(circle_curve(center, radius)),))
