"""Quadrature on cells trimmed by a closed NURBS loop.

The loop is clipped to the cell, split into pieces that are monotone in both
coordinates, and the trimmed region is walked as a closed sequence of sides
(curve pieces and straight cell-boundary segments). Each component is then
fanned from a kernel point into tiles with at most one curved side; every
tile is a Coons patch carrying a mapped tensor Gauss rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .geometry import Cell, CurveSegment, ParametricRegion, RationalBezier
from .polytools import Bernstein1D, RootFindingError, safe_roots
from .rules import QuadratureRule, gauss01

EDGES = ("bottom", "right", "top", "left")
MAX_FALLBACK_DEPTH = 3


class TilingError(RuntimeError):
    pass


class DegenerateTileError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# curve pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CurvePiece:
    """Sub-interval ``[t0, t1]`` of one Bezier span of the loop."""

    segment: int
    span: RationalBezier
    t0: float
    t1: float

    def point(self, t) -> np.ndarray:
        return self.span.point(t)

    def derivative(self, t) -> np.ndarray:
        return self.span.derivative(t)

    @cached_property
    def start(self) -> np.ndarray:
        return self.span.point(self.t0)[0]

    @cached_property
    def end(self) -> np.ndarray:
        return self.span.point(self.t1)[0]

    @cached_property
    def midpoint(self) -> np.ndarray:
        return self.span.point(0.5 * (self.t0 + self.t1))[0]

    @property
    def straight(self) -> bool:
        return self.span.degree == 1


@dataclass(frozen=True)
class CurveCellIntersection:
    param: float
    point: tuple[float, float]
    edge: str
    segment: int = 0


def _bbox_hits(span: RationalBezier, cell: Cell, tol: float) -> bool:
    x0, x1, y0, y1 = span.bbox
    return not (x1 < cell.x0 - tol or x0 > cell.x1 + tol or y1 < cell.y0 - tol or y0 > cell.y1 + tol)


def _line_roots(span: RationalBezier, axis: int, value: float, t0: float, t1: float) -> list[float]:
    coeffs = span.hom[:, axis] - value * span.hom[:, 2]
    roots = safe_roots(Bernstein1D(coeffs, span.lo, span.hi))
    return [r for r in roots if t0 <= r <= t1]


def _tangent_roots(span: RationalBezier, axis: int, t0: float, t1: float) -> list[float]:
    """Parameters where the tangent is parallel to the other axis."""
    p = span.degree
    if p == 1 and np.allclose(span.hom[:, 2], span.hom[0, 2]):
        return []

    def numer(t):
        val, der = span.homogeneous(t)
        return der[:, axis] * val[:, 2] - val[:, axis] * der[:, 2]

    b = Bernstein1D.interpolate(numer, max(2 * p - 2, 0), span.lo, span.hi)
    return [r for r in safe_roots(b) if t0 < r < t1]


def intersect_segment_with_cell(seg: CurveSegment, cell: Cell, segment_id: int = 0) -> list[CurveCellIntersection]:
    """Crossings of a curve segment with the four boundary lines of a cell.

    Only hits lying on the cell's closed edges are reported; a hit on a corner
    or a tangential touch is reported once.
    """
    tol = cell.tol
    lines = [(1, cell.y0, "bottom"), (0, cell.x1, "right"), (1, cell.y1, "top"), (0, cell.x0, "left")]
    hits: list[CurveCellIntersection] = []
    for span, t0, t1 in seg.spans():
        if not _bbox_hits(span, cell, tol):
            continue
        for axis, value, name in lines:
            try:
                roots = _line_roots(span, axis, value, t0, t1)
            except RootFindingError as exc:
                raise RootFindingError(f"segment {segment_id}: {exc}") from exc
            for r in roots:
                pt = span.point(r)[0]
                other = 1 - axis
                lo, hi = (cell.x0, cell.x1) if other == 0 else (cell.y0, cell.y1)
                if lo - tol <= pt[other] <= hi + tol:
                    hits.append(CurveCellIntersection(float(r), (float(pt[0]), float(pt[1])), name, segment_id))
    hits.sort(key=lambda h: h.param)
    out: list[CurveCellIntersection] = []
    for h in hits:
        if out and abs(h.param - out[-1].param) <= 1e-12 * max(1.0, abs(h.param)):
            continue
        out.append(h)
    return out


def cell_pieces(region: ParametricRegion, cell: Cell) -> list[CurvePiece]:
    """Loop pieces lying in the closed cell, in loop order.

    Spans are split at the four cell lines and at axis-parallel tangents, so
    every piece is monotone in x and y and lies either inside the closed cell
    or entirely outside it.
    """
    tol = cell.tol
    out = []
    for seg_id, span, t0, t1 in region.spans:
        if not _bbox_hits(span, cell, tol):
            continue
        try:
            cuts = [t0, t1]
            for axis, value in ((0, cell.x0), (0, cell.x1), (1, cell.y0), (1, cell.y1)):
                cuts += _line_roots(span, axis, value, t0, t1)
            cuts += _tangent_roots(span, 0, t0, t1) + _tangent_roots(span, 1, t0, t1)
        except RootFindingError as exc:
            raise RootFindingError(f"segment {seg_id}: {exc}") from exc
        cuts = sorted(cuts)
        L = t1 - t0
        params = [cuts[0]]
        for c in cuts[1:]:
            if c - params[-1] > 1e-12 * L:
                params.append(c)
        params[-1] = t1
        for a, b in zip(params[:-1], params[1:]):
            piece = CurvePiece(seg_id, span, a, b)
            if cell.contains(piece.midpoint, tol)[0]:
                out.append(piece)
    return out


def _is_interior(cell: Cell, p: np.ndarray, tol: float) -> bool:
    return cell.x0 + tol < p[0] < cell.x1 - tol and cell.y0 + tol < p[1] < cell.y1 - tol


def _on_boundary(cell: Cell, p: np.ndarray, tol: float) -> bool:
    return bool(cell.contains(p, tol)[0]) and not _is_interior(cell, p, tol)


def interior_pieces(region: ParametricRegion, cell: Cell) -> list[CurvePiece]:
    tol = cell.tol
    return [pc for pc in cell_pieces(region, cell) if _is_interior(cell, pc.midpoint, tol)]


# ---------------------------------------------------------------------------
# tiles
# ---------------------------------------------------------------------------


class _Edge:
    def point(self, s):
        raise NotImplementedError

    def deriv(self, s):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class LineEdge(_Edge):
    A: np.ndarray
    B: np.ndarray

    def point(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        return np.asarray(self.A) + s * (np.asarray(self.B) - np.asarray(self.A))

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(np.asarray(self.B) - np.asarray(self.A), s.shape + (2,))


@dataclass(frozen=True, eq=False)
class PointEdge(_Edge):
    P: np.ndarray

    def point(self, s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(np.asarray(self.P, dtype=float), s.shape + (2,))

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        return np.zeros(s.shape + (2,))


@dataclass(frozen=True, eq=False)
class CurveEdge(_Edge):
    piece: CurvePiece

    def _t(self, s):
        pc = self.piece
        return pc.t0 + np.asarray(s, dtype=float) * (pc.t1 - pc.t0)

    def point(self, s):
        s = np.asarray(s, dtype=float)
        return self.piece.point(self._t(s).ravel()).reshape(s.shape + (2,))

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        pc = self.piece
        return (pc.derivative(self._t(s).ravel()) * (pc.t1 - pc.t0)).reshape(s.shape + (2,))


@dataclass(frozen=True, eq=False)
class Tile:
    """Coons patch over four boundary edges, each parametrized on [0, 1].

    bottom(u): P00 -> P10, top(u): P01 -> P11, left(v): P00 -> P01,
    right(v): P10 -> P11.
    """

    bottom: _Edge
    right: _Edge
    top: _Edge
    left: _Edge
    curved: bool = False
    corners: np.ndarray = field(init=False)

    def __post_init__(self):
        P00 = self.bottom.point(0.0)
        P10 = self.bottom.point(1.0)
        P01 = self.top.point(0.0)
        P11 = self.top.point(1.0)
        corners = np.array([P00, P10, P11, P01])
        object.__setattr__(self, "corners", corners)
        scale = max(float(np.ptp(corners)), 1e-300)
        checks = [
            (self.left.point(0.0), P00),
            (self.left.point(1.0), P01),
            (self.right.point(0.0), P10),
            (self.right.point(1.0), P11),
        ]
        for a, b in checks:
            if np.linalg.norm(np.asarray(a) - np.asarray(b)) > 1e-9 * scale:
                raise TilingError("tile boundary edges do not chain corner to corner")

    def map(self, u, v) -> tuple[np.ndarray, np.ndarray]:
        """Coons map and Jacobian determinant at arrays u, v."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        P00, P10, P11, P01 = self.corners
        uu, vv = u[..., None], v[..., None]
        Bu, Tu = self.bottom.point(u), self.top.point(u)
        Lv, Rv = self.left.point(v), self.right.point(v)
        X = (
            (1 - vv) * Bu + vv * Tu + (1 - uu) * Lv + uu * Rv
            - ((1 - uu) * (1 - vv) * P00 + uu * (1 - vv) * P10 + (1 - uu) * vv * P01 + uu * vv * P11)
        )
        Xu = (
            (1 - vv) * self.bottom.deriv(u) + vv * self.top.deriv(u) - Lv + Rv
            - (-(1 - vv) * P00 + (1 - vv) * P10 - vv * P01 + vv * P11)
        )
        Xv = (
            -Bu + Tu + (1 - uu) * self.left.deriv(v) + uu * self.right.deriv(v)
            - (-(1 - uu) * P00 - uu * P10 + (1 - uu) * P01 + uu * P11)
        )
        det = Xu[..., 0] * Xv[..., 1] - Xu[..., 1] * Xv[..., 0]
        return X, det

    @classmethod
    def rectangle(cls, x0: float, x1: float, y0: float, y1: float) -> "Tile":
        P00, P10, P11, P01 = map(np.array, ((x0, y0), (x1, y0), (x1, y1), (x0, y1)))
        return cls(LineEdge(P00, P10), LineEdge(P10, P11), LineEdge(P01, P11), LineEdge(P00, P01))

    @classmethod
    def fan(cls, K, side: "_Side") -> "Tile":
        """Triangle-like tile with apex K; the edge opposite K is ``side``."""
        K = np.asarray(K, dtype=float)
        return cls(
            bottom=LineEdge(K, side.start),
            right=side.edge(),
            top=LineEdge(K, side.end),
            left=PointEdge(K),
            curved=side.curved,
        )


def tile_quadrature(tile: Tile, q: int) -> QuadratureRule:
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    s, w = gauss01(q)
    U, V = np.meshgrid(s, s, indexing="ij")
    X, det = tile.map(U.ravel(), V.ravel())
    if np.any(~np.isfinite(det)) or np.any(det <= 0.0):
        raise DegenerateTileError(f"non-positive Jacobian (min {np.min(det):.3e}) on tile with corners {tile.corners.tolist()}")
    W = np.outer(w, w).ravel() * det
    return QuadratureRule(X, W)


# ---------------------------------------------------------------------------
# boundary walk and fan tiling
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Side:
    start: np.ndarray
    end: np.ndarray
    piece: CurvePiece | None = None

    @property
    def curved(self) -> bool:
        return self.piece is not None

    def edge(self) -> _Edge:
        return CurveEdge(self.piece) if self.piece is not None else LineEdge(self.start, self.end)

    def samples(self, n: int) -> np.ndarray:
        s = np.linspace(0.0, 1.0, n)
        return self.edge().point(s)


def _side_from_piece(pc: CurvePiece) -> _Side:
    if pc.straight:
        return _Side(pc.start, pc.end)
    return _Side(pc.start, pc.end, pc)


def _perimeter_coordinate(cell: Cell, p: np.ndarray, tol: float) -> float:
    W, H = cell.width, cell.height
    x, y = p
    if abs(y - cell.y0) <= tol:
        return min(max(x - cell.x0, 0.0), W)
    if abs(x - cell.x1) <= tol:
        return W + min(max(y - cell.y0, 0.0), H)
    if abs(y - cell.y1) <= tol:
        return W + H + min(max(cell.x1 - x, 0.0), W)
    if abs(x - cell.x0) <= tol:
        return 2 * W + H + min(max(cell.y1 - y, 0.0), H)
    raise TilingError(f"point {p} is not on the boundary of cell {cell.bounds}")


def _boundary_path(cell: Cell, X: np.ndarray, sX: float, E: np.ndarray, d: float, tol: float) -> list[_Side]:
    """Straight sides along the cell boundary from X, counterclockwise by d, to E."""
    W, H = cell.width, cell.height
    P = 2 * (W + H)
    corners = [(W, (cell.x1, cell.y0)), (W + H, (cell.x1, cell.y1)), (2 * W + H, (cell.x0, cell.y1)), (P, (cell.x0, cell.y0))]
    passed = []
    for lap in (0.0, P):
        for sc, c in corners:
            rel = sc + lap - sX
            if tol < rel < d - tol:
                passed.append((rel, c))
    passed.sort(key=lambda rc: rc[0])
    pts = [np.asarray(X, dtype=float)] + [np.array(c, dtype=float) for _, c in passed]
    pts.append(np.asarray(E, dtype=float))
    sides = []
    for a, b in zip(pts[:-1], pts[1:]):
        if np.linalg.norm(b - a) > tol:
            sides.append(_Side(a, b))
    return sides


def trimmed_components(region: ParametricRegion, cell: Cell, pieces: list[CurvePiece] | None = None) -> list[list[_Side]]:
    """Closed side loops bounding ``cell`` intersected with the region interior."""
    tol = cell.tol
    if pieces is None:
        pieces = interior_pieces(region, cell)
    if not pieces:
        return []
    n = len(pieces)
    starts = [k for k in range(n) if _on_boundary(cell, pieces[k].start, tol)]
    if not starts:
        for k in range(n):
            if np.linalg.norm(pieces[k].end - pieces[(k + 1) % n].start) > tol:
                raise TilingError(f"loop does not close inside cell {cell.bounds}")
        return [[_side_from_piece(pc) for pc in pieces]]

    chains: list[list[CurvePiece]] = []
    for k in starts:
        chain = [pieces[k]]
        m = k
        while not _on_boundary(cell, pieces[m].end, tol):
            nxt = (m + 1) % n
            if np.linalg.norm(pieces[nxt].start - pieces[m].end) > tol * 10 or nxt == k:
                raise TilingError(f"loop does not close within cell tolerance in cell {cell.bounds}")
            m = nxt
            chain.append(pieces[m])
        chains.append(chain)

    P = 2 * (cell.width + cell.height)
    s_in = [_perimeter_coordinate(cell, ch[0].start, tol) for ch in chains]
    comps = []
    unused = list(range(len(chains)))
    while unused:
        first = unused[0]
        cur = first
        sides: list[_Side] = []
        for _ in range(len(chains) + 1):
            if cur in unused:
                unused.remove(cur)
            sides += [_side_from_piece(pc) for pc in chains[cur]]
            X = chains[cur][-1].end
            sX = _perimeter_coordinate(cell, X, tol)
            dists = []
            for e, se in enumerate(s_in):
                d = (se - sX) % P
                if d > P - tol:
                    d = 0.0
                dists.append(d)
            nxt = int(np.argmin(dists))
            sides += _boundary_path(cell, X, sX, chains[nxt][0].start, dists[nxt], tol)
            if nxt == first:
                break
            if nxt not in unused:
                raise TilingError(f"inconsistent boundary walk in cell {cell.bounds}")
            cur = nxt
        else:
            raise TilingError(f"boundary walk did not close in cell {cell.bounds}")
        comps.append(sides)
    return comps


def _component_centroid(sides: list[_Side]) -> np.ndarray:
    poly = np.vstack([s.samples(9)[:-1] for s in sides])
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    A = 0.5 * cr.sum()
    if abs(A) < 1e-300:
        return poly.mean(axis=0)
    return np.array([((x + xn) * cr).sum(), ((y + yn) * cr).sum()]) / (6 * A)


_STAR_SAMPLES = np.linspace(0.0, 1.0, 35)[1:-1]


def _fan_tiles(K: np.ndarray, sides: list[_Side], cell_area: float) -> list[Tile] | None:
    """Fan of tiles from K, or None when K does not see every side."""
    eps = 1e-14 * cell_area
    tiles = []
    gs, gw = gauss01(8)
    for side in sides:
        if not side.curved:
            a, b = side.start - K, side.end - K
            cr = a[0] * b[1] - a[1] * b[0]
            if cr > eps:
                tiles.append(Tile.fan(K, side))
            elif cr < -eps:
                return None
            continue
        edge = side.edge()
        c = edge.point(_STAR_SAMPLES) - K
        dc = edge.deriv(_STAR_SAMPLES)
        g = c[:, 0] * dc[:, 1] - c[:, 1] * dc[:, 0]
        gscale = np.max(np.abs(g)) if len(g) else 0.0
        if np.any(g < -1e-12 * max(gscale, 1e-300)):
            return None
        c = edge.point(gs) - K
        dc = edge.deriv(gs)
        area = 0.5 * float(np.sum(gw * (c[:, 0] * dc[:, 1] - c[:, 1] * dc[:, 0])))
        if area > eps:
            if np.any(g <= 0.0):
                return None
            tiles.append(Tile.fan(K, side))
    return tiles


def tile_component(sides: list[_Side], cell: Cell) -> list[Tile]:
    """Fan tiling from the kernel candidate that needs the fewest tiles."""
    candidates = [s.start for s in sides] + [_component_centroid(sides)]
    best = None
    for K in candidates:
        tiles = _fan_tiles(np.asarray(K, dtype=float), sides, cell.area)
        if tiles is None:
            continue
        if best is None or len(tiles) < len(best):
            best = tiles
    if best is None:
        raise TilingError(f"trimmed region in cell {cell.bounds} is not star-shaped from any kernel candidate")
    return best


def _cell_status(region: ParametricRegion, cell: Cell, pieces: list[CurvePiece]) -> int:
    if pieces:
        return 0
    return 1 if bool(region.contains(np.array(cell.center))[0]) else -1


def build_tiles(region: ParametricRegion, cell: Cell, _depth: int = 0) -> list[Tile]:
    """Tiles partitioning ``cell`` intersected with the region interior."""
    pieces = interior_pieces(region, cell)
    status = _cell_status(region, cell, pieces)
    if status > 0:
        return [Tile.rectangle(cell.x0, cell.x1, cell.y0, cell.y1)]
    if status < 0:
        return []
    tiles = []
    try:
        for comp in trimmed_components(region, cell, pieces):
            tiles += tile_component(comp, cell)
    except TilingError:
        if _depth >= MAX_FALLBACK_DEPTH:
            raise
        tiles = []
        for sub in _split_cell(cell, pieces):
            tiles += build_tiles(region, sub, _depth + 1)
    return tiles


def _corner_vertex(cell: Cell, pieces: list[CurvePiece]) -> np.ndarray | None:
    """Interior loop vertex with the sharpest turn, if any turns at all."""
    tol = cell.tol
    best, best_turn = None, 1e-8
    for a, b in zip(pieces, pieces[1:] + pieces[:1]):
        if not _is_interior(cell, a.end, tol) or np.linalg.norm(a.end - b.start) > tol:
            continue
        ta = a.derivative(a.t1).reshape(2)
        tb = b.derivative(b.t0).reshape(2)
        turn = abs(math.atan2(ta[0] * tb[1] - ta[1] * tb[0], float(ta @ tb)))
        if turn > best_turn:
            best, best_turn = a.end, turn
    return best


def _split_cell(cell: Cell, pieces: list[CurvePiece]) -> list[Cell]:
    """Split through a loop corner so it lands on subcell corners; else bisect."""
    v = _corner_vertex(cell, pieces)
    if v is None:
        return cell.subdivide()
    xs = [cell.x0, float(v[0]), cell.x1]
    ys = [cell.y0, float(v[1]), cell.y1]
    return [Cell(cell.i, cell.j, xa, xb, ya, yb) for ya, yb in zip(ys, ys[1:]) for xa, xb in zip(xs, xs[1:])]


def cell_quadrature_parametric(region: ParametricRegion, cell: Cell, q: int) -> QuadratureRule:
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    pieces = interior_pieces(region, cell)
    status = _cell_status(region, cell, pieces)
    if status > 0:
        return QuadratureRule.tensor(cell.x0, cell.x1, cell.y0, cell.y1, q)
    if status < 0:
        return QuadratureRule.empty()
    return QuadratureRule.concatenate(tile_quadrature(t, q) for t in build_tiles(region, cell))


def _left_normal(pc: CurvePiece) -> np.ndarray:
    d = pc.derivative(0.5 * (pc.t0 + pc.t1))[0]
    n = np.array([-d[1], d[0]])
    return n / max(np.linalg.norm(n), 1e-300)


def interface_quadrature_parametric(region: ParametricRegion, cell: Cell, q: int) -> QuadratureRule:
    """Line rule on the loop pieces owned by ``cell`` (weights in length units).

    A piece running along a cell edge belongs to the cell on its interior side.
    """
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    tol = cell.tol
    s, w = gauss01(q)
    pts, wts = [], []
    eps = 1e-7 * max(cell.width, cell.height)
    for pc in cell_pieces(region, cell):
        if not _is_interior(cell, pc.midpoint, tol):
            probe = pc.midpoint + eps * _left_normal(pc)
            if not _is_interior(cell, probe, 0.0):
                continue
        t = pc.t0 + (pc.t1 - pc.t0) * s
        d = pc.derivative(t)
        pts.append(pc.point(t))
        wts.append(w * (pc.t1 - pc.t0) * np.hypot(d[:, 0], d[:, 1]))
    if not wts:
        return QuadratureRule.empty()
    return QuadratureRule(np.vstack(pts), np.concatenate(wts))


def polygon_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * math.fsum((x * np.roll(y, -1) - np.roll(x, -1) * y).tolist())
