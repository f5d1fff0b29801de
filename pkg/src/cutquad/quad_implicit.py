"""Quadrature on cells cut by implicitly defined regions.

Each constraint is converted to Bernstein form on the cell. Uncut cells get
a tensor Gauss rule or nothing. Cut cells are integrated by dimension
reduction: a height axis is picked from the gradient of the first active
constraint, the base interval is split at the points where the structure of
the height intervals changes (face crossings, branch points of the zero set,
crossings between constraints), and each height line carries a Gauss rule on
every subinterval where all constraints are positive.

Base subintervals that end at a branch point use a quadratic change of
variables so the square-root behavior of the root curve there does not spoil
the Gauss rule.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Cell, ImplicitRegion
from .polytools import (
    ZERO_TOL,
    Bernstein2D,
    RootFindingError,
    resultant_along,
    safe_roots,
    sign_certificate,
    to_bernstein,
)
from .rules import QuadratureRule, gauss01

SNAP = 1e-12


class CellQuadratureError(RuntimeError):
    def __init__(self, cell: Cell, msg: str):
        super().__init__(f"cell ({cell.i}, {cell.j}) {cell.bounds}: {msg}")
        self.cell = cell


def cell_polynomials(region: ImplicitRegion, cell: Cell, degree: int | None = None) -> list[Bernstein2D]:
    return [to_bernstein(c, cell, degree) for c in region.constraints]


def classify_polynomials(polys: list[Bernstein2D]) -> tuple[int, list[int]]:
    """Cell status (+1 inside, -1 outside, 0 cut) and the active constraint indices.

    A constraint that vanishes identically on the cell leaves nothing of
    positive measure, so the cell counts as outside.
    """
    certs = [sign_certificate(p) for p in polys]
    if any(c in (-1, 2) for c in certs):
        return -1, []
    active = [k for k, c in enumerate(certs) if c == 0]
    return (1, []) if not active else (0, active)


def choose_height(b: Bernstein2D) -> int:
    """Axis (0 = x, 1 = y) along which the height lines run.

    Picks the axis with the larger mean absolute partial derivative over the
    Bernstein gradient coefficients; ties go to y.
    """
    gx = np.mean(np.abs(b.derivative(0).coeffs))
    gy = np.mean(np.abs(b.derivative(1).coeffs))
    return 0 if gx > gy * (1.0 + 1e-12) + 1e-300 else 1


@dataclass(frozen=True)
class BaseInterval:
    """Base subinterval with the substitution used at its ends.

    ``branch_start``/``branch_end`` mark a branch point of the zero set at an
    endpoint. ``pivot_start``/``pivot_end`` hold a nearby branch point just
    outside the interval (a root of the discriminant whose height lies outside
    the cell); the root curve then behaves like sqrt(|t - pivot|), which the
    substitution t = pivot -+ r^2 with r linear in s makes smooth.
    """

    a: float
    b: float
    branch_start: bool
    branch_end: bool
    pivot_start: float | None = None
    pivot_end: float | None = None

    def nodes(self, q: int) -> tuple[np.ndarray, np.ndarray]:
        """Base abscissae and weights (including the substitution Jacobian)."""
        s, w = gauss01(q)
        L = self.b - self.a
        if self.branch_start and self.branch_end:
            t = self.a + L * (3 * s**2 - 2 * s**3)
            dt = 6 * L * s * (1 - s)
        elif self.branch_start:
            t = self.a + L * s**2
            dt = 2 * L * s
        elif self.branch_end:
            t = self.b - L * (1 - s) ** 2
            dt = 2 * L * (1 - s)
        elif self.pivot_end is not None:
            ra, rb = np.sqrt(self.pivot_end - self.a), np.sqrt(self.pivot_end - self.b)
            r = ra + s * (rb - ra)
            t = self.pivot_end - r**2
            dt = 2 * r * (ra - rb)
        elif self.pivot_start is not None:
            ra, rb = np.sqrt(self.a - self.pivot_start), np.sqrt(self.b - self.pivot_start)
            r = ra + s * (rb - ra)
            t = self.pivot_start + r**2
            dt = 2 * r * (rb - ra)
        else:
            t = self.a + L * s
            dt = np.full_like(s, L)
        return t, w * dt


def _common_root(f: Bernstein2D, g: Bernstein2D, height: int, t: float) -> bool:
    """Whether f(t, .) and g(t, .) share a root on the closed height range."""
    base = 1 - height
    pf = f.restrict(base, t)
    pg = g.restrict(base, t)
    lo, hi = f.bounds(height)
    cands = []
    if pg.is_zero(ref=g.scale):
        cands = safe_roots(pf)
        return bool(cands)
    cands = safe_roots(pg)
    span = max(abs(pg(lo)), abs(pg(hi)), pg.scale)
    for end in (lo, hi):
        if abs(pg(end)) <= 1e-8 * span:
            cands.append(end)
    fscale = max(f.scale, 1e-300)
    return any(abs(pf(y)) <= 1e-8 * fscale for y in cands)


def base_events(polys: list[Bernstein2D], height: int) -> list[BaseInterval]:
    """Split the base interval of the cell where height-line topology changes."""
    base = 1 - height
    lo, hi = polys[0].bounds(base)
    hlo, hhi = polys[0].bounds(height)
    L = hi - lo
    events: list[tuple[float, bool]] = []
    pivots: list[float] = []
    for P in polys:
        for hv in (hlo, hhi):
            events += [(t, False) for t in safe_roots(P.restrict(height, hv))]
        dP = P.derivative(height)
        if dP.scale <= ZERO_TOL * P.scale:
            events += [(t, False) for t in safe_roots(P.restrict(height, 0.5 * (hlo + hhi)))]
            continue
        R = resultant_along(P, dP, height)
        if R is not None:
            for t in safe_roots(R):
                if _common_root(P, dP, height, t):
                    events.append((t, True))
                else:
                    pivots.append(t)
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            R = resultant_along(polys[i], polys[j], height)
            if R is None:
                continue
            events += [(t, False) for t in safe_roots(R) if _common_root(polys[i], polys[j], height, t)]

    branch_lo = branch_hi = False
    interior: list[list] = []
    for t, br in sorted(events):
        if t <= lo + SNAP * L:
            branch_lo |= br
        elif t >= hi - SNAP * L:
            branch_hi |= br
        elif interior and t - interior[-1][0] <= SNAP * L:
            interior[-1][1] |= br
        else:
            interior.append([t, br])
    pts = [(lo, branch_lo)] + [tuple(e) for e in interior] + [(hi, branch_hi)]
    out = []
    for k in range(len(pts) - 1):
        a, b = pts[k][0], pts[k + 1][0]
        pe, ps = _nearest_pivots(pivots, a, b)
        out.append(BaseInterval(a, b, pts[k][1], pts[k + 1][1], ps, pe))
    return out


def _nearest_pivots(pivots: list[float], a: float, b: float) -> tuple[float | None, float | None]:
    """Closest pivot beyond b and before a, within one interval length.

    Only the nearer of the two is kept so the substitution stays one-sided.
    """
    L = b - a
    after = [p for p in pivots if b + SNAP * L < p <= b + L]
    before = [p for p in pivots if a - L <= p < a - SNAP * L]
    pe = min(after) if after else None
    ps = max(before) if before else None
    if pe is not None and ps is not None:
        if pe - b <= a - ps:
            ps = None
        else:
            pe = None
    return pe, ps


def _positive_intervals(lines, lo: float, hi: float) -> list[tuple[float, float]]:
    """Maximal subintervals of [lo, hi] on which every 1-D polynomial is positive."""
    H = hi - lo
    cuts = [lo, hi]
    for p in lines:
        for r in safe_roots(p):
            if r - lo <= SNAP * H or hi - r <= SNAP * H:
                continue
            cuts.append(r)
    cuts.sort()
    kept: list[list[float]] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= SNAP * H:
            continue
        mid = 0.5 * (a + b)
        if all(p(mid) > 0.0 for p in lines):
            if kept and abs(kept[-1][1] - a) <= SNAP * H:
                kept[-1][1] = b
            else:
                kept.append([a, b])
    return [(a, b) for a, b in kept]


def _assemble_points(base_vals, height_vals, height: int) -> np.ndarray:
    pts = np.empty((len(base_vals), 2))
    pts[:, height] = height_vals
    pts[:, 1 - height] = base_vals
    return pts


def cell_quadrature_implicit(region: ImplicitRegion, cell: Cell, q: int, degree: int | None = None) -> QuadratureRule:
    """Quadrature rule for ``cell`` intersected with ``region``."""
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    polys = cell_polynomials(region, cell, degree)
    status, active = classify_polynomials(polys)
    if status < 0:
        return QuadratureRule.empty()
    if status > 0:
        return QuadratureRule.tensor(cell.x0, cell.x1, cell.y0, cell.y1, q)
    act = [polys[k] for k in active]
    height = choose_height(act[0])
    base = 1 - height
    hlo, hhi = act[0].bounds(height)
    gs, gw = gauss01(q)
    bv, hv, wv = [], [], []
    try:
        for iv in base_events(act, height):
            ts, tw = iv.nodes(q)
            for t, w in zip(ts, tw):
                lines = [P.restrict(base, t) for P in act]
                for a, b in _positive_intervals(lines, hlo, hhi):
                    bv.append(np.full(q, t))
                    hv.append(a + (b - a) * gs)
                    wv.append(w * (b - a) * gw)
    except RootFindingError as exc:
        raise CellQuadratureError(cell, str(exc)) from exc
    if not wv:
        return QuadratureRule.empty()
    return QuadratureRule(_assemble_points(np.concatenate(bv), np.concatenate(hv), height), np.concatenate(wv))


def interface_quadrature_implicit(
    region: ImplicitRegion, cell: Cell, q: int, which: int | None = None, degree: int | None = None
) -> QuadratureRule:
    """Line rule on the part of the zero sets inside ``cell`` that bounds ``region``.

    Weights carry length units: base weight times ``|grad f| / |df/dheight|``.
    Several roots per height line are handled natively since the base
    interval is split wherever the number of roots changes.
    """
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    polys = cell_polynomials(region, cell, degree)
    status, active = classify_polynomials(polys)
    if status != 0:
        return QuadratureRule.empty()
    targets = active if which is None else [k for k in active if k == which]
    act = [polys[k] for k in active]
    pts_all, w_all = [], []
    for k in targets:
        P = polys[k]
        others = [polys[m] for m in active if m != k]
        height = choose_height(P)
        base = 1 - height
        hlo, hhi = P.bounds(height)
        H = hhi - hlo
        try:
            intervals = base_events(act, height)
            for iv in intervals:
                ts, tw = iv.nodes(q)
                for t, w in zip(ts, tw):
                    for r in safe_roots(P.restrict(base, t)):
                        pt = np.empty(2)
                        pt[height] = min(max(r, hlo), hhi)
                        pt[base] = t
                        if any(o(pt[0], pt[1]) < -1e-12 * o.scale for o in others):
                            continue
                        g = region.constraints[k].gradient(pt)
                        gh = abs(g[height])
                        if gh <= 1e-14 * np.linalg.norm(g):
                            raise CellQuadratureError(cell, "interface tangent to a height line at a node")
                        pts_all.append(pt)
                        w_all.append(w * np.linalg.norm(g) / gh)
        except RootFindingError as exc:
            raise CellQuadratureError(cell, str(exc)) from exc
        del H
    if not w_all:
        return QuadratureRule.empty()
    return QuadratureRule(np.array(pts_all), np.array(w_all))
