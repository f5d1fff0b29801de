"""Bernstein-form polynomials on intervals and cells.

Approximation of implicit constraints by tensor Bernstein polynomials,
coefficient range bounds, restriction to axis-parallel lines, certified
real rootfinding by subdivision, and small resultant helpers used to locate
branch and crossing points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import comb

from .geometry import Cell, ImplicitConstraint, bernstein_basis

ZERO_TOL = 1e-14
DEFAULT_DEGREE = 3
MAX_DEPTH = 60


class DegeneratePolynomialError(ValueError):
    """Polynomial is identically zero on its interval."""


class RootFindingError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def chebyshev_lobatto(d: int) -> np.ndarray:
    """d+1 Chebyshev-Lobatto nodes on [0, 1], ascending."""
    if d == 0:
        return np.array([0.5])
    k = np.arange(d + 1)
    return 0.5 * (1.0 - np.cos(np.pi * k / d))


@lru_cache(maxsize=None)
def _collocation_inverse(d: int) -> np.ndarray:
    B = bernstein_basis(d, chebyshev_lobatto(d))
    return np.linalg.inv(B)


def _decasteljau_split(c: np.ndarray, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Split Bernstein coefficients (first axis) at local parameter s."""
    n = c.shape[0]
    work = np.array(c, dtype=float, copy=True)
    left = np.empty_like(work)
    right = np.empty_like(work)
    left[0] = work[0]
    right[-1] = work[-1]
    for r in range(1, n):
        work[: n - r] = (1.0 - s) * work[: n - r] + s * work[1 : n - r + 1]
        left[r] = work[0]
        right[n - 1 - r] = work[n - 1 - r]
    return left, right


def _decasteljau_scalar(c: list[float], s: float) -> float:
    r = 1.0 - s
    while len(c) > 1:
        c = [r * a + s * b for a, b in zip(c[:-1], c[1:])]
    return c[0]


@dataclass(frozen=True, eq=False)
class Bernstein1D:
    coeffs: np.ndarray
    t0: float = 0.0
    t1: float = 1.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("Bernstein1D needs a 1-D coefficient array")
        if not self.t0 < self.t1:
            raise ValueError(f"empty interval [{self.t0}, {self.t1}]")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def local(self, t):
        return (np.asarray(t, dtype=float) - self.t0) / (self.t1 - self.t0)

    def __call__(self, t):
        if np.ndim(t) == 0:
            return _decasteljau_scalar(self.coeffs.tolist(), (float(t) - self.t0) / (self.t1 - self.t0))
        s = np.atleast_1d(self.local(t))
        return bernstein_basis(self.degree, s) @ self.coeffs

    def derivative(self) -> "Bernstein1D":
        d = self.degree
        if d == 0:
            return Bernstein1D([0.0], self.t0, self.t1)
        return Bernstein1D(d * np.diff(self.coeffs) / (self.t1 - self.t0), self.t0, self.t1)

    def is_zero(self, ref: float | None = None) -> bool:
        ref = self.scale if ref is None else ref
        return self.scale <= ZERO_TOL * ref or self.scale == 0.0

    def power_coeffs(self) -> np.ndarray:
        """Monomial coefficients in the local variable s in [0, 1], low order first."""
        d = self.degree
        a = np.zeros(d + 1)
        for k in range(d + 1):
            i = np.arange(k + 1)
            a[k] = np.sum(self.coeffs[i] * comb(d, i) * comb(d - i, k - i) * (-1.0) ** (k - i))
        return a

    @classmethod
    def interpolate(cls, func, d: int, t0: float, t1: float) -> "Bernstein1D":
        """Interpolate ``func`` at d+1 Chebyshev-Lobatto points of [t0, t1]."""
        t = t0 + (t1 - t0) * chebyshev_lobatto(d)
        vals = np.asarray(func(t), dtype=float)
        return cls(_collocation_inverse(d) @ vals, t0, t1)


@dataclass(frozen=True, eq=False)
class Bernstein2D:
    """Tensor Bernstein polynomial; ``coeffs[i, j]`` pairs x-index i with y-index j."""

    coeffs: np.ndarray
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 2:
            raise ValueError("Bernstein2D needs a 2-D coefficient grid")
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("invalid cell bounds")
        object.__setattr__(self, "coeffs", c)

    @property
    def degrees(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def bounds(self, axis: int) -> tuple[float, float]:
        return (self.x0, self.x1) if axis == 0 else (self.y0, self.y1)

    def __call__(self, x, y):
        sx = (np.atleast_1d(np.asarray(x, dtype=float)) - self.x0) / (self.x1 - self.x0)
        sy = (np.atleast_1d(np.asarray(y, dtype=float)) - self.y0) / (self.y1 - self.y0)
        Bx = bernstein_basis(self.degrees[0], sx)
        By = bernstein_basis(self.degrees[1], sy)
        out = np.einsum("ki,ij,kj->k", Bx, self.coeffs, By)
        return out if np.ndim(x) else float(out[0])

    def derivative(self, axis: int) -> "Bernstein2D":
        d = self.degrees[axis]
        lo, hi = self.bounds(axis)
        if d == 0:
            shape = list(self.coeffs.shape)
            return Bernstein2D(np.zeros(shape), self.x0, self.x1, self.y0, self.y1)
        c = d * np.diff(self.coeffs, axis=axis) / (hi - lo)
        return Bernstein2D(c, self.x0, self.x1, self.y0, self.y1)

    def restrict(self, fixed_axis: int, value: float) -> Bernstein1D:
        lo, hi = self.bounds(fixed_axis)
        span = hi - lo
        if not (lo - 1e-12 * span <= value <= hi + 1e-12 * span):
            raise ValueError(f"line {'xy'[fixed_axis]}={value} outside cell range [{lo}, {hi}]")
        s = min(max((value - lo) / span, 0.0), 1.0)
        b = bernstein_basis(self.degrees[fixed_axis], np.array([s]))[0]
        if fixed_axis == 0:
            return Bernstein1D(b @ self.coeffs, self.y0, self.y1)
        return Bernstein1D(self.coeffs @ b, self.x0, self.x1)


def to_bernstein(c: ImplicitConstraint, cell: Cell, d: int | None = None) -> Bernstein2D:
    """Tensor Chebyshev-Lobatto interpolant of ``c`` on ``cell`` in Bernstein form.

    Polynomial constraints default to their own degree, which makes the
    conversion exact up to rounding.
    """
    if d is None:
        d = c.degree if c.degree is not None else DEFAULT_DEGREE
    if d < 1:
        raise ValueError(f"approximation degree must be >= 1, got {d}")
    t = chebyshev_lobatto(d)
    xs = cell.x0 + cell.width * t
    ys = cell.y0 + cell.height * t
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = np.asarray(c.value(np.stack([X, Y], axis=-1)), dtype=float)
    Binv = _collocation_inverse(d)
    C = Binv @ F @ Binv.T
    if not np.all(np.isfinite(C)):
        raise RuntimeError(f"non-finite Bernstein coefficients on cell {cell.i, cell.j}")
    return Bernstein2D(C, cell.x0, cell.x1, cell.y0, cell.y1)


def restrict_to_line(b: Bernstein2D, axis: str, value: float) -> Bernstein1D:
    """Restrict ``b`` to the line ``axis = value`` (axis is 'x' or 'y')."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return b.restrict(0 if axis == "x" else 1, value)


def coefficient_range(b) -> tuple[float, float]:
    c = b.coeffs
    return float(np.min(c)), float(np.max(c))


def sign_certificate(b: Bernstein2D) -> int:
    """+1 if b >= 0 on the cell, -1 if b <= 0, 0 otherwise; 2 if identically zero.

    Uses the convex-hull property with a relative rounding threshold.
    """
    lo, hi = coefficient_range(b)
    scale = b.scale
    eps = ZERO_TOL * scale
    if scale == 0.0 or (abs(lo) <= eps and abs(hi) <= eps):
        return 2
    if lo >= -eps:
        return 1
    if hi <= eps:
        return -1
    return 0


# ---------------------------------------------------------------------------
# rootfinding
# ---------------------------------------------------------------------------


def _sign_changes(c: np.ndarray) -> int:
    s = np.sign(c[c != 0.0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _polish(b: Bernstein1D, lo: float, hi: float) -> float:
    flo = b(lo)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        fm = b(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    db = b.derivative()
    for _ in range(5):
        f = b(x)
        df = db(x)
        if df == 0.0 or f == 0.0:
            break
        xn = x - f / df
        if not lo <= xn <= hi:
            break
        if abs(xn - x) <= 1e-16 * max(1.0, abs(x)):
            x = xn
            break
        x = xn
    return x


def roots_in_interval(b: Bernstein1D, tol: float = 1e-12) -> list[float]:
    """All real roots of ``b`` in ``[t0, t1]``, ascending, each reported once.

    Roots are isolated by de Casteljau subdivision on Bernstein sign
    variations, then polished by bisection and Newton. Double roots (tangency)
    are reported once when the enclosing interval shrinks below resolution.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    scale = b.scale
    if scale == 0.0 or not np.any(np.abs(b.coeffs) > ZERO_TOL * scale):
        raise DegeneratePolynomialError("polynomial vanishes identically on the interval")
    c0 = b.coeffs / scale
    L = b.t1 - b.t0
    resolution = 1e-13
    found: list[float] = []

    stack = [(c0, 0.0, 1.0, 0)]
    while stack:
        c, a, w, depth = stack.pop()
        if depth > MAX_DEPTH:
            raise RootFindingError(f"subdivision exceeded depth {MAX_DEPTH}")
        if c[0] == 0.0:
            found.append(a)
        if c[-1] == 0.0:
            found.append(a + w)
        v = _sign_changes(c)
        if v == 0:
            continue
        ends_nonzero = c[0] != 0.0 and c[-1] != 0.0
        if v == 1 and ends_nonzero and np.sign(c[0]) != np.sign(c[-1]):
            sub = Bernstein1D(c, 0.0, 1.0)
            found.append(a + w * _polish(sub, 0.0, 1.0))
            continue
        if w <= resolution:
            mid = a + 0.5 * w
            val = Bernstein1D(c0, 0.0, 1.0)(mid)
            if abs(val) <= max(tol, 1e-10):
                found.append(mid)
                continue
            raise RootFindingError(f"roots not separated at resolution near t={b.t0 + L * mid}")
        left, right = _decasteljau_split(c, 0.5)
        stack.append((right, a + 0.5 * w, 0.5 * w, depth + 1))
        stack.append((left, a, 0.5 * w, depth + 1))

    found.sort()
    merged: list[float] = []
    for s in found:
        if merged and s - merged[-1] <= 1e-12:
            continue
        merged.append(s)
    # a double root perturbed by rounding splits into two nearby simple roots
    unit = Bernstein1D(c0, 0.0, 1.0)
    clustered: list[float] = []
    for s in merged:
        if clustered and s - clustered[-1] < 1e-6 and abs(unit(0.5 * (s + clustered[-1]))) <= tol:
            clustered[-1] = 0.5 * (s + clustered[-1])
            continue
        clustered.append(s)
    return [b.t0 + L * s for s in clustered]


def safe_roots(b: Bernstein1D, tol: float = 1e-12) -> list[float]:
    """``roots_in_interval`` returning [] for identically zero input."""
    try:
        return roots_in_interval(b, tol)
    except DegeneratePolynomialError:
        return []


# ---------------------------------------------------------------------------
# resultants along one axis
# ---------------------------------------------------------------------------


def _sylvester_resultant(f: np.ndarray, g: np.ndarray) -> float:
    """Resultant of two power-basis polynomials (low order first)."""
    m, n = len(f) - 1, len(g) - 1
    if m == 0:
        return float(f[0]) ** n
    if n == 0:
        return float(g[0]) ** m
    S = np.zeros((m + n, m + n))
    fr, gr = f[::-1], g[::-1]
    for r in range(n):
        S[r, r : r + m + 1] = fr
    for r in range(m):
        S[n + r, r : r + n + 1] = gr
    return float(np.linalg.det(S))


def resultant_along(f: Bernstein2D, g: Bernstein2D, height: int) -> Bernstein1D | None:
    """Resultant in the height variable as a Bernstein polynomial in the base variable.

    Returns None when the resultant vanishes identically (common factor).
    """
    base = 1 - height
    df, dg = f.degrees, g.degrees
    deg = df[base] * dg[height] + dg[base] * df[height]
    deg = max(deg, 1)
    lo, hi = f.bounds(base)

    def sample(ts):
        out = []
        for t in np.atleast_1d(ts):
            pf = f.restrict(base, t).power_coeffs()
            pg = g.restrict(base, t).power_coeffs()
            out.append(_sylvester_resultant(pf, pg))
        return np.array(out)

    R = Bernstein1D.interpolate(sample, deg, lo, hi)
    ref = max(f.scale, 1e-300) ** dg[height] * max(g.scale, 1e-300) ** df[height]
    if R.scale <= 1e-12 * ref:
        return None
    return R


def clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


def isclose_rel(a: float, b: float, scale: float, rtol: float = 1e-12) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=rtol * scale)
