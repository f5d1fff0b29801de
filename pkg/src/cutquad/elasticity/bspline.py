"""Tensor-product B-spline space on a uniform background mesh."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..geometry import BackgroundMesh


def open_uniform_knots(n_cells: int, p: int, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    inner = np.linspace(a, b, n_cells + 1)
    return np.concatenate([np.full(p, a), inner, np.full(p, b)])


def _basis_upto(U: np.ndarray, span: np.ndarray, t: np.ndarray, p: int) -> np.ndarray:
    """Values of the p+1 nonzero degree-p basis functions at each t (Cox-de Boor)."""
    n = len(t)
    N = np.zeros((n, p + 1))
    N[:, 0] = 1.0
    left = np.zeros((n, p + 1))
    right = np.zeros((n, p + 1))
    for j in range(1, p + 1):
        left[:, j] = t - U[span + 1 - j]
        right[:, j] = U[span + j] - t
        saved = np.zeros(n)
        for r in range(j):
            temp = N[:, r] / (right[:, r + 1] + left[:, j - r])
            N[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        N[:, j] = saved
    return N


def basis_1d(U: np.ndarray, p: int, t, span=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Span index, values and first derivatives of the nonzero basis functions.

    ``span`` (knot-span index, p <= span < len(U) - p - 1) may be given per
    point; otherwise it is located from t, with the right end closed.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n_basis = len(U) - p - 1
    if span is None:
        span = np.searchsorted(U, t, side="right") - 1
    span = np.clip(np.asarray(span, dtype=int) * np.ones(len(t), dtype=int), p, n_basis - 1)
    N = _basis_upto(U, span, t, p)
    dN = np.zeros_like(N)
    if p > 0:
        M = _basis_upto(U, span, t, p - 1)
        for r in range(p + 1):
            i = span - p + r
            if r >= 1:
                den = U[i + p] - U[i]
                dN[:, r] += np.where(den > 0, M[:, r - 1] / np.where(den > 0, den, 1.0), 0.0)
            if r <= p - 1:
                den = U[i + p + 1] - U[i + 1]
                dN[:, r] -= np.where(den > 0, M[:, r] / np.where(den > 0, den, 1.0), 0.0)
        dN *= p
    return span, N, dN


@dataclass(frozen=True)
class BsplineSpace:
    """Degree-p splines of maximal smoothness, one knot span per mesh cell.

    Basis function (a, b) has global index ``a + b * n_x``; its x and y
    displacement dofs are ``2 * index`` and ``2 * index + 1``.
    """

    mesh: BackgroundMesh
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("spline degree must be >= 1")

    @cached_property
    def knots_x(self) -> np.ndarray:
        m = self.mesh
        return open_uniform_knots(m.nx, self.degree, m.origin[0], m.origin[0] + m.width)

    @cached_property
    def knots_y(self) -> np.ndarray:
        m = self.mesh
        return open_uniform_knots(m.ny, self.degree, m.origin[1], m.origin[1] + m.height)

    @property
    def n_x(self) -> int:
        return self.mesh.nx + self.degree

    @property
    def n_y(self) -> int:
        return self.mesh.ny + self.degree

    @property
    def dim(self) -> int:
        return self.n_x * self.n_y

    @property
    def n_dofs(self) -> int:
        return 2 * self.dim

    @property
    def n_local(self) -> int:
        return (self.degree + 1) ** 2

    def cell_functions(self, i: int, j: int) -> np.ndarray:
        """Global indices of the basis functions nonzero on cell (i, j), x fastest."""
        p = self.degree
        a = np.arange(i, i + p + 1)
        b = np.arange(j, j + p + 1)
        return (a[None, :] + self.n_x * b[:, None]).ravel()

    def evaluate(self, pts, cells=None) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Basis data at points.

        Returns (index, N, dN/dx, dN/dy), each of shape (n, (p+1)^2). With
        ``cells`` (n, 2) the spans are taken from the owning cells, so points
        on a cell edge use that cell's polynomial pieces.
        """
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        p = self.degree
        if cells is not None:
            cells = np.asarray(cells, dtype=int).reshape(-1, 2)
            sx, Nx, dNx = basis_1d(self.knots_x, p, pts[:, 0], cells[:, 0] + p)
            sy, Ny, dNy = basis_1d(self.knots_y, p, pts[:, 1], cells[:, 1] + p)
        else:
            sx, Nx, dNx = basis_1d(self.knots_x, p, pts[:, 0])
            sy, Ny, dNy = basis_1d(self.knots_y, p, pts[:, 1])
        n = len(pts)
        N = (Ny[:, :, None] * Nx[:, None, :]).reshape(n, -1)
        Dx = (Ny[:, :, None] * dNx[:, None, :]).reshape(n, -1)
        Dy = (dNy[:, :, None] * Nx[:, None, :]).reshape(n, -1)
        a = (sx - p)[:, None] + np.arange(p + 1)[None, :]
        b = (sy - p)[:, None] + np.arange(p + 1)[None, :]
        idx = (a[:, None, :] + self.n_x * b[:, :, None]).reshape(n, -1)
        return idx, N, Dx, Dy

    def edge_functions(self, edge: str) -> np.ndarray:
        """Global indices of the functions whose trace on a mesh edge is nonzero,
        ordered along the edge."""
        nx, ny = self.n_x, self.n_y
        if edge == "bottom":
            return np.arange(nx)
        if edge == "top":
            return np.arange(nx) + nx * (ny - 1)
        if edge == "left":
            return np.arange(ny) * nx
        if edge == "right":
            return np.arange(ny) * nx + nx - 1
        raise ValueError(f"unknown edge {edge!r}")
