"""Galerkin assembly and solution of plane-strain elasticity on trimmed splines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, onenormest, splu

from ..geometry import BackgroundMesh, InterfaceSpec
from ..integration import DomainQuadrature, domain_quadrature
from ..rules import QuadratureRule, gauss_interval
from .bspline import BsplineSpace, basis_1d
from .exact import Material

ELIMINATION_THRESHOLD = 1e-10

VectorField = Callable[[np.ndarray], np.ndarray]


class SingularSystemError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Traction:
    """Line rule (points carry their owning cells) and the traction on it."""

    rule: QuadratureRule
    func: VectorField


@dataclass(eq=False)
class LinearSystem:
    space: BsplineSpace
    K: sp.csr_matrix
    f: np.ndarray
    trimmed_support: np.ndarray
    full_support: np.ndarray
    n_quad_points: int
    constrained: dict[int, float] = field(default_factory=dict)

    @property
    def eliminated(self) -> np.ndarray:
        """Dofs whose basis function barely meets the trimmed domain."""
        small = self.trimmed_support < ELIMINATION_THRESHOLD * self.full_support
        return np.repeat(small, 2)

    @property
    def free(self) -> np.ndarray:
        mask = ~self.eliminated
        if self.constrained:
            mask[np.fromiter(self.constrained.keys(), dtype=int)] = False
        return mask


@dataclass(frozen=True, eq=False)
class DisplacementField:
    space: BsplineSpace
    coeffs: np.ndarray
    cond_estimate: float = float("nan")
    n_free: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.space.n_dofs:
            raise ValueError("coefficient vector length must be twice the space dimension")

    def __call__(self, pts, cells=None) -> np.ndarray:
        idx, N, _, _ = self.space.evaluate(pts, cells)
        cx = self.coeffs[2 * idx]
        cy = self.coeffs[2 * idx + 1]
        return np.column_stack([(N * cx).sum(1), (N * cy).sum(1)])


def _strain_matrices(Dx: np.ndarray, Dy: np.ndarray) -> np.ndarray:
    """Voigt strain-displacement matrices (n, 3, 2 nb), dofs interleaved x, y."""
    n, nb = Dx.shape
    B = np.zeros((n, 3, 2 * nb))
    B[:, 0, 0::2] = Dx
    B[:, 1, 1::2] = Dy
    B[:, 2, 0::2] = Dy
    B[:, 2, 1::2] = Dx
    return B


def _local_dofs(idx: np.ndarray) -> np.ndarray:
    d = np.empty((idx.shape[0], 2 * idx.shape[1]), dtype=int)
    d[:, 0::2] = 2 * idx
    d[:, 1::2] = 2 * idx + 1
    return d


def _cell_blocks(cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start offsets of the runs of equal consecutive cell indices."""
    if len(cells) == 0:
        return np.zeros(0, dtype=int), np.zeros((0, 2), dtype=int)
    change = np.any(cells[1:] != cells[:-1], axis=1)
    starts = np.concatenate([[0], np.nonzero(change)[0] + 1])
    return starts, cells[starts]


def _load_vector(space: BsplineSpace, rule: QuadratureRule, func: VectorField, f: np.ndarray) -> None:
    if len(rule) == 0:
        return
    idx, N, _, _ = space.evaluate(rule.points, rule.cells)
    vals = np.asarray(func(rule.points), dtype=float).reshape(-1, 2)
    contrib = np.empty((len(rule), 2 * N.shape[1]))
    contrib[:, 0::2] = N * (rule.weights * vals[:, 0])[:, None]
    contrib[:, 1::2] = N * (rule.weights * vals[:, 1])[:, None]
    dofs = _local_dofs(idx)
    # point order is deterministic, so the accumulation order is as well
    np.add.at(f, dofs.ravel(), contrib.ravel())


def assemble(
    space: BsplineSpace,
    mesh: BackgroundMesh,
    iface: InterfaceSpec,
    material: Material,
    q: int | None = None,
    body_force: VectorField | None = None,
    tractions: Sequence[Traction] = (),
    threads: int | None = None,
    quadrature: DomainQuadrature | None = None,
) -> LinearSystem:
    """Stiffness matrix and load vector over the trimmed domain."""
    p = space.degree
    q = p + 2 if q is None else q
    if q < p + 1:
        raise ValueError(f"quadrature order {q} is below p + 1 = {p + 1}")
    dq = quadrature if quadrature is not None else domain_quadrature(mesh, iface, q, threads)
    rule = dq.rule
    n = space.n_dofs
    f = np.zeros(n)
    trimmed = np.zeros(space.dim)
    full = np.zeros(space.dim)
    cell_area = mesh.hx * mesh.hy
    for j in range(mesh.ny):
        for i in range(mesh.nx):
            fn = space.cell_functions(i, j)
            full[fn] += cell_area
            sl = dq.cell_slice(i, j)
            if sl.stop > sl.start:
                trimmed[fn] += math.fsum(rule.weights[sl].tolist())

    if len(rule):
        idx, N, Dx, Dy = space.evaluate(rule.points, rule.cells)
        B = _strain_matrices(Dx, Dy)
        DB = np.einsum("ij,njb->nib", material.D, B)
        Kp = np.einsum("n,nia,nib->nab", rule.weights, B, DB)
        starts, _ = _cell_blocks(rule.cells)
        Kc = np.add.reduceat(Kp, starts, axis=0)
        dofs = _local_dofs(idx[starts])
        m = dofs.shape[1]
        rows = np.repeat(dofs, m, axis=1).ravel()
        cols = np.tile(dofs, (1, m)).ravel()
        K = sp.coo_matrix((Kc.ravel(), (rows, cols)), shape=(n, n)).tocsr()
        if body_force is not None:
            _load_vector(space, rule, body_force, f)
    else:
        K = sp.csr_matrix((n, n))
    for t in tractions:
        _load_vector(space, t.rule, t.func, f)
    return LinearSystem(space, K, f, trimmed, full, len(rule))


# ---------------------------------------------------------------------------
# boundary data
# ---------------------------------------------------------------------------


def edge_rule(mesh: BackgroundMesh, edge: str, q: int) -> QuadratureRule:
    """Gauss rule along one side of the mesh, one q-point rule per cell edge."""
    x0, y0 = mesh.origin
    x1, y1 = x0 + mesh.width, y0 + mesh.height
    pts, wts, cells = [], [], []
    if edge in ("bottom", "top"):
        y = y0 if edge == "bottom" else y1
        j = 0 if edge == "bottom" else mesh.ny - 1
        for i, (a, b) in enumerate(zip(mesh.xlines()[:-1], mesh.xlines()[1:])):
            s, w = gauss_interval(a, b, q)
            pts.append(np.column_stack([s, np.full(q, y)]))
            wts.append(w)
            cells.append(np.tile([i, j], (q, 1)))
    elif edge in ("left", "right"):
        x = x0 if edge == "left" else x1
        i = 0 if edge == "left" else mesh.nx - 1
        for j, (a, b) in enumerate(zip(mesh.ylines()[:-1], mesh.ylines()[1:])):
            s, w = gauss_interval(a, b, q)
            pts.append(np.column_stack([np.full(q, x), s]))
            wts.append(w)
            cells.append(np.tile([i, j], (q, 1)))
    else:
        raise ValueError(f"unknown edge {edge!r}")
    return QuadratureRule(np.vstack(pts), np.concatenate(wts), np.vstack(cells))


def edge_normal(edge: str) -> np.ndarray:
    return {
        "bottom": np.array([0.0, -1.0]),
        "right": np.array([1.0, 0.0]),
        "top": np.array([0.0, 1.0]),
        "left": np.array([-1.0, 0.0]),
    }[edge]


def project_edge_trace(space: BsplineSpace, edge: str, g: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Coefficients of the 1-D L2 projection of a scalar trace onto the edge splines.

    The end coefficients interpolate the corner values (open knot vectors make
    the spline interpolatory there); the interior ones minimize the L2 error.
    """
    mesh = space.mesh
    p = space.degree
    horizontal = edge in ("bottom", "top")
    U = space.knots_x if horizontal else space.knots_y
    lines = mesh.xlines() if horizontal else mesh.ylines()
    x0, y0 = mesh.origin
    fixed = {"bottom": y0, "top": y0 + mesh.height, "left": x0, "right": x0 + mesh.width}[edge]

    def to_pts(t):
        t = np.atleast_1d(t)
        return np.column_stack([t, np.full(len(t), fixed)]) if horizontal else np.column_stack([np.full(len(t), fixed), t])

    nb = len(U) - p - 1
    M = np.zeros((nb, nb))
    rhs = np.zeros(nb)
    q = p + 2
    for k, (a, b) in enumerate(zip(lines[:-1], lines[1:])):
        t, w = gauss_interval(a, b, q)
        span, N, _ = basis_1d(U, p, t, np.full(q, k + p))
        loc = np.arange(k, k + p + 1)
        M[np.ix_(loc, loc)] += np.einsum("n,na,nb->ab", w, N, N)
        rhs[loc] += N.T @ (w * np.asarray(g(to_pts(t)), dtype=float))
    c = np.zeros(nb)
    c[0] = float(np.asarray(g(to_pts(lines[0])))[0])
    c[-1] = float(np.asarray(g(to_pts(lines[-1])))[0])
    if nb > 2:
        inner = slice(1, nb - 1)
        r = rhs[inner] - M[inner, 0] * c[0] - M[inner, -1] * c[-1]
        c[inner] = np.linalg.solve(M[inner, inner], r)
    return c


def dirichlet_dofs(space: BsplineSpace, edge: str, component: int, g: Callable[[np.ndarray], np.ndarray]) -> dict[int, float]:
    """Strong Dirichlet values for one displacement component along a mesh edge."""
    funcs = space.edge_functions(edge)
    coeffs = project_edge_trace(space, edge, g)
    return {int(2 * A + component): float(v) for A, v in zip(funcs, coeffs)}


def apply_boundary_conditions(system: LinearSystem, constraints: dict[int, float]) -> LinearSystem:
    """Record Dirichlet values on the system; later constraints on a dof win."""
    merged = dict(system.constrained)
    merged.update(constraints)
    system.constrained = merged
    return system


# ---------------------------------------------------------------------------
# solve and error
# ---------------------------------------------------------------------------


def _condition_estimate(Kff: sp.csc_matrix, lu) -> float:
    n = Kff.shape[0]
    inv = LinearOperator((n, n), matvec=lu.solve, rmatvec=lambda x: lu.solve(x, trans="T"), dtype=float)
    # t=1 keeps the estimator free of random restarts, so the output is reproducible
    return float(onenormest(Kff, t=1) * onenormest(inv, t=1))


def solve(system: LinearSystem, estimate_condition: bool = True) -> DisplacementField:
    """Direct sparse solve after eliminating tiny-support and Dirichlet dofs."""
    n = system.space.n_dofs
    u = np.zeros(n)
    for dof, val in system.constrained.items():
        u[dof] = val
    u[system.eliminated] = 0.0
    free = np.nonzero(system.free)[0]
    if len(free) == 0:
        return DisplacementField(system.space, u, float("nan"), 0)
    K = system.K.tocsr()
    fixed = np.nonzero(~system.free)[0]
    rhs = system.f[free] - K[free][:, fixed] @ u[fixed]
    Kff = K[free][:, free].tocsc()
    try:
        lu = splu(Kff, permc_spec="MMD_AT_PLUS_A")
    except RuntimeError as exc:
        small = np.argsort(system.trimmed_support / system.full_support)[:5]
        raise SingularSystemError(f"stiffness matrix is singular after elimination ({exc}); smallest support ratios at basis {small.tolist()}") from exc
    uf = lu.solve(rhs)
    if not np.all(np.isfinite(uf)):
        raise SingularSystemError("solution is not finite; the reduced stiffness matrix is numerically singular")
    u[free] = uf
    cond = _condition_estimate(Kff, lu) if estimate_condition else float("nan")
    return DisplacementField(system.space, u, cond, len(free))


def relative_l2_error(
    field: DisplacementField,
    exact: VectorField,
    mesh: BackgroundMesh,
    iface: InterfaceSpec,
    q: int,
    threads: int | None = None,
    quadrature: DomainQuadrature | None = None,
) -> float:
    dq = quadrature if quadrature is not None else domain_quadrature(mesh, iface, q, threads)
    rule = dq.rule
    uh = field(rule.points, rule.cells)
    ue = np.asarray(exact(rule.points), dtype=float)
    num = math.fsum((rule.weights * np.sum((uh - ue) ** 2, axis=1)).tolist())
    den = math.fsum((rule.weights * np.sum(ue**2, axis=1)).tolist())
    if den <= 0.0:
        raise ZeroDivisionError("exact field has zero L2 norm on the trimmed domain")
    return math.sqrt(num / den)
