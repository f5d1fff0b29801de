"""Material law and closed-form fields for the two elasticity benchmarks."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Material:
    """Isotropic material under plane strain."""

    E: float = 1.0
    nu: float = 0.3

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError("Young's modulus must be positive")
        if not 0.0 <= self.nu < 0.5:
            raise ValueError("Poisson ratio must lie in [0, 0.5)")

    @property
    def mu(self) -> float:
        return self.E / (2.0 * (1.0 + self.nu))

    @property
    def lam(self) -> float:
        return self.E * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))

    @property
    def kolosov(self) -> float:
        return 3.0 - 4.0 * self.nu

    @cached_property
    def D(self) -> np.ndarray:
        """Voigt stiffness for (eps_xx, eps_yy, gamma_xy)."""
        lam, mu = self.lam, self.mu
        return np.array([[lam + 2 * mu, lam, 0.0], [lam, lam + 2 * mu, 0.0], [0.0, 0.0, mu]])

    def stress(self, grad: np.ndarray) -> np.ndarray:
        """Stress tensors (n, 2, 2) from displacement gradients grad[n, i, j] = du_i/dx_j."""
        eps = 0.5 * (grad + np.swapaxes(grad, -1, -2))
        tr = eps[..., 0, 0] + eps[..., 1, 1]
        return self.lam * tr[..., None, None] * np.eye(2) + 2.0 * self.mu * eps


@dataclass(frozen=True)
class PlateHoleCase:
    T_x: float = 10.0
    R_i: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.R_i < 1.0:
            raise ValueError("hole radius must lie in (0, 1)")
        if not np.isfinite(self.T_x):
            raise ValueError("traction must be finite")


def _polar(pts, c: PlateHoleCase):
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r < c.R_i * (1.0 - 1e-12)):
        raise ValueError("point lies inside the hole (r < R_i)")
    return r, np.arctan2(pts[:, 1], pts[:, 0])


def plate_hole_exact(pts, m: Material = Material(), c: PlateHoleCase = PlateHoleCase()) -> np.ndarray:
    """Displacement (n, 2) of an infinite plate with a circular hole under uniaxial tension."""
    r, th = _polar(pts, c)
    k = m.kolosov
    R = c.R_i
    A = (k + 1) * np.cos(th)
    B = np.cos(3 * th)
    C = (k - 3) * np.sin(th)
    D = (1 - k) * np.sin(th)
    E = np.sin(3 * th)
    pre = c.T_x * R / (8 * m.mu)
    ux = pre * (r / R * A + 2 * R / r * (A + B) - 2 * R**3 / r**3 * B)
    uy = pre * (r / R * C + 2 * R / r * (D + E) - 2 * R**3 / r**3 * E)
    return np.column_stack([ux, uy])


def plate_hole_gradient(pts, m: Material = Material(), c: PlateHoleCase = PlateHoleCase()) -> np.ndarray:
    """Displacement gradient (n, 2, 2) by analytic differentiation in polar form."""
    r, th = _polar(pts, c)
    k = m.kolosov
    R = c.R_i
    pre = c.T_x * R / (8 * m.mu)
    s1, c1, s3, c3 = np.sin(th), np.cos(th), np.sin(3 * th), np.cos(3 * th)
    A, dA = (k + 1) * c1, -(k + 1) * s1
    B, dB = c3, -3 * s3
    C, dC = (k - 3) * s1, (k - 3) * c1
    D, dD = (1 - k) * s1, (1 - k) * c1
    E, dE = s3, 3 * c3

    def radial(F, G):
        # d/dr of  r/R F + 2 R/r (F + G) - 2 R^3/r^3 G, with G the 3-theta term
        return pre * (F / R - 2 * R / r**2 * (F + G) + 6 * R**3 / r**4 * G)

    def angular(F, dF, dG):
        return pre * (r / R * dF + 2 * R / r * (dF + dG) - 2 * R**3 / r**3 * dG)

    ux_r = radial(A, B)
    ux_t = angular(A, dA, dB)
    # u_y uses D + E in the middle term, C in the leading one
    uy_r = pre * (C / R - 2 * R / r**2 * (D + E) + 6 * R**3 / r**4 * E)
    uy_t = pre * (r / R * dC + 2 * R / r * (dD + dE) - 2 * R**3 / r**3 * dE)
    g = np.empty((len(r), 2, 2))
    g[:, 0, 0] = c1 * ux_r - s1 / r * ux_t
    g[:, 0, 1] = s1 * ux_r + c1 / r * ux_t
    g[:, 1, 0] = c1 * uy_r - s1 / r * uy_t
    g[:, 1, 1] = s1 * uy_r + c1 / r * uy_t
    return g


def plate_hole_stress(pts, m: Material = Material(), c: PlateHoleCase = PlateHoleCase()) -> np.ndarray:
    return m.stress(plate_hole_gradient(pts, m, c))


def plate_hole_traction(pts, normal, m: Material = Material(), c: PlateHoleCase = PlateHoleCase()) -> np.ndarray:
    """sigma(u_exact) . n at each point; ``normal`` is one vector or one per point."""
    sig = plate_hole_stress(pts, m, c)
    n = np.broadcast_to(np.asarray(normal, dtype=float), (len(sig), 2))
    return np.einsum("kij,kj->ki", sig, n)


def manufactured_exact(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    s = np.sin(TWO_PI * pts[:, 0]) * np.sin(TWO_PI * pts[:, 1])
    return np.column_stack([s, s])


def manufactured_gradient(pts) -> np.ndarray:
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    a, b = TWO_PI * pts[:, 0], TWO_PI * pts[:, 1]
    sx = TWO_PI * np.cos(a) * np.sin(b)
    sy = TWO_PI * np.sin(a) * np.cos(b)
    g = np.empty((len(pts), 2, 2))
    g[:, 0, 0] = g[:, 1, 0] = sx
    g[:, 0, 1] = g[:, 1, 1] = sy
    return g


def manufactured_traction(pts, normal, m: Material = Material()) -> np.ndarray:
    sig = m.stress(manufactured_gradient(pts))
    n = np.broadcast_to(np.asarray(normal, dtype=float), (len(sig), 2))
    return np.einsum("kij,kj->ki", sig, n)


def manufactured_body_force(pts, m: Material = Material()) -> np.ndarray:
    """b = -div sigma for the manufactured field (identical components)."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    a, b = TWO_PI * pts[:, 0], TWO_PI * pts[:, 1]
    S = np.sin(a) * np.sin(b)
    P = np.cos(a) * np.cos(b)
    four_pi2 = TWO_PI**2
    val = 2.0 * four_pi2 * m.mu * S - four_pi2 * (m.lam + m.mu) * (P - S)
    return np.column_stack([val, val])
