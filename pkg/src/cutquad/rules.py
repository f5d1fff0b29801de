"""Quadrature rule container and Gauss-Legendre helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=None)
def _gauss01(q: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


def gauss01(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    s, w = _gauss01(int(q))
    return s.copy(), w.copy()


def gauss_interval(a: float, b: float, q: int) -> tuple[np.ndarray, np.ndarray]:
    s, w = gauss01(q)
    return a + (b - a) * s, (b - a) * w


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Points (n, 2) and weights (n,) in physical coordinates.

    ``cells`` optionally records the (i, j) index of the source cell of each
    node; it is filled by the domain-level assembly.
    """

    points: np.ndarray
    weights: np.ndarray
    cells: np.ndarray | None = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        wts = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(pts) != len(wts):
            raise ValueError("points and weights differ in length")
        if not np.all(np.isfinite(wts)) or not np.all(np.isfinite(pts)):
            raise ValueError("non-finite quadrature data")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)
        if self.cells is not None:
            cells = np.asarray(self.cells, dtype=int).reshape(-1, 2)
            object.__setattr__(self, "cells", cells)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> float:
        """Sum of weights, accumulated with ``math.fsum``."""
        return math.fsum(self.weights.tolist())

    @classmethod
    def empty(cls) -> "QuadratureRule":
        return cls(np.zeros((0, 2)), np.zeros(0))

    @classmethod
    def tensor(cls, x0: float, x1: float, y0: float, y1: float, q: int) -> "QuadratureRule":
        """q x q Gauss rule on a rectangle, x varying fastest."""
        xs, wx = gauss_interval(x0, x1, q)
        ys, wy = gauss_interval(y0, y1, q)
        X, Y = np.meshgrid(xs, ys)
        W = np.outer(wy, wx)
        return cls(np.column_stack([X.ravel(), Y.ravel()]), W.ravel())

    @classmethod
    def concatenate(cls, rules: Iterable["QuadratureRule"]) -> "QuadratureRule":
        rules = list(rules)
        if not rules:
            return cls.empty()
        pts = np.concatenate([r.points for r in rules])
        wts = np.concatenate([r.weights for r in rules])
        if all(r.cells is not None for r in rules):
            cells = np.concatenate([r.cells for r in rules])
        else:
            cells = None
        return cls(pts, wts, cells)

    def with_cell(self, i: int, j: int) -> "QuadratureRule":
        cells = np.tile(np.array([i, j], dtype=int), (len(self), 1))
        return QuadratureRule(self.points, self.weights, cells)


def weighted_sum(values: Sequence[float] | np.ndarray, weights: np.ndarray) -> float:
    return math.fsum((np.asarray(values, dtype=float) * weights).tolist())
