"""Cell classification, domain-level quadrature and the area study drivers."""
from __future__ import annotations

import csv
import enum
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .cases import get_case, line_case, triangle_case, LINE_START
from .geometry import BackgroundMesh, Cell, ImplicitRegion, InterfaceSpec, ParametricRegion
from .quad_implicit import cell_polynomials, cell_quadrature_implicit, classify_polynomials, interface_quadrature_implicit
from .quad_parametric import cell_quadrature_parametric, interface_quadrature_parametric, interior_pieces
from .rules import QuadratureRule, gauss_interval, weighted_sum

THREADS_ENV = "CUTQUAD_THREADS"
STUDY_HEADER = ("step", "h", "backend", "q", "value", "reference", "rel_error", "n_points")


class CellStatus(enum.IntEnum):
    Outside = -1
    Cut = 0
    Inside = 1


class StudyFailure(RuntimeError):
    def __init__(self, step, msg: str):
        super().__init__(f"step {step}: {msg}")
        self.step = step


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(threads))


def parallel_map(func: Callable, items: Sequence, threads: int | None = None) -> list:
    """Ordered map; results come back in input order whatever the thread count."""
    n = thread_count(threads)
    if n == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def backend_of(iface: InterfaceSpec) -> str:
    if isinstance(iface, ImplicitRegion):
        return "implicit"
    if isinstance(iface, ParametricRegion):
        return "parametric"
    raise TypeError(f"not an interface description: {type(iface).__name__}")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def cell_status(iface: InterfaceSpec, cell: Cell) -> CellStatus:
    if isinstance(iface, ImplicitRegion):
        status, _ = classify_polynomials(cell_polynomials(iface, cell))
        return CellStatus(status)
    if interior_pieces(iface, cell):
        return CellStatus.Cut
    inside = bool(iface.contains(np.array(cell.center))[0])
    return CellStatus.Inside if inside else CellStatus.Outside


def classify_cells(mesh: BackgroundMesh, iface: InterfaceSpec, threads: int | None = None) -> np.ndarray:
    """Status grid indexed ``[j, i]`` (row j, column i) holding CellStatus values."""
    cells = list(mesh.cells())
    out = parallel_map(lambda c: int(cell_status(iface, c)), cells, threads)
    return np.array(out, dtype=int).reshape(mesh.ny, mesh.nx)


# ---------------------------------------------------------------------------
# domain quadrature
# ---------------------------------------------------------------------------


def cell_quadrature(iface: InterfaceSpec, cell: Cell, q: int) -> QuadratureRule:
    if isinstance(iface, ImplicitRegion):
        return cell_quadrature_implicit(iface, cell, q)
    return cell_quadrature_parametric(iface, cell, q)


@dataclass(frozen=True, eq=False)
class DomainQuadrature:
    """Global rule plus the node range owned by each cell.

    ``offsets[j, i]`` and ``offsets[j, i] + counts[j, i]`` delimit the nodes
    of cell (i, j) in ``rule``.
    """

    rule: QuadratureRule
    offsets: np.ndarray
    counts: np.ndarray

    def cell_slice(self, i: int, j: int) -> slice:
        a = int(self.offsets[j, i])
        return slice(a, a + int(self.counts[j, i]))

    def __len__(self) -> int:
        return len(self.rule)


def domain_quadrature(mesh: BackgroundMesh, iface: InterfaceSpec, q: int, threads: int | None = None) -> DomainQuadrature:
    """Cell-major rule over the mesh; cells are visited row by row."""
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    cells = list(mesh.cells())
    rules = parallel_map(lambda c: cell_quadrature(iface, c, q).with_cell(c.i, c.j), cells, threads)
    counts = np.array([len(r) for r in rules], dtype=int)
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rule = QuadratureRule.concatenate(rules)
    if rule.cells is None:
        rule = QuadratureRule(rule.points, rule.weights, np.zeros((0, 2), dtype=int))
    return DomainQuadrature(rule, offsets.reshape(mesh.ny, mesh.nx), counts.reshape(mesh.ny, mesh.nx))


def _face_rules_implicit(iface: ImplicitRegion, cell: Cell, q: int) -> list[QuadratureRule]:
    """Line rules on faces of an Inside cell along which a constraint vanishes."""
    polys = cell_polynomials(iface, cell)
    out = []
    faces = [
        (1, cell.y0, (cell.x0, cell.x1)),
        (0, cell.x1, (cell.y0, cell.y1)),
        (1, cell.y1, (cell.x0, cell.x1)),
        (0, cell.x0, (cell.y0, cell.y1)),
    ]
    for axis, value, (a, b) in faces:
        if any(P.restrict(axis, value).is_zero(ref=P.scale) for P in polys):
            s, w = gauss_interval(a, b, q)
            pts = np.empty((q, 2))
            pts[:, axis] = value
            pts[:, 1 - axis] = s
            out.append(QuadratureRule(pts, w))
    return out


def cell_boundary_quadrature(iface: InterfaceSpec, cell: Cell, q: int) -> QuadratureRule:
    """Interface line rule owned by ``cell``, including mesh-aligned pieces."""
    if isinstance(iface, ParametricRegion):
        return interface_quadrature_parametric(iface, cell, q)
    status, _ = classify_polynomials(cell_polynomials(iface, cell))
    if status == 0:
        return interface_quadrature_implicit(iface, cell, q)
    if status > 0:
        return QuadratureRule.concatenate(_face_rules_implicit(iface, cell, q))
    return QuadratureRule.empty()


def boundary_quadrature(mesh: BackgroundMesh, iface: InterfaceSpec, q: int, threads: int | None = None) -> QuadratureRule:
    """Line rule on the interface over the whole mesh (weights in length units)."""
    cells = list(mesh.cells())
    rules = parallel_map(lambda c: cell_boundary_quadrature(iface, c, q).with_cell(c.i, c.j), cells, threads)
    return QuadratureRule.concatenate(rules)


def integrate(rule: QuadratureRule | DomainQuadrature, g: Callable | float) -> float:
    """Sum of w_k g(p_k), accumulated with ``math.fsum``."""
    if isinstance(rule, DomainQuadrature):
        rule = rule.rule
    if callable(g):
        vals = np.asarray(g(rule.points), dtype=float)
        vals = np.broadcast_to(vals, rule.weights.shape)
    else:
        vals = np.full(len(rule), float(g))
    return weighted_sum(vals, rule.weights)


# ---------------------------------------------------------------------------
# studies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StudyRecord:
    step: float
    h: float
    backend: str
    q: int
    value: float
    reference: float
    rel_error: float
    n_points: int
    absolute: bool = field(default=False)

    @classmethod
    def make(cls, step, h, backend, q, value, reference, n_points) -> "StudyRecord":
        if reference != 0.0:
            err, absolute = abs(value - reference) / abs(reference), False
        else:
            err, absolute = abs(value - reference), True
        return cls(step, h, backend, q, value, reference, err, n_points, absolute)

    def row(self) -> list[str]:
        return [
            _fmt(self.step),
            _fmt(self.h),
            self.backend,
            str(self.q),
            _fmt(self.value),
            _fmt(self.reference),
            _fmt(self.rel_error),
            str(self.n_points),
        ]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def area_convergence_study(
    iface: InterfaceSpec,
    reference_area: float,
    h_list: Iterable[float],
    q: int,
    backend: str | None = None,
    threads: int | None = None,
) -> list[StudyRecord]:
    """One record per mesh size; ``step`` is the level index."""
    tag = backend or backend_of(iface)
    records = []
    for k, h in enumerate(h_list):
        mesh = BackgroundMesh.unit_square(h)
        dq = domain_quadrature(mesh, iface, q, threads)
        records.append(StudyRecord.make(k, h, tag, q, dq.rule.total, reference_area, len(dq)))
    return records


def sweep_cases(case: str, steps: int):
    """(step parameter, Case) pairs for a robustness sweep.

    Line: the line starts at x = 0.5 and moves right by uniform steps up to
    the domain edge, parameter = displacement. With 101 steps the spacing is
    0.005, so the line visits the mesh lines x = 0.75 and x = 1. Triangle: the apex rotates
    clockwise from (0, 0.5) through 0..45 degrees, parameter = angle in degrees.
    """
    if steps < 2:
        raise ValueError("a sweep needs at least two steps")
    if case == "line":
        for k in range(steps):
            d = 0.5 * k / (steps - 1)
            yield d, line_case(LINE_START + d)
    elif case == "triangle":
        for k in range(steps):
            deg = 45.0 * k / (steps - 1)
            yield deg, triangle_case(math.radians(deg))
    else:
        raise ValueError(f"unknown sweep case {case!r}; choose line or triangle")


def robustness_sweep(
    case: str,
    steps: int,
    q: int,
    backend: str,
    h: float = 0.25,
    threads: int | None = None,
) -> list[StudyRecord]:
    """Move the interface across a fixed mesh; any failing step aborts the sweep."""
    mesh = BackgroundMesh.unit_square(h)
    records = []
    for param, c in sweep_cases(case, steps):
        try:
            dq = domain_quadrature(mesh, c.region(backend), q, threads)
        except Exception as exc:  # the sweep exists to surface exactly these
            raise StudyFailure(param, f"{type(exc).__name__}: {exc}") from exc
        records.append(StudyRecord.make(param, h, backend, q, dq.rule.total, c.area, len(dq)))
    return records


def case_area_study(name: str, h_list, q: int, backend: str, threads: int | None = None) -> list[StudyRecord]:
    c = get_case(name)
    return area_convergence_study(c.region(backend), c.area, h_list, q, backend, threads)


def format_csv(records: Iterable[StudyRecord], header: Sequence[str] = STUDY_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def write_csv(records: Iterable[StudyRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(records))


def is_monotone_decreasing(errors: Sequence[float], allowed_ratio: float = 1.5, allowed_steps: int = 1) -> bool:
    """Strictly decreasing, except at most ``allowed_steps`` increases by <= ``allowed_ratio``."""
    bad = 0
    for a, b in zip(errors[:-1], errors[1:]):
        if b < a:
            continue
        if a > 0 and b / a <= allowed_ratio:
            bad += 1
        else:
            return False
    return bad <= allowed_steps


__all__ = [
    "CellStatus",
    "DomainQuadrature",
    "StudyFailure",
    "StudyRecord",
    "area_convergence_study",
    "backend_of",
    "boundary_quadrature",
    "cell_boundary_quadrature",
    "cell_quadrature",
    "case_area_study",
    "cell_status",
    "classify_cells",
    "domain_quadrature",
    "format_csv",
    "integrate",
    "is_monotone_decreasing",
    "parallel_map",
    "robustness_sweep",
    "sweep_cases",
    "thread_count",
    "write_csv",
]
