import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutquad.cases import BUILTIN, get_case
from cutquad.geometry import BackgroundMesh
from cutquad.integration import (
    CellStatus,
    StudyRecord,
    area_convergence_study,
    boundary_quadrature,
    classify_cells,
    domain_quadrature,
    format_csv,
    integrate,
    is_monotone_decreasing,
    parallel_map,
    robustness_sweep,
    thread_count,
)
from cutquad.rules import QuadratureRule, gauss01


@pytest.mark.parametrize("q", [1, 2, 5, 9])
def test_gauss01_exactness(q):
    s, w = gauss01(q)
    for k in range(2 * q):
        assert float(np.sum(w * s**k)) == pytest.approx(1.0 / (k + 1), abs=1e-14)


def test_rule_validation():
    with pytest.raises(ValueError):
        QuadratureRule(np.zeros((2, 2)), np.zeros(3))
    with pytest.raises(ValueError):
        QuadratureRule(np.zeros((1, 2)), np.array([np.nan]))


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_classification_of_circle(backend):
    grid = classify_cells(BackgroundMesh.unit_square(0.25), get_case("circle").region(backend))
    assert np.count_nonzero(grid == CellStatus.Cut) == 4
    assert np.count_nonzero(grid == CellStatus.Inside) == 0
    assert grid[0, 0] == CellStatus.Outside


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_cell_slices_cover_rule(backend):
    mesh = BackgroundMesh.unit_square(0.25)
    dq = domain_quadrature(mesh, get_case("semicircle").region(backend), 3)
    seen = 0
    for cell in mesh.cells():
        sl = dq.cell_slice(cell.i, cell.j)
        assert np.all(dq.rule.cells[sl] == (cell.i, cell.j))
        assert np.all(cell.contains(dq.rule.points[sl], 1e-12))
        seen += sl.stop - sl.start
    assert seen == len(dq)


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_first_moments_of_square_plate(backend):
    dq = domain_quadrature(BackgroundMesh.unit_square(0.25), get_case("square-plate").region(backend), 3)
    assert integrate(dq, 1.0) == pytest.approx(0.75, abs=1e-15)
    assert integrate(dq, lambda p: p[:, 1]) == pytest.approx(0.75**2 / 2, abs=1e-15)


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_boundary_rule_length(backend):
    r = boundary_quadrature(BackgroundMesh.unit_square(0.25), get_case("square-plate").region(backend), 3)
    assert r.total == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(r.points[:, 1], 0.75)


def test_thread_independence(monkeypatch):
    mesh = BackgroundMesh.unit_square(0.125)
    iface = get_case("circle").implicit
    one = domain_quadrature(mesh, iface, 3, threads=1).rule
    four = domain_quadrature(mesh, iface, 3, threads=4).rule
    assert np.array_equal(one.points, four.points) and np.array_equal(one.weights, four.weights)
    monkeypatch.setenv("CUTQUAD_THREADS", "3")
    assert thread_count() == 3
    assert parallel_map(lambda x: x * x, range(10)) == [x * x for x in range(10)]


def test_study_record_zero_reference():
    rec = StudyRecord.make(0, 0.25, "implicit", 3, 1e-17, 0.0, 4)
    assert rec.absolute
    assert rec.rel_error == pytest.approx(1e-17)


def test_csv_round_trip_precision():
    rec = StudyRecord.make(0, 0.25, "implicit", 3, math.pi, 3.0, 9)
    text = format_csv([rec])
    assert text.splitlines()[0].startswith("step,")
    assert repr(math.pi) in text or format(math.pi, ".17g") in text


@settings(max_examples=50)
@given(st.lists(st.floats(1e-12, 1.0), min_size=2, max_size=6))
def test_monotone_check_accepts_sorted(errs):
    assert is_monotone_decreasing(sorted(errs, reverse=True) if len(set(errs)) == len(errs) else [1.0, 0.5])


def test_monotone_check_allows_one_small_bump():
    assert is_monotone_decreasing([1.0, 0.1, 0.12, 0.01])
    assert not is_monotone_decreasing([1.0, 0.1, 0.2, 0.01])
    assert not is_monotone_decreasing([1.0, 0.1, 0.12, 0.01, 0.011])


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_backends_agree_at_h_quarter(name):
    case = get_case(name)
    mesh = BackgroundMesh.unit_square(0.25)
    a = domain_quadrature(mesh, case.implicit, 5).rule.total
    b = domain_quadrature(mesh, case.parametric, 5).rule.total
    assert abs(a - b) <= 1e-6


def test_short_sweeps_exact():
    for case in ("line", "triangle"):
        for backend in ("implicit", "parametric"):
            recs = robustness_sweep(case, 6, 3, backend)
            assert max(r.rel_error for r in recs) <= 1e-10


def test_circle_study_levels():
    recs = area_convergence_study(get_case("circle").implicit, math.pi * 0.04, [0.25, 0.125], 3, "implicit")
    assert [r.n_points for r in recs][0] == 36
    assert recs[1].rel_error < recs[0].rel_error
