import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutquad.cases import get_case
from cutquad.elasticity.bspline import BsplineSpace
from cutquad.elasticity.exact import (
    Material,
    manufactured_body_force,
    manufactured_exact,
    manufactured_gradient,
    manufactured_traction,
    plate_hole_exact,
    plate_hole_gradient,
    plate_hole_stress,
    plate_hole_traction,
)
from cutquad.elasticity.benchmarks import convergence_order, run_benchmark
from cutquad.elasticity.bspline import basis_1d, open_uniform_knots
from cutquad.elasticity.fem import (
    Traction,
    apply_boundary_conditions,
    assemble,
    dirichlet_dofs,
    edge_rule,
    project_edge_trace,
    relative_l2_error,
    solve,
)
from cutquad.geometry import BackgroundMesh, HalfPlane, ImplicitRegion, polygon_region
from cutquad.quad_implicit import interface_quadrature_implicit
from cutquad.quad_parametric import interface_quadrature_parametric
from cutquad.rules import QuadratureRule
from oracles import kirsch_stress, manufactured_field, q4_stiffness

FULL = ImplicitRegion((HalfPlane(1.0, 0.0, 10.0),))
unit = st.floats(0.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 6), unit)
def test_partition_of_unity(p, n, t):
    U = open_uniform_knots(n, p)
    _, N, dN = basis_1d(U, p, np.array([t]))
    assert N.sum() == pytest.approx(1.0, abs=1e-14)
    assert dN.sum() == pytest.approx(0.0, abs=1e-10)
    assert np.all(N >= -1e-15)


def test_q4_stiffness_matches_textbook_element():
    mesh = BackgroundMesh.unit_square(1.0)
    space = BsplineSpace(mesh, 1)
    m = Material(1.0, 0.3)
    K = assemble(space, mesh, FULL, m, q=2).K.toarray()
    assert np.allclose(K, q4_stiffness(1.0, 1.0, 1.0, 0.3), atol=1e-14)


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_stiffness_symmetric_with_rigid_kernel(backend):
    mesh = BackgroundMesh.unit_square(0.25)
    space = BsplineSpace(mesh, 2)
    iface = get_case("plate-hole").region(backend)
    K = assemble(space, mesh, iface, Material()).K
    assert abs(K - K.T).max() <= 1e-12 * abs(K).max()
    # Greville abscissae reproduce linear fields: rigid motions lie in the kernel
    gx = np.convolve(space.knots_x[1:-1], np.ones(2) / 2, "valid")
    gy = np.convolve(space.knots_y[1:-1], np.ones(2) / 2, "valid")
    X, Y = np.meshgrid(gx, gy)
    xy = np.column_stack([X.ravel(), Y.ravel()])
    for mode in (np.tile([1.0, 0.0], space.dim), np.tile([0.0, 1.0], space.dim), np.column_stack([-xy[:, 1], xy[:, 0]]).ravel()):
        assert np.abs(K @ mode).max() <= 1e-12 * abs(K).max()


@pytest.mark.parametrize("backend", ["implicit", "parametric"])
def test_patch_test_linear_field(backend):
    """A linear displacement is reproduced exactly on a domain with a straight trim line."""
    m = Material()
    A = np.array([[0.01, -0.02], [0.03, 0.015]])
    exact = lambda x: np.asarray(x) @ A.T  # noqa: E731
    stress = m.D @ np.array([A[0, 0], A[1, 1], A[0, 1] + A[1, 0]])
    sigma = np.array([[stress[0], stress[2]], [stress[2], stress[1]]])
    mesh = BackgroundMesh.unit_square(0.25)
    space = BsplineSpace(mesh, 2)
    cut = (ImplicitRegion((HalfPlane(1.0, 1.0, 1.6),)) if backend == "implicit"
           else polygon_region([(-1.0, -1.0), (2.6, -1.0), (-1.0, 2.6)]))
    n = np.array([1.0, 1.0]) / math.sqrt(2.0)
    tr = [Traction(_interface_rule(mesh, cut), lambda x: np.tile(sigma @ n, (len(x), 1)))]
    system = assemble(space, mesh, cut, m, 4, tractions=tr)
    cons = {}
    for edge in ("bottom", "left", "top", "right"):
        for c in (0, 1):
            cons.update(dirichlet_dofs(space, edge, c, lambda x, c=c: exact(x)[:, c]))
    apply_boundary_conditions(system, cons)
    field = solve(system, estimate_condition=False)
    assert relative_l2_error(field, exact, mesh, cut, 4) < 1e-10


def _interface_rule(mesh, iface):
    rules = []
    for cell in mesh.cells():
        if isinstance(iface, ImplicitRegion):
            r = interface_quadrature_implicit(iface, cell, 3)
        else:
            r = interface_quadrature_parametric(iface, cell, 3)
        if len(r):
            rules.append(r.with_cell(cell.i, cell.j))
    return QuadratureRule.concatenate(rules)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3))
def test_edge_projection_reproduces_polynomials(p):
    space = BsplineSpace(BackgroundMesh.unit_square(0.25), p)
    g = lambda x: 0.3 + x[:, 0] - 0.5 * x[:, 0] ** p  # noqa: E731
    c = project_edge_trace(space, "bottom", g)
    U = space.knots_x
    t = np.linspace(0, 1, 17)
    _, N, _ = basis_1d(U, p, t)
    s, _, _ = basis_1d(U, p, t)
    vals = np.array([N[k] @ c[s[k] - p : s[k] + 1] for k in range(len(t))])
    assert np.allclose(vals, g(np.column_stack([t, 0 * t])), atol=1e-12)


def test_plate_hole_exact_value():
    assert plate_hole_exact(np.array([[0.25, 0.0]]))[0, 0] == pytest.approx(6.825, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 1.0), st.floats(0.0, math.pi / 2))
def test_plate_hole_stress_matches_textbook(r, th):
    x, y = r * math.cos(th), r * math.sin(th)
    s = plate_hole_stress(np.array([[x, y]]))[0]
    S = kirsch_stress(x, y, 10.0, 0.25)
    assert np.allclose(np.asarray(s).reshape(-1)[:3], [S[0, 0], S[1, 1], S[0, 1]], atol=1e-10) or np.allclose(
        np.asarray(s).reshape(2, 2), S, atol=1e-10
    )


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 1.0), st.floats(0.0, math.pi / 2))
def test_plate_hole_gradient_fd(r, th):
    p = np.array([[r * math.cos(th), r * math.sin(th)]])
    e = 1e-6
    g = plate_hole_gradient(p)[0]
    fx = (plate_hole_exact(p + [e, 0]) - plate_hole_exact(p - [e, 0]))[0] / (2 * e)
    fy = (plate_hole_exact(p + [0, e]) - plate_hole_exact(p - [0, e]))[0] / (2 * e)
    assert np.allclose(g, np.column_stack([fx, fy]), atol=1e-6)


def test_hole_is_traction_free():
    th = np.linspace(0, math.pi / 2, 50)
    pts = 0.25 * np.column_stack([np.cos(th), np.sin(th)])
    t = plate_hole_traction(pts, -pts / 0.25)
    assert np.abs(t).max() <= 1e-10


def test_manufactured_field_and_traction():
    pts = np.random.default_rng(3).random((20, 2))
    u = manufactured_exact(pts)
    ref = np.array([manufactured_field(x, y) for x, y in pts])
    assert np.allclose(u, ref, atol=1e-14)
    m = Material()
    g = manufactured_gradient(pts)
    t = manufactured_traction(pts, (0.0, 1.0), m)
    eps = np.stack([g[:, 0, 0], g[:, 1, 1], g[:, 0, 1] + g[:, 1, 0]], axis=1)
    sig = eps @ m.D.T
    assert np.allclose(t, np.column_stack([sig[:, 2], sig[:, 1]]), atol=1e-12)


def test_body_force_balances_stress():
    m = Material()
    pts = np.random.default_rng(1).random((30, 2))
    e = 1e-5

    def sig(p):
        g = manufactured_gradient(p)
        eps = np.stack([g[:, 0, 0], g[:, 1, 1], g[:, 0, 1] + g[:, 1, 0]], axis=1)
        return eps @ m.D.T

    dsx = (sig(pts + [e, 0]) - sig(pts - [e, 0])) / (2 * e)
    dsy = (sig(pts + [0, e]) - sig(pts - [0, e])) / (2 * e)
    div = np.column_stack([dsx[:, 0] + dsy[:, 2], dsx[:, 2] + dsy[:, 1]])
    assert np.allclose(manufactured_body_force(pts, m), -div, atol=1e-5)


def test_material_constants():
    m = Material(1.0, 0.3)
    assert m.mu == pytest.approx(1 / 2.6)
    assert m.kolosov == pytest.approx(1.8)


def test_square_plate_small_run():
    r = run_benchmark("square-plate", "implicit", 2, 0.125)
    assert r.rel_l2_error == pytest.approx(0.00476, rel=1e-2)
    assert r.n_dofs > 0 and r.cond_estimate > 1


def test_convergence_order_of_power_law():
    h = [0.25, 0.125, 0.0625]
    assert convergence_order(h, [3 * x**3 for x in h]) == pytest.approx(3.0)
