"""Triangle membrane elements, assembly, and the projected-Newton solver."""

import numpy as np
import pytest

import membrane_eig as me
from membrane_eig import fem

UNIT_TRIANGLE = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
TRI = [[0, 1, 2]]


def five_triangle_patch():
    rest, tris = me.grid_mesh(2, 1)  # 6 vertices, 4 triangles
    extra = np.array([[1.25, 0.9, 0.0]])
    rest = np.vstack([rest, extra])
    tris = np.vstack([tris, [[2, 6, 5]]])
    return rest, tris


def test_rest_elements_unit_triangle():
    (el,) = me.build_rest_elements(UNIT_TRIANGLE, TRI)
    assert el.indices == (0, 1, 2)
    assert el.area == 0.5
    assert np.array_equal(el.dm_inv, np.eye(2))


def test_rest_elements_frame_invariant_area():
    rng = np.random.default_rng(2)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    moved = UNIT_TRIANGLE @ q.T + np.array([3.0, -2.0, 5.0])
    (el,) = me.build_rest_elements(moved, TRI)
    assert el.area == pytest.approx(0.5, abs=1e-14)
    det = np.linalg.det(el.dm_inv)
    assert abs(abs(det) - 1.0) < 1e-12


def test_rest_elements_degenerate_triangle():
    collinear = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    with pytest.raises(me.DegenerateTriangle) as exc:
        me.build_rest_elements(collinear, TRI)
    assert exc.value.element == 0


def test_deformation_gradient_rest_and_stretch():
    (el,) = me.build_rest_elements(UNIT_TRIANGLE, TRI)
    f = me.element_deformation_gradient(el, *UNIT_TRIANGLE)
    assert np.array_equal(f, np.eye(3)[:, :2])
    f2 = me.element_deformation_gradient(el, *(2.0 * UNIT_TRIANGLE))
    assert np.array_equal(f2, 2.0 * np.eye(3)[:, :2])


def test_total_energy_single_triangle_stretch():
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0))
    assert me.total_energy(problem, UNIT_TRIANGLE) == 0.0
    assert me.total_energy(problem, 2.0 * UNIT_TRIANGLE) == pytest.approx(
        1.265625, abs=1e-14
    )


def test_total_energy_gravity_term():
    gravity = np.array([0.0, 0.0, -2.0])
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), gravity=gravity)
    base = me.total_energy(problem, UNIT_TRIANGLE)
    assert base == pytest.approx(-float(UNIT_TRIANGLE.sum(axis=0) @ gravity), abs=1e-15)


def test_mu_scale_scales_energy():
    rest, tris = five_triangle_patch()
    x = rest * np.array([1.2, 0.9, 1.0])
    plain = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0))
    doubled = me.make_problem(
        rest, tris, me.NeoHookeanSheet(1.0), mu_scale=np.full(len(tris), 2.0)
    )
    assert me.total_energy(doubled, x) == pytest.approx(
        2.0 * me.total_energy(plain, x), rel=1e-14
    )


def test_make_problem_validation():
    with pytest.raises(ValueError):
        me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), pins=[(0, [0, 0, 0]), (0, [1, 1, 1])])
    with pytest.raises(ValueError):
        me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), pins={5: [0, 0, 0]})
    with pytest.raises(ValueError):
        me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), pins={0: [np.nan, 0, 0]})
    with pytest.raises(ValueError):
        me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), mu_scale=[1.0, 2.0])


def test_pin_mask_and_apply():
    problem = me.make_problem(
        UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0), pins={1: [5.0, 6.0, 7.0]}
    )
    mask = problem.pinned_dof_mask()
    assert np.array_equal(np.nonzero(mask)[0], [3, 4, 5])
    snapped = problem.apply_pins(UNIT_TRIANGLE)
    assert np.array_equal(snapped[1], [5.0, 6.0, 7.0])
    assert np.array_equal(snapped[0], UNIT_TRIANGLE[0])


def test_assemble_pinned_rows_are_identity():
    rest, tris = five_triangle_patch()
    x = rest * np.array([1.1, 0.95, 1.0])
    problem = me.make_problem(
        rest, tris, me.NeoHookeanSheet(1.0), pins={0: x[0], 3: x[3]}
    )
    _, grad, hess = me.assemble(problem, x)
    mask = problem.pinned_dof_mask()
    assert np.all(grad[mask] == 0.0)
    dense = hess.toarray()
    for i in np.nonzero(mask)[0]:
        row = np.zeros(dense.shape[0])
        row[i] = 1.0
        assert np.array_equal(dense[i], row)
        assert np.array_equal(dense[:, i], row)
    sym_err = np.max(np.abs(dense - dense.T))
    assert sym_err < 1e-12


def test_assemble_validates_positions():
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0))
    with pytest.raises(ValueError):
        me.assemble(problem, np.zeros((2, 3)))
    bad = UNIT_TRIANGLE.copy()
    bad[0, 0] = np.inf
    with pytest.raises(ValueError):
        me.assemble(problem, bad)


def test_gradient_fd_five_triangle_patch():
    rest, tris = five_triangle_patch()
    rng = np.random.default_rng(31)
    x = rest * np.array([1.15, 0.9, 1.0]) + 0.03 * rng.uniform(-1, 1, rest.shape)
    problem = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0))
    _, grad, _ = me.assemble(problem, x)
    h = 1e-5
    flat = x.reshape(-1)
    for i in range(flat.size):
        xp, xm = flat.copy(), flat.copy()
        xp[i] += h
        xm[i] -= h
        fd = (
            me.total_energy(problem, xp.reshape(-1, 3))
            - me.total_energy(problem, xm.reshape(-1, 3))
        ) / (2.0 * h)
        assert abs(fd - grad[i]) < 1e-5


def test_domain_error_reports_element():
    rest, tris = five_triangle_patch()
    x = rest.copy()
    x[6] = x[2]  # collapse the fifth triangle only
    problem = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0))
    with pytest.raises(me.DomainError) as exc:
        me.total_energy(problem, x)
    assert exc.value.element == 4


def test_newton_rest_state_converges_immediately():
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0))
    x, report = me.newton_solve(problem, UNIT_TRIANGLE)
    assert report.termination == "converged"
    assert report.iterations == 0
    assert report.history == ((0, 0.0, 0.0, 0.0),)
    assert np.array_equal(x, UNIT_TRIANGLE)


def test_newton_stretch_patch_converges():
    rest, tris = me.grid_mesh(4, 4)
    pins = {}
    for j in range(5):
        for i in (0, 4):
            v = i + j * 5
            pins[v] = [1.5 * rest[v][0] - 0.25, rest[v][1], 0.0]
    problem = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0), pins=pins)
    seen = []
    x, report = me.newton_solve(
        problem, rest, callback=lambda it, pos: seen.append(it)
    )
    assert report.termination == "converged"
    assert report.history[-1][2] <= 1e-8
    energies = [row[1] for row in report.history]
    assert all(b <= a + 1e-15 for a, b in zip(energies, energies[1:]))
    assert seen == [row[0] for row in report.history]
    # All accepted states satisfy the pins.
    assert np.max(np.abs(x[list(pins)] - np.array(list(pins.values())))) < 1e-15


def test_newton_max_iters_termination():
    rest, tris = me.grid_mesh(3, 3)
    pins = {}
    for j in range(4):
        for i in (0, 3):
            v = i + j * 4
            pins[v] = [1.4 * rest[v][0] - 0.2, rest[v][1], 0.0]
    problem = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0), pins=pins)
    _, report = me.newton_solve(problem, rest, me.NewtonConfig(max_iters=1))
    assert report.termination == "max_iters"
    assert report.iterations == 1
    assert len(report.history) == 2


def test_newton_inadmissible_start_fails():
    collapsed = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0))
    with pytest.raises(me.LineSearchFailed):
        me.newton_solve(problem, collapsed)


def test_newton_recovers_from_near_floor_start():
    # Start barely admissible and heavily compressed; line search must
    # reject overshoots (DomainError treated as rejection) and still solve.
    problem = me.make_problem(UNIT_TRIANGLE, TRI, me.NeoHookeanSheet(1.0))
    squashed = UNIT_TRIANGLE * np.array([1.0, 0.05, 1.0])
    x, report = me.newton_solve(problem, squashed)
    assert report.termination == "converged"
    assert report.history[-1][1] < me.total_energy(problem, squashed)


def test_linear_solve_failure_surfaces(monkeypatch):
    rest, tris = five_triangle_patch()
    x = rest * np.array([1.2, 0.9, 1.0])
    problem = me.make_problem(rest, tris, me.NeoHookeanSheet(1.0), pins={0: x[0]})

    def always_fails(*args, **kwargs):
        raise RuntimeError("factorization failed")

    monkeypatch.setattr(fem.spla, "splu", always_fails)
    with pytest.raises(me.LinearSolveFailed):
        me.newton_solve(problem, x)


def test_solve_report_to_dict():
    report = me.SolveReport(
        iterations=1,
        history=((0, 2.0, 0.5, 0.0), (1, 1.0, 1e-9, 1.0)),
        termination="converged",
    )
    d = report.to_dict()
    assert d["iterations"] == 1
    assert d["termination"] == "converged"
    assert d["history"][1] == {
        "iteration": 1,
        "energy": 1.0,
        "grad_norm": 1e-9,
        "step": 1.0,
    }


def test_gravity_sag_of_taut_sheet():
    # A flat sheet has zero transverse stiffness at rest, so pre-stretch it:
    # pinned opposite edges at 1.4x keep it taut while gravity pulls it down.
    rest, tris = me.grid_mesh(3, 3)
    pins = {}
    for j in range(4):
        for i in (0, 3):
            v = i + j * 4
            pins[v] = [1.4 * rest[v][0] - 0.2, rest[v][1], 0.0]
    problem = me.make_problem(
        rest, tris, me.NeoHookeanSheet(1.0), pins=pins, gravity=[0.0, 0.0, -0.01]
    )
    x0 = rest.copy()
    x0[:, 0] = 1.4 * rest[:, 0] - 0.2  # start from the taut affine state
    x, report = me.newton_solve(problem, x0)
    assert report.termination == "converged"
    free = [v for v in range(len(rest)) if v not in pins]
    assert np.min(x[free, 2]) < -1e-4  # membrane sags downward
