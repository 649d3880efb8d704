import numpy as np
import pytest

from pviso.errors import OriginError, PathError
from pviso.flow import FlowState, integrate, refine_from_series, rhs
from pviso.linalg import DELTA_MINUS, DELTA_PLUS, J, det2, mat_norm, tr2
from pviso.series import Parameters, Truncation, series_A_pair

P1 = Parameters(
    theta0=0.21, thetax=0.16, thetainf=0.11, c0=1.0, cx=0.7 + 0.2j, sigma=0.24 + 0.05j
)


def _series_state(p, x, order=Truncation.L1):
    ab = series_A_pair(p, x, order)
    return FlowState(x=ab.x, A0=ab.A0, Ax=ab.Ax, params=p, validate=False)


def test_rhs_diagonal_pair_is_stationary():
    p = P1.replace(thetainf=-(P1.theta0 + P1.thetax))
    s = FlowState(
        x=3j,
        A0=np.diag([P1.theta0 / 2, -P1.theta0 / 2]),
        Ax=np.diag([P1.thetax / 2, -P1.thetax / 2]),
        params=p,
        validate=False,
    )
    d0, dx = rhs(s)
    assert mat_norm(d0) == 0.0
    assert mat_norm(dx) == 0.0


def test_rhs_nilpotent_example():
    p = P1.replace(thetainf=0.0)
    s = FlowState(x=1.0, A0=np.array(DELTA_PLUS), Ax=np.array(DELTA_MINUS), params=p, validate=False)
    d0, dx = rhs(s)
    assert np.allclose(d0, -J)
    assert np.allclose(dx, J - DELTA_MINUS)


def test_rhs_traceless():
    s = _series_state(P1, 200j)
    d0, dx = rhs(s)
    assert abs(tr2(d0)) < 1e-15
    assert abs(tr2(dx)) < 1e-15


def test_rhs_origin_error():
    s = _series_state(P1, 200j)
    s.x = 0.0
    with pytest.raises(OriginError):
        rhs(s)


def test_integrate_noop():
    s = _series_state(P1, 200j)
    out = integrate(s, 200j, 1e-12)
    assert out is not s
    assert mat_norm(out.A0 - s.A0) == 0.0


def test_integrate_path_through_origin_rejected():
    s = _series_state(P1, 200j)
    with pytest.raises(PathError):
        integrate(s, -200j, 1e-12)


def test_flow_matches_series_within_truncation():
    s = _series_state(P1, 200j)
    out = integrate(s, 60j, 1e-12)
    ab = series_A_pair(P1, 60j)
    defect = abs(det2(ab.A0) + P1.theta0**2 / 4.0) + abs(
        det2(ab.Ax) + P1.thetax**2 / 4.0
    )
    bound = 20.0 * defect + 1e-10
    assert mat_norm(out.A0 - ab.A0) <= bound
    assert mat_norm(out.Ax - ab.Ax) <= bound


def test_flow_conserves_determinants():
    s = _series_state(P1, 200j)
    out = integrate(s, 60j, 1e-12)
    assert abs(det2(out.A0) - det2(s.A0)) <= 1e-10
    assert abs(det2(out.Ax) - det2(s.Ax)) <= 1e-10


def test_flow_invariants_within_budget():
    s = _series_state(P1, 300j)
    tol = 1e-12
    out = integrate(s, 45j, tol)
    before, after = s.invariants(), out.invariants()
    scale = 1.0 + mat_norm(s.A0) + mat_norm(s.Ax)
    for key in before:
        assert abs(after[key] - before[key]) <= 100.0 * tol * scale


def test_flow_roundtrip():
    tol = 1e-12
    s = _series_state(P1, 200j)
    there = integrate(s, 60j, tol)
    back = integrate(there, 200j, tol)
    assert mat_norm(back.A0 - s.A0) <= 1000.0 * tol
    assert mat_norm(back.Ax - s.Ax) <= 1000.0 * tol


def test_flow_stays_bounded_on_axis():
    s = _series_state(P1, 400j)
    out = integrate(s, 40j, 1e-12)
    assert mat_norm(out.A0) < 5.0
    assert mat_norm(out.Ax) < 5.0


def test_refine_noop_at_seed():
    res = refine_from_series(P1, 200.0, 200j, 1e-12, diagnostics=False, project=False)
    ab = series_A_pair(P1, 200j)
    assert mat_norm(res.state.A0 - ab.A0) == 0.0
    # with the projection the state moves only within the det-defect ball
    proj = refine_from_series(P1, 200.0, 200j, 1e-12, diagnostics=False)
    defect = abs(det2(proj.state.A0) + P1.theta0**2 / 4.0)
    assert defect < 1e-14
    assert mat_norm(proj.state.A0 - ab.A0) < 1e-6


def test_refine_zero_solution():
    p = Parameters(theta0=0, thetax=0, thetainf=0, c0=1.0, cx=1.0, sigma=0)
    res = refine_from_series(p, 400.0, 40j, 1e-12)
    assert mat_norm(res.state.A0) < 1e-13
    assert mat_norm(res.state.Ax) < 1e-13
    assert res.diagnostic < 1e-13


def test_refine_convergence_diagnostic():
    res = refine_from_series(P1, 400.0, 40j, 1e-12)
    assert res.diagnostic <= 1e-6


def test_refine_waypoint_polyline():
    target = -2.0 + 45j
    res = refine_from_series(
        P1, 300.0, target, 1e-12, diagnostics=False, waypoints=[45j]
    )
    direct = refine_from_series(P1, 300.0, target, 1e-12, diagnostics=False)
    assert mat_norm(res.state.A0 - direct.state.A0) < 1e-9
