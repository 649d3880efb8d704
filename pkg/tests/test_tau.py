import numpy as np
import pytest

from pviso.flow import FlowState, integrate, refine_from_series
from pviso.series import Parameters
from pviso.tau import bilinear_residual, dlog_tau, dlog_tau_series

P1 = Parameters(
    theta0=0.21, thetax=0.16, thetainf=0.11, c0=1.0, cx=0.7 + 0.2j, sigma=0.24 + 0.05j
)


@pytest.fixture(scope="module")
def state40():
    return refine_from_series(P1, 400.0, 40j, 1e-12, diagnostics=False).state


def test_dlog_tau_zero_state():
    p = Parameters(theta0=0, thetax=0, thetainf=0, c0=1.0, cx=1.0, sigma=0)
    s = FlowState(x=20j, A0=np.zeros((2, 2), complex), Ax=np.zeros((2, 2), complex), params=p)
    assert dlog_tau(s) == 0.0


def test_dlog_tau_direct_example():
    # A0 = Ax = J at x = 2 with thetainf = 0: tr(A0 Ax)/x - tr(A0 J)/2 = 1 - 1
    p = Parameters(theta0=0, thetax=0, thetainf=0, c0=1.0, cx=1.0, sigma=0)
    J = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    s = FlowState(x=2.0, A0=J, Ax=J, params=p, validate=False)
    assert dlog_tau(s) == 0.0


def test_dlog_tau_two_forms_agree(state40):
    # the double evaluation inside dlog_tau raises if the two printed
    # forms split by more than 1e-12
    dlog_tau(state40)


def test_series_leading_constant():
    val = dlog_tau_series(P1, 1e6j, check_domain=False)
    assert abs(val + (P1.sigma + P1.thetainf) / 4.0) < 1e-5


def test_series_forced_zeros():
    p = P1.replace(sigma=-P1.thetainf)
    v1 = dlog_tau_series(p, 1e5j, check_domain=False)
    v2 = dlog_tau_series(p, 2e5j, check_domain=False)
    # constant and 1/x coefficient both vanish; only exponential tails left
    assert abs(v1) < 1e-8 and abs(v2) < 1e-8


def test_series_no_exp_term_on_degenerate_branch():
    p = P1.replace(sigma=P1.sigma_deg_plus)
    # gxm = 0 kills the e^-x term; the e^x term coefficient g0m * gxp stays
    from pviso.series import gamma_quad

    g = gamma_quad(p)
    assert abs(g.gxm) < 1e-15


def test_flow_vs_series(state40):
    st = integrate(state40, 100j, 1e-12)
    assert abs(dlog_tau(st) - dlog_tau_series(P1, 100j)) <= 1e-3


def test_flow_vs_series_ratio_exponent(state40):
    st = state40
    diffs = []
    for X in (50j, 100j, 200j):
        st = integrate(st, X, 1e-12)
        diffs.append(abs(dlog_tau(st) - dlog_tau_series(P1, X)))
    slope = np.polyfit(np.log([50.0, 100.0, 200.0]), np.log(diffs), 1)[0]
    assert -slope == pytest.approx(2.0, abs=0.3)


def test_bilinear_residual_small_and_h_converging(state40):
    r1 = abs(bilinear_residual(P1, 40j, 4e-2, state=state40))
    r2 = abs(bilinear_residual(P1, 40j, 2e-2, state=state40))
    r3 = abs(bilinear_residual(P1, 40j, 1e-2, state=state40))
    assert r3 <= 1e-3
    assert r1 / r2 >= 2.0
    assert r2 / r3 >= 2.0


def test_bilinear_zero_state():
    p = Parameters(theta0=0, thetax=0, thetainf=0, c0=1.0, cx=1.0, sigma=0)
    s = FlowState(x=40j, A0=np.zeros((2, 2), complex), Ax=np.zeros((2, 2), complex), params=p)
    assert abs(bilinear_residual(p, 40j, 1e-2, state=s)) < 1e-12


def test_tau_sample_stencil_refinement(state40):
    # halving the stencil step shrinks the derivative-estimate error
    # roughly fourfold (second-order stencils)
    from pviso.tau import tau_sample

    coarse = tau_sample(P1, 40j, 2e-2, state=state40)
    fine = tau_sample(P1, 40j, 1e-2, state=state40)
    finest = tau_sample(P1, 40j, 5e-3, state=state40)
    assert coarse.higher_derivs is not None
    err_coarse = abs(coarse.higher_derivs[1] - finest.higher_derivs[1])
    err_fine = abs(fine.higher_derivs[1] - finest.higher_derivs[1])
    assert err_fine <= err_coarse / 2.5
