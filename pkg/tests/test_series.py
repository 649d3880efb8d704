import cmath
import math

import numpy as np
import pytest

from pviso.errors import DegenerateParameterError, DomainError, ZeroConstantError
from pviso.linalg import commutator, det2, mat_norm
from pviso.series import (
    DegenerateKind,
    Parameters,
    Truncation,
    domain_check,
    gamma_quad,
    leading_lambda_matrices,
    series_A_pair,
    series_A_pair_degenerate,
)
from pviso.linalg import eigvals2

P1 = Parameters(
    theta0=0.21, thetax=0.16, thetainf=0.11, c0=1.0, cx=0.7 + 0.2j, sigma=0.24 + 0.05j
)


def test_gamma_quad_direct_substitution():
    p = Parameters(theta0=0, thetax=0, thetainf=0, c0=1.0, cx=1.0, sigma=0.4)
    g = gamma_quad(p)
    assert (g.g0p, g.g0m, g.gxp, g.gxm) == (0.1, -0.1, -0.1, 0.1)


def test_gamma_quad_degenerate_sigma_kills_gxm():
    p = P1.replace(sigma=-2.0 * P1.thetax - P1.thetainf)
    assert abs(gamma_quad(p).gxm) < 1e-15


def test_gamma_quad_product_identities():
    rng = np.random.RandomState(4)
    for _ in range(20):
        p = Parameters(
            theta0=complex(rng.randn(), rng.randn()) / 3,
            thetax=complex(rng.randn(), rng.randn()) / 3,
            thetainf=complex(rng.randn(), rng.randn()) / 3,
            c0=complex(rng.randn(), rng.randn()) or 1.0,
            cx=complex(rng.randn(), rng.randn()) or 1.0,
            sigma=complex(rng.randn(), rng.randn()) / 2,
        )
        g = gamma_quad(p)
        id0 = g.p0 - (4.0 * p.theta0**2 - (p.sigma - p.thetainf) ** 2) / 16.0
        idx = g.px - (4.0 * p.thetax**2 - (p.sigma + p.thetainf) ** 2) / 16.0
        assert abs(id0) <= 1e-14
        assert abs(idx) <= 1e-14


def test_gamma_quad_zero_constant_error():
    with pytest.raises(ZeroConstantError):
        gamma_quad(P1.replace(c0=0.0))
    with pytest.raises(ZeroConstantError):
        gamma_quad(P1.replace(cx=0.0))


def test_leading_lambda_matrices():
    p = Parameters(theta0=0.2, thetax=0.3, thetainf=0.1, c0=1.0, cx=1.0, sigma=0.3)
    lam0, lamx = leading_lambda_matrices(p)
    assert lam0[0, 0] == pytest.approx(0.05)
    assert lam0[0, 1] == pytest.approx(0.15)
    e1, e2 = eigvals2(lam0)
    assert abs(e1 - p.theta0 / 2.0) < 1e-14 and abs(e2 + p.theta0 / 2.0) < 1e-14
    assert abs((lam0 + lamx)[0, 0] + p.thetainf / 2.0) < 1e-15


def test_series_leading_value_and_diagonal_relation():
    p = P1.replace(sigma=0.2, thetainf=0.1)
    ab = series_A_pair(p, 1e4j)
    assert abs(ab.f0 - 0.025) <= 1e-4 * 10.0
    assert abs(ab.g0 + ab.f0 + p.thetainf / 2.0) < 1e-15
    ab1 = series_A_pair(P1, 250j)
    assert abs(ab1.g0 + ab1.f0 + P1.thetainf / 2.0) < 1e-15


def test_series_det_defect_decreases_along_ray():
    vals = []
    for r in (100.0, 200.0, 400.0, 800.0):
        ab = series_A_pair(P1, 1j * r)
        vals.append(abs(ab.f0**2 + ab.fplus * ab.fminus - P1.theta0**2 / 4.0))
    for a, b in zip(vals, vals[1:]):
        assert b <= a / 2.0  # monotone up to factor-2 noise; here strictly better


def test_series_schlesinger_residual_scale():
    # finite-difference deformation-equation residual stays within the
    # truncation scale (the det defect times the x-pumping factor)
    x = 200j
    h = 0.02
    e = x / abs(x)
    ser = [series_A_pair(P1, x + k * h * e) for k in (-2, -1, 0, 1, 2)]
    dA0 = (-ser[4].A0 + 8 * ser[3].A0 - 8 * ser[1].A0 + ser[0].A0) / (12 * h * e)
    r0 = mat_norm(x * dA0 - commutator(ser[2].Ax, ser[2].A0))
    defect = abs(det2(ser[2].A0) + P1.theta0**2 / 4.0)
    assert r0 <= 100.0 * abs(x) * defect + 1e-8


def test_degenerate_two_param_leading():
    p = P1.replace(sigma=P1.sigma_deg_plus)
    ab = series_A_pair_degenerate(p, 300j, DegenerateKind.TWO_PARAM)
    lead = -(p.thetax + p.thetainf) / 2.0
    assert abs(ab.f0 - lead) < 5e-3
    assert abs(ab.g0 + ab.f0 + p.thetainf / 2.0) < 1e-15


def test_degenerate_one_param_leading():
    p = P1
    ab = series_A_pair_degenerate(p, 300j, DegenerateKind.ONE_PARAM)
    x_tx = cmath.exp(p.thetax * cmath.log(300j))
    target = (p.theta0 + p.thetax + p.thetainf) / (2.0 * p.c0)
    assert abs(ab.fminus * x_tx - target) <= 1e-2 * abs(target)


def test_degenerate_one_param_zero_coefficient():
    p = P1.replace(theta0=-(P1.thetax + P1.thetainf))
    ab = series_A_pair_degenerate(p, 300j, DegenerateKind.ONE_PARAM)
    assert abs(ab.fminus) < 1e-15
    assert abs(ab.gminus) < 1e-15


def test_degenerate_thetax_zero_rejected():
    p = P1.replace(thetax=0.0)
    with pytest.raises(DegenerateParameterError):
        series_A_pair_degenerate(p, 300j, DegenerateKind.TWO_PARAM)


def test_cx_to_zero_limit_matches_one_param():
    p = P1.replace(sigma=P1.sigma_deg_plus, cx=1e-10)
    generic = series_A_pair(p, 400j, Truncation.L0)
    one = series_A_pair_degenerate(p.replace(cx=0.0), 400j, DegenerateKind.ONE_PARAM)
    assert abs(generic.f0 - one.f0) < 1e-4
    assert abs(generic.fplus - one.fplus) <= 1e-2 * max(1.0, abs(one.fplus))
    assert abs(generic.fminus - one.fminus) <= 1e-2 * max(1.0, abs(one.fminus))


def test_domain_check_examples():
    p0 = P1.replace(sigma=0.2)
    assert domain_check(p0, 100j, 0.1) is True
    assert domain_check(p0, 100.0, 0.1) is False
    # direct inequality oracle for sigma = 3: the admissible band demands
    # Re x < (1 - 3) log|x| - log(1/eps) < 0, so the imaginary axis fails
    p3 = P1.replace(sigma=3.0)
    hi = (1.0 - 3.0) * math.log(100.0) + math.log(0.1)
    assert 0.0 > hi or not domain_check(p3, 100j, 0.1)
    assert domain_check(p3, 100j, 0.1) is False


def test_series_outside_domain_raises():
    with pytest.raises(DomainError):
        series_A_pair(P1, 5j)


def test_branch_argument_is_tracked():
    # same modulus, arg shifted by 2*pi: entries with non-integer powers differ
    ab0 = series_A_pair(P1, 200j)
    ab1 = series_A_pair(P1, 200j, arg_x=math.pi / 2.0 + 2.0 * math.pi, check_domain=False)
    assert abs(ab0.fplus - ab1.fplus) > 1e-6
    assert abs(ab0.f0 - ab1.f0) > 0.0  # E+ powers shift too
