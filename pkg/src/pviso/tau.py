"""Tau-function log-derivative from matrix data, its truncated expansion,
and the fourth-order bilinear residual.

tau itself is never materialized (it is defined up to a constant); all
checks run on H = (log tau)' and its finite-difference derivatives,
using the homogeneity of the bilinear form to divide out tau^2.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import ConsistencyError, PvisoValueError
from .flow import FlowState, integrate, refine_from_series
from .series import Parameters, domain_check, gamma_quad

__all__ = ["TauSample", "dlog_tau", "dlog_tau_series", "tau_sample", "bilinear_residual"]


@dataclass
class TauSample:
    x: complex
    dlogtau: complex
    higher_derivs: list[complex] | None = None  # d^k/dx^k log tau, k = 2..4


def dlog_tau(s: FlowState) -> complex:
    """(log tau)' from the pair: tr(A0 Ax)/x - tr(A0 J/2) - thetainf/2.

    The equivalent entry form (Ax)_11 + (2 (A0)_11 (Ax)_11 +
    (A0)_12 (Ax)_21 + (A0)_21 (Ax)_12)/x is evaluated as well; the two
    are algebraically identical for traceless pairs and must agree.
    """
    if s.x == 0:
        raise PvisoValueError("x = 0")
    a0, ax = s.A0, s.Ax
    tr_prod = (
        a0[0, 0] * ax[0, 0]
        + a0[0, 1] * ax[1, 0]
        + a0[1, 0] * ax[0, 1]
        + a0[1, 1] * ax[1, 1]
    )
    form_a = tr_prod / s.x - (a0[0, 0] - a0[1, 1]) / 2.0 - s.params.thetainf / 2.0
    # the two forms coincide exactly when the diagonal normalization
    # (A0+Ax)_11 = -thetainf/2 holds; enforce agreement only then
    b_defect = abs(a0[0, 0] + ax[0, 0] + s.params.thetainf / 2.0)
    if b_defect < 1e-9 * (1.0 + abs(a0[0, 0]) + abs(ax[0, 0])):
        form_b = ax[0, 0] + (
            2.0 * a0[0, 0] * ax[0, 0] + a0[0, 1] * ax[1, 0] + a0[1, 0] * ax[0, 1]
        ) / s.x
        if abs(form_a - form_b) > 1e-12 * (1.0 + abs(form_a)):
            raise ConsistencyError(
                f"tau log-derivative forms disagree: {form_a} vs {form_b}"
            )
    return form_a


def dlog_tau_series(p: Parameters, x: complex, *, check_domain: bool = True, eps: float = 0.1) -> complex:
    """Printed terms of the expansion:

        -(sigma+thetainf)/4 - (sigma^2-thetainf^2)/(8x)
        - g0m gxp e^x x^(sigma-2) + g0p gxm e^-x x^(-sigma-2).

    The x^-2 constant term and all later brackets are intentionally not
    included; the leading omitted term is O(x^-2)."""
    if check_domain and not domain_check(p, x, eps):
        raise PvisoValueError(f"x = {x} outside the admissible strip")
    g = gamma_quad(p)
    s, ti = p.sigma, p.thetainf
    xs = cmath.exp(s * cmath.log(x))
    ep2 = cmath.exp(x) * xs / (x * x)  # e^x x^(sigma-2)
    em2 = 1.0 / (cmath.exp(x) * xs * x * x)  # e^-x x^(-sigma-2)
    return (
        -(s + ti) / 4.0
        - (s * s - ti * ti) / (8.0 * x)
        - g.g0m * g.gxp * ep2
        + g.g0p * g.gxm * em2
    )


def _h_stencil(state: FlowState, x: complex, h: float, tol: float):
    unit = x / abs(x)
    hs = []
    anchor = state
    for k in range(-2, 3):
        target = x + k * h * unit
        anchor = integrate(anchor, target, tol) if anchor.x != target else anchor
        hs.append(dlog_tau(anchor))
    return hs, unit


def tau_sample(
    p: Parameters,
    x: complex,
    h: float = 1e-2,
    *,
    state: FlowState | None = None,
    tol: float = 1e-12,
) -> TauSample:
    """Sample (log tau)' at x together with finite-difference estimates
    of the second through fourth log-derivatives."""
    x = complex(x)
    if state is None:
        state = refine_from_series(p, max(300.0, 3.0 * abs(x)), x, tol, diagnostics=False).state
    hs, unit = _h_stencil(state, x, h, tol)
    hm2, hm1, h0, hp1, hp2 = hs
    step = h * unit
    d1 = (hp1 - hm1) / (2.0 * step)
    d2 = (hp1 - 2.0 * h0 + hm1) / (step * step)
    d3 = (hp2 - 2.0 * hp1 + 2.0 * hm1 - hm2) / (2.0 * step**3)
    return TauSample(x=x, dlogtau=h0, higher_derivs=[d1, d2, d3])


def bilinear_residual(
    p: Parameters,
    x: complex,
    h: float = 1e-2,
    *,
    state: FlowState | None = None,
    tol: float = 1e-12,
    seed_radius: float | None = None,
) -> complex:
    """Residual of the fourth-order bilinear equation divided by tau^2.

    With H = (log tau)' and r1 = H, r2 = H' + H^2,
    r3 = H'' + 3 H H' + H^3, r4 = H''' + 4 H H'' + 3 H'^2 + 6 H^2 H' + H^4:

        x^3 (r4 - 4 r1 r3 + 3 r2^2) + 4 x^2 (r3 - r1 r2)
        - (x^2 - 2 thetainf x + theta0^2 + thetax^2) x (r2 - r1^2)
        + 2 x r2 + (thetainf x - theta0^2 - thetax^2) r1
        - thetax^2 thetainf / 2.

    H-derivatives come from second-order centered differences on a
    5-point stencil along the ray.
    """
    x = complex(x)
    if state is None:
        seed = seed_radius or max(300.0, 3.0 * abs(x))
        state = refine_from_series(p, seed, x, tol, diagnostics=False).state
    hs, unit = _h_stencil(state, x, h, tol)
    hm2, hm1, h0, hp1, hp2 = hs
    step = h * unit
    d1 = (hp1 - hm1) / (2.0 * step)
    d2 = (hp1 - 2.0 * h0 + hm1) / (step * step)
    d3 = (hp2 - 2.0 * hp1 + 2.0 * hm1 - hm2) / (2.0 * step**3)
    r1 = h0
    r2 = d1 + h0 * h0
    r3 = d2 + 3.0 * h0 * d1 + h0**3
    r4 = d3 + 4.0 * h0 * d2 + 3.0 * d1 * d1 + 6.0 * h0 * h0 * d1 + h0**4
    t0, tx, ti = p.theta0, p.thetax, p.thetainf
    return (
        x**3 * (r4 - 4.0 * r1 * r3 + 3.0 * r2 * r2)
        + 4.0 * x * x * (r3 - r1 * r2)
        - (x * x - 2.0 * ti * x + t0 * t0 + tx * tx) * x * (r2 - r1 * r1)
        + 2.0 * x * r2
        + (ti * x - t0 * t0 - tx * tx) * r1
        - tx * tx * ti / 2.0
    )
