"""The Painleve V function y (with companions z, u) from matrix data,
its leading series, zero/pole lattices on the imaginary strip, and the
pi-substituted Backlund transform.

y is the quotient

    y = (Ax)_12 (A0_11 + theta0/2) / (A0_12 ((Ax)_11 + thetax/2)),

which stays computable from the matrix pair right through the zeros and
poles of y itself (the pair is holomorphic there; only the quotient
degenerates).  Root refinement therefore rides on flow transport.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

from .errors import (
    ConvergenceError,
    DegenerateParameterError,
    PvisoValueError,
    ResonanceError,
    StencilError,
)
from .flow import FlowState, integrate, refine_from_series
from .series import Parameters, domain_check, smallness_score

__all__ = [
    "PVPoint",
    "SeedLattice",
    "LatticeKind",
    "yzu_from_matrices",
    "y_series",
    "DegenerateBranch",
    "y_degenerate_series",
    "pv_residual",
    "zero_pole_seeds",
    "refine_root",
    "backlund_pi",
]

_POLE_CUTOFF = 1e-13


class LatticeKind(str, enum.Enum):
    ZERO = "zero"
    POLE = "pole"


class DegenerateBranch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass
class PVPoint:
    """Values (y, z, u) at one x; ``pole`` flags a sample where one of
    the defining denominators vanished to working precision."""

    y: complex
    z: complex
    u: complex
    pole: bool = False


@dataclass
class SeedLattice:
    kind: LatticeKind
    rho: complex
    seeds: list[tuple[int, complex]]


def yzu_from_matrices(s: FlowState) -> PVPoint:
    a0, ax = s.A0, s.Ax
    t0, tx = s.params.theta0, s.params.thetax
    num = ax[0, 1] * (a0[0, 0] + t0 / 2.0)
    den = a0[0, 1] * (ax[0, 0] + tx / 2.0)
    scale = max(abs(a0[0, 1]), abs(ax[0, 1]), 1e-30)
    z = a0[0, 0] - t0 / 2.0
    u_den = a0[0, 0] + t0 / 2.0
    pole = bool(abs(den) < _POLE_CUTOFF * scale)
    y = num / den if not pole else complex(math.inf, 0.0)
    u = -a0[0, 1] / u_den if abs(u_den) > _POLE_CUTOFF * scale else complex(math.inf, 0.0)
    return PVPoint(y=complex(y), z=complex(z), u=complex(u), pole=pole)


def y_series(p: Parameters, x: complex, *, check_domain: bool = True, eps: float = 0.1) -> complex:
    """Printed leading series: y = c e^x x^sigma (1 + a1 E+ + b1 E-) with
    a1 = c(-sigma+theta0+thetax)/2, b1 = (sigma+theta0+thetax)/(2c).
    Relative truncation error O(1/x)."""
    c = p.c
    s, t0, tx = p.sigma, p.theta0, p.thetax
    for excl in (-2.0 * t0 + p.thetainf, 2.0 * tx - p.thetainf):
        if abs(s - excl) < 1e-9:
            raise ResonanceError(f"sigma = {s} hits the excluded value {excl}")
    if check_domain and not domain_check(p, x, eps):
        raise PvisoValueError(f"x = {x} outside the admissible strip")
    a1 = c * (-s + t0 + tx) / 2.0
    b1 = (s + t0 + tx) / (2.0 * c)
    xs = cmath.exp(s * cmath.log(x))
    ep = cmath.exp(x) * xs / x
    em = 1.0 / (cmath.exp(x) * xs * x)
    return c * cmath.exp(x) * xs * (1.0 + a1 * ep + b1 * em)


def y_degenerate_series(p: Parameters, x: complex, branch: DegenerateBranch) -> complex:
    """One-parameter branches at the degenerate sigma values; printed
    leading terms only."""
    t0, tx, ti = p.theta0, p.thetax, p.thetainf
    if branch is DegenerateBranch.PLUS:
        if tx * (t0 - tx - ti) == 0:
            raise DegenerateParameterError("plus branch needs thetax(theta0-thetax-thetainf) != 0")
        s0 = -2.0 * tx - ti
        c = p.c if p.cx != 0 else 0.0
        lead = 0.5 * (t0 - tx - ti) / x
        return lead + c * cmath.exp(x) * cmath.exp(s0 * cmath.log(x))
    if t0 * (t0 - tx + ti) == 0:
        raise DegenerateParameterError("minus branch needs theta0(theta0-thetax+thetainf) != 0")
    s0p = 2.0 * t0 + ti
    cp = p.cprime if p.cx != 0 else 0.0
    recip = 0.5 * (t0 - tx + ti) / x + cp / (cmath.exp(x) * cmath.exp(s0p * cmath.log(x)))
    return 1.0 / recip


def _y_on_stencil(state: FlowState, x: complex, h: float, half_width: int, tol: float):
    """y at x + k*h*unit for k in [-half_width, half_width], via short
    flow hops from the given nearby state."""
    unit = x / abs(x)
    ys = []
    anchor = state
    for k in range(-half_width, half_width + 1):
        target = x + k * h * unit
        anchor = integrate(anchor, target, tol) if anchor.x != target else anchor
        pt = yzu_from_matrices(anchor)
        if pt.pole or not (abs(pt.y) < 1e12):
            raise StencilError(f"stencil point {target} is at or near a pole of y")
        ys.append(pt.y)
    return ys, unit


def pv_residual(
    p: Parameters,
    x: complex,
    h: float = 1e-3,
    *,
    state: FlowState | None = None,
    tol: float = 1e-12,
    seed_radius: float | None = None,
) -> float:
    """Absolute residual of the second-order Painleve V equation at x,
    with y', y'' from centered differences of the flow-transported y.

    A refined state near x may be passed to avoid re-seeding.
    """
    x = complex(x)
    if state is None:
        seed = seed_radius or max(300.0, 3.0 * abs(x))
        state = refine_from_series(p, seed, x, tol, diagnostics=False).state
    ys, unit = _y_on_stencil(state, x, h, 1, tol)
    ym1, y0, yp1 = ys
    step = h * unit
    # second-order stencils: the documented tolerance model is h^2 * y''''
    d1 = (yp1 - ym1) / (2.0 * step)
    d2 = (yp1 - 2.0 * y0 + ym1) / (step * step)
    if abs(y0) < 1e-10 or abs(y0 - 1.0) < 1e-10:
        raise StencilError("y at the stencil center is too close to 0 or 1")
    t0, tx, ti = p.theta0, p.thetax, p.thetainf
    rhs = (
        (0.5 / y0 + 1.0 / (y0 - 1.0)) * d1 * d1
        - d1 / x
        + (y0 - 1.0) ** 2 / (8.0 * x * x) * ((t0 - tx + ti) ** 2 * y0 - (t0 - tx - ti) ** 2 / y0)
        + (1.0 - t0 - tx) * y0 / x
        - y0 * (y0 + 1.0) / (2.0 * (y0 - 1.0))
    )
    return abs(d2 - rhs)


def zero_pole_seeds(
    p: Parameters,
    kind: LatticeKind,
    m_from: int,
    m_to: int,
    *,
    warn: bool = True,
) -> SeedLattice:
    """Predicted root locations: for zeros

        x_m = 2 m pi i - (sigma+1) log(2 m pi i) - log(rho0 c),
        rho0 = -4/(sigma + 2 theta0 - thetainf),

    and for poles (of y; zeros of 1/y)

        x_m = 2 m pi i - (sigma-1) log(2 m pi i) - log(rhoinf c),
        rhoinf = -(sigma - 2 thetax + thetainf)/4,

    principal logs with arg(2 m pi i) = pi/2.
    """
    if m_from < 1:
        raise PvisoValueError("m_from must be >= 1")
    if m_to < m_from:
        raise PvisoValueError("empty m range")
    s, t0, tx, ti = p.sigma, p.theta0, p.thetax, p.thetainf
    c = p.c
    if kind is LatticeKind.ZERO:
        if tx * (t0 + tx - ti) == 0 or tx * (t0 - tx - ti) == 0:
            raise DegenerateParameterError("zero lattice needs thetax(theta0+-thetax-thetainf) != 0")
        rho = -4.0 / (s + 2.0 * t0 - ti)
        drift = -(s + 1.0)
    else:
        if t0 * (t0 - tx + ti) == 0 or t0 * (-t0 - tx + ti) == 0:
            raise DegenerateParameterError("pole lattice needs theta0(+-theta0-thetax+thetainf) != 0")
        rho = -(s - 2.0 * tx + ti) / 4.0
        drift = -(s - 1.0)
    if warn:
        score = smallness_score(p)
        target = abs(rho * c) if kind is LatticeKind.ZERO else 1.0 / abs(rho * c)
        if score * target > 0.5:
            warnings.warn(
                "smallness heuristic is large "
                f"(score {score:.2f}, strip level {target:.3f}); the seed "
                "asymptotics may be inaccurate",
                stacklevel=2,
            )
    log_rc = cmath.log(rho * c)
    seeds = []
    for m in range(m_from, m_to + 1):
        two_m_pi_i = 2.0 * m * math.pi * 1j
        lg = complex(math.log(2.0 * m * math.pi), math.pi / 2.0)
        seeds.append((m, two_m_pi_i + drift * lg - log_rc))
    return SeedLattice(kind=kind, rho=rho, seeds=seeds)


def refine_root(
    p: Parameters,
    seed: complex,
    kind: LatticeKind,
    tol: float = 1e-9,
    *,
    state: FlowState | None = None,
    flow_tol: float = 1e-12,
    max_iter: int = 30,
    fd_step: float = 1e-5,
) -> complex:
    """Newton refinement of a zero of y (kind ZERO) or of 1/y (kind POLE)
    starting from ``seed``; the derivative comes from centered finite
    differences with flow transport at every evaluation.

    Returns x with |y| <= tol (resp. |1/y| <= tol).
    """
    seed = complex(seed)
    if state is None:
        radius = max(300.0, 2.0 * abs(seed))
        axis_pt = 1j * seed.imag
        state = refine_from_series(
            p, radius, axis_pt, flow_tol, diagnostics=False
        ).state
    anchor = integrate(state, 1j * seed.imag, flow_tol) if state.x != 1j * seed.imag else state
    anchor = integrate(anchor, seed, flow_tol)

    def F(st: FlowState) -> complex:
        pt = yzu_from_matrices(st)
        if kind is LatticeKind.ZERO:
            return pt.y
        return 0.0 if pt.pole else 1.0 / pt.y

    x = seed
    for _ in range(max_iter):
        f0 = F(anchor)
        if abs(f0) <= tol:
            return x
        st_p = integrate(anchor, x + fd_step, flow_tol)
        st_m = integrate(anchor, x - fd_step, flow_tol)
        d = (F(st_p) - F(st_m)) / (2.0 * fd_step)
        if d == 0:
            raise ConvergenceError("vanishing derivative in Newton step")
        step = -f0 / d
        if abs(step) > 2.0:
            raise ConvergenceError(
                f"Newton step {abs(step):.2f} leaves the basin of seed {seed}"
            )
        x = x + step
        anchor = integrate(anchor, x, flow_tol)
    raise ConvergenceError(f"no convergence after {max_iter} Newton iterations")


def backlund_pi(
    p: Parameters, x: complex, y: complex, Ax11: complex
) -> tuple[complex, Parameters]:
    """Backlund transform of y through the matrix entry (Ax)_11:

        Y = x^-1 (y-1) ((Ax)_11 + thetax/2 - ((Ax)_11 - thetax/2)/y),
        y_new = Y/(1+Y).

    The output solves the same equation with the substituted constants

        theta0' = 1 + (thetax + thetainf - theta0)/2,
        thetax' = (theta0 + thetainf - thetax)/2,
        thetainf' = 1 - theta0 - thetax,

    returned in the attached parameter record.  (The substitution was
    pinned numerically by fitting the transformed function against the
    equation's three parameter invariants; the zero locus of the output
    sits exactly on y = 1 through the (y-1) factor.)
    """
    if y == 0:
        raise PvisoValueError("Backlund transform undefined at y = 0")
    tx = p.thetax
    Y = (y - 1.0) * (Ax11 + tx / 2.0 - (Ax11 - tx / 2.0) / y) / x
    if abs(1.0 + Y) < 1e-300:
        raise PvisoValueError("Backlund transform pole: 1 + Y = 0")
    t0, txv, ti = p.theta0, p.thetax, p.thetainf
    new_params = p.replace(
        theta0=1.0 + (txv + ti - t0) / 2.0,
        thetax=(t0 + ti - txv) / 2.0,
        thetainf=1.0 - t0 - txv,
    )
    return Y / (1.0 + Y), new_params
