"""Truncated series solutions of the rank-two isomonodromic system near
x = i*infinity.

The solution pair (A0, Ax) is carried in the zero-trace basis

    A0 = f0*J + f+*Delta+ + f-*Delta-,
    Ax = g0*J + g+*Delta+ + g-*Delta-,

with every component a convergent double series in E+ = e^x x^(sigma-1)
and E- = e^-x x^(-sigma-1) whose coefficients are asymptotic series in
1/x.  Only the printed coefficients are evaluated; every bracket whose
value is not printed is set to zero and contributes to the documented
truncation error (no invented coefficients).

Truncation levels:
  L0 keeps the leading constants and the first exponential terms.
  L1 adds all printed 1/x corrections, the printed squared-exponential
     terms and the printed x^-2 constant correction.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateParameterError, DomainError, ZeroConstantError
from .linalg import DELTA_MINUS, DELTA_PLUS, J, BranchedLog, branched_power

__all__ = [
    "Parameters",
    "GammaQuad",
    "ABPair",
    "Truncation",
    "DegenerateKind",
    "gamma_quad",
    "leading_lambda_matrices",
    "series_A_pair",
    "series_A_pair_degenerate",
    "domain_check",
    "smallness_score",
]

DEFAULT_DELTA = 0.1
DEFAULT_X_FLOOR = 20.0


@dataclass(frozen=True)
class Parameters:
    """Constants (theta0, thetax, thetainf) and integration constants
    (c0, cx, sigma) of the solution family."""

    theta0: complex
    thetax: complex
    thetainf: complex
    c0: complex
    cx: complex
    sigma: complex

    @property
    def c(self) -> complex:
        """cx / c0 (the ratio the transcendent depends on)."""
        if self.c0 == 0:
            raise ZeroConstantError("c undefined: c0 = 0")
        return self.cx / self.c0

    @property
    def cprime(self) -> complex:
        """c0 / cx."""
        if self.cx == 0:
            raise ZeroConstantError("c' undefined: cx = 0")
        return self.c0 / self.cx

    @property
    def sigma_deg_plus(self) -> complex:
        """The sigma value -2*thetax - thetainf of the two-parameter branch."""
        return -2.0 * self.thetax - self.thetainf

    @property
    def sigma_deg_minus(self) -> complex:
        """The sigma value 2*theta0 + thetainf of the reciprocal branch."""
        return 2.0 * self.theta0 + self.thetainf

    def replace(self, **kw) -> "Parameters":
        d = dict(
            theta0=self.theta0,
            thetax=self.thetax,
            thetainf=self.thetainf,
            c0=self.c0,
            cx=self.cx,
            sigma=self.sigma,
        )
        d.update(kw)
        return Parameters(**d)


@dataclass(frozen=True)
class GammaQuad:
    """The four structure constants built from (c0, cx, sigma, thetas)."""

    g0p: complex
    g0m: complex
    gxp: complex
    gxm: complex

    @property
    def p0(self) -> complex:
        """g0p * g0m = (4 theta0^2 - (sigma - thetainf)^2) / 16."""
        return self.g0p * self.g0m

    @property
    def px(self) -> complex:
        """gxp * gxm = (4 thetax^2 - (sigma + thetainf)^2) / 16."""
        return self.gxp * self.gxm


class Truncation(str, enum.Enum):
    L0 = "L0"
    L1 = "L1"


class DegenerateKind(str, enum.Enum):
    TWO_PARAM = "two-param"
    ONE_PARAM = "one-param"


@dataclass
class ABPair:
    """Matrix pair with its zero-trace components at one point x."""

    A0: np.ndarray
    Ax: np.ndarray
    f0: complex
    fplus: complex
    fminus: complex
    g0: complex
    gplus: complex
    gminus: complex
    x: complex
    truncation_order: Truncation = Truncation.L1
    arg_x: float = field(default=0.0)


def gamma_quad(p: Parameters) -> GammaQuad:
    if p.c0 == 0 or p.cx == 0:
        raise ZeroConstantError("gamma constants need c0 != 0 and cx != 0")
    s, t0, tx, ti = p.sigma, p.theta0, p.thetax, p.thetainf
    return GammaQuad(
        g0p=p.c0 * (s + 2.0 * t0 - ti) / 4.0,
        g0m=(-s + 2.0 * t0 + ti) / (4.0 * p.c0),
        gxp=p.cx * (-s + 2.0 * tx - ti) / 4.0,
        gxm=(s + 2.0 * tx + ti) / (4.0 * p.cx),
    )


def leading_lambda_matrices(p: Parameters) -> tuple[np.ndarray, np.ndarray]:
    """The constant matrices the pair approaches on the ray: eigenvalues
    +-theta0/2 and +-thetax/2, with row-sum condition on the diagonal."""
    g = gamma_quad(p)
    lam0 = ((p.sigma - p.thetainf) / 4.0) * J + g.g0p * DELTA_PLUS + g.g0m * DELTA_MINUS
    lamx = (
        -((p.sigma + p.thetainf) / 4.0) * J + g.gxp * DELTA_PLUS + g.gxm * DELTA_MINUS
    )
    return lam0, lamx


def _branched(x: complex, arg_x: float | None) -> BranchedLog:
    return BranchedLog.from_point(x, arg_hint=arg_x)


def domain_check(
    p: Parameters,
    x: complex,
    eps: float,
    *,
    delta: float = DEFAULT_DELTA,
    x_floor: float = DEFAULT_X_FLOOR,
    arg_x: float | None = None,
) -> bool:
    """True iff x lies in the sector-like strip where both expansion
    variables E+ and E- have modulus below eps.

    Explicitly: |arg x - pi/2| < pi/2 - delta, |x| > x_floor and

      -(1+Re sigma) log|x| + Im sigma * arg x + log(1/eps)
          < Re x <
      (1-Re sigma) log|x| + Im sigma * arg x - log(1/eps).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    x = complex(x)
    if x == 0:
        return False
    ax = _branched(x, arg_x).tracked_arg
    if abs(ax - math.pi / 2.0) >= math.pi / 2.0 - delta:
        return False
    if abs(x) <= x_floor:
        return False
    lx = math.log(abs(x))
    leps = math.log(1.0 / eps)
    s = p.sigma
    lo = -(1.0 + s.real) * lx + s.imag * ax + leps
    hi = (1.0 - s.real) * lx + s.imag * ax - leps
    return lo < x.real < hi


def smallness_score(p: Parameters) -> float:
    """Heuristic admissibility product: the factor multiplying eps in the
    contraction condition of the convergence proof.  Small score means a
    comfortably convergent family at desk scale."""
    g = gamma_quad(p)
    s = abs(g.g0p) + abs(g.g0m) + abs(g.gxp) + abs(g.gxm)
    return (abs(g.g0m * g.gxp) + abs(g.g0p * g.gxm) + s + 1.0) * (s + 1.0)


def series_A_pair(
    p: Parameters,
    x: complex,
    order: Truncation = Truncation.L1,
    *,
    arg_x: float | None = None,
    check_domain: bool = True,
    eps: float = 0.1,
) -> ABPair:
    """Evaluate the printed terms of the generic three-parameter series."""
    x = complex(x)
    bl = _branched(x, arg_x)
    if check_domain and not domain_check(p, x, eps, arg_x=bl.tracked_arg):
        raise DomainError(f"x = {x} outside the admissible strip (eps = {eps})")

    g = gamma_quad(p)
    s, ti = p.sigma, p.thetainf
    P = g.p0
    Q = g.px
    S2 = s * s - ti * ti

    ex = cmath.exp(x)
    emx = 1.0 / ex
    x_s1 = branched_power(bl, s - 1.0)  # x^(sigma-1)
    ep = ex * x_s1  # E+
    em = emx / (x * x * x_s1)  # E- = e^-x x^(-sigma-1)
    ix = 1.0 / x
    l1 = order is Truncation.L1

    # f0 and g0
    f0 = (s - ti) / 4.0
    if l1:
        f0 += -((s + ti) * P + (s - ti) * Q) * ix * ix / 2.0
        cp = 1.0 - (s - 1.0 + 2.0 * (P + Q) - S2 / 2.0) * ix
        cm = 1.0 - (s + 1.0 - 2.0 * (P + Q) + S2 / 2.0) * ix
    else:
        cp = cm = 1.0
    f0 += g.g0m * g.gxp * cp * ep + g.g0p * g.gxm * cm * em
    g0 = -ti / 2.0 - f0

    # prefactors that undo the printed normalizations
    w = branched_power(bl, (s + ti) / 2.0)  # x^((sigma+thetainf)/2)
    v = branched_power(bl, (s - ti) / 2.0)  # x^((sigma-thetainf)/2)

    # x^((s+ti)/2) f+ = g0p (1 + (2Q - S2/4)/x) - gxp ((s-ti)/2) E+
    #                   - g0m gxp^2 E+^2 + 2 g0p^2 gxm E-/x
    fp = g.g0p * (1.0 + ((2.0 * Q - S2 / 4.0) * ix if l1 else 0.0))
    fp -= g.gxp * ((s - ti) / 2.0) * ep
    if l1:
        fp -= g.g0m * g.gxp * g.gxp * ep * ep
        fp += 2.0 * g.g0p * g.g0p * g.gxm * em * ix
    fplus = fp / w

    # e^-x x^(-(s-ti)/2) g+ = gxp (1 - (2P - S2/4)/x) + 2 g0m gxp^2 E+/x
    #                         - g0p ((s+ti)/2) E- - g0p^2 gxm E-^2
    gp = g.gxp * (1.0 - ((2.0 * P - S2 / 4.0) * ix if l1 else 0.0))
    if l1:
        gp += 2.0 * g.g0m * g.gxp * g.gxp * ep * ix
    gp -= g.g0p * ((s + ti) / 2.0) * em
    if l1:
        gp -= g.g0p * g.g0p * g.gxm * em * em
    gplus = gp * ex * v

    # x^(-(s+ti)/2) f- = g0m (1 - (2Q - S2/4)/x) + 2 g0m^2 gxp E+/x
    #                    - gxm ((s-ti)/2) E- - g0p gxm^2 E-^2
    fm = g.g0m * (1.0 - ((2.0 * Q - S2 / 4.0) * ix if l1 else 0.0))
    if l1:
        fm += 2.0 * g.g0m * g.g0m * g.gxp * ep * ix
    fm -= g.gxm * ((s - ti) / 2.0) * em
    if l1:
        fm -= g.g0p * g.gxm * g.gxm * em * em
    fminus = fm * w

    # e^x x^((s-ti)/2) g- = gxm (1 + (2P - S2/4)/x) - g0m ((s+ti)/2) E+
    #                       - g0m^2 gxp E+^2 + 2 g0p gxm^2 E-/x
    gm = g.gxm * (1.0 + ((2.0 * P - S2 / 4.0) * ix if l1 else 0.0))
    gm -= g.g0m * ((s + ti) / 2.0) * ep
    if l1:
        gm -= g.g0m * g.g0m * g.gxp * ep * ep
        gm += 2.0 * g.g0p * g.gxm * g.gxm * em * ix
    gminus = gm * emx / v

    A0 = f0 * J + fplus * DELTA_PLUS + fminus * DELTA_MINUS
    Ax = g0 * J + gplus * DELTA_PLUS + gminus * DELTA_MINUS
    return ABPair(
        A0=A0,
        Ax=Ax,
        f0=f0,
        fplus=fplus,
        fminus=fminus,
        g0=g0,
        gplus=gplus,
        gminus=gminus,
        x=x,
        truncation_order=order,
        arg_x=bl.tracked_arg,
    )


def series_A_pair_degenerate(
    p: Parameters,
    x: complex,
    kind: DegenerateKind,
    *,
    arg_x: float | None = None,
) -> ABPair:
    """Evaluate the degenerate families at sigma = -2*thetax - thetainf.

    TWO_PARAM keeps cx free (single exponential series in E+); ONE_PARAM
    additionally sets cx = 0, leaving a pure asymptotic pair.  Only the
    printed leading terms are evaluated.
    """
    x = complex(x)
    bl = _branched(x, arg_x)
    t0, tx, ti = p.theta0, p.thetax, p.thetainf
    s0 = -2.0 * tx - ti

    g0p_s = p.c0 * (t0 - tx - ti) / 2.0
    g0m_s = (t0 + tx + ti) / (2.0 * p.c0)

    x_tx = branched_power(bl, tx)  # x^thetax
    ex = cmath.exp(x)

    if kind is DegenerateKind.TWO_PARAM:
        if p.thetax == 0:
            raise DegenerateParameterError("two-parameter branch needs thetax != 0")
        gxp_s = p.cx * tx
        x_s01 = branched_power(bl, s0 - 1.0)
        ep = ex * x_s01  # e^x x^(sigma0 - 1)
        em = 1.0 / (ex * x * x * x_s01)  # e^-x x^(-sigma0 - 1)
        ix = 1.0 / x

        f0 = -(tx + ti) / 2.0 + tx * g0p_s * g0m_s * ix * ix + g0m_s * gxp_s * ep
        g0 = -ti / 2.0 - f0
        # x^-thetax f+ = g0p* + gxp*(thetax + thetainf) E+ - g0m* gxp*^2 E+^2
        fplus = (g0p_s + gxp_s * (tx + ti) * ep - g0m_s * gxp_s * gxp_s * ep * ep) * x_tx
        # e^-x x^(thetax + thetainf) g+ = gxp* + 2 g0m* gxp*^2 E+/x + g0p* thetax E-
        gplus = (
            (gxp_s + 2.0 * g0m_s * gxp_s * gxp_s * ep * ix + g0p_s * tx * em)
            * ex
            / branched_power(bl, tx + ti)
        )
        # x^thetax f- = g0m* + 2 g0m*^2 gxp* E+/x
        fminus = (g0m_s + 2.0 * g0m_s * g0m_s * gxp_s * ep * ix) / x_tx
        # e^x x^(-thetax - thetainf) g- = g0m* thetax E+ - g0m*^2 gxp* E+^2
        gminus = (
            (g0m_s * tx * ep - g0m_s * g0m_s * gxp_s * ep * ep)
            * branched_power(bl, tx + ti)
            / ex
        )
    elif kind is DegenerateKind.ONE_PARAM:
        ix = 1.0 / x
        f0 = -(tx + ti) / 2.0 + tx * (t0 * t0 - (tx + ti) ** 2) * ix * ix / 4.0
        g0 = -ti / 2.0 - f0
        fplus = p.c0 * (t0 - tx - ti) * 0.5 * x_tx
        gplus = p.c0 * (t0 - tx - ti) * (tx / 2.0) * x_tx * ix
        fminus = (t0 + tx + ti) / (2.0 * p.c0) / x_tx
        gminus = (t0 + tx + ti) / p.c0 * (tx / 2.0) / (x_tx * x)
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(kind)

    A0 = f0 * J + fplus * DELTA_PLUS + fminus * DELTA_MINUS
    Ax = g0 * J + gplus * DELTA_PLUS + gminus * DELTA_MINUS
    return ABPair(
        A0=A0,
        Ax=Ax,
        f0=f0,
        fplus=fplus,
        fminus=fminus,
        g0=g0,
        gplus=gplus,
        gminus=gminus,
        x=x,
        truncation_order=Truncation.L1,
        arg_x=bl.tracked_arg,
    )
