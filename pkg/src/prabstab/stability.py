"""Exact characterisation of the asymptotic-stability region.

The region is bounded by the curve

    L(theta) = |w|^(b/a) (sin theta)^(b/a-g) (sin(a pi/2))^g
               / (sin(a pi/2 - theta))^(b/a) * exp(i [g theta + (b - a g) pi/2]),

theta in [0, a*pi/2), together with its complex conjugate; eigenvalues between
the two arcs (around the positive real axis) are unstable, everything else,
including the whole left half-plane, is stable.  Because Arg L is affine and
strictly increasing in theta, the curve is the polar graph of a single-valued
modulus function, which makes classification exact: compare |lambda| with the
curve modulus at theta0 = (|Arg lambda| - (b-a g) pi/2) / g.

Also here: the root locus of pure-imaginary characteristic roots, unstable
root counting by the argument principle, the dominant transfer-function
singularity, and the critical kernel coefficient for which a given eigenvalue
sits exactly on the boundary.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BranchCutError,
    ContourFailure,
    CountUndefined,
    DomainError,
    InvalidParam,
    NoConvergence,
    OutOfRange,
)
from .params import PrabhakarParams

CLASSIFY_TOL = 1e-9


class Status(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass
class StabilityVerdict:
    """Classification of one eigenvalue against the stability boundary.

    margin is the signed distance |lambda| - R(phi) to the curve modulus at
    the eigenvalue's argument; it is None when the argument lies outside the
    curve's argument band (the verdict is then decided by the band alone).
    """

    status: Status
    boundary_modulus: Optional[float] = None
    margin: Optional[float] = None
    note: str = ""


@dataclass
class BoundaryCurve:
    """Sampled boundary arc in the upper half-plane."""

    params: PrabhakarParams
    thetas: np.ndarray
    points: np.ndarray

    @property
    def arg_min(self) -> float:
        return self.params.arg_min

    @property
    def arg_sup(self) -> float:
        return self.params.arg_sup


@dataclass
class RootLocusPoint:
    """Pure-imaginary characteristic root data at curve parameter theta.

    mu is the root magnitude (the root is i*mu) and rho the modulus of
    (i mu)^alpha - omega.
    """

    theta: float
    mu: float
    rho: float


def curve_point(params: PrabhakarParams, theta: float) -> complex:
    """Boundary-curve value L(theta), with the continuous extension at 0."""
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    tmax = params.theta_max
    if not 0.0 <= theta < tmax:
        raise DomainError(f"requires 0 <= theta < alpha*pi/2 = {tmax}, got {theta}")
    if theta == 0.0:
        if b - a * g > 0.0:
            return 0.0 + 0.0j
        return complex(abs(w) ** g, 0.0)
    mod = (
        abs(w) ** (b / a)
        * math.sin(theta) ** (b / a - g)
        * math.sin(tmax) ** g
        / math.sin(tmax - theta) ** (b / a)
    )
    ang = g * theta + params.arg_min
    return cmath.rect(mod, ang)


def _modulus(params: PrabhakarParams, theta: float) -> float:
    return abs(curve_point(params, theta))


def curve_sample(
    params: PrabhakarParams,
    n: int = 256,
    theta_cap: Optional[float] = None,
    modulus_cap: float = 1e3,
) -> BoundaryCurve:
    """Sample the boundary arc on a grid graded toward theta = alpha*pi/2.

    The distance d = alpha*pi/2 - theta is laid out geometrically, which keeps
    the modulus growth between neighbours roughly constant (|L| blows up like
    d^(-beta/alpha) at the endpoint).  theta_cap defaults to a point where
    |L| reaches modulus_cap.
    """
    if n < 2:
        raise InvalidParam(f"requires n >= 2, got n={n}")
    tmax = params.theta_max
    if theta_cap is None:
        if modulus_cap <= 2.0 * max(_modulus(params, tmax * 1e-9), abs(params.omega) ** params.gamma):
            raise InvalidParam(f"modulus_cap={modulus_cap} is below the curve start")
        # march in from the endpoint until below the cap, then bisect the crossing
        d_hi = tmax * 1e-15
        d_lo = None
        d = tmax * 0.5
        while d > 1e-290:
            if _modulus(params, tmax - d) >= modulus_cap:
                d_lo = d
                break
            d /= 2.0
        if d_lo is None:
            raise InvalidParam("modulus cap unreachable")
        d_hi = min(d_lo * 2.0, tmax * 0.5)
        for _ in range(200):
            mid = math.sqrt(d_lo * d_hi)
            if _modulus(params, tmax - mid) >= modulus_cap:
                d_lo = mid
            else:
                d_hi = mid
            if d_hi / d_lo < 1.0 + 1e-12:
                break
        theta_cap = tmax - d_lo
    if not 0.0 < theta_cap < tmax:
        raise DomainError(f"theta_cap must lie in (0, {tmax}), got {theta_cap}")
    d_cap = tmax - theta_cap
    ratio = (d_cap / tmax) ** (1.0 / (n - 1))
    thetas = tmax - tmax * ratio ** np.arange(n)
    thetas[0] = 0.0
    pts = np.array([curve_point(params, t) for t in thetas])
    return BoundaryCurve(params=params, thetas=thetas, points=pts)


def classify(params: PrabhakarParams, lam: complex, tol: float = CLASSIFY_TOL) -> StabilityVerdict:
    """Classify one eigenvalue exactly via the polar-graph boundary.

    tol is relative to |lambda|: the marginal band is |lambda| within
    tol*|lambda| of the curve modulus at the matching argument.
    """
    if tol <= 0.0:
        raise InvalidParam(f"requires tol > 0, got tol={tol}")
    lam = complex(lam)
    if lam == 0:
        if params.beta - params.alpha * params.gamma > 0.0:
            # s = 0 solves the characteristic equation at lambda = 0
            return StabilityVerdict(Status.MARGINAL, None, None, note="lambda = 0 with beta > alpha*gamma")
        return StabilityVerdict(Status.STABLE, abs(params.omega) ** params.gamma, None,
                                note="lambda = 0 with beta = alpha*gamma")
    phi = abs(cmath.phase(lam))
    if phi >= params.arg_sup:
        return StabilityVerdict(Status.STABLE)
    if phi < params.arg_min:
        return StabilityVerdict(Status.UNSTABLE)
    theta0 = (phi - params.arg_min) / params.gamma
    theta0 = min(theta0, np.nextafter(params.theta_max, 0.0))
    r = _modulus(params, theta0)
    band = tol * abs(lam)
    margin = abs(lam) - r
    if margin < -band:
        status = Status.STABLE
    elif margin > band:
        status = Status.UNSTABLE
    else:
        status = Status.MARGINAL
    return StabilityVerdict(status, r, margin)


def classify_spectrum(
    params: PrabhakarParams,
    eigenvalues: Sequence[complex],
    tol: float = CLASSIFY_TOL,
):
    """Classify a spectrum; stability requires every eigenvalue stable."""
    if len(eigenvalues) == 0:
        raise InvalidParam("empty spectrum")
    per = [classify(params, lam, tol) for lam in eigenvalues]
    if any(v.status is Status.UNSTABLE for v in per):
        overall = Status.UNSTABLE
    elif all(v.status is Status.STABLE for v in per):
        overall = Status.STABLE
    else:
        overall = Status.MARGINAL
    margins = [v.margin for v in per if v.margin is not None]
    agg = StabilityVerdict(overall, None, min(margins, key=abs) if margins else None,
                           note="aggregate over spectrum")
    return agg, per


def root_locus(params: PrabhakarParams, theta: float) -> RootLocusPoint:
    """Pure-imaginary root magnitude and shifted-power modulus at theta."""
    a, w = params.alpha, params.omega
    tmax = params.theta_max
    if not 0.0 <= theta < tmax:
        raise DomainError(f"requires 0 <= theta < alpha*pi/2 = {tmax}, got {theta}")
    denom = math.sin(tmax - theta)
    mu = (abs(w) * math.sin(theta) / denom) ** (1.0 / a)
    rho = abs(w) * math.sin(tmax) / denom
    return RootLocusPoint(theta=theta, mu=mu, rho=rho)


def characteristic_value(params: PrabhakarParams, s: complex) -> complex:
    """Characteristic map F(s) = s^(beta-alpha*gamma) (s^alpha - omega)^gamma."""
    s = complex(s)
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    if s == 0:
        if b - a * g > 0.0:
            return 0.0 + 0.0j
        return complex(abs(w) ** g, 0.0)
    _branch_cut_check_stability(params, s)
    return s ** (b - a * g) * (s ** a - w) ** g


def _branch_cut_check_stability(params: PrabhakarParams, s: complex):
    if s.imag == 0.0 and s.real < 0.0:
        a, b, g = params.alpha, params.beta, params.gamma
        exps = (a, g, b - a * g)
        if any(abs(e - round(e)) > 1e-12 for e in exps):
            raise BranchCutError(
                f"characteristic map requested on the negative real axis (s={s!r})"
            )


def _characteristic_on(params: PrabhakarParams, s: np.ndarray) -> np.ndarray:
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    return s ** (b - a * g) * (s ** a - w) ** g


def count_unstable_roots(
    params: PrabhakarParams,
    lam: complex,
    margin: float = 0.1,
    boundary_tol: float = CLASSIFY_TOL,
) -> int:
    """Number of characteristic roots with Re(s) >= 0, by the argument principle.

    All such roots satisfy |s| <= |lambda|^(1/beta), so the winding number of
    F(s) - lambda is taken along the boundary of the half-disk of radius
    |lambda|^(1/beta) * (1 + margin) in Re(s) > 0, with a small indentation
    around the branch point s = 0.  The contour is refined until neighbouring
    samples change the argument by less than pi/2.
    """
    lam = complex(lam)
    verdict = classify(params, lam, tol=boundary_tol)
    if verdict.status is Status.MARGINAL:
        raise CountUndefined(
            f"lambda={lam!r} is within tolerance of the stability boundary"
        )
    if lam == 0:
        # only reachable when beta = alpha*gamma (else marginal): F never vanishes
        return 0
    radius = abs(lam) ** (1.0 / params.beta) * (1.0 + margin)
    eps = min(1e-8, 0.5 * radius)

    def piece_points(tgrid, kind):
        if kind == "arc":
            ph = -math.pi / 2.0 + math.pi * tgrid
            return radius * np.exp(1j * ph)
        if kind == "down_hi":
            return 1j * (radius + (eps - radius) * tgrid)
        if kind == "indent":
            ph = math.pi / 2.0 - math.pi * tgrid
            return eps * np.exp(1j * ph)
        return 1j * (-eps + (-radius + eps) * tgrid)

    kinds = ("arc", "down_hi", "indent", "down_lo")
    grids = {k: np.linspace(0.0, 1.0, 65) for k in kinds}
    values = {k: _characteristic_on(params, piece_points(grids[k], k)) - lam for k in kinds}

    for _ in range(60):
        refined_any = False
        total_pts = 0
        for k in kinds:
            w = values[k]
            dphi = np.abs(np.angle(w[1:] / w[:-1]))
            bad = np.nonzero(dphi >= math.pi / 2.0)[0]
            total_pts += len(w)
            if bad.size:
                refined_any = True
                t = grids[k]
                mids = 0.5 * (t[bad] + t[bad + 1])
                tnew = np.sort(np.concatenate([t, mids]))
                grids[k] = tnew
                values[k] = _characteristic_on(params, piece_points(tnew, k)) - lam
        if total_pts > 400_000:
            raise ContourFailure("contour refinement budget exhausted")
        if not refined_any:
            break
    else:
        raise ContourFailure("contour refinement did not settle")

    w_all = np.concatenate([values[k] for k in kinds])
    w_loop = np.append(w_all, w_all[0])
    total = float(np.angle(w_loop[1:] / w_loop[:-1]).sum())
    winding = total / (2.0 * math.pi)
    count = round(winding)
    if abs(winding - count) > 0.01:
        raise ContourFailure(f"non-integer winding number {winding}")
    return int(count)


def dominant_singularity(
    params: PrabhakarParams,
    A: complex,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> complex:
    """Root of F(s) = A governing the long-time exponential of the solution.

    Solved as s^mu - omega s^(mu-alpha) - B = 0 with mu = beta/gamma and
    B = A^(1/gamma), by damped Newton from B^(1/mu); the principal branch of
    A^(1/gamma) is tried first, then the two adjacent branches.  Every
    candidate is validated against the characteristic map itself
    (|F(s) - A| <= 1e-10 max(1, |A|)), which weeds out roots dragged in by a
    wrong branch choice.  For real A with a real root, the real root is
    returned.
    """
    A = complex(A)
    if A == 0:
        raise InvalidParam("A = 0 has no transfer-function singularity")
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    mu = b / g
    roots = []
    for k in (0, 1, -1):
        B = A ** (1.0 / g) * cmath.exp(2j * math.pi * k / g)

        def gfun(s):
            return s ** mu - w * s ** (mu - a) - B

        def gprime(s):
            return mu * s ** (mu - 1.0) - (mu - a) * w * s ** (mu - a - 1.0)

        s = B ** (1.0 / mu)
        if s == 0 or (s.imag == 0.0 and s.real < 0.0):
            s = s + 1e-8 + 1e-8j
        ok = False
        gs = gfun(s)
        for _ in range(max_iter):
            dp = gprime(s)
            if dp == 0:
                break
            step = gs / dp
            snew = s - step
            damp = 0
            while damp < 8:
                if snew != 0 and not (snew.imag == 0.0 and snew.real < 0.0):
                    gn = gfun(snew)
                    if abs(gn) <= abs(gs):
                        break
                step *= 0.5
                snew = s - step
                damp += 1
            else:
                break
            if snew == 0 or (snew.imag == 0.0 and snew.real < 0.0):
                break
            gs_new = gfun(snew)
            if abs(snew - s) <= tol * (1.0 + abs(snew)):
                s, gs = snew, gs_new
                ok = True
                break
            s, gs = snew, gs_new
        if ok:
            try:
                res = abs(characteristic_value(params, s) - A)
            except BranchCutError:
                continue
            if res <= 1e-10 * max(1.0, abs(A)):
                roots.append(s)
    if not roots:
        raise NoConvergence(
            f"no characteristic root validated for A={A!r} "
            "(the transfer function may have no off-axis singularity here)"
        )
    s_best = max(roots, key=lambda r: r.real)
    if A.imag == 0.0 and abs(s_best.imag) <= 1e-10 * (1.0 + abs(s_best)):
        s_best = complex(s_best.real, 0.0)
    return s_best


def critical_omega(alpha: float, beta: float, gamma: float, lam: complex):
    """Kernel coefficient omega* putting lam exactly on the stability boundary.

    The curve argument g*theta + (b - a g) pi/2 does not involve omega, so
    theta* = (Arg lam - (b - a g) pi/2) / g is closed-form, and since the
    curve modulus scales exactly like |omega|^(beta/alpha), the modulus match
    is a one-dimensional power solve.  Returns (omega_star, theta_star).
    """
    lam = complex(lam)
    if lam.imag <= 0.0:
        raise OutOfRange(f"requires Im(lam) > 0, got lam={lam!r}")
    # validate the parameter triple using a placeholder coefficient
    PrabhakarParams(alpha, beta, gamma, -1.0)
    arg_min = (beta - alpha * gamma) * math.pi / 2.0
    arg_sup = beta * math.pi / 2.0
    phi = cmath.phase(lam)
    if not arg_min < phi < arg_sup:
        raise OutOfRange(
            f"Arg(lam)={phi:.6f} outside the curve argument band "
            f"({arg_min:.6f}, {arg_sup:.6f}); no omega < 0 puts lam on the boundary"
        )
    theta_star = (phi - arg_min) / gamma
    tmax = alpha * math.pi / 2.0
    shape = (
        math.sin(theta_star) ** (beta / alpha - gamma)
        * math.sin(tmax) ** gamma
        / math.sin(tmax - theta_star) ** (beta / alpha)
    )
    omega_star = -((abs(lam) / shape) ** (alpha / beta))
    return omega_star, theta_star


def matignon_wedge(beta: float, lam: complex, tol: float = 0.0) -> StabilityVerdict:
    """Classical order-beta wedge rule |Arg(lam)| > beta*pi/2 (gamma -> 0 limit)."""
    if not 0.0 < beta <= 1.0:
        raise InvalidParam(f"requires 0 < beta <= 1, got beta={beta}")
    lam = complex(lam)
    if lam == 0:
        return StabilityVerdict(Status.MARGINAL, note="lambda = 0")
    phi = abs(cmath.phase(lam))
    edge = beta * math.pi / 2.0
    if phi > edge + tol:
        return StabilityVerdict(Status.STABLE)
    if phi < edge - tol:
        return StabilityVerdict(Status.UNSTABLE)
    return StabilityVerdict(Status.MARGINAL)
