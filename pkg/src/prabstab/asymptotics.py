"""Asymptotic representations of the scalar linear solution.

For D y = A y, y(0) = y0, the Laplace-domain solution is H(s) y0 with

    H(s) = s^(b-a g-1) (s^a - w)^g / (s^(b-a g) (s^a - w)^g - A).

Expanding H for large |s| and inverting term by term gives the small-time
series; subtracting the residue at the dominant singularity s_bar (the root
of the characteristic map at A) and expanding the remainder for small |s|
gives the large-time form

    y(t) = [ C(s_bar) e^(s_bar t) - sum_{k>=1} t^(-k b) A^(-k) E^(-k g)_{a, 1-k b}(w t^a) ] y0.

Both sums are truncated at their smallest term when that comes before the
requested order.  Scalar case only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParam, NoConvergence, NotAsymptotic
from .params import PrabhakarParams
from .special import prabhakar_eval
from .stability import dominant_singularity

@dataclass
class TransferFunction:
    params: PrabhakarParams
    A: complex


@dataclass
class ExpansionResult:
    """Value of a truncated expansion plus how it was truncated."""

    value: complex
    terms_used: int
    truncation_estimate: float
    note: str = ""


@dataclass
class LargeTimeExpansion:
    """Ingredients of the large-time form for one coefficient A."""

    s_bar: complex
    residue_coeff: complex
    K: int


def transfer_function_value(tf: TransferFunction, s: complex) -> complex:
    """H(s); raises DomainError on a vanishing denominator."""
    s = complex(s)
    if s == 0:
        raise DomainError("transfer function undefined at s = 0")
    p = tf.params
    a, b, g, w = p.alpha, p.beta, p.gamma, p.omega
    core = s ** (b - a * g) * (s ** a - w) ** g
    den = core - tf.A
    if den == 0:
        raise DomainError(f"transfer function singular at s={s!r}")
    return core / (s * den)


def residue_coefficient(params: PrabhakarParams, s_bar: complex) -> complex:
    """Residue factor C(s) = (s^a - w) / (b s^a - (b - a g) w) at the pole."""
    s_bar = complex(s_bar)
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    sa = s_bar ** a
    if sa == w:
        raise DomainError("residue coefficient undefined where s^alpha = omega")
    return (sa - w) / (b * sa - (b - a * g) * w)


def _truncate_at_smallest(mags):
    """Index m of the optimal truncation: global min of max(|t_k|, |t_{k+1}|)."""
    if len(mags) == 1:
        return 0
    env = np.maximum(mags[:-1], mags[1:])
    return int(np.argmin(env))


def small_time_series(
    params: PrabhakarParams,
    A: complex,
    y0: complex,
    t: float,
    J: int = 40,
) -> ExpansionResult:
    """Partial sum of y(t) = sum_j A^j t^(j b) E^(j g)_{a, j b + 1}(w t^a) y0.

    Valid as t -> 0; at runtime the term magnitudes must start decreasing
    within the first J terms, else the point is outside the expansion's
    useful range and NotAsymptotic is raised.
    """
    if t <= 0.0:
        raise DomainError(f"requires t > 0, got t={t}")
    if J < 1:
        raise InvalidParam(f"requires J >= 1, got J={J}")
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    A = complex(A)
    z = w * t ** a
    terms = []
    Apow = 1.0 + 0.0j
    for j in range(J + 1):
        ml = prabhakar_eval(a, j * b + 1.0, j * g, z).value if j > 0 else 1.0 + 0.0j
        terms.append(Apow * t ** (j * b) * ml)
        Apow *= A
        if abs(terms[-1]) < 1e-18 * max(abs(sum(terms)), 1e-300) and j >= 2:
            break
    mags = np.array([abs(x) for x in terms])
    m = _truncate_at_smallest(mags)
    if m == 0 and len(mags) > 1 and mags[-1] > mags[0]:
        raise NotAsymptotic(
            f"terms grow from the start at t={t}; the expansion needs smaller t or larger J"
        )
    value = sum(terms[: m + 1]) * complex(y0)
    est = float(mags[m + 1] if m + 1 < len(mags) else mags[m]) * abs(y0)
    return ExpansionResult(value=value, terms_used=m + 1, truncation_estimate=est)


def large_time_expansion(
    params: PrabhakarParams,
    A: complex,
    y0: complex,
    t: float,
    K: int = 5,
) -> ExpansionResult:
    """Residue exponential minus the K-term algebraic tail, valid as t -> inf.

    The exponential term is included only when the transfer function has an
    off-axis singularity, which requires |Arg A| < beta*pi; for A on or
    beyond that ray (in particular negative real A) the solution is purely
    algebraic and the residue part is skipped (noted in the result).
    """
    if t <= 0.0:
        raise DomainError(f"requires t > 0, got t={t}")
    if K < 1:
        raise InvalidParam(f"requires K >= 1, got K={K}")
    A = complex(A)
    if A == 0:
        raise InvalidParam("A = 0: the solution is constant, no expansion needed")
    a, b, g, w = params.alpha, params.beta, params.gamma, params.omega
    note = ""
    res_term = 0.0 + 0.0j
    if abs(cmath.phase(A)) < b * math.pi - 1e-12:
        s_bar = dominant_singularity(params, A)
        res_term = residue_coefficient(params, s_bar) * cmath.exp(s_bar * t)
        note = f"residue included, s_bar={s_bar:.6g}"
    else:
        note = "no off-axis singularity: algebraic tail only"
    z = w * t ** a
    terms = []
    evals_est = 0.0
    Ak = 1.0 + 0.0j
    for k in range(1, K + 1):
        Ak *= A
        r = prabhakar_eval(a, 1.0 - k * b, -k * g, z)
        term = t ** (-k * b) / Ak * r.value
        terms.append(term)
        evals_est = max(evals_est, r.truncation_estimate * abs(t ** (-k * b) / Ak))
    mags = np.array([abs(x) for x in terms])
    if len(mags) >= 2 and np.all(np.diff(mags) > 0.0):
        raise NotAsymptotic(
            f"algebraic terms grow through order K={K} at t={t}; t is too small"
        )
    m = _truncate_at_smallest(mags)
    tail = sum(terms[: m + 1])
    est = float(mags[m + 1] if m + 1 < len(mags) else mags[m])
    value = (res_term - tail) * complex(y0)
    return ExpansionResult(
        value=value,
        terms_used=m + 1,
        truncation_estimate=(est + evals_est) * abs(y0),
        note=note,
    )


def large_time_ingredients(params: PrabhakarParams, A: complex, K: int = 5) -> LargeTimeExpansion:
    """Dominant singularity and residue factor, bundled for reuse."""
    s_bar = dominant_singularity(params, A)
    return LargeTimeExpansion(
        s_bar=s_bar,
        residue_coeff=residue_coefficient(params, s_bar),
        K=K,
    )
