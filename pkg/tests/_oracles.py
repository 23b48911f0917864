"""Independent reference implementations used only by the test suite.

Each oracle is deliberately written against the defining formulas, not
against the library's evaluation paths, so an agreement test actually checks
two independent routes.
"""

import math

import mpmath as mp
import numpy as np
from scipy.special import rgamma


def ml3_highprec(alpha, beta, gamma, z, dps=None, max_terms=400_000):
    """Arbitrary-precision partial sum of the three-parameter series.

    Working precision follows the cancellation estimate exp(|z|^(1/alpha)),
    so the sum is accurate even deep on the negative axis.
    """
    absz = abs(complex(z))
    if dps is None:
        dps = 60 + int(0.6 * absz ** (1.0 / alpha))
    with mp.workdps(dps):
        a, b, g = mp.mpf(alpha), mp.mpf(beta), mp.mpf(gamma)
        zz = mp.mpmathify(z)
        total = mp.mpc(0)
        coef = mp.mpf(1)
        for k in range(max_terms):
            term = coef * zz ** k * mp.rgamma(a * k + b)
            total += term
            if k > 8 and abs(term) < mp.mpf(10) ** (-dps + 5) * (abs(total) + mp.mpf(10) ** -30):
                break
            coef = coef * (g + k) / (k + 1)
        return complex(total)


def ml2_series(alpha, beta, z, tol=1e-17, max_terms=2000):
    """Two-parameter Mittag-Leffler function by its own plain series."""
    z = complex(z)
    total = 0.0j
    zk = 1.0 + 0.0j
    for k in range(max_terms):
        term = zk * rgamma(alpha * k + beta)
        total += term
        if abs(term) < tol * max(abs(total), 1e-30) and k > 4:
            return total
        zk *= z
    return total


def prabhakar_polynomial(alpha, beta, j, z):
    """Degree-j polynomial value sum_k (-1)^k C(j,k) z^k / Gamma(alpha k + beta)."""
    z = complex(z)
    total = 0.0j
    for k in range(j + 1):
        total += (-1) ** k * math.comb(j, k) * z ** k * rgamma(alpha * k + beta)
    return total


def exp_kernel_solution(omega, A, y0, t):
    """Exact solution of the scalar problem for alpha = beta = gamma = 1.

    The transform has a single simple pole at omega + A:
        y(t) = [omega + A exp((omega + A) t)] / (omega + A) * y0.
    """
    t = np.asarray(t, dtype=float)
    s = omega + A
    return (omega + A * np.exp(s * t)) / s * y0


def classical_trapezoidal_weights(beta, h, N):
    """Fractional trapezoidal weights of (delta(xi)/h)^(-beta) by recurrences.

    (1+xi)^beta and (1-xi)^(-beta) coefficients are generated separately and
    convolved; the result is scaled to match the library's h^(-beta)-scaled
    convention.  Independent of any FFT or contour.
    """
    a = np.zeros(N + 1)
    b = np.zeros(N + 1)
    a[0] = 1.0
    b[0] = 1.0
    for k in range(N):
        a[k + 1] = a[k] * (beta - k) / (k + 1.0)
        b[k + 1] = b[k] * (k + beta) / (k + 1.0)
    conv = np.convolve(a, b)[: N + 1]
    return 2.0 ** (-beta) * conv


def small_time_reference(alpha, beta, gamma, omega, A, y0, t, J=80, dps=50):
    """High-precision small-time partial sum (term count fixed, precision high)."""
    with mp.workdps(dps):
        a, b, g, w = mp.mpf(alpha), mp.mpf(beta), mp.mpf(gamma), mp.mpf(omega)
        AA = mp.mpmathify(A)
        tt = mp.mpf(t)
        total = mp.mpc(0)
        for j in range(J + 1):
            z = w * tt ** a
            coef = mp.mpf(1)
            ml = mp.mpc(0)
            for k in range(4000):
                term = coef * z ** k * mp.rgamma(a * k + j * b + 1)
                ml += term
                if k > 8 and abs(term) < mp.mpf(10) ** (-dps) * (abs(ml) + 1):
                    break
                coef = coef * (j * g + k) / (k + 1)
            total += AA ** j * tt ** (j * b) * ml
        return complex(total * mp.mpmathify(y0))
