"""Eigenvalues of small dense matrices for spectrum classification."""

from __future__ import annotations

import numpy as np

from .errors import InvalidParam, NonConvergence

MAX_DIM = 64


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParam(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise InvalidParam("empty matrix")
    if a.shape[0] > MAX_DIM:
        raise InvalidParam(f"dimension {a.shape[0]} exceeds the cap {MAX_DIM}")
    if not np.all(np.isfinite(a.real)) or (np.iscomplexobj(a) and not np.all(np.isfinite(a.imag))):
        raise InvalidParam("matrix entries must be finite")
    return a


def eigenvalues_2x2(m):
    """Closed-form eigenvalues of a 2x2 matrix via trace and determinant.

    The larger-magnitude root of x^2 - tr x + det is computed first and the
    other recovered from the product, avoiding the cancellation in the
    quadratic formula's +- pair.
    """
    a = _as_square(m)
    if a.shape[0] != 2:
        raise InvalidParam(f"expected a 2x2 matrix, got shape {a.shape}")
    tr = complex(a[0, 0] + a[1, 1])
    det = complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    disc = np.sqrt(complex(tr * tr - 4.0 * det))
    r1 = (tr + disc) / 2.0 if abs(tr + disc) >= abs(tr - disc) else (tr - disc) / 2.0
    r2 = det / r1 if r1 != 0 else tr - r1
    return r1, r2


def eigenvalues(m):
    """All eigenvalues with multiplicity (LAPACK: balancing, Hessenberg, shifted QR).

    Every returned value is verified a posteriori: the smallest singular value
    of (M - lambda I) must not exceed 1e-8 * ||M||.
    """
    a = _as_square(m).astype(complex if np.iscomplexobj(m) else float)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigenvalue iteration failed: {exc}") from exc
    norm = np.linalg.norm(a, 2)
    eye = np.eye(a.shape[0])
    bound = 1e-8 * max(norm, 1e-300)
    for lam in vals:
        smin = np.linalg.svd(a - lam * eye, compute_uv=False)[-1]
        if smin > bound:
            raise NonConvergence(
                f"eigenvalue {lam!r} failed the residual check "
                f"(sigma_min={smin:.3e} > {bound:.3e})"
            )
    return [complex(v) for v in vals]
