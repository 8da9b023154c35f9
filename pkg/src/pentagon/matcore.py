"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; every function
returns a fresh array and never mutates its input.
"""

from __future__ import annotations

import numpy as np

from .errors import NotSymmetric, SingularMatrix

DEFAULT_COND_CAP = 1e12
SYMMETRY_TOL = 1e-10


def as_cmatrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def inf_norm(m) -> float:
    """Max absolute row sum."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=-1)))


def max_abs(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def cond_estimate(m) -> float:
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("condition number needs a square matrix")
    with np.errstate(all="ignore"):
        c = np.linalg.cond(a)
    return float(c) if np.isfinite(c) else np.inf


def inverse(m, cond_cap: float = DEFAULT_COND_CAP) -> np.ndarray:
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"inverse needs a square matrix, got {a.shape}")
    c = cond_estimate(a)
    if c > cond_cap:
        raise SingularMatrix(f"condition estimate {c:.3g} exceeds cap {cond_cap:.3g}")
    return np.linalg.inv(a)


def solve_right(a, b, cond_cap: float = DEFAULT_COND_CAP) -> np.ndarray:
    """Return ``x`` with ``x @ a = b`` for square ``a``."""
    a = as_cmatrix(a)
    c = cond_estimate(a)
    if c > cond_cap:
        raise SingularMatrix(f"condition estimate {c:.3g} exceeds cap {cond_cap:.3g}")
    return np.linalg.solve(a.T, np.asarray(b, dtype=np.complex128).T).T


def check_symmetric(m, tol: float = SYMMETRY_TOL, name: str = "matrix") -> np.ndarray:
    a = as_cmatrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"{name} is not square: {a.shape}")
    scale = max(1.0, max_abs(a))
    if max_abs(a - a.T) > tol * scale:
        raise NotSymmetric(f"{name} is not symmetric (|m - m^T| = {max_abs(a - a.T):.3g})")
    return a


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    # Sign-fix a Takagi column: the largest entry gets Re > 0 (or Re == 0, Im > 0).
    k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
    z = v[k]
    if z.real < -1e-14 or (abs(z.real) <= 1e-14 and z.imag < 0):
        return -v
    return v


def takagi(m, tol: float = SYMMETRY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``m = q @ diag(sigma) @ q.T``.

    ``q`` is unitary and ``sigma`` real, nonnegative and sorted in
    decreasing order.

    With ``m = X + iY`` the real symmetric matrix ``[[X, Y], [Y, -X]]`` has
    eigenpairs ``(+-sigma_k, [u; v])``, and ``q_k = u + iv`` solves
    ``m conj(q_k) = sigma_k q_k``. Eigenvectors for distinct eigenvalues
    are orthogonal, which makes the positive half complex-orthonormal.
    Columns for zero singular values are completed by QR.
    """
    a = check_symmetric(m, tol)
    n = a.shape[0]
    x, y = a.real, a.imag
    big = np.block([[x, y], [y, -x]])
    big = 0.5 * (big + big.T)
    w, v = np.linalg.eigh(big)
    order = np.argsort(-w, kind="stable")[:n]
    sigma = np.clip(w[order], 0.0, None)
    q = v[:n, order] + 1j * v[n:, order]

    scale = max(1.0, float(sigma[0]) if n else 1.0)
    zero = sigma <= 1e-13 * scale
    if np.any(zero):
        good = q[:, ~zero]
        k = int(np.count_nonzero(~zero))
        # Complete the positive-sigma columns to a unitary basis.
        rng = np.random.default_rng(0)
        fill = rng.standard_normal((n, n - k)) + 1j * rng.standard_normal((n, n - k))
        basis, _ = np.linalg.qr(np.hstack([good, fill]))
        q = np.hstack([good, basis[:, k:]])
        sigma = np.concatenate([sigma[~zero], np.zeros(n - k)])
    for k in range(n):
        q[:, k] = _canonical_phase(q[:, k])
    return q, sigma


def factor_sym(m, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Return ``c`` with ``c @ c.T = m`` for symmetric invertible ``m``.

    At size 1 this is the principal square root.
    """
    a = check_symmetric(m, tol)
    if a.shape == (1, 1):
        if a[0, 0] == 0:
            raise SingularMatrix("zero 1x1 matrix has no invertible factor")
        return np.sqrt(a)
    q, sigma = takagi(a, tol)
    if sigma[-1] <= 1e-14 * max(1.0, sigma[0]):
        raise SingularMatrix("symmetric matrix is singular (zero Takagi value)")
    return q * np.sqrt(sigma)[None, :]
