"""Small dense linear algebra on real square matrices.

Matrices are plain ``float64`` numpy arrays of shape ``(N, N)``; vectors are
arrays of shape ``(N,)``.  At ``N = 2`` the operator norm and spectral radius
use closed forms; larger matrices go through Jacobi sweeps on the Gram matrix
and normalized repeated squaring respectively.
"""

from __future__ import annotations

import math

import numpy as np


class NotConvergedError(ArithmeticError):
    """An iterative routine stopped before meeting its tolerance."""


def as_mat(a) -> np.ndarray:
    """Validate ``a`` as a finite real square matrix and return a float copy."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_vec(x, dim: int | None = None) -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"vector has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def identity(n: int) -> np.ndarray:
    return np.eye(n)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def vec_norm(x: np.ndarray) -> float:
    return math.sqrt(float(np.dot(x, x)))


def _sigma_max_2x2(a: np.ndarray) -> float:
    # Largest eigenvalue of the Gram matrix, written to avoid cancellation:
    # sigma_max^2 = (s + sqrt(d^2 + 4 c^2)) / 2 with s = trace, d = diff of diag.
    p, q = a[0, 0], a[0, 1]
    r, s = a[1, 0], a[1, 1]
    g11 = p * p + r * r
    g22 = q * q + s * s
    g12 = p * q + r * s
    root = math.hypot(g11 - g22, 2.0 * g12)
    return math.sqrt(max(0.5 * (g11 + g22 + root), 0.0))


def jacobi_eigenvalues(s: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius mass drops below
    ``tol`` relative to the total Frobenius mass.
    """
    a = np.array(s, dtype=float)
    n = a.shape[0]
    total = math.sqrt(float(np.sum(a * a))) or 1.0
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(a[mask] ** 2)))
        if off <= tol * total:
            return np.diag(a).copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                rot = np.array([[c, sn], [-sn, c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
    raise NotConvergedError(f"Jacobi sweeps did not converge in {max_sweeps} sweeps")


def operator_norm(a: np.ndarray) -> float:
    """Euclidean-induced operator norm (largest singular value)."""
    n = a.shape[0]
    if n == 1:
        return abs(float(a[0, 0]))
    if n == 2:
        return _sigma_max_2x2(a)
    eig = jacobi_eigenvalues(a.T @ a)
    return math.sqrt(max(float(eig.max()), 0.0))


def _spectral_radius_2x2(a: np.ndarray) -> float:
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    half = 0.5 * tr
    disc = half * half - det
    if disc < 0.0:
        return math.sqrt(det)
    # larger-modulus root without cancellation; the other is det / big
    big = half + math.copysign(math.sqrt(disc), half)
    if big == 0.0:
        return 0.0
    return max(abs(big), abs(det / big))


def spectral_radius(a: np.ndarray, tol: float = 1e-9, max_squarings: int = 60) -> float:
    """Largest eigenvalue modulus.

    Exact at ``N <= 2``.  Otherwise the Gelfand estimate
    ``||a^(2^k)||^(1/2^k)`` (Frobenius norm) is tracked in log space while
    ``a`` is repeatedly normalized and squared; raises :class:`NotConvergedError` when the
    estimate has not settled to ``tol`` after ``max_squarings`` squarings.
    """
    n = a.shape[0]
    if n == 1:
        return abs(float(a[0, 0]))
    if n == 2:
        return _spectral_radius_2x2(a)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return 0.0
    log_est = math.log(norm)
    c = a / norm
    quiet = 0
    for k in range(max_squarings):
        c = c @ c
        cn = float(np.linalg.norm(c))
        if cn == 0.0:
            return 0.0
        step = math.log(cn) / 2.0 ** (k + 1)
        log_est += step
        c /= cn
        # the unseen tail is of the order of the last step, so demand margin
        quiet = quiet + 1 if abs(step) <= tol / 16 else 0
        if quiet >= 2:
            return math.exp(log_est)
    raise NotConvergedError(f"spectral radius estimate unsettled after {max_squarings} squarings")


def perron_root(a: np.ndarray, tol: float = 1e-13, max_iter: int = 100_000) -> float:
    """Dominant eigenvalue of an entrywise-positive matrix by power iteration.

    Stops when the Collatz-Wielandt bracket ``min (Ax)_i/x_i <= r <= max
    (Ax)_i/x_i`` is narrower than ``tol`` relative to its upper end, and
    returns the bracket midpoint.
    """
    if np.any(a <= 0.0):
        raise ValueError("power iteration for the Perron root needs a positive matrix")
    x = np.ones(a.shape[0])
    for _ in range(max_iter):
        y = a @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * hi:
            return 0.5 * (lo + hi)
        x = y / y.max()
    raise NotConvergedError("Perron power iteration did not converge")
