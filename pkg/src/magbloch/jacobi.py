"""Cyclic Jacobi eigenvalue solver for Hermitian matrices.

Fallback path so the band sweeps do not mandate an external eigensolver;
the default path uses LAPACK.  Classic cyclic-by-row sweeps with complex
2x2 rotations; quadratic convergence once the off-diagonal mass is small.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

__all__ = ["jacobi_eigvalsh"]


def jacobi_eigvalsh(H: np.ndarray, tol: float = 1e-13,
                    max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations."""
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return np.array([A[0, 0].real])
    scale = max(float(np.max(np.abs(A))), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(np.abs(A) ** 2))
                            - float(np.sum(np.abs(np.diag(A)) ** 2))))
        if off <= tol * scale * n:
            return np.sort(np.real(np.diag(A)))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                # phase out the complex pivot, then rotate as in the real case
                phase = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # column operations: [p, q] <- [p, q] @ R
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * np.conj(phase) * col_q
                A[:, q] = s * phase * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * phase * row_q
                A[q, :] = s * np.conj(phase) * row_p + c * row_q
    raise NumericError(
        f"Jacobi sweep did not converge in {max_sweeps} sweeps")
