"""Truncated Fock space: ladder matrices, the harmonic generator, and
displacement-type exponentials.

All matrices act on the basis ``psi_0 ... psi_{n_max}``.  The top ``guard``
rows/columns are considered unreliable; every scalar reported by higher
modules is extracted from the ``(dim - guard)`` corner.  The ladder sign
convention is fixed once (charge sign +1); the opposite sign enters only
through the quantization phases in :mod:`magbloch.quantize`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .lattice import Lattice2D, PeriodicVectorPotential, TWO_PI

__all__ = [
    "FockTruncation",
    "ladder",
    "xi_matrix",
    "q_fast",
    "p_fast",
    "I_generator",
    "alpha_coefficient",
    "M_generator",
    "displacement_exp",
    "corner",
    "corner_norm",
    "hermiticity_residual",
]


@dataclass(frozen=True)
class FockTruncation:
    """Basis size ``n_max + 1`` with a guard band of untrusted top rows."""

    n_max: int
    guard: int = 6

    def __post_init__(self):
        if self.n_max < 1:
            raise TruncationError("n_max must be at least 1")
        if not 0 <= self.guard <= self.n_max:
            raise TruncationError("guard must lie in [0, n_max]")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def corner_dim(self) -> int:
        return self.dim - self.guard

    def require(self, order: int, max_band: int) -> None:
        """Check n_max >= 2*order + max_band + guard for dependent objects."""
        need = 2 * order + max_band + self.guard
        if self.n_max < need:
            raise TruncationError(
                f"n_max={self.n_max} too small: order {order} on band "
                f"{max_band} with guard {self.guard} needs n_max >= {need}")


def ladder(T: FockTruncation):
    """Lowering/raising pair: a[n-1, n] = sqrt(n), a_dag = a^T conj."""
    n = np.arange(1, T.dim)
    a = np.zeros((T.dim, T.dim), dtype=complex)
    a[n - 1, n] = np.sqrt(n)
    return a, a.conj().T


def xi_matrix(T: FockTruncation) -> np.ndarray:
    """Harmonic generator diag(n + 1/2); equals a_dag a + 1/2 exactly."""
    return np.diag(np.arange(T.dim) + 0.5).astype(complex)


def q_fast(T: FockTruncation, L: Lattice2D) -> np.ndarray:
    """Fast position (z_a a + conj(z_a) a_dag)/sqrt(2)."""
    a, ad = ladder(T)
    return (L.z_a * a + L.z_a.conjugate() * ad) / math.sqrt(2.0)


def p_fast(T: FockTruncation, L: Lattice2D) -> np.ndarray:
    """Fast momentum (z_b a + conj(z_b) a_dag)/sqrt(2)."""
    a, ad = ladder(T)
    return (L.z_b * a + L.z_b.conjugate() * ad) / math.sqrt(2.0)


def alpha_coefficient(n: int, m: int, L: Lattice2D) -> complex:
    """Ladder coefficient alpha_{n,m} = (n z_b - m z_a)/sqrt(2)."""
    return (n * L.z_b - m * L.z_a) / math.sqrt(2.0)


def I_generator(n: int, m: int, L: Lattice2D, T: FockTruncation) -> np.ndarray:
    """Hermitian generator alpha a + conj(alpha) a_dag of the mode (n, m)."""
    a, ad = ladder(T)
    alpha = alpha_coefficient(n, m, L)
    return alpha * a + alpha.conjugate() * ad


def M_generator(j: int, n: int, m: int, A: PeriodicVectorPotential,
                L: Lattice2D, T: FockTruncation) -> np.ndarray:
    """I_{n,m}^j (f1 Q_f + f2 P_f) for j in {0, 1}.

    Higher powers are excluded here by the truncation policy; the assembled
    models never need them and remainder studies build the product directly.
    """
    if j not in (0, 1):
        raise ValueError("M_generator is defined for j in {0, 1} only")
    lin = A.f1[(n, m)] * q_fast(T, L) + A.f2[(n, m)] * p_fast(T, L)
    if j == 0:
        return lin
    return I_generator(n, m, L, T) @ lin


def displacement_exp(t: float, n: int, m: int, L: Lattice2D,
                     T: FockTruncation) -> np.ndarray:
    """exp(i t I_{n,m}) through the Hermitian eigendecomposition of I.

    Unconditionally stable in t, unitary on the truncated space by
    construction; the guard band controls the distance to the
    untruncated operator.
    """
    if n == 0 and m == 0:
        return np.eye(T.dim, dtype=complex)
    gen = I_generator(n, m, L, T)
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def corner(M: np.ndarray, T: FockTruncation) -> np.ndarray:
    c = T.corner_dim
    return M[:c, :c]


def corner_norm(M: np.ndarray, T: FockTruncation) -> float:
    """Spectral norm of the guard-band corner."""
    c = corner(M, T)
    if c.size == 0:
        return 0.0
    return float(np.linalg.norm(c, 2))


def hermiticity_residual(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T)))
