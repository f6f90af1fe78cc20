"""Strong-field Hamiltonian symbols on the truncated Fock space.

An operator-valued symbol is stored as a grading

    ``{j: {(n, m): C}}``  meaning  ``sum_j delta^j sum_{n,m} e^{i 2 pi (n p + m x)} C``

with ``C`` a Fock matrix.  Grade 0 is the harmonic generator; the expansion
terms are homogeneous polynomials in the ladder operators multiplying the
Fourier modes of the scalar potential and of the periodic vector potential.
The exact symbol carries displacement factors instead of their polynomial
truncations; the difference is the remainder whose scaling orders are
measured here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .errors import GaugeError
from .fock import FockTruncation, corner_norm
from .lattice import (FourierSeries2D, Lattice2D, PeriodicVectorPotential,
                      TWO_PI)

__all__ = [
    "OperatorSymbol",
    "EvaluatedSymbol",
    "V_term",
    "W_term",
    "assemble_truncated",
    "eval_mode_map",
    "eval_symbol",
    "eval_exact",
    "remainder_matrix",
    "remainder_norm",
    "mode_dagger",
    "symbol_hermiticity_residual",
    "default_points",
]

# ---------------------------------------------------------------------------
# mode-map helpers (shared with the star-product module)

ModeMap = dict


def mode_add(A: ModeMap, B: ModeMap) -> ModeMap:
    out = {nm: M.copy() for nm, M in A.items()}
    for nm, M in B.items():
        if nm in out:
            out[nm] = out[nm] + M
        else:
            out[nm] = M.copy()
    return out


def mode_scale(A: ModeMap, s: complex) -> ModeMap:
    return {nm: s * M for nm, M in A.items()}


def mode_dagger(A: ModeMap) -> ModeMap:
    """Pointwise adjoint of the symbol: (n,m) -> conj-transpose at (-n,-m)."""
    return {(-n, -m): M.conj().T for (n, m), M in A.items()}


def mode_max_norm(A: ModeMap, T: FockTruncation) -> float:
    """Max over modes of the entrywise max-norm on the guard corner."""
    c = T.corner_dim
    best = 0.0
    for M in A.values():
        best = max(best, float(np.max(np.abs(M[:c, :c]))) if c else 0.0)
    return best


def eval_mode_map(A: ModeMap, point) -> np.ndarray:
    p, x = point
    dim = next(iter(A.values())).shape[0] if A else 1
    out = np.zeros((dim, dim), dtype=complex)
    for (n, m), M in A.items():
        out += cmath.exp(1j * TWO_PI * (n * p + m * x)) * M
    return out


@dataclass(frozen=True)
class OperatorSymbol:
    """delta-graded, Fourier-mode-indexed family of truncated Fock matrices."""

    grades: dict
    truncation: FockTruncation
    lattice: Lattice2D
    natural: int | None = None

    def grade(self, j: int) -> ModeMap:
        return self.grades.get(j, {})

    def max_grade(self) -> int:
        return max(self.grades, default=0)


@dataclass(frozen=True)
class EvaluatedSymbol:
    point: tuple
    matrix: np.ndarray


def V_term(j: int, V: FourierSeries2D, L: Lattice2D, T: FockTruncation) -> ModeMap:
    """Scalar-potential expansion term of total grade j (j >= 2):
    mode matrix ``(i 2 pi)^(j-2)/(j-2)! * I_{n,m}^(j-2) * v_{n,m}``."""
    if j < 2:
        raise ValueError("scalar-potential terms start at grade 2")
    k = j - 2
    pref = (1j * TWO_PI) ** k / math.factorial(k)
    eye = np.eye(T.dim, dtype=complex)
    out: ModeMap = {}
    for (n, m), v in V.coeffs.items():
        if v == 0:
            continue
        if k == 0:
            out[(n, m)] = (pref * v) * eye
        else:
            out[(n, m)] = (pref * v) * np.linalg.matrix_power(
                fock.I_generator(n, m, L, T), k)
    return out


def W_term(j: int, A: PeriodicVectorPotential, L: Lattice2D,
           T: FockTruncation) -> ModeMap:
    """Vector-potential expansion term of total grade j (j >= 1):
    mode matrix ``(i 2 pi)^(j-1)/(j-1)! * I_{n,m}^(j-1) (f1 Q_f + f2 P_f)``.

    Grades 1 and 2 enter the assembled models; higher grades are only used
    in remainder diagnostics.
    """
    if j < 1:
        raise ValueError("vector-potential terms start at grade 1")
    k = j - 1
    pref = (1j * TWO_PI) ** k / math.factorial(k)
    qf = fock.q_fast(T, L)
    pf = fock.p_fast(T, L)
    out: ModeMap = {}
    for (n, m) in set(A.f1.coeffs) | set(A.f2.coeffs):
        lin = A.f1[(n, m)] * qf + A.f2[(n, m)] * pf
        if not np.any(lin):
            continue
        if k == 0:
            out[(n, m)] = pref * lin
        else:
            out[(n, m)] = pref * (
                np.linalg.matrix_power(fock.I_generator(n, m, L, T), k) @ lin)
    return out


def assemble_truncated(V: FourierSeries2D, A: PeriodicVectorPotential | None,
                       L: Lattice2D, T: FockTruncation) -> OperatorSymbol:
    """Polynomially truncated symbol up to grade 2*(1+natural).

    ``natural`` is 1 without a vector potential (grades {0, 2, 3, 4}, grade 1
    empty) and 0 with one (grades {0, 1, 2}).
    """
    natural = 1 if A is None or A.is_zero() else 0
    grades: dict[int, ModeMap] = {0: {(0, 0): fock.xi_matrix(T)}}
    for j in range(1, 2 * (1 + natural) + 1):
        term: ModeMap = {}
        if A is not None and not A.is_zero():
            term = mode_add(term, W_term(j, A, L, T))
        if j >= 2:
            term = mode_add(term, V_term(j, V, L, T))
        if term:
            grades[j] = term
    return OperatorSymbol(grades=grades, truncation=T, lattice=L,
                          natural=natural)


def eval_symbol(sym: OperatorSymbol, point, delta: float) -> np.ndarray:
    """sum_j delta^j (grade-j evaluation) at the phase-space point."""
    out = np.zeros((sym.truncation.dim, sym.truncation.dim), dtype=complex)
    for j, mm in sym.grades.items():
        out += (delta ** j) * eval_mode_map(mm, point)
    return out


def symbol_hermiticity_residual(sym: OperatorSymbol, T: FockTruncation) -> float:
    """Mode-reflection conjugation defect, max over grades and modes."""
    best = 0.0
    for mm in sym.grades.values():
        dag = mode_dagger(mm)
        diff = mode_add(mm, mode_scale(dag, -1.0))
        best = max(best, mode_max_norm(diff, T))
    return best


def eval_exact(V: FourierSeries2D, A: PeriodicVectorPotential | None,
               L: Lattice2D, T: FockTruncation, delta: float,
               point) -> EvaluatedSymbol:
    """Exact symbol at one point: harmonic part plus the displacement-dressed
    potential terms; Hermitian inside the guard band when the gauge
    condition holds."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    p, x = point
    H = fock.xi_matrix(T)
    if A is not None and not A.is_zero():
        qf = fock.q_fast(T, L)
        pf = fock.p_fast(T, L)
        for (n, m) in set(A.f1.coeffs) | set(A.f2.coeffs):
            lin = A.f1[(n, m)] * qf + A.f2[(n, m)] * pf
            if not np.any(lin):
                continue
            E = fock.displacement_exp(TWO_PI * delta, n, m, L, T)
            H = H + delta * cmath.exp(1j * TWO_PI * (n * p + m * x)) * (E @ lin)
    for (n, m), v in V.coeffs.items():
        if v == 0:
            continue
        E = fock.displacement_exp(TWO_PI * delta, n, m, L, T)
        H = H + (delta ** 2) * v * cmath.exp(1j * TWO_PI * (n * p + m * x)) * E
    return EvaluatedSymbol(point=tuple(point), matrix=H)


def _band_projector(T: FockTruncation, bands) -> np.ndarray:
    P = np.zeros((T.dim, T.dim), dtype=complex)
    for k in bands:
        P[k, k] = 1.0
    return P


def remainder_matrix(V, A, L, T: FockTruncation, delta: float, point) -> np.ndarray:
    """Exact symbol minus the evaluated truncated symbol at one point."""
    sym = assemble_truncated(V, A, L, T)
    return eval_exact(V, A, L, T, delta, point).matrix - eval_symbol(sym, point, delta)


def remainder_norm(V, A, L, T: FockTruncation, delta: float, point,
                   projector_band=None) -> float:
    """Guard-corner spectral norm of the remainder, optionally compressed
    onto a finite family of Hermite states.

    With ``projector_band`` given the reported quantity is ``|R P_band|``
    (the remainder tested against band states); this is the object whose
    scaling order improves by one power over the unprojected norm.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    R = remainder_matrix(V, A, L, T, delta, point)
    if projector_band is None:
        return corner_norm(R, T)
    bands = [projector_band] if isinstance(projector_band, int) else list(projector_band)
    P = _band_projector(T, bands)
    return corner_norm(R @ P, T)


def default_points(k: int = 4):
    """k x k evaluation grid on [0,1)^2."""
    return [(i / k, j / k) for i in range(k) for j in range(k)]
