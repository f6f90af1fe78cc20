"""Brute-force ground truth for the strong-field regime.

The full Hamiltonian is quantized on (periodic slow grid) x (truncated fast
basis).  Slow translations are realized pseudospectrally: at flux
theta = p/q = delta^2 the elementary translation moves the grid by an exact
number of sites whenever q divides the per-cell resolution, so the slow
Weyl factors are exact circular shifts times diagonal phases.  Fast factors
are the displacement exponentials of the truncated ladder algebra.

Effective models are re-quantized on the *same* slow grid
(:func:`quantize_on_grid`), so oracle/model eigenvalue comparisons sample
identical Bloch phases and the measured distance isolates the model error.

The module also carries the linear-symplectic bookkeeping of the fast/slow
variable maps: commutator tables in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import fock
from .errors import (CommensurabilityError, GapClosedError, NumericError,
                     ResourceCapError)
from .fock import FockTruncation
from .lattice import (FourierSeries2D, Lattice2D, PeriodicVectorPotential,
                      TWO_PI)
from .quantize import RationalFlux, sorted_list_distance

__all__ = [
    "OracleBasis",
    "build_full_matrix",
    "quantize_on_grid",
    "band_cluster",
    "OrderFit",
    "order_fit",
    "LinearCanonicalMap",
    "ccr_table",
    "fast_slow_variable_map",
    "landau_variable_map",
    "default_delta_sweep",
]

DEFAULT_DIM_BUDGET = 6000


@dataclass(frozen=True)
class OracleBasis:
    """Slow periodic grid (n_cells periods, n_grid points per period)
    tensored with a Fock truncation."""

    n_cells: int
    n_grid: int
    fock: FockTruncation
    dim_budget: int = DEFAULT_DIM_BUDGET

    def __post_init__(self):
        if self.n_cells < 1 or self.n_grid < 4:
            raise ValueError("need n_cells >= 1 and n_grid >= 4")
        if self.slow_dim * self.fock.dim > self.dim_budget:
            raise ResourceCapError(
                f"oracle dimension {self.slow_dim * self.fock.dim} exceeds "
                f"budget {self.dim_budget}")

    @property
    def slow_dim(self) -> int:
        return self.n_cells * self.n_grid

    def check_resolves(self, *series: FourierSeries2D) -> None:
        n_modes = max((max(abs(n) for nm in F.coeffs for n in nm)
                       for F in series if F.coeffs), default=0)
        if self.n_grid < 4 * n_modes:
            raise ValueError(
                f"n_grid={self.n_grid} under-resolves modes up to {n_modes}; "
                f"need n_grid >= {4 * n_modes}")


def _slow_factor(basis: OracleBasis, flux: RationalFlux, iota: int,
                 n: int, m: int) -> np.ndarray:
    """Symmetrized slow Weyl factor of mode (n, m): phase * shift * diagonal."""
    if (flux.p * basis.n_grid) % flux.q:
        raise CommensurabilityError(
            f"flux {flux.p}/{flux.q} incommensurate with n_grid={basis.n_grid}: "
            f"q must divide the per-cell resolution")
    N = basis.slow_dim
    theta = flux.theta
    step = (flux.p * basis.n_grid) // flux.q
    j = np.arange(N)
    x = j / basis.n_grid
    diag = np.exp(1j * TWO_PI * m * x)
    out = np.zeros((N, N), dtype=complex)
    # (O psi)[j] = phase * e^{i 2 pi m x_j'} psi[j'],  j' = j + n*iota*step
    src = (j + n * iota * step) % N
    out[j, src] = np.exp(-1j * math.pi * n * m * iota * theta) * diag[src]
    return out


def build_full_matrix(V: FourierSeries2D, A: PeriodicVectorPotential | None,
                      L: Lattice2D, basis: OracleBasis, flux: RationalFlux,
                      iota: int = 1) -> np.ndarray:
    """Hermitian matrix of the full strong-field Hamiltonian on
    slow grid x Fock basis, at delta = sqrt(theta)."""
    basis.check_resolves(V, *( (A.f1, A.f2) if A is not None else () ))
    T = basis.fock
    delta = math.sqrt(flux.theta)
    N = basis.slow_dim
    D = N * T.dim
    H = np.kron(np.eye(N, dtype=complex), fock.xi_matrix(T))
    if A is not None and not A.is_zero():
        qf = fock.q_fast(T, L)
        pf = fock.p_fast(T, L)
        for (n, m) in sorted(set(A.f1.coeffs) | set(A.f2.coeffs)):
            lin = A.f1[(n, m)] * qf + A.f2[(n, m)] * pf
            if not np.any(lin):
                continue
            E = fock.displacement_exp(TWO_PI * delta, n, m, L, T)
            H += delta * np.kron(_slow_factor(basis, flux, iota, n, m), E @ lin)
    for (n, m), v in sorted(V.coeffs.items()):
        if v == 0:
            continue
        E = fock.displacement_exp(TWO_PI * delta, n, m, L, T)
        H += (delta ** 2) * v * np.kron(_slow_factor(basis, flux, iota, n, m), E)
    resid = float(np.max(np.abs(H - H.conj().T)))
    if resid > 1e-10 * max(1.0, float(np.max(np.abs(H)))):
        raise NumericError(f"oracle matrix lost Hermiticity: residual {resid}")
    return H


def quantize_on_grid(blocks, basis: OracleBasis, flux: RationalFlux,
                     iota: int = 1) -> np.ndarray:
    """Quantize an effective symbol on the oracle's slow grid.

    ``blocks`` is either a single real series or an m x m nested list of
    series.  Using the same grid operators as the oracle means both spectra
    sample identical Bloch phases.
    """
    if isinstance(blocks, FourierSeries2D):
        blocks = [[blocks]]
    m = len(blocks)
    N = basis.slow_dim
    H = np.zeros((m * N, m * N), dtype=complex)
    for i in range(m):
        for k in range(m):
            F = blocks[i][k]
            if F is None:
                continue
            blk = np.zeros((N, N), dtype=complex)
            for (n, mm), c in sorted(F.coeffs.items()):
                if c == 0:
                    continue
                blk += c * _slow_factor(basis, flux, iota, n, mm)
            H[i * N:(i + 1) * N, k * N:(k + 1) * N] = blk
    resid = float(np.max(np.abs(H - H.conj().T)))
    if resid > 1e-10 * max(1.0, float(np.max(np.abs(H)))):
        raise NumericError(f"quantized model lost Hermiticity: residual {resid}")
    return H


def oracle_eigenvalues(H: np.ndarray) -> np.ndarray:
    return scipy.linalg.eigvalsh(H, check_finite=False)


def band_cluster(eigs, lam_star: float, half_gap: float = 0.45) -> np.ndarray:
    """Eigenvalues within half_gap of the target level.

    Raises :class:`GapClosedError` when the cluster diameter reaches
    half_gap, i.e. when neighbouring level clusters have merged.
    """
    eigs = np.asarray(eigs, dtype=float)
    sel = eigs[np.abs(eigs - lam_star) <= half_gap]
    if sel.size == 0:
        raise GapClosedError(f"no eigenvalues within {half_gap} of {lam_star}")
    if sel.max() - sel.min() >= half_gap:
        raise GapClosedError(
            f"gap closed at this delta: cluster diameter "
            f"{sel.max() - sel.min():.3g} >= half_gap {half_gap}")
    return np.sort(sel)


@dataclass(frozen=True)
class OrderFit:
    slope: float
    residual: float
    deltas: tuple
    distances: tuple
    censored: tuple


def order_fit(model_spectra, oracle_spectra, delta_list) -> OrderFit:
    """Least-squares slope of log(distance) against log(delta).

    Distances are sup distances of sorted spectra (set Hausdorff when the
    counts differ); values below the 1e-12 floor are censored from the fit.
    """
    deltas = [float(d) for d in delta_list]
    if len(deltas) < 3:
        raise ValueError("order fit needs at least 3 delta values")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta list must be strictly decreasing")
    dists, censored = [], []
    for mod, orc, d in zip(model_spectra, oracle_spectra, deltas):
        dist = sorted_list_distance(mod, orc)
        dists.append(dist)
        censored.append(dist < 1e-12)
    pts = [(d, e) for d, e, c in zip(deltas, dists, censored) if not c]
    if len(pts) < 2:
        raise NumericError("too few uncensored distances for a slope fit")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    Amat = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, *_ = np.linalg.lstsq(Amat, ly, rcond=None)
    residual = float(math.sqrt(res[0] / len(lx))) if res.size else 0.0
    return OrderFit(slope=float(coef[0]), residual=residual,
                    deltas=tuple(deltas), distances=tuple(dists),
                    censored=tuple(censored))


def default_delta_sweep():
    """Rational-flux sweep with delta close to {0.25, 0.18, 0.125, 0.09}:
    theta = delta^2 in {1/16, 1/31, 1/64, 1/123}."""
    return [RationalFlux(1, 16), RationalFlux(1, 31),
            RationalFlux(1, 64), RationalFlux(1, 123)]


# ---------------------------------------------------------------------------
# linear symplectic variable maps, exact arithmetic

@dataclass(frozen=True)
class LinearCanonicalMap:
    """Four operators (K1, K2, G1, G2) as rational linear combinations of
    (Q1, Q2, P1, P2); rows store (q1, q2, p1, p2) coefficients."""

    rows: tuple          # 4 rows of 4 Fractions
    labels: tuple = ("K1", "K2", "G1", "G2")

    @classmethod
    def from_frame(cls, v, w, alpha_beta, beta_sq) -> "LinearCanonicalMap":
        """Fast/slow map for a frame (v, w) with parameter products
        alpha*beta and beta^2 (all exact rationals):

            K1 = -(ab/2b2) v.Q - ab w*.P      G1 = (1/2) v.Q - b2 w*.P
            K2 = +(ab/2b2) w.Q - ab v*.P      G2 = (1/2) w.Q + b2 v*.P
        """
        v = [Fraction(c) for c in v]
        w = [Fraction(c) for c in w]
        ab = Fraction(alpha_beta)
        b2 = Fraction(beta_sq)
        det = v[0] * w[1] - v[1] * w[0]
        if det == 0:
            raise ValueError("frame vectors must be linearly independent")
        v_star = [w[1] / det, -w[0] / det]
        w_star = [-v[1] / det, v[0] / det]
        half = Fraction(1, 2)
        rows = (
            (-ab / (2 * b2) * v[0], -ab / (2 * b2) * v[1], -ab * w_star[0], -ab * w_star[1]),
            (+ab / (2 * b2) * w[0], +ab / (2 * b2) * w[1], -ab * v_star[0], -ab * v_star[1]),
            (half * v[0], half * v[1], -b2 * w_star[0], -b2 * w_star[1]),
            (half * w[0], half * w[1], +b2 * v_star[0], +b2 * v_star[1]),
        )
        return cls(rows=rows)


def ccr_table(cmap: LinearCanonicalMap):
    """4 x 4 table of commutator coefficients: entry (i, j) is the exact
    rational c with [X_i, X_j] = i c, from the bilinear rule
    [a.Q + b.P, c.Q + d.P] = i (a.d - b.c)."""
    rows = cmap.rows
    table = []
    for i in range(4):
        qi = rows[i][:2]
        pi = rows[i][2:]
        line = []
        for j in range(4):
            qj = rows[j][:2]
            pj = rows[j][2:]
            c = (qi[0] * pj[0] + qi[1] * pj[1]) - (pi[0] * qj[0] + pi[1] * qj[1])
            line.append(c)
        table.append(tuple(line))
    return tuple(table)


def fast_slow_variable_map(a, b, iota: int, delta) -> LinearCanonicalMap:
    """Fast/slow map of the strong-field regime: frame (b*, a*) of a rational
    lattice with alpha^2 = iota, beta^2 = iota delta^2."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    area = a[0] * b[1] - a[1] * b[0]
    if area <= 0:
        raise ValueError("lattice must be positively oriented")
    a_star = [b[1] / area, -b[0] / area]
    b_star = [-a[1] / area, a[0] / area]
    d = Fraction(delta)
    return LinearCanonicalMap.from_frame(
        v=b_star, w=a_star, alpha_beta=Fraction(iota) * d,
        beta_sq=Fraction(iota) * d * d)


def landau_variable_map() -> LinearCanonicalMap:
    """Kinetic-momentum choice: v = v* = (0,-1), w = w* = (-1,0),
    alpha = beta = 1."""
    return LinearCanonicalMap.from_frame(
        v=[0, -1], w=[-1, 0], alpha_beta=Fraction(1), beta_sq=Fraction(1))
