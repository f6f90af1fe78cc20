"""Finite quantization at rational flux.

At flux theta = p/q the two unitaries generating the magnetic algebra admit
q-dimensional clock-and-shift representations labelled by Bloch phases
(beta1, beta2).  One fixed representation convention is used (clock diagonal
for U, cyclic shift carrying beta2 for V) and the commutation relation
``U V = exp(-i 2 pi iota theta) V U`` is asserted by the test suite rather
than trusted.

Two symmetrized power-series quantizations of a real periodic function are
provided: the strong-field form (phase ``exp(-i pi n m iota theta)``,
ordering V^n U^m) and the weak-field form (phase ``exp(+i pi n m iota
theta)``, ordering U^n V^m).  They act at reciprocal deformation parameters;
when their theta values coincide the band sets coincide, which is the guard
against misreading the phase bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import NumericError
from .lattice import FourierSeries2D

__all__ = [
    "RationalFlux",
    "reduced_fractions",
    "clock_shift",
    "quantize_series",
    "quantize_blocks",
    "MagneticBlochFamily",
    "SpectrumReport",
    "spectrum",
    "butterfly",
    "almost_mathieu_spectrum",
    "hausdorff_distance",
    "sorted_list_distance",
    "band_measure",
]


@dataclass(frozen=True)
class RationalFlux:
    """Reduced fraction p/q with q >= 1."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("flux denominator must be >= 1")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"flux {self.p}/{self.q} is not reduced")

    @property
    def theta(self) -> float:
        return self.p / self.q

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    @classmethod
    def from_fraction(cls, f) -> "RationalFlux":
        f = Fraction(f)
        return cls(f.numerator, f.denominator)


def reduced_fractions(q_max: int):
    """All reduced p/q with q <= q_max, ordered by (q, p); includes 0/1."""
    out = []
    for q in range(1, q_max + 1):
        for p in range(q):
            if math.gcd(p, q) == 1:
                out.append(RationalFlux(p, q))
    return out


def clock_shift(flux: RationalFlux, iota: int, beta1: float, beta2: float):
    """Clock/shift pair at Bloch phases (beta1, beta2):

    U = diag(exp(-i(beta1 + 2 pi iota theta j))),  V e_j = e^{-i beta2} e_{j+1 mod q};
    then U V = exp(-i 2 pi iota theta) V U exactly.
    """
    q = flux.q
    j = np.arange(q)
    U = np.diag(np.exp(-1j * (beta1 + 2.0 * math.pi * iota * flux.theta * j)))
    V = np.zeros((q, q), dtype=complex)
    V[(j + 1) % q, j] = np.exp(-1j * beta2)
    return U, V


@dataclass(frozen=True)
class MagneticBlochFamily:
    """q*m x q*m Hermitian-matrix-valued function of the Bloch phases."""

    flux: RationalFlux
    iota: int
    convention: str
    dim: int
    _build: object = field(repr=False)

    def matrix_at(self, beta1: float, beta2: float) -> np.ndarray:
        H = self._build(beta1, beta2)
        resid = float(np.max(np.abs(H - H.conj().T)))
        if resid > 1e-12 * max(1.0, float(np.max(np.abs(H)))):
            raise NumericError(f"quantized family lost Hermiticity: {resid}")
        return H

    def sample_grid(self, n1: int, n2: int):
        """(beta1, beta2) grid on [0, 2 pi / q) x [0, 2 pi)."""
        q = self.flux.q
        b1 = [2.0 * math.pi / q * i / n1 for i in range(n1)]
        b2 = [2.0 * math.pi * j / n2 for j in range(n2)]
        return b1, b2


def _phase(convention: str, iota: int, theta: float, n: int, m: int) -> complex:
    if convention == "harper":
        return np.exp(-1j * math.pi * n * m * iota * theta)
    if convention == "hofstadter":
        return np.exp(+1j * math.pi * n * m * iota * theta)
    raise ValueError(f"unknown convention {convention!r}")


def _upower(M: np.ndarray, k: int) -> np.ndarray:
    if k >= 0:
        return np.linalg.matrix_power(M, k)
    return np.linalg.matrix_power(M.conj().T, -k)


def _monomial(U: np.ndarray, V: np.ndarray, convention: str,
              n: int, m: int) -> np.ndarray:
    if convention == "harper":
        return _upower(V, n) @ _upower(U, m)
    return _upower(U, n) @ _upower(V, m)


def quantize_series(F: FourierSeries2D, flux: RationalFlux, iota: int = -1,
                    convention: str = "harper") -> MagneticBlochFamily:
    """Symmetrized power series in the clock/shift pair.

    strong-field ("harper"):    sum f_{n,m} e^{-i pi n m iota theta} V^n U^m
    weak-field ("hofstadter"):  sum f_{n,m} e^{+i pi n m iota theta} U^n V^m
    """
    if not F.is_real:
        raise ValueError("quantize_series requires a real-valued series")
    theta = flux.theta
    modes = [(nm, c) for nm, c in sorted(F.coeffs.items()) if c != 0]

    def build(beta1: float, beta2: float) -> np.ndarray:
        U, V = clock_shift(flux, iota, beta1, beta2)
        H = np.zeros((flux.q, flux.q), dtype=complex)
        for (n, m), c in modes:
            H += c * _phase(convention, iota, theta, n, m) * _monomial(U, V, convention, n, m)
        return H

    return MagneticBlochFamily(flux=flux, iota=iota, convention=convention,
                               dim=flux.q, _build=build)


def quantize_blocks(blocks, flux: RationalFlux, iota: int = -1,
                    convention: str = "harper") -> MagneticBlochFamily:
    """Blockwise quantization of an m x m array of Fourier series.

    The block symbol must be Hermitian (block (i,j) the conjugate-reflected
    series of block (j,i)); the assembled (m q) x (m q) family is then
    Hermitian at every point.
    """
    m = len(blocks)
    theta = flux.theta

    def build(beta1: float, beta2: float) -> np.ndarray:
        U, V = clock_shift(flux, iota, beta1, beta2)
        q = flux.q
        H = np.zeros((m * q, m * q), dtype=complex)
        for i in range(m):
            for k in range(m):
                Fik = blocks[i][k]
                if Fik is None:
                    continue
                blk = np.zeros((q, q), dtype=complex)
                for (n, mm), c in sorted(Fik.coeffs.items()):
                    if c == 0:
                        continue
                    blk += c * _phase(convention, iota, theta, n, mm) \
                        * _monomial(U, V, convention, n, mm)
                H[i * q:(i + 1) * q, k * q:(k + 1) * q] = blk
        return H

    return MagneticBlochFamily(flux=flux, iota=iota, convention=convention,
                               dim=m * flux.q, _build=build)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue samples of a Bloch family and the merged band intervals."""

    flux: RationalFlux
    bands: list           # [(E_min, E_max)] sorted, non-overlapping
    samples: np.ndarray   # (n_points, dim) sorted eigenvalues per point
    metadata: dict

    def all_eigenvalues(self) -> np.ndarray:
        return np.sort(self.samples.ravel())


def _merge_intervals(intervals, tol: float):
    """Join intervals that overlap by more than tol or are contained in the
    previous one at that resolution; bands merely touching at a point stay
    distinct."""
    merged = []
    for lo, hi in sorted(intervals):
        if merged and (lo < merged[-1][1] - tol or hi <= merged[-1][1] + tol):
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def spectrum(fam: MagneticBlochFamily, grid=(16, 16), tol_band: float | None = None,
             threads: int = 1, eigensolver: str = "lapack") -> SpectrumReport:
    """Diagonalize over the Bloch grid and merge into band intervals.

    Band intervals come from tracking sorted eigenvalue branches over the
    grid; branches closer than ``tol_band`` (default 1e-6 of the spectral
    width) merge into one interval.  ``eigensolver="jacobi"`` selects the
    self-contained cyclic Jacobi path.
    """
    n1, n2 = grid
    if n1 < 8 or n2 < 8:
        raise ValueError("grid must be at least (8, 8)")
    if eigensolver == "jacobi":
        from .jacobi import jacobi_eigvalsh as eigvalsh
    elif eigensolver == "lapack":
        eigvalsh = np.linalg.eigvalsh
    else:
        raise ValueError(f"unknown eigensolver {eigensolver!r}")
    b1s, b2s = fam.sample_grid(n1, n2)
    points = [(b1, b2) for b1 in b1s for b2 in b2s]

    def solve(pt):
        try:
            return eigvalsh(fam.matrix_at(*pt))
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigensolver failed at beta={pt}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, points))
    else:
        rows = [solve(pt) for pt in points]
    samples = np.array(rows)
    width = float(samples.max() - samples.min()) if samples.size else 1.0
    if tol_band is None:
        tol_band = 1e-6 * max(width, 1e-300)
    intervals = [(float(samples[:, k].min()), float(samples[:, k].max()))
                 for k in range(samples.shape[1])]
    bands = _merge_intervals(intervals, tol_band)
    return SpectrumReport(flux=fam.flux, bands=bands, samples=samples,
                          metadata={"grid": [n1, n2], "tol_band": tol_band,
                                    "iota": fam.iota,
                                    "convention": fam.convention,
                                    "eigensolver": eigensolver})


def butterfly(F: FourierSeries2D, q_max: int, iota: int = -1,
              convention: str = "harper", grid=(8, 16),
              threads: int = 1) -> list:
    """One spectrum report per reduced flux p/q with q <= q_max,
    deterministically ordered by (q, p)."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    reports = []
    fluxes = reduced_fractions(q_max)

    def run(fx):
        fam = quantize_series(F, fx, iota=iota, convention=convention)
        g = (max(grid[0], 8), max(grid[1], 8))
        return spectrum(fam, grid=g)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, fluxes))
    else:
        reports = [run(fx) for fx in fluxes]
    return reports


def band_measure(report: SpectrumReport) -> float:
    return float(sum(hi - lo for lo, hi in report.bands))


def almost_mathieu_spectrum(flux: RationalFlux, beta: float, N: int) -> np.ndarray:
    """Eigenvalues of the N-site periodic difference operator
    ``u_{n-1} + u_{n+1} + 2 cos(2 pi theta n + beta) u_n``."""
    if N < 3 * flux.q:
        raise ValueError("N must be at least 3q")
    n = np.arange(N)
    H = np.zeros((N, N))
    H[n, n] = 2.0 * np.cos(2.0 * math.pi * flux.theta * n + beta)
    H[n[:-1], n[:-1] + 1] = 1.0
    H[n[:-1] + 1, n[:-1]] = 1.0
    H[0, N - 1] = 1.0
    H[N - 1, 0] = 1.0
    return np.linalg.eigvalsh(H)


def _one_sided(A: np.ndarray, B: np.ndarray) -> float:
    """max over a in A of the distance from a to the set B (both sorted)."""
    if B.size == 1:
        return float(np.max(np.abs(A - B[0])))
    i = np.clip(np.searchsorted(B, A), 1, B.size - 1)
    d = np.minimum(np.abs(A - B[i - 1]), np.abs(A - B[i]))
    return float(d.max())


def hausdorff_distance(A, B) -> float:
    """Hausdorff distance between two finite point sets on the line."""
    A = np.sort(np.asarray(A, dtype=float).ravel())
    B = np.sort(np.asarray(B, dtype=float).ravel())
    if A.size == 0 or B.size == 0:
        raise ValueError("empty spectrum in Hausdorff distance")
    return max(_one_sided(A, B), _one_sided(B, A))


def sorted_list_distance(A, B) -> float:
    """Sup distance of sorted eigenvalue lists truncated to matching counts.

    Equal-length lists compare entry by entry; otherwise the comparison
    falls back to the set Hausdorff distance.
    """
    A = np.sort(np.asarray(A, dtype=float).ravel())
    B = np.sort(np.asarray(B, dtype=float).ravel())
    if A.size == B.size:
        return float(np.max(np.abs(A - B))) if A.size else 0.0
    return hausdorff_distance(A, B)
