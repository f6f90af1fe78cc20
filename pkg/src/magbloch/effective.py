"""Closed-form effective Hamiltonians as finite matrices.

The adiabatic parameter is tied to rational flux through theta = delta^2,
so every quantized model is an exactly finite q x q (or 2q x 2q) Bloch
family.  Energies are expressed in cyclotron units (the rescaled strong
field scale); a conversion factor back to the bare lattice energy unit is
1/delta^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import (FourierSeries2D, Lattice2D, PeriodicVectorPotential,
                      laplacian_DzDzbar)
from .quantize import (MagneticBlochFamily, RationalFlux, SpectrumReport,
                       quantize_blocks, quantize_series, spectrum)

__all__ = [
    "EffectiveModel",
    "single_band_model",
    "two_band_model",
    "spectrum_via_GGdag",
    "delta_from_flux",
]


def delta_from_flux(flux: RationalFlux) -> float:
    """delta = sqrt(theta); the flux fraction is the squared adiabatic
    parameter."""
    return math.sqrt(flux.theta)


@dataclass(frozen=True)
class EffectiveModel:
    band_set: tuple
    delta: float
    flux: RationalFlux
    blocks: list                       # m x m nested list of FourierSeries2D
    family: MagneticBlochFamily

    @property
    def dim(self) -> int:
        return self.family.dim


def single_band_model(V: FourierSeries2D, L: Lattice2D, lam_star: float,
                      flux: RationalFlux, iota: int = 1,
                      fourth_order: bool = True) -> EffectiveModel:
    """Single-level model lam* + d^2 V + d^4 (lam*/2) |D_z|^2 V, quantized
    as a strong-field power series at theta = d^2.

    ``fourth_order=False`` drops the d^4 term (useful for order fits).
    """
    delta = delta_from_flux(flux)
    symbol = FourierSeries2D({(0, 0): lam_star}, is_real=True, cutoff=V.cutoff)
    symbol = symbol.plus(V.scaled(delta ** 2))
    if fourth_order:
        Y = laplacian_DzDzbar(V, L)
        symbol = symbol.plus(
            FourierSeries2D(Y.coeffs, is_real=True, cutoff=V.cutoff)
            .scaled((delta ** 4) * lam_star / 2.0))
    fam = quantize_series(symbol, flux, iota=iota, convention="harper")
    n_star = int(round(lam_star - 0.5))
    return EffectiveModel(band_set=(n_star,), delta=delta, flux=flux,
                          blocks=[[symbol]], family=fam)


def two_band_model(A: PeriodicVectorPotential, L: Lattice2D, n_star: int,
                   flux: RationalFlux, iota: int = 1) -> EffectiveModel:
    """Two contiguous levels {n*, n*+1} coupled at first order by the
    complexified vector potential g.

    Block layout is ascending in the level index, so the level splitting is
    diag(n*+1/2, n*+3/2) and the coupling sits in the (0,1) block as
    d sqrt(n*+1) g (conjugate-reflected series in the (1,0) block).
    """
    if A.is_zero():
        raise ValueError("two_band_model needs a non-zero vector potential; "
                         "with A = 0 the levels decouple")
    delta = delta_from_flux(flux)
    c = delta * math.sqrt(n_star + 1.0)
    cut = A.g.cutoff
    b00 = FourierSeries2D({(0, 0): n_star + 0.5}, is_real=True, cutoff=cut)
    b11 = FourierSeries2D({(0, 0): n_star + 1.5}, is_real=True, cutoff=cut)
    b01 = A.g.scaled(c)
    b10 = b01.conj_reflect()
    blocks = [[b00, b01], [b10, b11]]
    fam = quantize_blocks(blocks, flux, iota=iota, convention="harper")
    return EffectiveModel(band_set=(n_star, n_star + 1), delta=delta,
                          flux=flux, blocks=blocks, family=fam)


def spectrum_via_GGdag(A: PeriodicVectorPotential, L: Lattice2D, n_star: int,
                       flux: RationalFlux, grid=(16, 16),
                       iota: int = 1) -> SpectrumReport:
    """Spectrum of the two-level model through the reduced q x q problem.

    At every Bloch point the eigenvalues are (n*+1) +/- sqrt(1/4 +
    d^2 (n*+1) lam) over lam in the spectrum of G G^dag, which is positive
    semidefinite; a negative lam beyond roundoff signals a Hermiticity bug.
    """
    if A.is_zero():
        raise ValueError("spectrum_via_GGdag needs a non-zero vector potential")
    delta = delta_from_flux(flux)

    gq = _complex_series_family(A.g, flux, iota)
    n1, n2 = grid
    b1s = [2.0 * math.pi / flux.q * i / n1 for i in range(n1)]
    b2s = [2.0 * math.pi * j / n2 for j in range(n2)]
    rows = []
    for b1 in b1s:
        for b2 in b2s:
            G = gq(b1, b2)
            lam = np.linalg.eigvalsh(G @ G.conj().T)
            if lam.min() < -1e-10:
                raise ValueError(
                    f"G G^dag not positive semidefinite: min eigenvalue {lam.min()}")
            lam = np.clip(lam, 0.0, None)
            root = np.sqrt(0.25 + (delta ** 2) * (n_star + 1.0) * lam)
            vals = np.concatenate([(n_star + 1.0) - root, (n_star + 1.0) + root])
            rows.append(np.sort(vals))
    samples = np.array(rows)
    intervals = [(float(samples[:, k].min()), float(samples[:, k].max()))
                 for k in range(samples.shape[1])]
    width = float(samples.max() - samples.min())
    tol = 1e-6 * max(width, 1e-300)
    from .quantize import _merge_intervals
    bands = _merge_intervals(intervals, tol)
    return SpectrumReport(flux=flux, bands=bands, samples=samples,
                          metadata={"grid": [n1, n2], "route": "GGdag",
                                    "n_star": n_star, "delta": delta})


def _complex_series_family(F: FourierSeries2D, flux: RationalFlux, iota: int):
    """Quantization of a single (generally non-Hermitian) series block."""
    from .quantize import _monomial, _phase, clock_shift

    modes = [(nm, c) for nm, c in sorted(F.coeffs.items()) if c != 0]
    theta = flux.theta

    def build(beta1: float, beta2: float) -> np.ndarray:
        U, V = clock_shift(flux, iota, beta1, beta2)
        G = np.zeros((flux.q, flux.q), dtype=complex)
        for (n, m), c in modes:
            G += c * _phase("harper", iota, theta, n, m) * _monomial(U, V, "harper", n, m)
        return G

    return build
