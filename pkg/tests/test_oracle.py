import math
from fractions import Fraction

import numpy as np
import pytest

from magbloch.errors import (CommensurabilityError, GapClosedError,
                             ResourceCapError)
from magbloch.fock import FockTruncation
from magbloch.lattice import FourierSeries2D, harper_potential
from magbloch.oracle import (LinearCanonicalMap, OracleBasis, band_cluster,
                             build_full_matrix, ccr_table,
                             landau_variable_map, oracle_eigenvalues,
                             order_fit, fast_slow_variable_map, quantize_on_grid)
from magbloch.quantize import RationalFlux

EMPTY = FourierSeries2D({}, is_real=True)


def _fock(n_max=30, guard=6):
    return FockTruncation(n_max=n_max, guard=guard)


def test_ccr_fast_slow_choice():
    for iota in (1, -1):
        for delta in (Fraction(1, 4), Fraction(2, 7)):
            cmap = fast_slow_variable_map([1, 0], [0, 1], iota, delta)
            tab = ccr_table(cmap)
            assert tab[0][1] == iota
            assert tab[2][3] == iota * delta * delta
            for i in (0, 1):
                for j in (2, 3):
                    assert tab[i][j] == 0
            for i in range(4):
                assert tab[i][i] == 0
                for j in range(4):
                    assert tab[i][j] == -tab[j][i]


def test_ccr_fast_slow_choice_oblique_lattice():
    # rational oblique lattice keeps the table exact
    cmap = fast_slow_variable_map([2, 1], [Fraction(1, 2), 3], 1, Fraction(1, 3))
    tab = ccr_table(cmap)
    assert tab[0][1] == 1
    assert tab[2][3] == Fraction(1, 9)
    assert all(tab[i][j] == 0 for i in (0, 1) for j in (2, 3))


def test_ccr_landau_choice():
    tab = ccr_table(landau_variable_map())
    assert tab[0][1] == 1
    assert tab[2][3] == 1
    assert all(tab[i][j] == 0 for i in (0, 1) for j in (2, 3))


def test_ccr_scaling_bilinearity():
    base = LinearCanonicalMap.from_frame([0, -1], [-1, 0], Fraction(1),
                                         Fraction(1))
    doubled = LinearCanonicalMap.from_frame([0, -1], [-1, 0], Fraction(2),
                                            Fraction(1))
    assert ccr_table(doubled)[0][1] == 4 * ccr_table(base)[0][1]


def test_landau_levels_degenerate(square):
    basis = OracleBasis(n_cells=1, n_grid=8, fock=_fock(40))
    H = build_full_matrix(EMPTY, None, square, basis, RationalFlux(1, 16))
    eigs = oracle_eigenvalues(H)
    for n in range(11):
        cluster = eigs[np.abs(eigs - (n + 0.5)) < 0.4]
        assert cluster.size == basis.slow_dim
        assert np.max(np.abs(cluster - (n + 0.5))) < 1e-10


def test_mean_level_shift(square, harper):
    # lowest cluster mean moves by delta^2 * (mean of the potential)
    V = harper.plus(FourierSeries2D({(0, 0): 1.0}, is_real=True))
    means = []
    fluxes = [RationalFlux(1, 16), RationalFlux(1, 64)]
    for fx in fluxes:
        basis = OracleBasis(n_cells=1, n_grid=fx.q, fock=_fock())
        H = build_full_matrix(V, None, square, basis, fx)
        cl = band_cluster(oracle_eigenvalues(H), 0.5)
        means.append(cl.mean())
    for fx, mean in zip(fluxes, means):
        assert abs((mean - 0.5) / fx.theta - 1.0) < 0.15


def test_oracle_hermitian(square, harper, one_mode_potential):
    basis = OracleBasis(n_cells=1, n_grid=16, fock=_fock(20))
    H = build_full_matrix(harper, one_mode_potential, square, basis,
                          RationalFlux(1, 16))
    assert np.max(np.abs(H - H.conj().T)) < 1e-10


def test_oracle_discretization_invariance(square, harper):
    # refined grids only add Bloch samples; existing cluster values persist
    fx = RationalFlux(1, 16)
    base = OracleBasis(n_cells=1, n_grid=16, fock=_fock(30))
    fine = OracleBasis(n_cells=1, n_grid=32, fock=_fock(30))
    deep = OracleBasis(n_cells=1, n_grid=16, fock=_fock(38))
    cl0 = band_cluster(oracle_eigenvalues(
        build_full_matrix(harper, None, square, base, fx)), 0.5)
    cl1 = band_cluster(oracle_eigenvalues(
        build_full_matrix(harper, None, square, fine, fx)), 0.5)
    cl2 = band_cluster(oracle_eigenvalues(
        build_full_matrix(harper, None, square, deep, fx)), 0.5)
    for v in cl0:
        assert np.min(np.abs(cl1 - v)) < 1e-8
    assert np.max(np.abs(np.sort(cl0) - np.sort(cl2))) < 1e-8


def test_commensurability_required(square, harper):
    basis = OracleBasis(n_cells=1, n_grid=12, fock=_fock(10))
    with pytest.raises(CommensurabilityError):
        build_full_matrix(harper, None, square, basis, RationalFlux(1, 16))


def test_dim_budget(square):
    with pytest.raises(ResourceCapError):
        OracleBasis(n_cells=10, n_grid=100, fock=_fock(40))


def test_grid_resolution_checked(square):
    V = FourierSeries2D({(2, 0): 1.0, (-2, 0): 1.0}, is_real=True)
    basis = OracleBasis(n_cells=1, n_grid=4, fock=_fock(10))
    with pytest.raises(ValueError):
        build_full_matrix(V, None, square, basis, RationalFlux(1, 2))


def test_band_cluster_exact_and_overlap(square, harper):
    eigs = np.array([0.5] * 5 + [1.5] * 5)
    cl = band_cluster(eigs, 0.5)
    assert np.allclose(cl, 0.5)
    # strong potential at large delta closes the gap
    fx = RationalFlux(4, 5)
    basis = OracleBasis(n_cells=1, n_grid=10, fock=_fock(40))
    strong = harper.scaled(3.0)
    H = build_full_matrix(strong, None, square, basis, fx)
    with pytest.raises(GapClosedError):
        band_cluster(oracle_eigenvalues(H), 0.5)


def test_cluster_width_tracks_model(square, harper):
    # delta = 0.2: cluster width matches the effective-model band width
    from magbloch.effective import single_band_model
    from magbloch.quantize import spectrum
    fx = RationalFlux(1, 25)
    basis = OracleBasis(n_cells=1, n_grid=25, fock=_fock(30))
    H = build_full_matrix(harper, None, square, basis, fx)
    cl = band_cluster(oracle_eigenvalues(H), 0.5)
    width = cl.max() - cl.min()
    model = single_band_model(harper, square, 0.5, fx, iota=1)
    Hm = quantize_on_grid(model.blocks[0][0], basis, fx, iota=1)
    ms = oracle_eigenvalues(Hm)
    model_width = ms.max() - ms.min()
    assert abs(width - model_width) / model_width < 0.2
    # leading-order statement: width ~ delta^2 (maxV - minV) = 0.32
    assert width == pytest.approx(fx.theta * 8.0, rel=0.45)


def test_order_fit_synthetic():
    deltas = [0.2, 0.1, 0.05]
    model = [np.array([0.0]) for _ in deltas]
    orc = [np.array([d ** 3]) for d in deltas]
    fit = order_fit(model, orc, deltas)
    assert fit.slope == pytest.approx(3.0, abs=1e-9)
    assert fit.censored == (False, False, False)


def test_order_fit_censoring():
    deltas = [0.2, 0.1, 0.05]
    model = [np.array([0.0])] * 3
    orc = [np.array([0.2 ** 2]), np.array([0.1 ** 2]), np.array([1e-15])]
    fit = order_fit(model, orc, deltas)
    assert fit.censored == (False, False, True)
    assert fit.slope == pytest.approx(2.0, abs=1e-9)


def test_order_fit_validation():
    with pytest.raises(ValueError):
        order_fit([np.array([1.0])] * 2, [np.array([1.0])] * 2, [0.2, 0.1])
    with pytest.raises(ValueError):
        order_fit([np.array([1.0])] * 3, [np.array([1.0])] * 3, [0.1, 0.2, 0.05])
