import math

import numpy as np
import pytest

from magbloch.errors import TruncationError
from magbloch.fock import (FockTruncation, I_generator, M_generator,
                           alpha_coefficient, corner, displacement_exp,
                           hermiticity_residual, ladder, q_fast, p_fast,
                           xi_matrix)
from magbloch.lattice import FourierSeries2D, PeriodicVectorPotential


def test_ladder_small():
    T = FockTruncation(n_max=1, guard=0)
    a, ad = ladder(T)
    assert np.array_equal(a, [[0, 1], [0, 0]])
    assert np.array_equal(ad, a.conj().T)


def test_ladder_commutator():
    T = FockTruncation(n_max=9, guard=2)
    a, ad = ladder(T)
    comm = a @ ad - ad @ a
    want = np.eye(T.dim)
    want[-1, -1] = -T.n_max
    assert np.allclose(comm, want, atol=1e-14)
    e0 = np.zeros(T.dim)
    e0[0] = 1.0
    assert np.allclose(comm @ e0, e0)


def test_xi_matrix():
    T = FockTruncation(n_max=8, guard=2)
    X = xi_matrix(T)
    assert X[0, 0] == 0.5
    assert X[3, 3] == 3.5
    a, ad = ladder(T)
    # defining identity, at the roundoff of sqrt(n)^2
    assert np.max(np.abs(X - (ad @ a + 0.5 * np.eye(T.dim)))) < 1e-12


def test_ladder_weyl_relation():
    # a Xi - Xi a = a exactly on the truncated space
    T = FockTruncation(n_max=14, guard=4)
    a, _ = ladder(T)
    X = xi_matrix(T)
    assert np.max(np.abs(a @ X - X @ a - a)) < 1e-12


def test_fast_pair_commutator(square):
    T = FockTruncation(n_max=10, guard=2)
    Q, P = q_fast(T, square), p_fast(T, square)
    comm = Q @ P - P @ Q
    want = 1j * np.eye(T.dim)
    # truncation corrupts only the top diagonal entry
    assert np.max(np.abs((comm - want)[:-1, :-1])) < 1e-14


def test_I_generator(square):
    T = FockTruncation(n_max=10, guard=2)
    assert np.max(np.abs(I_generator(0, 0, square, T))) == 0.0
    # square lattice mode (1, 0): alpha = z_b/sqrt(2) = -i/sqrt(2)
    a, ad = ladder(T)
    got = I_generator(1, 0, square, T)
    want = (-1j * a + 1j * ad) / math.sqrt(2)
    assert np.max(np.abs(got - want)) < 1e-14
    rng = np.random.default_rng(3)
    for _ in range(10):
        n, m = rng.integers(-5, 6, size=2)
        assert hermiticity_residual(I_generator(int(n), int(m), square, T)) < 1e-14


def test_M_generator_zero_and_linear(square, one_mode_potential):
    T = FockTruncation(n_max=12, guard=3)
    A0 = PeriodicVectorPotential(FourierSeries2D({}, is_real=True),
                                 FourierSeries2D({}, is_real=True), square)
    assert np.max(np.abs(M_generator(0, 0, 1, A0, square, T))) == 0.0
    A = one_mode_potential
    a, ad = ladder(T)
    g = A.g[(0, 1)]
    gbar = (square.z_a.conjugate() * A.f1[(0, 1)]
            + square.z_b.conjugate() * A.f2[(0, 1)]) / math.sqrt(2)
    got = M_generator(0, 0, 1, A, square, T)
    assert np.max(np.abs(got - (g * a + gbar * ad))) < 1e-14


def test_M_generator_normal_ordered_form(square):
    # j=1 against c a^2 + conj(c) ad^2 + 2 Re(d) Xi + i Im(d), with complex
    # mode coefficients; equality inside the guard corner
    T = FockTruncation(n_max=20, guard=6)
    f1 = FourierSeries2D({(0, 1): 0.3 + 0.2j, (0, -1): 0.3 - 0.2j}, is_real=True)
    f2 = FourierSeries2D({}, is_real=True)
    A = PeriodicVectorPotential(f1, f2, square)
    n, m = 0, 1
    alpha = alpha_coefficient(n, m, square)
    g = (square.z_a * f1[(n, m)]) / math.sqrt(2)
    g_up = (square.z_a.conjugate() * f1[(n, m)]) / math.sqrt(2)
    a, ad = ladder(T)
    X = xi_matrix(T)
    # normal ordering: I (g a + g' ad) = (alpha g) a^2 + (alpha' g') ad^2
    #   + (alpha g' + alpha' g) Xi + (alpha g' - alpha' g)/2, primes = conj
    closed = (alpha * g * a @ a + np.conj(alpha) * g_up * ad @ ad
              + (alpha * g_up + np.conj(alpha) * g) * X
              + (alpha * g_up - np.conj(alpha) * g) / 2.0 * np.eye(T.dim))
    got = M_generator(1, n, m, A, square, T)
    assert np.max(np.abs(corner(got - closed, T))) < 1e-12


def test_M_generator_rejects_higher_power(square, one_mode_potential):
    T = FockTruncation(n_max=8, guard=2)
    with pytest.raises(ValueError):
        M_generator(2, 0, 1, one_mode_potential, square, T)


def test_displacement_identity_cases(square):
    T = FockTruncation(n_max=12, guard=4)
    assert np.allclose(displacement_exp(0.0, 1, 0, square, T), np.eye(T.dim))
    assert np.allclose(displacement_exp(0.7, 0, 0, square, T), np.eye(T.dim))


def test_displacement_unitary(square):
    T = FockTruncation(n_max=30, guard=6)
    U = displacement_exp(1.3, 1, -2, square, T)
    assert np.max(np.abs(U @ U.conj().T - np.eye(T.dim))) < 1e-10


def test_displacement_gaussian_overlap(square):
    # <0|exp(it I)|0> = exp(-t^2 |alpha|^2 / 2); independent oracle: Taylor
    # summation of the exponential series at n_max = 80
    T = FockTruncation(n_max=80, guard=8)
    t = 0.9
    n, m = 1, 0
    alpha = alpha_coefficient(n, m, square)
    U = displacement_exp(t, n, m, square, T)
    want = math.exp(-t * t * abs(alpha) ** 2 / 2.0)
    assert U[0, 0] == pytest.approx(want, abs=1e-10)
    gen = I_generator(n, m, square, T)
    term = np.eye(T.dim, dtype=complex)
    taylor = np.eye(T.dim, dtype=complex)
    for k in range(1, 120):
        term = term @ (1j * t * gen) / k
        taylor += term
    assert abs(taylor[0, 0] - U[0, 0]) < 1e-10


def test_truncation_stability(square):
    # scalars inside the guard band move by < 1e-8 when n_max grows by 8
    vals = {}
    for n_max in (40, 48):
        T = FockTruncation(n_max=n_max, guard=6)
        U = displacement_exp(1.1, 1, 1, square, T)
        vals[n_max] = U[2, 3]
    assert abs(vals[40] - vals[48]) < 1e-8


def test_truncation_guards():
    with pytest.raises(TruncationError):
        FockTruncation(n_max=0)
    with pytest.raises(TruncationError):
        FockTruncation(n_max=4, guard=5)
    T = FockTruncation(n_max=10, guard=4)
    with pytest.raises(TruncationError):
        T.require(order=4, max_band=1)
