import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scatpoly.greens import amplitude, enumerate_lattice, spectrum_poly
from scatpoly.media import MediumParams
from scatpoly.torus import (
    DiskTuple, PhaseTuple, backward_spectrum, compose, fourier_coefficient, fourier_coefficients,
    kronecker_line, mobius, pde_residual, richardson_ratios, truncation_error,
)

F = Fraction

disk_points = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 0.999), st.floats(0, 2 * math.pi))
angles = st.floats(-20, 20)


# Mobius maps and their composition


def test_mobius_examples():
    v0 = 0.3 - 0.4j
    assert mobius(0, 1, v0) == v0
    assert mobius(0.5, 1, 0) == 0.5
    w = cmath.exp(0.3j)
    for v in (0, 0.5j, -0.9):
        assert mobius(w, 1j, v) == 1j * w


def test_mobius_domain():
    with pytest.raises(ValueError):
        mobius(0.2, 1, 1.01)
    mobius(0.2, 1, 1 + 1e-13)


@settings(max_examples=200, deadline=None)
@given(w=disk_points, v=disk_points, xi=angles)
def test_mobius_preserves_disk(w, v, xi):
    assert abs(mobius(w, cmath.exp(1j * xi), v)) <= 1 + 1e-12


def test_compose_examples():
    w1, w2 = 0.3 + 0.2j, -0.5j
    z1, z2 = cmath.exp(0.4j), cmath.exp(-1.1j)
    assert compose([w1], [z1]) == pytest.approx(z1 * w1, abs=1e-16)
    expected = z1 * (w1 + z2 * w2) / (1 + w1.conjugate() * z2 * w2)
    assert compose([w1, w2], [z1, z2]) == pytest.approx(expected, abs=1e-15)
    assert compose([0, 0, 0], [1j, -1, 1]) == 0


def test_compose_length_mismatch():
    with pytest.raises(ValueError):
        compose([0.1, 0.2], [1])


@settings(max_examples=150, deadline=None)
@given(w=st.lists(disk_points, min_size=1, max_size=5), data=st.data())
def test_compose_stays_in_open_disk(w, data):
    xi = data.draw(st.lists(angles, min_size=len(w), max_size=len(w)))
    val = compose(w, PhaseTuple.from_angles(xi))
    assert abs(val) < 1


def test_collapse_rule_randomized():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(2, 5)
        m = rng.randrange(n)
        w = [0.9 * rng.random() * cmath.exp(2j * math.pi * rng.random()) for _ in range(n)]
        w[m] = cmath.exp(2j * math.pi * rng.random())
        z = [cmath.exp(2j * math.pi * rng.random()) for _ in range(n)]
        base = compose(w, z)
        assert abs(abs(base) - 1) <= 1e-12
        for _ in range(3):
            w2, z2 = list(w), list(z)
            for j in range(m + 1, n):
                w2[j] = 0.9 * rng.random() * cmath.exp(2j * math.pi * rng.random())
                z2[j] = cmath.exp(2j * math.pi * rng.random())
            assert compose(w2, z2) == base


def test_disk_tuple_boundary_decisions():
    d = DiskTuple.from_polar([F(1), F(1, 2)], [0.3, 1.0])
    assert d.exact_boundary and d.boundary == (True, False)
    assert not d.is_interior()
    d = DiskTuple.from_complex([1 - 1e-13, 0.5])
    assert not d.exact_boundary and d.boundary == (True, False)
    with pytest.raises(ValueError):
        DiskTuple.from_complex([1.01])
    with pytest.raises(ValueError):
        DiskTuple.from_polar([F(3, 2)], [0])
    d = DiskTuple.from_complex([-0.5j])
    assert d.r == (0.5,) and d.theta[0] == pytest.approx(1.5 * math.pi)


def test_phase_tuple_reduction():
    p = PhaseTuple.from_angles([-1e-17, 7.0, -3.0])
    assert all(0 <= x < 2 * math.pi for x in p.xi)
    assert p.z[1] == cmath.exp(7j)


# torus Fourier coefficients


def test_fourier_examples():
    assert abs(fourier_coefficient([0.5], (1,), 32) - 0.5) <= 1e-12
    c = fourier_coefficient([0.5, 0.3j], (1, 2), 64)
    assert abs(c - 0.03375) <= 1e-10
    w = [0.5, 0.3j]
    for k in [(0, 1), (2, 0), (1, -1), (-1, 2), (0, 0)]:
        assert abs(fourier_coefficient(w, k, 64)) <= 1e-10


def test_fourier_preconditions():
    with pytest.raises(ValueError):
        fourier_coefficient([0.1] * 4, (1, 0, 0, 0))
    with pytest.raises(ValueError):
        fourier_coefficient([1.0, 0.2], (1, 0))
    with pytest.raises(ValueError):
        fourier_coefficient([0.1, 0.2], (1,))


def test_single_and_batched_extraction_agree():
    w = [0.4 - 0.1j, 0.2j, -0.3]
    batch = fourier_coefficients(w, 16)
    for k in [(1, 0, 0), (1, 1, 1), (1, 2, 0), (1, 0, 2)]:
        idx = tuple(x % 16 for x in k)
        assert abs(batch[idx] - fourier_coefficient(w, k, 16)) <= 1e-14


@pytest.mark.parametrize("r", [(F(1, 2), F(1, 3)), (F(-2, 5), F(3, 10), F(1, 2))])
def test_real_parameters_match_green_amplitudes(r):
    n = len(r)
    coeffs = fourier_coefficients([float(x) for x in r], 64 if n <= 2 else 32)
    for k in enumerate_lattice((1,) * n, 7):
        c = coeffs[tuple(x % coeffs.shape[0] for x in k)]
        assert abs(c - float(amplitude(r, k))) <= 1e-8


# Kronecker lines and spectra


def test_kronecker_examples():
    ones = kronecker_line((F(1, 3), 2, F(5, 2)), 0.0)
    assert ones.z == (1, 1, 1)
    line = kronecker_line((2, 4), math.pi / 2)
    assert line.z[0] == pytest.approx(-1, abs=1e-15)
    assert line.z[1] == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("tau,periodic", [((2, 4), True), ((1, F(1, 2)), False), ((3,), True)])
def test_kronecker_periodicity(tau, periodic):
    a = kronecker_line(tau, 0.7).z
    b = kronecker_line(tau, 0.7 + 2 * math.pi).z
    same = all(abs(x - y) <= 1e-12 for x, y in zip(a, b))
    assert same == periodic


def test_backward_spectrum_examples():
    params = MediumParams((F(3, 2), 1, 2), (F(1, 2), F(-1, 3), F(2, 5)))
    at_zero = backward_spectrum(params, 0.0)
    assert at_zero.imag == 0
    r1 = MediumParams((F(3, 2),), (F(-2, 5),))
    for s in (0.0, 0.3, 5.0):
        assert backward_spectrum(r1, s) == pytest.approx(-0.4 * cmath.exp(1.5j * s), abs=1e-16)
    sigmas = np.random.default_rng(0).uniform(-50, 50, 1000)
    assert np.all(np.abs(backward_spectrum(params, sigmas)) <= 1)


def test_truncation_error_examples():
    one = MediumParams((2,), (F(3, 4),))
    sig = np.linspace(-10, 10, 101)
    assert np.max(truncation_error(one, F(5, 2), sig)) <= 1e-15
    two = MediumParams((2, 3), (F(1, 2), F(-1, 3)))
    assert np.array_equal(truncation_error(two, 2, sig), np.abs(backward_spectrum(two, sig)))
    errs = [np.max(truncation_error(two, T, sig)) for T in (6, 12, 24, 48)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_spectrum_converges_to_backward():
    params = MediumParams((1, F(3, 2), F(1, 2)), (F(1, 2), F(-1, 2), F(3, 10)))
    sig = np.linspace(0, 3, 7)
    assert np.max(np.abs(spectrum_poly(params, 40, sig) - backward_spectrum(params, sig))) < 1e-4


# PDE residuals


def test_pde_single_layer():
    rng = random.Random(1)
    for _ in range(10):
        w = [rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.random())]
        z = PhaseTuple.from_angles([2 * math.pi * rng.random()])
        res = pde_residual(w, z, 1)
        assert max(res.as_tuple()) <= 1e-6


def test_pde_second_order_for_three_layers():
    rng = random.Random(5)
    for _ in range(3):
        w = [0.5 * cmath.exp(2j * math.pi * rng.random()) for _ in range(3)]
        z = PhaseTuple.from_angles([2 * math.pi * rng.random() for _ in range(3)])
        for j in (1, 2, 3):
            _, fine, ratios = richardson_ratios(w, z, j, 1e-3, dps=40)
            # C_3 is exact: theta_3 and xi_3 enter through their sum only
            checks = ratios if j < 3 else (ratios[0], ratios[2])
            assert all(3.5 <= x <= 4.5 for x in checks)
            if j == 3:
                assert fine.C < 1e-25


def test_pde_preconditions():
    z = PhaseTuple.from_angles([0.0, 0.0])
    with pytest.raises(ValueError):
        pde_residual([0.995, 0.2], z, 1)
    with pytest.raises(ValueError):
        pde_residual([0.005, 0.2], z, 1)
    with pytest.raises(ValueError):
        pde_residual([0.5, 0.2], z, 3)
