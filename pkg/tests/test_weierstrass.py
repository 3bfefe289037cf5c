import cmath
import math
import random

import numpy as np
import pytest

from twistlab.lseries import omega_gamma_product
from twistlab.weierstrass import (c_invariants, e1star, lattice_A, lattice_invariants,
                                  legendre_residual, addition_residual, point_from_z,
                                  quasi_period_residual, wp, wp_prime, zeta)

L = lattice_A()


def on_curve(x, y):
    return y * y + x * y - (x**3 - x * x - 2 * x - 1)


def sample(rng, n):
    w1, w2 = L.omega1, L.omega2
    return [rng.uniform(-1, 1) * w1 + rng.uniform(-1, 1) * w2 for _ in range(n)]


def test_invariants():
    c4, c6, disc = c_invariants()
    assert (c4, c6, disc) == (105, 1323, -343)
    assert c4**3 * 1728 // (c4**3 - c6**2) == -3375       # j of CM by sqrt(-7)
    assert L.g2 == pytest.approx(c4 / 12) and L.g3 == pytest.approx(c6 / 216)


def test_period_is_gamma_product():
    assert abs(L.omega1 - complex(omega_gamma_product())) < 1e-12
    assert abs(L.omega1.imag) < 1e-14 and L.omega1.real > 0
    assert L.tau.imag > 0
    # real period of a Delta < 0 curve: omega2 = -omega1/2 + i*...
    assert abs(L.omega2.real + L.omega1.real / 2) < 1e-12


def test_lattice_has_cm_by_sqrt_minus_7():
    # omega2 / omega1 satisfies 2 tau^2 + 2 tau + 1 = 0 up to SL2(Z): the lattice is
    # stable under multiplication by (1 + sqrt(-7)) / 2
    m = (1 + cmath.sqrt(-7)) / 2
    for w in (L.omega1, L.omega2):
        u, v = L.coords(m * w)
        assert abs(u - round(u)) < 1e-12 and abs(v - round(v)) < 1e-12


def test_wp_differential_equation():
    rng = random.Random(3)
    for z in sample(rng, 50):
        p, dp = wp(z), wp_prime(z)
        res = dp * dp - (4 * p**3 - L.g2 * p - L.g3)
        assert abs(res) < 1e-9 * max(1, abs(p) ** 3)


def test_points_lie_on_curve():
    rng = random.Random(4)
    for z in sample(rng, 50):
        x, y = point_from_z(z)
        assert abs(on_curve(x, y)) < 1e-9 * max(1, abs(x) ** 3)


def test_real_two_torsion_point():
    x, y = point_from_z(L.omega1 / 2)
    assert abs(x - 2) < 1e-12 and abs(y + 1) < 1e-12


def test_wp_against_lattice_sum():
    """wp by brute summation over a symmetric box of the lattice."""
    z = 0.31 * L.omega1 + 0.17 * L.omega2
    R = 400
    m, n = np.meshgrid(np.arange(-R, R + 1), np.arange(-R, R + 1))
    w = (m * L.omega1 + n * L.omega2).ravel()
    w = w[w != 0]
    brute = 1 / z**2 + np.sum(1 / (z - w) ** 2 - 1 / w**2)
    assert abs(brute - wp(z)) < 1e-4


def test_zeta_derivative_is_minus_wp():
    z, h = 0.23 * L.omega1 + 0.41 * L.omega2, 1e-5
    deriv = (zeta(z + h) - zeta(z - h)) / (2 * h)
    assert abs(deriv + wp(z)) < 1e-6


def test_legendre_and_quasi_periods():
    assert legendre_residual() < 1e-12
    assert quasi_period_residual() < 1e-12


def test_s2_and_area():
    assert abs(L.s2 - 0.25) < 1e-12
    assert abs(L.area - abs((L.omega1.conjugate() * L.omega2).imag)) < 1e-12
    assert abs(L.areaA - L.area / math.pi) < 1e-12


def test_e1star_periodic_and_odd():
    rng = random.Random(5)
    for z in sample(rng, 200):
        e = e1star(z)
        for m, n in ((1, 0), (0, 1), (2, -3)):
            assert abs(e1star(z + m * L.omega1 + n * L.omega2) - e) < 1e-10
        assert abs(e1star(-z) + e) < 1e-10


def test_addition_formula_samples():
    rng = random.Random(6)
    zs = sample(rng, 400)
    for z1, z2 in zip(zs[::2], zs[1::2]):
        assert addition_residual(z1, z2) < 1e-10


def test_higher_precision_agrees():
    hi = lattice_invariants(dps=50)
    assert abs(hi.omega1 - L.omega1) < 1e-14
    assert abs(hi.eta1 - L.eta1) < 1e-12


def test_poles_rejected():
    with pytest.raises(ZeroDivisionError):
        wp(L.omega1 + L.omega2)
