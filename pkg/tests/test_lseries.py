from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from twistlab.arithmetica import kronecker, primes_up_to
from twistlab.lseries import (AP_TABLE, WrongRootNumber, an_array, ap, ap_oracle, conductor,
                              l_central, l_derivative, lalg_ord2, load_ap_cache, merge_ap_cache,
                              omega_gamma_product, periods, root_number, save_ap_cache,
                              twist_character)
from twistlab.weierstrass import lattice_A


def test_ap_against_point_counts():
    for p in primes_up_to(10**4):
        if p != 7:
            assert ap(p) == ap_oracle(p), p


def test_ap_small_table():
    # q + q^2 - q^4 - 3q^8 - 3q^9 + 4q^11 - q^16 - 3q^18 + 4q^22 + 8q^23
    want = {1: 1, 2: 1, 3: 0, 4: -1, 5: 0, 8: -3, 9: -3, 11: 4, 16: -1, 18: -3, 22: 4, 23: 8}
    a = an_array(30)
    assert {n: int(a[n]) for n in want} == want


def test_hasse_bound():
    AP_TABLE.extend(10**5)
    for p, a in AP_TABLE.items():
        assert a * a <= 4 * p, p


def euler_product_coefficients(nmax):
    """Dirichlet coefficients by multiplying out the local factors one prime at a time."""
    a = np.zeros(nmax + 1, dtype=object)
    a[1] = 1
    for p in primes_up_to(nmax):
        ap_ = ap_oracle(p) if p != 7 else 0
        # local series 1 / (1 - a_p X + p X^2), X = p^-s
        loc = [1, ap_]
        while p ** len(loc) <= nmax:
            loc.append(ap_ * loc[-1] - (p if p != 7 else 0) * loc[-2])
        new = a.copy()
        for m in range(1, nmax + 1):
            if a[m] == 0 or m % p == 0:
                continue
            pk = p
            for k in range(1, len(loc)):
                if m * pk > nmax:
                    break
                new[m * pk] += a[m] * loc[k]
                pk *= p
        a = new
    return a


def test_an_against_euler_product():
    nmax = 10**4
    ref = euler_product_coefficients(nmax)
    got = an_array(nmax)
    assert all(int(got[n]) == ref[n] for n in range(1, nmax + 1))


def test_cm_sparsity():
    a = an_array(10**4)
    inert = [p for p in primes_up_to(10**4) if kronecker(-7, p) == -1]
    for p in inert[:40]:
        for n in range(p, 10**4 + 1, p):
            k, m = 0, n
            while m % p == 0:
                m //= p
                k += 1
            if k % 2:
                assert a[n] == 0, n


@given(st.integers(1, 100), st.integers(1, 100))
def test_an_multiplicative(m, n):
    a = an_array(10**4)
    if math.gcd(m, n) == 1:
        assert a[m * n] == a[m] * a[n]


@pytest.mark.parametrize("M", [5, -3, 13, 2, -6, 65, -19, 10, -1])
def test_twist_character_is_kronecker(M):
    D = M if M % 4 == 1 else 4 * M
    chi = twist_character(M, 500)
    for n in range(1, 501):
        assert chi[n] == kronecker(D, n)


def test_root_numbers_and_conductors():
    assert root_number(5) == 1 and root_number(-19) == -1 and root_number(-35) == 1
    assert root_number(35) == -1
    assert conductor(1) == 49 and conductor(5) == 49 * 25 and conductor(-19) == 49 * 19**2
    assert conductor(-35) == conductor(5)
    with pytest.raises(WrongRootNumber):
        l_central(-19)
    with pytest.raises(WrongRootNumber):
        l_derivative(5)


def test_base_value():
    r = l_central(1)
    assert r.lalg == Fraction(1, 2)
    assert abs(r.ratio - 0.5) < 1e-9


def test_periods_agree():
    w = periods().omega_A
    assert abs(w - float(omega_gamma_product())) < 1e-12
    assert abs(w - float(lattice_A().omega1.real)) < 1e-12
    assert abs(w - 1.93331170561681) < 1e-12


def test_theorem_ii_small():
    for R, r in ((5, 1), (13, 1), (65, 2), (5 * 13 * 17, 3), (17 * 41, 2)):
        assert lalg_ord2(R)[1] == r - 1


def test_split_prime_products_have_large_ord2():
    """ord2 >= 2k - 1 for products of k primes = 1 mod 4 that are squares mod 7."""
    ps = [p for p in primes_up_to(5000) if p % 4 == 1 and kronecker(p, 7) == 1]
    labels = [(p,) for p in ps] + [(p, q) for i, p in enumerate(ps) for q in ps[i + 1:]
                                   if p * q <= 5000]
    for fac in labels:
        M = math.prod(fac)
        q, o = lalg_ord2(M)
        assert q == 0 or o >= 2 * len(fac) - 1, (M, q)


def test_derivatives_nonzero():
    for M in (-19, -247):
        r = l_derivative(M)
        assert abs(r.L_prime_numeric) > 1e3 * r.error_bound


def test_cache_roundtrip(tmp_path):
    AP_TABLE.extend(2000)
    table = {p: a for p, a in AP_TABLE.items() if p <= 2000}
    path = tmp_path / "ap.tsv"
    save_ap_cache(path, table)
    assert load_ap_cache(path) == table
    merge_ap_cache(load_ap_cache(path))


@pytest.mark.parametrize("bad,line", [("2\t1\n3\tx\n", 2), ("2\t1\n2\t1\n", 2),
                                      ("2 1\n", 1), ("2\t1\n3\t0", 2), ("2\t01\n", 1)])
def test_cache_rejects_malformed(tmp_path, bad, line):
    path = tmp_path / "ap.tsv"
    path.write_text(bad)
    with pytest.raises(ValueError, match=f":{line}:"):
        load_ap_cache(path)


def test_cache_rejects_wrong_values(tmp_path):
    path = tmp_path / "ap.tsv"
    path.write_text("2\t1\n11\t-4\n")
    with pytest.raises(ValueError, match="a_11"):
        merge_ap_cache(load_ap_cache(path))
