import pytest

from twistlab.arithmetica import divisors, kronecker, primes_up_to
from twistlab.classgroup import QuadForm, class_group
from twistlab.quaternion import OrderElement, _quotient_order, lambda_class
from twistlab.waldspurger import TestVector as Vector
from twistlab.waldspurger import test_vector as vector_of
from twistlab.waldspurger import test_vector_for as vector_for
from twistlab.waldspurger import (F0, F0_MINUS_F1, F0_PLUS_F1, F1, GrossSetup,
                                  _class_reps, _half_one_plus, check_homomorphism_mod2,
                                  class_to_lambda, eigen_test_vector, embeddings,
                                  find_embedding, gross_setup, homomorphism_defect,
                                  lambda_is_well_defined, pairing, select_test_vector,
                                  switch_class, verify_waldspurger,
                                  y_d, y_sum)

LABELS = [n for n in range(5, 230, 4) if n % 7 and all(n % (p * p) for p in (3, 5, 7, 11, 13))]


def test_test_vector_pairings():
    f0, f1 = vector_of(F0), vector_of(F1)
    assert pairing(f0, f1) == 0
    assert (pairing(f0, f0), pairing(f1, f1)) == (2, 2)
    for k in (F0_MINUS_F1, F0_PLUS_F1):
        assert vector_of(k).pairing_norm == 4
    assert pairing(vector_of(F0_MINUS_F1), vector_of(F0_PLUS_F1)) == 0


@pytest.mark.parametrize("c", range(4))
@pytest.mark.parametrize("chi", (1, -1))
def test_eigenvector(c, chi):
    f = eigen_test_vector(c, chi)
    assert all(f((-x + c) % 4) == chi * f(x) for x in range(4))


@pytest.mark.parametrize("n", [1 + 4 * k for k in range(1, 40) if (1 + 4 * k) % 7 and
                               all((1 + 4 * k) % (p * p) for p in (3, 5, 7, 11))])
def test_embeddings(n):
    emb = embeddings(n)
    assert emb
    for xi in emb[:20]:
        assert xi.trd() == 0 and xi.nrd() == 7 * n
        assert xi * xi == OrderElement(-7 * n, 0, 0, 0)
        _half_one_plus(xi)
    assert find_embedding(n) == emb[0]


def test_known_embeddings():
    assert find_embedding(5).coords == (-1, -2, 4, 2)


@pytest.mark.parametrize("n", [5, 13, 17, 29, 53, 65, 85, 113])
def test_oriented_table_equals_eigenvector(n):
    s = gross_setup(n)
    assert s.c == (0 if kronecker(n, 7) == 1 else 3)
    for d in divisors(n):
        assert select_test_vector(s, d).kind == vector_for(s, d).kind


@pytest.mark.parametrize("n", LABELS)
def test_identity_sweep(n):
    s = gross_setup(n)
    for d in divisors(n):
        assert verify_waldspurger(n, d, s).passed


def test_the_four_pairings():
    """Only the consistent divisor side / sign pairings satisfy the identity."""
    ok = {}
    for side in ("left", "right"):
        for sign in (1, -1):
            good = True
            for n in (5, 13, 17, 29, 57, 65):
                s = gross_setup(n, side=side, sign=sign)
                good &= all(verify_waldspurger(n, d, s, strict=False).passed
                            for d in divisors(n))
            ok[side, sign] = good
    assert ok == {("left", -1): True, ("right", 1): True,
                  ("left", 1): False, ("right", -1): False}


def _rebuild(base, gen=None, index=0):
    """The same embedding with another generator of F_49^x/F_7^x and/or other primes."""
    s = GrossSetup(base.n, base.xi, base.side, base.sign, gen or base.gen)
    reps = _class_reps(base.D, avoid=14 * base.n, count=index + 1)
    ident = class_group(base.D).identity
    s.reps = {c: [forms[index]] for c, forms in reps.items()}
    s.assignment = {c: 0 if c == ident else s.prime_lambda(forms[0])
                    for c, forms in s.reps.items()}
    return s


GENERATORS = [(x, y) for x in range(7) for y in range(7)
              if (x, y) != (0, 0) and _quotient_order((x, y)) == 8]


@pytest.mark.parametrize("n", [5, 13, 29, 65, 85])
def test_sign_generator_and_representative_insensitivity(n):
    base = gross_setup(n)
    want = {d: y_d(n, d, base) ** 2 for d in divisors(n)}
    for d in divisors(n):
        f = vector_for(base, d)
        neg = Vector(f.kind, {k: -v for k, v in f.values.items()})
        assert y_d(n, d, base, neg) ** 2 == want[d]
    for gen in GENERATORS:
        s = _rebuild(base, gen=gen)
        assert {d: y_d(n, d, s) ** 2 for d in divisors(n)} == want, gen
    for index in (1, 2):
        s = _rebuild(base, index=index)
        assert {d: y_d(n, d, s) ** 2 for d in divisors(n)} == want, index


def test_vanishing_for_five():
    s = gross_setup(5)
    assert y_d(5, 1, s, vector_of(F0_PLUS_F1)) == 0
    assert y_d(5, 1, s) ** 2 == 4


def test_symmetry_for_sixty_five():
    s = gross_setup(65)
    y = {d: y_d(65, d, s) for d in divisors(65)}
    assert y[1] == y[65] != 0
    assert y[5] == -y[13] != 0


def test_fifty_three_vanishes():
    s = gross_setup(53)
    assert all(y_d(53, d, s) == 0 for d in divisors(53))


@pytest.mark.parametrize("n", [n for n in LABELS if class_group(-7 * n).h <= 24])
def test_lambda_well_defined_and_mod2_homomorphism(n):
    s = gross_setup(n)
    assert lambda_is_well_defined(s)
    assert check_homomorphism_mod2(s)


def test_lambda_not_homomorphism_mod4():
    d = homomorphism_defect(gross_setup(65))
    assert d == {0: 210, 1: 0, 2: 190, 3: 0}


def test_lambda_parity_is_genus_character():
    from twistlab.classgroup import genus_character
    for n in (65, 85, 113):
        s = gross_setup(n)
        for cls, forms in s.reps.items():
            p = forms[0].a
            assert (-1) ** s.assignment[cls] == genus_character(n, s.D, p) or \
                cls == class_group(s.D).identity


SPLIT = [p for p in primes_up_to(400) if p % 4 == 1 and kronecker(p, 7) == 1]


@pytest.mark.parametrize("n", SPLIT + [29 * 37, 29 * 53])
def test_divisor_sum_divisibility(n):
    k = sum(1 for p in primes_up_to(n) if n % p == 0)
    s = gross_setup(n)
    f = vector_for(s, 1)
    assert y_sum(n, f, s) % 2 ** (k + 1) == 0


def test_class_to_lambda():
    s = gross_setup(65)
    for cls, forms in s.reps.items():
        if cls != class_group(s.D).identity:
            assert class_to_lambda(s, forms[0]) == s.assignment[cls]
    with pytest.raises(ValueError):
        class_to_lambda(s, QuadForm(5, 5, 24))


def test_bad_labels():
    for n in (3, 7, 9 * 5, 49):
        with pytest.raises(ValueError):
            gross_setup(n)


def test_switch_class_label():
    s = gross_setup(5)
    assert s.c == switch_class(s.xi) == 3
    assert lambda_class(OrderElement(1, 0, 0, 0)) == 0
