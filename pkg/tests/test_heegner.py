import pytest

from twistlab.arithmetica import kronecker
from twistlab.classgroup import class_group
from twistlab.heegner import (LEVEL, HeegnerError, beta_root, cm_points, fricke_residual,
                              heegner_trace, invariance_residual, is_torsion_numeric,
                              kolyvagin_sum, lattice_distance, param_eval, regenerated_lattice,
                              represented_prime, torsion_T, torsion_distance)
from twistlab.lseries import ap, l_derivative
from twistlab.weierstrass import lattice_A, point_from_z

L = lattice_A()


@pytest.mark.parametrize("dK", [-3, -19, -31, -47, -19 * 53, -59, -83])
def test_beta_root(dK):
    b = beta_root(dK)
    assert 0 <= b < 98 and (b * b - dK) % 196 == 0


def test_cm_points_are_heegner():
    for dK, c in ((-19, 1), (-19, 13), (-31, 1), (-47, 5)):
        orbit = cm_points(dK, c)
        D = c * c * dK
        assert len(orbit.points) == class_group(D).h
        assert len({pt.cls for pt in orbit.points}) == len(orbit.points)
        for pt in orbit.points:
            f = pt.form
            assert f.a % LEVEL == 0 and f.disc == D
            assert (f.b - orbit.beta) % (2 * LEVEL) == 0
            # tau and 49 tau have the same discriminant: a Heegner point
            assert abs(f.a * pt.tau**2 + f.b * pt.tau + f.c) < 1e-9


def test_heegner_hypothesis_enforced():
    with pytest.raises(HeegnerError):
        cm_points(-15, 1)            # 7 is inert in Q(sqrt(-15))
    with pytest.raises(HeegnerError):
        cm_points(-19, 7)


def test_parametrization_invariance():
    for c, d in ((1, 1), (1, 2), (1, 3), (2, 1), (3, 5)):
        assert invariance_residual(c, d) < 1e-10


def test_fricke_relation():
    for tau in (0.1 + 0.05j, -0.3 + 0.02j, 0.01 + 0.1j):
        assert fricke_residual(tau) < 1e-10


def test_periods_regenerate_lattice():
    vecs, index = regenerated_lattice()
    assert index == 1
    assert all(err < 1e-8 for _, _, err in vecs)


def test_param_tail_bound():
    tau = 0.2 + 0.03j
    assert abs(param_eval(tau, tol=1e-14) - param_eval(tau, tol=1e-8)) < 1e-8


def test_cusp_zero_maps_to_T():
    x, y = point_from_z(torsion_T())
    assert abs(x - 2) < 1e-12 and abs(y + 1) < 1e-12


def test_torsion_detection():
    assert is_torsion_numeric(L.omega1 / 2) and is_torsion_numeric(L.omega2 / 4 + L.omega1)
    assert not is_torsion_numeric(0.1234 * L.omega1 + 0.3141 * L.omega2)
    assert torsion_distance(0j) == 0


def test_trace_19_1_1():
    tp = heegner_trace(19, 1, 1)
    assert not tp.torsion_flag
    assert lattice_distance(tp.conj_sum, torsion_T()) < 1e-8


def test_trace_19_13_1():
    tp = heegner_trace(19, 13, 1)
    assert tp.orbit_size == 14
    assert not tp.torsion_flag
    assert tp.minus_eigen_flag


def test_ring_class_character_values():
    orbit = cm_points(-19, 13)
    vals = []
    for pt in orbit.points:
        p = represented_prime(pt.form.reduced(), 2 * 7 * 19 * 13)
        vals.append(kronecker(13, p))
    assert sorted(vals) == [-1] * 7 + [1] * 7


def test_kolyvagin_trace_vanishes():
    assert ap(13) == 0
    z = kolyvagin_sum(19, 13)
    assert lattice_distance(z, 0) < 1e-8


def test_gross_zagier_coherence():
    for l0, R, N in ((19, 1, 1), (19, 13, 1), (31, 1, 1), (47, 1, 1)):
        tp = heegner_trace(l0, R, N)
        M = -l0 * R * N
        r = l_derivative(M)
        nonzero = abs(r.L_prime_numeric) > 1e3 * r.error_bound
        if not tp.torsion_flag:
            assert nonzero, M
        if not nonzero:
            assert tp.torsion_flag, M


def test_rejects_bad_l0():
    with pytest.raises(HeegnerError):
        heegner_trace(13, 1, 1)
