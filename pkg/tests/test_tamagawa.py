import pytest

from twistlab.arithmetica import factor_twist
from twistlab.lseries import lalg_ord2
from twistlab.scan import scan_descent, scan_main3
from twistlab.tamagawa import (A_TWIST, APRIME_TWIST, ShaRatioInputs, a_of_M, bsd_predicted_ord2,
                               sha_ratio_ord2, tamagawa, tamagawa_ratio_ord2)


def test_untwisted_factors():
    # A = 49a1 has c_7 = 2 and two real components
    a = tamagawa(A_TWIST, 1)
    assert a.c_map == {7: 2}
    assert a.tam_product_ord2 == 1


def test_infinity_excluded_from_product():
    for M in (5, 13, 65, -19):
        t = tamagawa(APRIME_TWIST, M)
        assert t.c_infinity == 2
        assert all(c in (1, 2, 4) for c in t.c_map.values())
        assert t.tam_product_ord2 == sum(c.bit_length() - 1 for c in t.c_map.values())


def test_ratio_identity_on_sweep():
    for inst in scan_descent(300):
        ft = factor_twist(inst.M)
        assert tamagawa_ratio_ord2(inst.M) == a_of_M(ft) + ft.k_minus - ft.r_minus, inst.M


def test_sha_ratio_formula():
    ft = factor_twist(-19 * 13)
    assert sha_ratio_ord2(ShaRatioInputs(ft, 1, 2)) == a_of_M(ft) + ft.k_minus - ft.r_minus
    with pytest.raises(ValueError):
        ShaRatioInputs(ft, 3, 2)


def test_bsd_prediction_matches_main3_instances():
    for inst in scan_main3(5000):
        if inst.M % 4 != 1:
            continue
        _, o = lalg_ord2(inst.M)
        assert o == bsd_predicted_ord2(inst.M, 0), inst.M


def test_bsd_prediction_rejects_other_labels():
    for M in (-19, 3, 2, 6):
        with pytest.raises(ValueError):
            bsd_predicted_ord2(M)


def test_unknown_curve():
    with pytest.raises(ValueError):
        tamagawa("B", 5)
