"""Tamagawa factors of A^(M) and A'^(M), the isogeny Sha ratio, and the
2-part of the BSD prediction for rank-zero twists."""
from __future__ import annotations

from dataclasses import dataclass

from .arithmetica import FactoredTwist, factor_twist, fundamental_discriminant

A_TWIST, APRIME_TWIST = "A_twist", "Aprime_twist"


def _ord2(n: int) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


@dataclass(frozen=True)
class TamagawaData:
    curve: str
    M: int
    c_map: dict
    c_infinity: int

    @property
    def tam_product_ord2(self) -> int:
        """ord_2 of Tam = product of the finite c_p (c_infinity excluded)."""
        return sum(_ord2(c) for c in self.c_map.values())


def tamagawa(curve: str, M) -> TamagawaData:
    ft = M if isinstance(M, FactoredTwist) else factor_twist(M)
    D = fundamental_discriminant(ft.M) if ft.M != 1 else 1
    c: dict[int, int] = {7: 2}
    if curve == A_TWIST:
        if D % 2 == 0:
            c[2] = 4
        for q in ft.inert:
            c[q] = 2
        for p in ft.split:
            c[p] = 4
        cinf = 1
    elif curve == APRIME_TWIST:
        if D % 2 == 0:
            if D % 8:            # 4 exactly divides D_M
                c[2] = 2
            else:
                c[2] = 2 if (ft.M // 2) % 4 == 3 else 4
        for q in ft.inert:
            c[q] = 2 if q % 4 == 1 else 4
        for p in ft.split:
            c[p] = 4 if p % 4 == 1 else 2
        cinf = 2
    else:
        raise ValueError(f"unknown curve {curve!r}")
    return TamagawaData(curve, ft.M, dict(sorted(c.items())), cinf)


def a_of_M(M) -> int:
    ft = M if isinstance(M, FactoredTwist) else factor_twist(M)
    return 1 if (ft.N_minus * ft.R_minus - (-ft.epsilon)) % 4 == 0 else 0


@dataclass(frozen=True)
class ShaRatioInputs:
    M: FactoredTwist
    rho: int
    g: int

    def __post_init__(self):
        if not 0 <= self.rho <= self.g:
            raise ValueError("need 0 <= rho <= g")

    @property
    def aM(self) -> int:
        return a_of_M(self.M)


def sha_ratio_ord2(inputs: ShaRatioInputs) -> int:
    """ord_2 of #Sha(A^(M))[2^inf] / #Sha(A'^(M))[2^inf]."""
    ft = inputs.M
    return inputs.aM + ft.k_minus - ft.r_minus + 2 * inputs.rho - inputs.g


def tamagawa_ratio_ord2(M) -> int:
    """ord_2 of Tam(A^(M)) / Tam(A'^(M)), computed from the factor tables."""
    a = tamagawa(A_TWIST, M)
    b = tamagawa(APRIME_TWIST, M)
    return a.tam_product_ord2 - b.tam_product_ord2


def bsd_predicted_ord2(M, sha2_ord: int = 0) -> int:
    """ord_2 of L^alg(A^(M), 1) predicted by BSD with #Sha[2^inf] = 2^sha2_ord."""
    ft = M if isinstance(M, FactoredTwist) else factor_twist(M)
    if ft.M <= 0 or ft.M % 4 != 1 or ft.delta:
        raise ValueError(f"BSD 2-part prediction needs M > 0, M = 1 mod 4, got {ft.M}")
    tam = tamagawa(A_TWIST, ft)
    tors2 = 2  # ord_2(#A^(M)(Q)_tors^2) with torsion of order 2
    return _ord2(tam.c_infinity) + tam.tam_product_ord2 - tors2 + sha2_ord
