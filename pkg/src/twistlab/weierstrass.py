"""Period lattice, quasi-periods and the Weierstrass functions of A, plus the
non-holomorphic Eisenstein function E_1^*(z) = zeta(z) - z s_2 - conj(z)/A(L)."""
from __future__ import annotations

from dataclasses import dataclass
import math

import mpmath

# y^2 + xy = x^3 - x^2 - 2x - 1
A_INVARIANTS = (1, -1, 0, -2, -1)


def c_invariants(a=A_INVARIANTS) -> tuple[int, int, int]:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


class LatticeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LatticePeriods:
    omega1: complex
    omega2: complex
    eta1: complex
    eta2: complex
    s2: complex
    areaA: complex
    area: float
    g2: float
    g3: float
    b2: int
    dps: int = 30

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    def coords(self, z: complex) -> tuple[float, float]:
        """Real (u, v) with z = u omega1 + v omega2."""
        w1, w2 = self.omega1, self.omega2
        det = (w1.conjugate() * w2).imag
        u = (z.conjugate() * w2).imag / det
        v = (w1.conjugate() * z).imag / det
        return u, v

    def reduce(self, z: complex) -> complex:
        """Representative of z mod L with coordinates in [0, 1)."""
        u, v = self.coords(z)
        return z - math.floor(u) * self.omega1 - math.floor(v) * self.omega2

    def distance_to_lattice(self, z: complex) -> float:
        u, v = self.coords(z)
        best = math.inf
        for du in (0, 1):
            for dv in (0, 1):
                w = z - (math.floor(u) + du) * self.omega1 - (math.floor(v) + dv) * self.omega2
                best = min(best, abs(w))
        return best


def _agm_periods(g2: float, g3: float, dps: int) -> tuple[complex, complex]:
    """Periods for y^2 = 4x^3 - g2 x - g3 with negative discriminant
    (one real root e1): the AGM method."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([4, 0, -g2, -g3], maxsteps=200, extraprec=2 * dps)
        real = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)]
        if len(real) != 1:
            raise LatticeError("expected exactly one real 2-torsion point")
        e1 = mpmath.re(real[0])
        beta = 3 * e1
        gamma = mpmath.sqrt(3 * e1 * e1 - mpmath.mpf(g2) / 4)
        a1 = mpmath.agm(2 * mpmath.sqrt(gamma), mpmath.sqrt(2 * gamma + beta))
        a2 = mpmath.agm(2 * mpmath.sqrt(gamma), mpmath.sqrt(2 * gamma - beta))
        w1 = 2 * mpmath.pi / a1
        w2 = -w1 / 2 + 1j * mpmath.pi / a2
        return complex(w1), complex(w2)


def lattice_invariants(a=A_INVARIANTS, dps: int = 30) -> LatticePeriods:
    c4, c6, disc = c_invariants(a)
    if disc >= 0:
        raise LatticeError("only negative discriminant lattices are handled")
    g2 = mpmath.mpf(c4) / 12
    g3 = mpmath.mpf(c6) / 216
    b2 = a[0] * a[0] + 4 * a[1]
    w1, w2 = _agm_periods(g2, g3, dps)
    if (w2 / w1).imag < 0:
        w2 = -w2
    with mpmath.workdps(dps):
        t = mpmath.mpc(w2) / mpmath.mpc(w1)
        q = mpmath.exp(1j * mpmath.pi * t)
        th1 = mpmath.jtheta(1, 0, q, 1)
        th3 = mpmath.jtheta(1, 0, q, 3)
        eta1 = -mpmath.pi ** 2 * th3 / (3 * mpmath.mpc(w1) * th1)
        # eta2 = zeta(z + w2) - zeta(z) straight from the theta quotient; the
        # Legendre relation is then a check, not an input
        z = mpmath.mpc(w1) / 7 + mpmath.mpc(w2) / 5
        def zt(u):
            v = mpmath.pi * u / w1
            return eta1 * u / w1 + mpmath.pi / w1 * mpmath.jtheta(1, v, q, 1) / mpmath.jtheta(1, v, q)
        eta2 = zt(z + w2) - zt(z)
        # eta_k = s2 w_k + conj(w_k) / A
        m = mpmath.matrix([[w1, mpmath.conj(w1)], [w2, mpmath.conj(w2)]])
        sol = mpmath.lu_solve(m, mpmath.matrix([eta1, eta2]))
        s2, invA = sol[0], sol[1]
    area = (w1.conjugate() * w2).imag
    return LatticePeriods(w1, w2, complex(eta1), complex(eta2), complex(s2), complex(1 / invA),
                          abs(area), float(g2), float(g3), b2, dps)


_LATTICE: LatticePeriods | None = None


def lattice_A() -> LatticePeriods:
    global _LATTICE
    if _LATTICE is None:
        _LATTICE = lattice_invariants()
    return _LATTICE


# ---------------------------------------------------------------------------
# zeta, wp, wp'

def _split(z: complex, L: LatticePeriods):
    """z = z0 + m w1 + n w2 with z0 in the centered cell."""
    u, v = L.coords(z)
    m, n = round(u), round(v)
    return z - m * L.omega1 - n * L.omega2, m, n


def _pole_check(z0: complex, L: LatticePeriods):
    if abs(z0) < 1e-12 * abs(L.omega1):
        raise ZeroDivisionError("z lies on the lattice")


def _theta_derivs(z0: complex, L: LatticePeriods, order: int):
    w1 = mpmath.mpc(L.omega1)
    q = mpmath.exp(1j * mpmath.pi * mpmath.mpc(L.omega2) / w1)
    v = mpmath.pi * mpmath.mpc(z0) / w1
    return [mpmath.jtheta(1, v, q, k) for k in range(order + 1)], w1


def zeta(z: complex, L: LatticePeriods | None = None) -> complex:
    L = L or lattice_A()
    z0, m, n = _split(z, L)
    _pole_check(z0, L)
    with mpmath.workdps(L.dps):
        th, w1 = _theta_derivs(z0, L, 1)
        val = mpmath.mpc(L.eta1) * z0 / w1 + mpmath.pi / w1 * th[1] / th[0]
    return complex(val) + m * L.eta1 + n * L.eta2


def wp(z: complex, L: LatticePeriods | None = None) -> complex:
    L = L or lattice_A()
    z0, _, _ = _split(z, L)
    _pole_check(z0, L)
    with mpmath.workdps(L.dps):
        th, w1 = _theta_derivs(z0, L, 2)
        r1, r2 = th[1] / th[0], th[2] / th[0]
        val = -mpmath.mpc(L.eta1) / w1 + (mpmath.pi / w1) ** 2 * (r1 * r1 - r2)
    return complex(val)


def wp_prime(z: complex, L: LatticePeriods | None = None) -> complex:
    L = L or lattice_A()
    z0, _, _ = _split(z, L)
    _pole_check(z0, L)
    with mpmath.workdps(L.dps):
        th, w1 = _theta_derivs(z0, L, 3)
        r1, r2, r3 = th[1] / th[0], th[2] / th[0], th[3] / th[0]
        # d/dv (r1^2 - r2) with r1' = r2 - r1^2, r2' = r3 - r1 r2
        d = 2 * r1 * (r2 - r1 * r1) - (r3 - r1 * r2)
        val = (mpmath.pi / w1) ** 3 * d
    return complex(val)


def point_from_z(z: complex, L: LatticePeriods | None = None) -> tuple[complex, complex]:
    """(x, y) on A: x = wp - b2/12 = wp + 1/4 and y = (wp' - x)/2."""
    L = L or lattice_A()
    x = wp(z, L) - L.b2 / 12
    y = (wp_prime(z, L) - x) / 2
    return x, y


def e1star(z: complex, L: LatticePeriods | None = None) -> complex:
    L = L or lattice_A()
    return zeta(z, L) - z * L.s2 - z.conjugate() / L.areaA


def addition_residual(z1: complex, z2: complex, L: LatticePeriods | None = None) -> float:
    """|E1*(z1+z2) + E1*(z1-z2) - 2 E1*(z1) - (2y + x)(P1)/(x(P1) - x(P2))|,
    with the right-hand side built from the curve coordinates."""
    L = L or lattice_A()
    for w in (z1, z2, z1 + z2, z1 - z2):
        _pole_check(_split(w, L)[0], L)
    x1, y1 = point_from_z(z1, L)
    x2, _ = point_from_z(z2, L)
    if abs(x1 - x2) < 1e-12:
        raise ZeroDivisionError("z1 = +-z2 mod L")
    lhs = e1star(z1 + z2, L) + e1star(z1 - z2, L) - 2 * e1star(z1, L)
    rhs = (2 * y1 + x1) / (x1 - x2)
    return abs(lhs - rhs)


def legendre_residual(L: LatticePeriods | None = None) -> float:
    L = L or lattice_A()
    return abs(L.eta1 * L.omega2 - L.eta2 * L.omega1 - 2j * math.pi)


def quasi_period_residual(L: LatticePeriods | None = None, z: complex = 0.3 + 0.2j) -> float:
    """eta_k against zeta(z + w_k) - zeta(z) evaluated directly through the theta series."""
    L = L or lattice_A()
    out = 0.0
    with mpmath.workdps(L.dps):
        for w, eta in ((L.omega1, L.eta1), (L.omega2, L.eta2)):
            # evaluate both sides without the quasi-periodic shortcut
            vals = []
            for zz in (z, z + w):
                th, w1 = _theta_derivs(zz, L, 1)
                vals.append(mpmath.mpc(L.eta1) * zz / w1 + mpmath.pi / w1 * th[1] / th[0])
            out = max(out, abs(complex(vals[1] - vals[0]) - eta))
    return out
