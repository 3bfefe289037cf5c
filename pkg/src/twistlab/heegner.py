"""Heegner points on X_0(49) and their images on A = X_0(49) under the
modular parametrization z(tau) = sum a_n q^n / n, q = exp(2 pi i tau).

Points are handled as lattice coordinates z in C / Omega O_F; the torsion
and eigenspace verdicts used below only need z, never (x, y)."""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .arithmetica import is_prime, kronecker, prime_factors, odd_star
from .classgroup import QuadForm, class_group
from .lseries import an_array
from .weierstrass import LatticePeriods, lattice_A

LEVEL = 49
TORSION_DENOM = 8
TORSION_TOL = 1e-6
PARAM_TOL = 1e-12


class HeegnerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# CM points

def beta_root(dK: int) -> int:
    """Smallest beta in [0, 98) with beta^2 = dK mod 196."""
    for b in range(2 * LEVEL):
        if (b * b - dK) % (4 * LEVEL) == 0:
            return b
    raise HeegnerError(f"{dK} is not a square mod 196: 7 is not split")


@dataclass(frozen=True)
class CMPoint:
    form: QuadForm
    tau: complex

    @property
    def cls(self) -> QuadForm:
        return self.form.reduced()


@dataclass
class CMPointOrbit:
    K_disc: int
    conductor: int
    beta: int
    points: list = field(default_factory=list)

    @property
    def disc(self) -> int:
        return self.conductor ** 2 * self.K_disc

    @property
    def ring_class_order(self) -> int:
        return class_group(self.disc).h


def cm_points(dK: int, c: int = 1, max_a: int = 10**4) -> CMPointOrbit:
    """One Heegner form (49 a', B, C), B = beta_c mod 98, per class of disc c^2 dK.

    beta_c = c beta_1 keeps the level structure compatible across conductors,
    which is what the trace relations between conductors need."""
    if kronecker(dK, 7) != 1:
        raise HeegnerError(f"7 is not split in Q(sqrt({dK}))")
    if math.gcd(c, 7 * dK) != 1:
        raise HeegnerError(f"conductor {c} is not prime to 7 disc")
    D = c * c * dK
    beta = (c * beta_root(dK)) % (2 * LEVEL)
    cg = class_group(D)
    want = set(cg.elements)
    found: dict[QuadForm, QuadForm] = {}
    sq = math.sqrt(-D)
    for ap in range(1, max_a):
        A = LEVEL * ap
        for j in range(ap):
            B = beta + 2 * LEVEL * j
            if B > A:
                B -= 2 * A
            if (B * B - D) % (4 * A):
                continue
            C = (B * B - D) // (4 * A)
            if math.gcd(math.gcd(A, B), C) != 1:
                continue
            f = QuadForm(A, B, C)
            r = f.reduced()
            if r in want and r not in found:
                found[r] = f
        if len(found) == len(want):
            break
    else:
        raise HeegnerError(f"Heegner forms not found for every class of {D}")
    orbit = CMPointOrbit(dK, c, beta)
    for r in cg.elements:
        f = found[r]
        orbit.points.append(CMPoint(f, complex(-f.b, sq) / (2 * f.a)))
    return orbit


# ---------------------------------------------------------------------------
# modular parametrization

def terms_needed(tau: complex, tol: float = PARAM_TOL) -> int:
    y = tau.imag
    if y < 1e-3:
        raise HeegnerError(f"Im tau = {y:.2e} is below 1e-3; reduce tau first")
    r = math.exp(-2 * math.pi * y)
    # |a_n| / n <= 2, tail <= 2 r^N / (1 - r)
    return max(16, int(math.ceil(math.log(tol * (1 - r) / 2) / math.log(r))) + 1)


def param_eval(tau: complex, L: LatticePeriods | None = None, tol: float = PARAM_TOL,
               reduce: bool = False) -> complex:
    """z(tau) = sum_{n <= T} a_n q^n / n with tail below tol."""
    L = L or lattice_A()
    T = terms_needed(tau, tol)
    a = an_array(T)[1:T + 1].astype(np.float64)
    n = np.arange(1, T + 1, dtype=np.float64)
    qn = np.exp(2j * np.pi * n * tau)
    z = complex(np.sum(a * qn / n))
    return L.reduce(z) if reduce else z


def act(g, tau: complex) -> complex:
    a, b, c, d = g
    return (a * tau + b) / (c * tau + d)


def fricke(tau: complex) -> complex:
    return -1 / (LEVEL * tau)


def torsion_T(L: LatticePeriods | None = None) -> complex:
    """Lattice coordinate of T = (2, -1), the image of the cusp 0."""
    L = L or lattice_A()
    return L.omega1 / 2


def lattice_distance(z: complex, w: complex, L: LatticePeriods | None = None) -> float:
    """Distance from z - w to the lattice."""
    L = L or lattice_A()
    return L.distance_to_lattice(z - w)


def torsion_distance(z: complex, L: LatticePeriods | None = None,
                     denom: int = TORSION_DENOM) -> float:
    """Distance from z to the grid (1/denom) L, relative to |omega1|."""
    L = L or lattice_A()
    u, v = L.coords(z)
    w = z - round(denom * u) / denom * L.omega1 - round(denom * v) / denom * L.omega2
    return abs(w) / abs(L.omega1)


def is_torsion_numeric(z: complex, L: LatticePeriods | None = None,
                       tol: float = TORSION_TOL) -> bool:
    return torsion_distance(z, L) < tol


def height_proxy(z: complex, L: LatticePeriods | None = None, steps: int = 12) -> float:
    """Mean distance of 2^k z (k < steps) from the torsion grid.

    Torsion points of 2-power order stay on the grid under doubling, while a
    point of infinite order keeps escaping it. A numeric proxy only; it is
    not the Neron-Tate height."""
    L = L or lattice_A()
    w, total = z, 0.0
    for _ in range(steps):
        total += torsion_distance(w, L)
        w = L.reduce(2 * w)
    return total / steps


# ---------------------------------------------------------------------------
# traces

def represented_prime(f: QuadForm, avoid: int, bound: int = 60) -> int:
    """Smallest prime represented by f in the box |x|, |y| <= bound, coprime to avoid."""
    vals = {f(x, y) for x in range(-bound, bound + 1) for y in range(bound + 1)}
    for v in sorted(vals):
        if v > 2 and math.gcd(v, avoid) == 1 and is_prime(v):
            return v
    raise HeegnerError(f"no prime represented by {f} within the search box")


def ring_class_character(R: int, f: QuadForm, avoid: int) -> int:
    """chi_R on the class of f: product of kronecker(q*, p) over q | R with p a
    prime represented by f."""
    if R == 1:
        return 1
    p = represented_prime(f.reduced(), avoid)
    out = 1
    for q in prime_factors(R):
        out *= kronecker(odd_star(q), p)
    return out


@dataclass
class TracePoint:
    label: tuple
    z: complex
    conj_sum: complex
    torsion_flag: bool
    minus_eigen_flag: bool
    height_estimate: float
    torsion_dist: float
    orbit_size: int
    algebraic_guess: tuple | None = None

    def as_dict(self) -> dict:
        return {"label": list(self.label), "z": [self.z.real, self.z.imag],
                "torsion": self.torsion_flag, "minus_eigen": self.minus_eigen_flag,
                "torsion_distance": self.torsion_dist, "height_proxy": self.height_estimate,
                "orbit_size": self.orbit_size}


def heegner_trace(l0: int, R: int = 1, N: int = 1, character: bool = True,
                  L: LatticePeriods | None = None, max_orbit: int = 200) -> TracePoint:
    """Y_{R,N} = sum_sigma chi_R(sigma) sigma(P_{R,N}): the conductor-R Heegner
    point over K_N = Q(sqrt(-l0 N)), twisted by the character of K_N(sqrt(R))."""
    L = L or lattice_A()
    if l0 % 4 != 3 or not is_prime(l0):
        raise HeegnerError(f"l0 = {l0} must be a prime = 3 mod 4")
    dK = -l0 * N
    orbit = cm_points(dK, R)
    if len(orbit.points) > max_orbit:
        raise HeegnerError(f"orbit of size {len(orbit.points)} is beyond {max_orbit}")
    avoid = 2 * 7 * l0 * R * N
    Y = 0j
    for pt in orbit.points:
        chi = ring_class_character(R, pt.form, avoid) if character else 1
        Y += chi * param_eval(pt.tau, L)
    Y = L.reduce(Y)
    conj_sum = Y.conjugate() + Y
    return TracePoint(
        label=(l0, R, N, "chi_R" if character and R > 1 else "trivial"),
        z=Y,
        conj_sum=conj_sum,
        torsion_flag=is_torsion_numeric(Y, L),
        minus_eigen_flag=is_torsion_numeric(conj_sum, L),
        height_estimate=height_proxy(Y, L),
        torsion_dist=torsion_distance(Y, L),
        orbit_size=len(orbit.points),
    )


def kolyvagin_sum(l0: int, p: int, L: LatticePeriods | None = None) -> complex:
    """Sum of all conductor-p Heegner points over Q(sqrt(-l0)) (class number one),
    which equals a_p times the conductor-1 point."""
    L = L or lattice_A()
    orbit = cm_points(-l0, p)
    return L.reduce(sum(param_eval(pt.tau, L) for pt in orbit.points))


# ---------------------------------------------------------------------------
# checks on the parametrization itself

def gamma0_pair(c: int, d: int) -> tuple:
    """An element (a, b, 49c, d) of Gamma_0(49) and a tau with Im tau = Im g tau = 1/(49c)."""
    g, x, y = _egcd(LEVEL * c, d)
    if g != 1:
        raise ValueError("need gcd(49 c, d) = 1")
    # a d - b 49 c = 1
    a, b = y, -x
    tau = complex(-d / (LEVEL * c), 1 / (LEVEL * c))
    return (a, b, LEVEL * c, d), tau


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def invariance_residual(c: int, d: int, L: LatticePeriods | None = None) -> float:
    L = L or lattice_A()
    g, tau = gamma0_pair(c, d)
    return lattice_distance(param_eval(act(g, tau), L), param_eval(tau, L), L)


def period_of(c: int, d: int, L: LatticePeriods | None = None) -> complex:
    """z(g tau) - z(tau): an element of the period lattice of the newform."""
    L = L or lattice_A()
    g, tau = gamma0_pair(c, d)
    return param_eval(act(g, tau), L) - param_eval(tau, L)


def fricke_residual(tau: complex, L: LatticePeriods | None = None) -> float:
    """Distance from z(w tau) + z(tau) to the class of T."""
    L = L or lattice_A()
    return lattice_distance(param_eval(fricke(tau), L) + param_eval(tau, L), torsion_T(L), L)


def regenerated_lattice(L: LatticePeriods | None = None, pairs=((1, 1), (1, 2), (1, 3), (1, 5),
                                                                (1, 6), (2, 1), (2, 3))):
    """Integer lattice coordinates of periods from Gamma_0(49) elements and the
    index of the sublattice they span (1 when they regenerate omega1, omega2)."""
    L = L or lattice_A()
    vecs = []
    for c, d in pairs:
        w = period_of(c, d, L)
        u, v = L.coords(w)
        vecs.append((round(u), round(v), max(abs(u - round(u)), abs(v - round(v)))))
    g = 0
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            g = math.gcd(g, vecs[i][0] * vecs[j][1] - vecs[i][1] * vecs[j][0])
    return vecs, g
