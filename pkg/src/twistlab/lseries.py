"""Hecke L-series of A = X0(49) and its quadratic twists.

a_p comes from the Grossencharacter of F = Q(sqrt(-7)): a_p = 0 at inert p,
a_p = pi + conj(pi) at split p with 4p = a^2 + 7b^2 and pi = (a + b sqrt(-7))/2
normalized so that pi mod sqrt(-7) is a square in F_7.  The table is calibrated
against point counts on y^2 + xy = x^3 - x^2 - 2x - 1 before first use.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import exp1

from .arithmetica import (
    fundamental_discriminant, is_prime, is_squarefree, kronecker,
    prime_factors, primes_up_to,
)

CALIBRATION_BOUND = 200
SNAP_DENOMINATOR = 64


class LSeriesError(ValueError):
    pass


class WrongRootNumber(LSeriesError):
    pass


class SnapFailure(LSeriesError):
    """L/Omega did not snap to a stable rational."""


# ---------------------------------------------------------------------------
# a_p

def ap_oracle(p: int) -> int:
    """p + 1 - #A(F_p) by counting points on the minimal model."""
    if p == 7:
        raise ValueError("p = 7 is a bad prime")
    if not is_prime(p) or p > 10**4:
        raise ValueError(f"point count oracle needs a prime p <= 10^4, got {p}")
    if p == 2:
        count = 1 + sum(1 for x in range(2) for y in range(2)
                        if (y * y + x * y - (x**3 - x * x - 2 * x - 1)) % 2 == 0)
        return p + 1 - count
    # (2y + x)^2 = 4x^3 - 3x^2 - 8x - 4
    x = np.arange(p, dtype=np.int64)
    rhs = (4 * x**3 - 3 * x**2 - 8 * x - 4) % p
    # counts[r] = number of Y with Y^2 = r
    counts = np.bincount((x * x) % p, minlength=p)
    affine = int(counts[rhs].sum())
    return p + 1 - (affine + 1)


def _ap_character(p: int) -> int:
    if p == 7:
        return 0
    if kronecker(-7, p) != 1:
        return 0
    b = 1
    while 7 * b * b <= 4 * p:
        a2 = 4 * p - 7 * b * b
        a = math.isqrt(a2)
        if a * a == a2:
            return a if kronecker(a, 7) == 1 else -a
        b += 1
    raise RuntimeError(f"no solution of a^2 + 7b^2 = 4p for split p = {p}")


class HeckeApTable:
    """Grow-only a_p table; readers see consistent snapshots, one writer extends."""

    def __init__(self):
        self._lock = threading.Lock()
        self.entries: dict[int, int] = {}
        self.provenance: dict[int, str] = {}
        self._calibrated = False

    def calibrate(self) -> None:
        with self._lock:
            if self._calibrated:
                return
            for p in primes_up_to(CALIBRATION_BOUND):
                if p == 7:
                    continue
                c, o = _ap_character(p), ap_oracle(p)
                if c != o:
                    raise RuntimeError(f"Hecke normalization disagrees with point count at p={p}: {c} vs {o}")
                self.entries[p] = c
                self.provenance[p] = "point_count"
            self.entries[7] = 0
            self.provenance[7] = "character"
            self._calibrated = True

    def __getitem__(self, p: int) -> int:
        self.calibrate()
        v = self.entries.get(p)
        if v is None:
            v = _ap_character(p)
            if abs(v) > 2 * math.isqrt(p) + 2:
                raise RuntimeError(f"Hasse bound violated at p={p}")
            with self._lock:
                self.entries.setdefault(p, v)
                self.provenance.setdefault(p, "character")
        return v

    def extend(self, bound: int) -> None:
        """Fill in every prime up to ``bound`` using the norm-form enumeration."""
        self.calibrate()
        have = max(self.entries)
        if have >= bound:
            return
        new: dict[int, int] = {}
        # all a^2 + 7 b^2 = 4p with b >= 1 at once
        bmax = math.isqrt(4 * bound // 7) + 1
        for b in range(1, bmax + 1):
            rest = 4 * bound - 7 * b * b
            if rest < 0:
                break
            for a in range(b % 2, math.isqrt(rest) + 1, 2):
                n4 = a * a + 7 * b * b
                if n4 % 4:
                    continue
                p = n4 // 4
                if p <= have or p in new or not is_prime(p):
                    continue
                new[p] = a if kronecker(a, 7) == 1 else -a
        with self._lock:
            for p in primes_up_to(bound):
                if p in self.entries:
                    continue
                self.entries[p] = new.get(p, 0)
                self.provenance[p] = "character"

    def items(self):
        return sorted(self.entries.items())


AP_TABLE = HeckeApTable()


def ap(p: int) -> int:
    return AP_TABLE[p]


def save_ap_cache(path, table: dict[int, int] | None = None) -> None:
    table = AP_TABLE.entries if table is None else table
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for p in sorted(table):
            fh.write(f"{p}\t{table[p]}\n")


def load_ap_cache(path) -> dict[int, int]:
    out: dict[int, int] = {}
    last = 0
    with open(path, "r", encoding="ascii", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.endswith("\n"):
                raise ValueError(f"{path}:{lineno}: missing line terminator")
            parts = line[:-1].split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: malformed line {line!r}")
            try:
                p, a = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed line {line!r}") from None
            if str(p) != parts[0] or str(a) != parts[1] or p <= last:
                raise ValueError(f"{path}:{lineno}: malformed line {line!r}")
            out[p] = a
            last = p
    return out


def merge_ap_cache(table: dict[int, int]) -> None:
    """Load entries into the live table after checking them against the character."""
    for p, a in table.items():
        if ap(p) != a:
            raise ValueError(f"cached a_{p} = {a} disagrees with the Hecke character ({ap(p)})")


# ---------------------------------------------------------------------------
# a_n

_AN_LOCK = threading.Lock()
_AN: np.ndarray = np.zeros(2, dtype=np.int64)


def an_array(nmax: int) -> np.ndarray:
    """Array a[0..nmax] of Dirichlet coefficients of L(A, s) (a[0] = 0)."""
    global _AN
    arr = _AN
    if len(arr) > nmax:
        return arr[: nmax + 1]
    with _AN_LOCK:
        if len(_AN) > nmax:
            return _AN[: nmax + 1]
        n = max(nmax, 2 * (len(_AN) - 1), 1024)
        AP_TABLE.extend(n)
        spf = np.zeros(n + 1, dtype=np.int64)
        for p in primes_up_to(math.isqrt(n)):
            block = spf[p * p :: p]
            block[block == 0] = p
        a = [0] * (n + 1)
        a[1] = 1
        entries = AP_TABLE.entries
        spf_l = spf.tolist()
        for m in range(2, n + 1):
            p = spf_l[m] or m
            # m = p^k * rest
            q, k = m, 0
            while q % p == 0:
                q //= p
                k += 1
            if q > 1:
                a[m] = a[m // q] * a[q]
            else:
                ap_ = entries[p]
                if k == 1:
                    a[m] = ap_
                else:
                    a[m] = ap_ * a[m // p] - (0 if p == 7 else p) * a[m // (p * p)]
        _AN = np.array(a, dtype=np.int64)
        return _AN[: nmax + 1]


def an(n: int) -> int:
    return int(an_array(n)[n])


# ---------------------------------------------------------------------------
# characters, root numbers, periods

def reduced_label(M: int) -> int:
    """Coprime-to-7 label with the same L-series: A^(-7m) ~ A^(m)."""
    if M % 7 == 0:
        return -M // 7
    return M


def root_number(M: int) -> int:
    if M == 0 or not is_squarefree(M):
        raise ValueError(f"root number needs a squarefree label, got {M}")
    if M > 0:
        return 1 if M % 7 else -1
    return 1 if M % 7 == 0 else -1


def _character_table(D: int) -> np.ndarray:
    """Values of the Kronecker character n -> (D/n) on residues mod |D|."""
    m = abs(D)
    r = np.arange(m, dtype=np.int64)
    chi = np.ones(m, dtype=np.int64)
    rest = D
    for p in prime_factors(D):
        if p == 2:
            continue
        sq = np.full(p, -1, dtype=np.int64)
        sq[(np.arange(p) ** 2) % p] = 1
        sq[0] = 0
        chi *= sq[r % p]
        rest //= p if p % 4 == 1 else -p
    if rest != 1:
        if rest == -4:
            two = np.where(r % 2 == 0, 0, np.where(r % 4 == 1, 1, -1))
        elif rest == 8:
            two = np.where(r % 2 == 0, 0, np.where((r % 8 == 1) | (r % 8 == 7), 1, -1))
        elif rest == -8:
            two = np.where(r % 2 == 0, 0, np.where((r % 8 == 1) | (r % 8 == 3), 1, -1))
        else:
            raise ValueError(f"{D} is not a fundamental discriminant")
        chi *= two
    return chi


def twist_character(M: int, nmax: int) -> np.ndarray:
    """chi_M(n) for n = 0..nmax, the character of Q(sqrt(M))/Q."""
    if M == 1:
        out = np.ones(nmax + 1, dtype=np.int64)
        out[0] = 0
        return out
    D = fundamental_discriminant(M)
    tab = _character_table(D)
    return tab[np.arange(nmax + 1) % abs(D)]


def conductor(M: int) -> int:
    m = reduced_label(M)
    if m == 1:
        return 49
    return 49 * fundamental_discriminant(m) ** 2


@dataclass(frozen=True)
class PeriodData:
    omega_A: float
    omega_minus: float

    def omega_twist(self, M: int) -> float:
        u = 1.0 if M % 4 == 1 else 0.5
        if M > 0:
            return u * self.omega_A / math.sqrt(M)
        return u * self.omega_minus / math.sqrt(-M)


def omega_gamma_product(dps: int = 30):
    """Gamma(1/7) Gamma(2/7) Gamma(4/7) / (2 pi sqrt 7)."""
    with mpmath.workdps(dps):
        return (mpmath.gamma(mpmath.mpf(1) / 7) * mpmath.gamma(mpmath.mpf(2) / 7)
                * mpmath.gamma(mpmath.mpf(4) / 7) / (2 * mpmath.pi * mpmath.sqrt(7)))


_PERIODS: PeriodData | None = None


def periods() -> PeriodData:
    """Real period from the Gamma product; the purely imaginary period of the
    lattice Omega * O_F is Omega * sqrt(-7)."""
    global _PERIODS
    if _PERIODS is None:
        om = float(omega_gamma_product())
        _PERIODS = PeriodData(om, om * math.sqrt(7))
    return _PERIODS


# ---------------------------------------------------------------------------
# L-values

@dataclass(frozen=True)
class LValueRecord:
    M: int
    conductor: int
    root_number: int
    L_numeric: float
    L_prime_numeric: float | None
    omega: float
    lalg: Fraction | None
    ord2: int | None
    terms_used: int
    error_bound: float
    ratio: float | None = None
    precision: str = "double"


def _terms_needed(alpha: float, tol: float, derivative: bool) -> int:
    # |a_n / n| <= d(n)/sqrt(n) <= 2; tail <= 4 sum_{n>T} e^{-alpha n} (/ alpha n for E1)
    T = 1
    while True:
        tail = 4.0 * math.exp(-alpha * (T + 1)) / (1.0 - math.exp(-alpha))
        if derivative:
            tail /= alpha * (T + 1)
        if tail < tol:
            return T
        T = int(T * 1.25) + 16


def _tail_bound(alpha: float, T: int, derivative: bool) -> float:
    tail = 4.0 * math.exp(-alpha * (T + 1)) / (1.0 - math.exp(-alpha))
    if derivative:
        tail /= alpha * (T + 1)
    return tail


def _series(m: int, T: int, derivative: bool, extended: bool = False) -> float:
    N = conductor(m)
    alpha = 2 * math.pi / math.sqrt(N)
    a = an_array(T)[1 : T + 1]
    chi = twist_character(m, T)[1 : T + 1]
    n = np.arange(1, T + 1, dtype=np.float64)
    coef = a * chi
    nz = np.nonzero(coef)[0]
    if extended:
        with mpmath.workdps(40):
            al = 2 * mpmath.pi / mpmath.sqrt(N)
            f = (lambda k: mpmath.e1(al * k)) if derivative else (lambda k: mpmath.exp(-al * k))
            s = mpmath.fsum(int(coef[i]) * f(i + 1) / (i + 1) for i in nz)
            return float(2 * s)
    x = alpha * n[nz]
    w = exp1(x) if derivative else np.exp(-x)
    terms = coef[nz] / n[nz] * w
    return 2.0 * math.fsum(terms.tolist())


def _snap(x: float) -> Fraction:
    return Fraction(x).limit_denominator(SNAP_DENOMINATOR)


def _ord2(q: Fraction) -> int:
    v = 0
    num, den = q.numerator, q.denominator
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return v


def l_central(M: int, tol: float = 1e-12) -> LValueRecord:
    """L(A^(M), 1) for root number +1, with its snapped algebraic part."""
    if root_number(M) != 1:
        raise WrongRootNumber(f"A^({M}) has root number -1; use l_derivative")
    m = reduced_label(M)
    if abs(m) > 5000:
        raise LSeriesError(f"|M| <= 5000 supported, got {M}")
    N = conductor(m)
    alpha = 2 * math.pi / math.sqrt(N)
    T = _terms_needed(alpha, tol, False)
    omega = periods().omega_twist(M)
    precision = "double"
    L1 = _series(m, T, False)
    L2 = _series(m, 2 * T, False)
    q1, q2 = _snap(L1 / omega), _snap(L2 / omega)
    res = abs(L2 / omega - float(q2))
    if q1 != q2 or res >= 1e-6:
        precision = "extended"
        L1 = _series(m, T, False, extended=True)
        L2 = _series(m, 2 * T, False, extended=True)
        q1, q2 = _snap(L1 / omega), _snap(L2 / omega)
        res = abs(L2 / omega - float(q2))
        if q1 != q2 or res >= 1e-6:
            raise SnapFailure(f"L/Omega for M={M} does not snap: {L2 / omega!r}")
    ord2 = None if q2 == 0 else _ord2(q2)
    return LValueRecord(M, N, 1, L2, None, omega, q2, ord2, 2 * T,
                        _tail_bound(alpha, 2 * T, False), L2 / omega, precision)


def l_derivative(M: int, tol: float = 1e-10) -> LValueRecord:
    """L'(A^(M), 1) for root number -1."""
    if root_number(M) != -1:
        raise WrongRootNumber(f"A^({M}) has root number +1; use l_central")
    m = reduced_label(M)
    N = conductor(m)
    alpha = 2 * math.pi / math.sqrt(N)
    T = _terms_needed(alpha, tol, True)
    Lp = _series(m, T, True)
    err = _tail_bound(alpha, T, True) + 1e-15 * T
    return LValueRecord(M, N, -1, 0.0, Lp, periods().omega_twist(M), None, None, T, err)


def lalg_ord2(M: int) -> tuple[Fraction, int | None]:
    rec = l_central(M)
    return rec.lalg, rec.ord2


def lalg_numeric(M: int) -> float:
    """L(A^(M),1)/Omega(A^(M)) as a float (no snapping)."""
    return l_central(M).ratio


def torsion_gcd(M: int, count: int = 20) -> int:
    """gcd of #A^(M)(F_p) over ``count`` good primes: bounds the rational torsion."""
    g = 0
    p = 2
    seen = 0
    m = reduced_label(M)
    while seen < count:
        p += 1
        if not is_prime(p) or (2 * 7 * m) % p == 0:
            continue
        g = math.gcd(g, p + 1 - kronecker(m, p) * ap(p))
        seen += 1
    return g
