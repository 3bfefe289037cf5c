"""2-isogeny descent on the twists A^(M) of X0(49).

Two independent routes to the Selmer groups S^(phi)(A^(M)) and
S^(phihat)(A'^(M)):

* the explicit residue-condition lists (``selmer_phi`` / ``selmer_phihat``),
* a local-solubility oracle on the torsors
      C_d : d w^2 = 64 - 7((M/d) z^2 + 3)^2
      C'_d: d w^2 = 1 + 7((2M/d) z^2 + 3)^2
  deciding Q_v-points by exact p-adic refinement (``local_oracle``).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .arithmetica import FactoredTwist, factor_twist, kronecker, quartic_symbol
from .classgroup import has_order_four

PHI, PHIHAT = "phi", "phihat"
INFINITY = 0  # place label for the real place


class OracleIndeterminate(RuntimeError):
    """Local refinement exceeded its depth bound without a verdict."""


def sqfree_mul(a: int, b: int) -> int:
    """Product of two squarefree integers modulo squares."""
    g = math.gcd(a, b)
    return (a // g) * (b // g)


def _as_twist(M) -> FactoredTwist:
    return M if isinstance(M, FactoredTwist) else factor_twist(M)


def q2m(M) -> list[int]:
    """All classes of Q(2, M): signed squarefree products of primes of 14M."""
    ft = _as_twist(M)
    primes = ft.bad_primes
    out = []
    for sign in (1, -1):
        for bits in itertools.product((0, 1), repeat=len(primes)):
            d = sign
            for p, b in zip(primes, bits):
                if b:
                    d *= p
            out.append(d)
    return sorted(out)


def _rat_symbol(r: Fraction, p: int) -> int:
    # Legendre symbol of a p-adic unit given as a rational number
    return kronecker(r.numerator * r.denominator, p)


def is_confucian(d: int, M) -> bool:
    ft = _as_twist(M)
    for p in ft.split:
        if p % 4 != 1:
            continue
        if d % p:
            if kronecker(d, p) != 1:
                return False
        else:
            if _rat_symbol(Fraction(ft.M, d), p) != quartic_symbol(-7, p):
                return False
    return True


def _signed_divisors(n: int) -> list[int]:
    n = abs(n)
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out + [-d for d in out]


@dataclass(frozen=True)
class SelmerSet:
    kind: str
    M: int
    members: tuple[int, ...]
    provenance: str

    @property
    def dim(self) -> int:
        return len(self.members).bit_length() - 1

    @property
    def quotient_dim(self) -> int:
        return self.dim - 1

    def __contains__(self, d: int) -> bool:
        return d in self.members


def _closure(gens: set[int]) -> tuple[int, ...]:
    group = {1}
    for g in gens:
        group |= {sqfree_mul(g, x) for x in group}
    return tuple(sorted(group))


def phi_condition(d: int, ft: FactoredTwist) -> bool:
    """Conditions (1)-(5) on a signed divisor d for S^(phi)(A^(M))."""
    M = ft.M
    base = (2 if ft.delta else 1) * ft.R_minus * ft.N_plus
    if base % d:
        return False
    if M % 4 == 1 and d % 4 != 1:
        return False
    if M % 4 == 3 and d % 8 != 1:
        return False
    if M % 8 == 6 and d % 8 != 1:
        return False
    if M % 8 == 2 and not (d % 8 == 1 or (d - 5 * M) % 16 == 0):
        return False
    for p in ft.split:
        if p % 4 == 3 and kronecker(d, p) != 1:
            return False
    return is_confucian(d, ft)


def phihat_condition(d: int, ft: FactoredTwist) -> bool:
    """Conditions (1)-(4) on d for S^(phihat)(A'^(M))."""
    M = ft.M
    if d <= 0 or (2 * ft.N) % d:
        return False
    if M % 4 == 1 and d % 2 == 0:
        return False
    if M % 8 == 2 and not (d % 8 in (1, 7) or (d - 3 * M) % 16 == 0
                           or (d + 3 * M) % 16 == 0):
        return False
    for q in ft.inert:
        if q % 4 == 3 and kronecker(d, q) != 1:
            return False
    return is_confucian(d, ft)


def selmer_phi(M) -> SelmerSet:
    ft = _as_twist(M)
    base = (2 if ft.delta else 1) * ft.R_minus * ft.N_plus
    gens = set()
    for d in _signed_divisors(base):
        if phi_condition(d, ft):
            gens |= {d, sqfree_mul(-7, d)}
    return SelmerSet(PHI, ft.M, _closure(gens), "conditions")


def selmer_phihat(M) -> SelmerSet:
    ft = _as_twist(M)
    gens = set()
    for d in _signed_divisors(2 * ft.N):
        if phihat_condition(d, ft):
            gens |= {d, sqfree_mul(7, d)}
    return SelmerSet(PHIHAT, ft.M, _closure(gens), "conditions")


# ---------------------------------------------------------------------------
# local solubility oracle

def torsor_quartic(kind: str, d: int, M: int) -> tuple[int, int, int]:
    """Even quartic g(Z) = A Z^4 + B Z^2 + C with C_d (resp. C'_d) birational
    to y^2 = g(Z) over Q, via z = d Z and y = d w."""
    if kind == PHI:
        return -7 * M * M * d**3, -42 * M * d * d, d
    if kind == PHIHAT:
        return 28 * M * M * d**3, 84 * M * d * d, 64 * d
    raise ValueError(f"unknown torsor kind {kind!r}")


def _val(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_padic_square(n: int, p: int) -> bool:
    """n a nonzero square in Q_p (n a nonzero integer)."""
    v = _val(n, p)
    if v % 2:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return kronecker(u, p) == 1


def _zp_soluble(coef: tuple[int, ...], p: int, x0: int, nu: int, depth: int,
                max_depth: int) -> tuple[int, int] | None:
    """Is there x = x0 mod p^nu in Z_p with g(x) a square in Q_p (0 allowed)?

    Returns a witness (x0, nu) of the disc where a point was certified, or None.
    """
    a4, a3, a2, a1, a0 = coef
    gx = (((a4 * x0 + a3) * x0 + a2) * x0 + a1) * x0 + a0
    if gx == 0 or is_padic_square(gx, p):
        return (x0, nu)
    gd = ((4 * a4 * x0 + 3 * a3) * x0 + 2 * a2) * x0 + a1
    lam, mu = _val(gx, p), _val(gd, p)
    # Hensel: a root of g inside the disc x0 + p^nu Z_p
    if mu < nu and lam >= nu + mu:
        return (x0, nu)
    # on the disc g(x) = g(x0) (1 + O(p^(m - lam)))
    m = min(nu + mu, 2 * nu)
    if m - lam >= (3 if p == 2 else 1):
        return None
    if depth >= max_depth:
        raise OracleIndeterminate(f"depth bound {max_depth} hit at p={p}, x0={x0}, nu={nu}")
    step = p**nu
    for i in range(p):
        w = _zp_soluble(coef, p, x0 + i * step, nu + 1, depth + 1, max_depth)
        if w is not None:
            return w
    return None


def _taylor_shift(coef: tuple[int, ...], r: int, s: int) -> tuple[int, ...]:
    """Coefficients (high to low) of h(r + s t) for h given high to low."""
    out = [0]
    for c in coef:
        # out <- out * (r + s t) + c, polynomials stored low to high
        nxt = [0] * (len(out) + 1)
        for i, a in enumerate(out):
            nxt[i] += a * r
            nxt[i + 1] += a * s
        nxt[0] += c
        out = nxt
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(reversed(out))


def _eval(coef: tuple[int, ...], x: int) -> int:
    v = 0
    for c in coef:
        v = v * x + c
    return v


def _deriv(coef: tuple[int, ...]) -> tuple[int, ...]:
    n = len(coef) - 1
    return tuple(c * (n - i) for i, c in enumerate(coef[:-1])) or (0,)


def _odd_soluble(coef: tuple[int, ...], p: int, depth: int, max_depth: int, path: tuple):
    """Is there t in Z_p with h(t) a square in Q_p (0 allowed)? p odd.

    Works on the content: a factor p^2 is absorbed into y, and with content p
    only residues where h/p vanishes can carry points.
    """
    e = min(_val(c, p) for c in coef if c) if any(coef) else 10**9
    if e >= 10**9:
        return path
    coef = tuple(c // p ** (2 * (e // 2)) for c in coef)
    odd = e % 2
    if odd:
        coef = tuple(c // p for c in coef)
    d1 = _deriv(coef)
    multiple = []
    for t in range(p):
        v = _eval(coef, t) % p
        if v:
            if not odd and kronecker(v, p) == 1:
                return path + (t,)
            continue
        if _eval(d1, t) % p:
            return path + (t,)  # simple root: Hensel gives a zero of h
        multiple.append(t)
    if multiple and depth >= max_depth:
        raise OracleIndeterminate(f"depth bound {max_depth} hit at p={p}, path={path}")
    for t in multiple:
        sub = _taylor_shift(coef, t, p)
        if odd:
            sub = tuple(c * p for c in sub)
        w = _odd_soluble(sub, p, depth + 1, max_depth, path + (t,))
        if w is not None:
            return w
    return None


def qp_point(coef: tuple[int, ...], p: int, max_depth: int | None = None):
    """Witness for a Q_p-point on the smooth model of y^2 = g(x), g quartic, or None.

    The witness is ("affine"|"infinity", data): for p = 2 the disc (x0, nu) on
    which a point is certified, for odd p the p-adic digits of such a disc.
    """
    if p == 2:
        max_depth = max_depth or 24
        w = _zp_soluble(coef, p, 0, 0, 0, max_depth)
        if w is not None:
            return ("affine",) + w
        w = _zp_soluble(tuple(reversed(coef)), p, 0, 1, 0, max_depth)
        return None if w is None else ("infinity",) + w
    max_depth = max_depth or 12
    w = _odd_soluble(coef, p, 0, max_depth, ())
    if w is not None:
        return ("affine", w)
    rev = _taylor_shift(tuple(reversed(coef)), 0, p)
    w = _odd_soluble(rev, p, 0, max_depth, ())
    return None if w is None else ("infinity", w)


def real_soluble(A: int, B: int, C: int) -> bool:
    """y^2 = A u^2 + B u + C with u = Z^2 >= 0 has a real point (incl. at infinity)."""
    if C >= 0 or A > 0:
        return True
    if A == 0:
        return B > 0
    u = Fraction(-B, 2 * A)
    return u > 0 and A * u * u + B * u + C >= 0


def local_oracle(kind: str, d: int, M: int, v: int) -> bool:
    """Existence of a Q_v-point on C_d (kind 'phi') or C'_d (kind 'phihat').

    ``v`` is a prime, or 0 for the real place.
    """
    A, B, C = torsor_quartic(kind, d, M)
    if v == INFINITY:
        return real_soluble(A, B, C)
    return qp_point((A, 0, B, 0, C), v) is not None


def real_closed_form(kind: str, d: int) -> bool:
    """Real solubility as the proofs state it."""
    return True if kind == PHI else d > 0


def oracle_selmer(kind: str, M) -> SelmerSet:
    """Selmer set as the classes of q2m(M) locally soluble at all places."""
    ft = _as_twist(M)
    places = (INFINITY,) + ft.bad_primes
    members = tuple(d for d in q2m(ft)
                    if all(local_oracle(kind, d, ft.M, v) for v in places))
    return SelmerSet(kind, ft.M, members, "local_oracle")


@dataclass(frozen=True)
class Discrepancy:
    M: int
    kind: str
    d: int
    by_conditions: bool
    by_oracle: bool
    failing_places: tuple[int, ...]


def compare_descent(M) -> list[Discrepancy]:
    """All classes where the condition lists and the local oracle disagree."""
    ft = _as_twist(M)
    places = (INFINITY,) + ft.bad_primes
    out = []
    for kind, prop in ((PHI, selmer_phi(ft)), (PHIHAT, selmer_phihat(ft))):
        for d in q2m(ft):
            bad = tuple(v for v in places if not local_oracle(kind, d, ft.M, v))
            ok = not bad
            if ok != (d in prop):
                out.append(Discrepancy(ft.M, kind, d, d in prop, ok, bad))
    return out


# ---------------------------------------------------------------------------
# the full 2-Selmer group

@dataclass(frozen=True)
class Selmer2Report:
    M: int
    dim_phi_quot: int
    dim_phihat: int
    parity: str
    dim2_low: int
    dim2_high: int
    corollaries: dict

    @property
    def dim2(self) -> int | None:
        return self.dim2_low if self.dim2_low == self.dim2_high else None


def _splits_in(p: int, R: int) -> bool:
    return kronecker(R, p) == 1


def selmer2_report(M) -> Selmer2Report:
    ft = _as_twist(M)
    sp, sh = selmer_phi(ft), selmer_phihat(ft)
    lo = sp.quotient_dim
    hi = sp.quotient_dim + sh.dim - 1
    want = 0 if ft.M > 0 else 1
    # parity sharpening (root number +1 iff M > 0 for 7 not dividing M)
    while lo <= hi and lo % 2 != want:
        lo += 1
    while hi >= lo and hi % 2 != want:
        hi -= 1
    if lo > hi:
        raise RuntimeError(f"descent interval and parity are inconsistent for M={ft.M}")
    cor: dict = {}
    if ft.M % 4 == 1:
        if ft.M == ft.R_plus:
            cor["descent3"] = (lo, hi) == (0, 0)
        if ft.M == ft.R:
            cor["descent4"] = (lo, hi) == (ft.r_minus, ft.r_minus)
        if ft.M == ft.R * ft.N_plus and ft.N_plus > 1 and ft.delta == 0 and ft.N_minus == 1:
            if all(arith_splits_completely(p, ft.R) for p in ft.split):
                cor["descent6"] = lo >= 1
        l0 = [q for q in ft.inert if q % 4 == 3]
        if (ft.M < 0 and len(l0) == 1 and l0[0] > 3 and ft.N_minus == 1
                and ft.delta == 0):
            qs = [q for q in ft.inert if q % 4 == 1]
            if all(arith_splits_completely(p, 1) and all(_splits_in(p, q) for q in qs)
                   for p in ft.split):
                D = -l0[0] * ft.N_plus
                cor["descent7"] = ((lo, hi) == (1, 1)) == (not has_order_four(D))
    return Selmer2Report(ft.M, sp.quotient_dim, sh.dim,
                         "even" if want == 0 else "odd", lo, hi, cor)


def arith_splits_completely(p: int, R: int) -> bool:
    """p splits completely in Q(i, (-7)^(1/4), sqrt(R))."""
    from .arithmetica import classify_prime
    return classify_prime(p).eligible_p4 and (R == 1 or kronecker(R, p) == 1)
