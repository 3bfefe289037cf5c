"""Class groups of imaginary quadratic orders via reduced binary quadratic forms.

Also 2-, 4- and 8-rank data: genus theory, the Redei matrix, and the torsor
criterion for the 8-rank of Q(sqrt(-7p)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arithmetica import (
    factorize, is_prime, kronecker, odd_star, prime_factors, quartic_is_one, star,
)


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduced(self) -> "QuadForm":
        return reduce_form(self.a, self.b, self.c)

    def inverse(self) -> "QuadForm":
        return reduce_form(self.a, -self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def reduce_form(a: int, b: int, c: int) -> QuadForm:
    """Reduce a positive definite form."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError("reduction needs a positive definite form")
    while True:
        # normalize: -a < b <= a
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return QuadForm(a, b, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (u, v, g) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        return -u0, -v0, -a
    return u0, v0, a


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Composition of two primitive forms of the same discriminant."""
    D = f.disc
    if g.disc != D:
        raise ValueError("composition needs equal discriminants")
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        u, v, d1 = _xgcd(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(a3, b3, c3)


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def is_fundamental(D: int) -> bool:
    if not is_discriminant(D):
        return False
    if D % 4 == 1:
        return all(e == 1 for _, e in factorize(D))
    m = D // 4
    if m % 4 not in (2, 3):
        return False
    return all(e == 1 for _, e in factorize(m))


def reduced_forms(D: int, primitive: bool = True) -> list[QuadForm]:
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive and math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    return out


def principal_form(D: int) -> QuadForm:
    return QuadForm(1, D % 2, (D % 2 - D) // 4)


def form_power(f: QuadForm, n: int) -> QuadForm:
    result = principal_form(f.disc)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def form_order(f: QuadForm) -> int:
    e = principal_form(f.disc)
    g, k = f, 1
    while g != e:
        g = compose(g, f)
        k += 1
    return k


def _invariant_factors(orders: list[int]) -> list[int]:
    """Invariant factors of a finite abelian group from its element orders.

    For every prime l and k >= 1, #G[l^k] = #{x : ord(x) | l^k} = prod l^min(k, e_i),
    which determines the l-primary partition.
    """
    h = len(orders)
    factors: dict[int, list[int]] = {}
    for l, e in factorize(h) if h > 1 else ():
        counts = [sum(1 for o in orders if (l**k) % o == 0) for k in range(e + 1)]
        # log_l of counts; number of cyclic factors of exponent >= k is
        # log_l(#G[l^k]) - log_l(#G[l^(k-1)])
        logs = [round(math.log(c, l)) for c in counts]
        ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)]
        exps = []
        for k in range(1, e + 1):
            nxt = ge[k] if k < e else 0
            exps += [k] * (ge[k - 1] - nxt)
        factors[l] = sorted(exps, reverse=True)
    width = max((len(v) for v in factors.values()), default=0)
    inv = []
    for i in range(width):
        m = 1
        for l, exps in factors.items():
            if i < len(exps):
                m *= l ** exps[i]
        inv.append(m)
    return sorted(inv) if inv else [1]


@dataclass(frozen=True)
class ClassGroupData:
    disc: int
    h: int
    elements: tuple[QuadForm, ...]
    orders: tuple[int, ...]
    cycle_structure: tuple[int, ...]
    two_sylow: tuple[int, ...]
    h2: int
    h4: int
    h8: int

    @property
    def identity(self) -> QuadForm:
        return principal_form(self.disc)


@lru_cache(maxsize=256)
def class_group(D: int) -> ClassGroupData:
    """Form class group of discriminant D (primitive forms)."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant")
    forms = reduced_forms(D)
    orders = [form_order(f) for f in forms]
    inv = _invariant_factors(orders)
    two = []
    for m in inv:
        v = 0
        while m % 2 == 0:
            m //= 2
            v += 1
        if v:
            two.append(2**v)
    two = sorted(two)
    return ClassGroupData(
        disc=D, h=len(forms), elements=tuple(forms), orders=tuple(orders),
        cycle_structure=tuple(inv), two_sylow=tuple(two),
        h2=len(two), h4=sum(1 for t in two if t >= 4),
        h8=sum(1 for t in two if t >= 8),
    )


def has_order_four(D: int) -> bool:
    return any(o % 4 == 0 for o in class_group(D).orders)


def prime_discriminants(D: int) -> list[int]:
    """Factor a fundamental discriminant into prime discriminants."""
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    odd = [star(p) for p in prime_factors(D) if p != 2]
    rest = D
    for s in odd:
        rest //= s
    out = list(odd)
    if rest != 1:
        out.insert(0, rest)  # one of -4, 8, -8
    return out


@dataclass(frozen=True)
class RedeiMatrix:
    primes: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]


def _f2_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                m[i] = [x ^ y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def redei_ranks(D: int) -> tuple[int, int, RedeiMatrix]:
    """(h2, h4, R) from genus theory and the Redei matrix."""
    ps = prime_discriminants(D)
    t = len(ps)
    # the prime under each prime discriminant
    under = [2 if s % 2 == 0 else abs(s) for s in ps]
    R = [[0] * t for _ in range(t)]
    # row i is the prime under d_i, column j the character of d_j
    for i in range(t):
        for j in range(t):
            if i != j:
                R[i][j] = 0 if kronecker(ps[j], under[i]) == 1 else 1
        R[i][i] = sum(R[i][j] for j in range(t) if j != i) % 2
    rank = _f2_rank(R) if t else 0
    mat = RedeiMatrix(tuple(ps), tuple(tuple(r) for r in R))
    return t - 1, t - 1 - rank, mat


@dataclass(frozen=True)
class EightRankCertificate:
    p: int
    value: int
    witness: tuple = field(default=())
    route: str = "quartic"


def _h8_search(p: int, scale: int = 4) -> tuple[int, tuple]:
    """Search primitive z^2 = p x^2 + 7 y^2 with z odd and coprime to 7p.

    Returns (1, (x, y, z)) for a triple with (z/7) = 1, else (0, first triple
    seen or ()).
    """
    bound = scale * math.isqrt(p) + 1
    seen: tuple = ()
    for _ in range(2):
        xs = np.arange(1, bound + 1, dtype=np.int64)
        ys = np.arange(1, bound + 1, dtype=np.int64)
        val = p * xs[:, None] ** 2 + 7 * ys[None, :] ** 2
        z = np.rint(np.sqrt(val.astype(np.float64))).astype(np.int64)
        hit = np.argwhere(z * z == val)
        for ix, iy in hit:
            x, y, zz = int(xs[ix]), int(ys[iy]), int(z[ix, iy])
            if math.gcd(math.gcd(x, y), zz) != 1 or zz % 2 == 0:
                continue
            if zz % 7 == 0 or zz % p == 0:
                continue
            if kronecker(zz, 7) == 1:
                return 1, (x, y, zz)
            if not seen:
                seen = (x, y, zz)
        bound *= 4
    return 0, seen


def h8_for_7p(p: int, route: str = "both") -> EightRankCertificate:
    """8-rank of the class group of Q(sqrt(-7p)) for p = 1 mod 4, (p/7) = 1."""
    if not is_prime(p) or p % 4 != 1 or kronecker(p, 7) != 1:
        raise ValueError(f"h8_for_7p needs a prime p = 1 mod 4 with (p/7) = 1, got {p}")
    if route == "search":
        v, w = _h8_search(p)
        return EightRankCertificate(p, v, w, "search")
    crit = 1 if quartic_is_one(-7, p) else 0
    if route == "quartic":
        return EightRankCertificate(p, crit, (pow(-7 % p, (p - 1) // 4, p),), "quartic")
    v, w = _h8_search(p)
    if v != crit:
        raise RuntimeError(f"h8 criterion and torsor search disagree at p = {p}")
    return EightRankCertificate(p, crit, w, "both")


def prime_form(D: int, p: int) -> QuadForm | None:
    """An unreduced form (p, b, c) of discriminant D with 0 <= b < 2p, or None
    when p is inert. For ramified p the form is the (unique) ambiguous one."""
    if kronecker(D, p) == -1:
        return None
    if p == 2 or D % p == 0:
        for b in range(2 * p):
            if (b * b - D) % (4 * p) == 0:
                return QuadForm(p, b, (b * b - D) // (4 * p))
        return None
    r = _sqrt_mod_p(D % p, p)
    if (r - D) % 2:
        r = p - r
    return QuadForm(p, r, (r * r - D) // (4 * p))


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks square root of a QR a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


sqrt_mod_p = _sqrt_mod_p


def class_prime_representatives(D: int, count: int = 1, avoid: int = 1,
                                limit: int = 10**6) -> dict[QuadForm, list[int]]:
    """For each class of discriminant D, the smallest ``count`` odd split primes
    coprime to ``avoid`` whose prime forms lie in that class."""
    cg = class_group(D)
    reps: dict[QuadForm, list[int]] = {f: [] for f in cg.elements}
    p = 2
    todo = len(reps) * count
    while todo and p < limit:
        p += 1
        if not is_prime(p) or D % p == 0 or avoid % p == 0 or kronecker(D, p) != 1:
            continue
        f = prime_form(D, p)
        for g in (f.reduced(), f.inverse()):
            if len(reps[g]) < count and p not in reps[g]:
                reps[g].append(p)
                todo -= 1
    if todo:
        raise RuntimeError(f"could not find prime representatives for every class of {D}")
    return reps


def genus_character(d: int, D: int, q: int) -> int:
    """Value of the genus character chi^(d) of disc D on a class of prime norm q.

    d is a positive odd divisor of |D| (squarefree); the character is the one
    cut out by K(sqrt(d*)).
    """
    if d == 1:
        return 1
    ds = odd_star(d)
    if D % ds:
        raise ValueError(f"{d}* does not divide the discriminant {D}")
    if q == 1:
        return 1
    if math.gcd(d, q) == 1:
        return kronecker(ds, q)
    co = D // ds
    if math.gcd(co, q) != 1:
        raise ValueError("class representative norm divides both genus factors")
    return kronecker(co, q)
