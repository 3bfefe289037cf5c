"""Integer arithmetic for the twist family of X0(49).

Residue symbols, quartic residue tests, primality and factorization, and the
classification of primes relative to F = Q(sqrt(-7)).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

# Deterministic Miller-Rabin: the first 13 primes are a valid base set for
# every n < 3317044064679887385961981.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_LIMIT = 3317044064679887385961981


class TwistLabelError(ValueError):
    """Invalid twist label. ``code`` is one of ``zero``, ``not_squarefree``,
    ``divisible_by_7``."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for any integers a, n (n != 0 allowed only)."""
    if n == 0:
        raise ValueError("kronecker symbol needs n != 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    return kronecker(a, p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n >= MR_LIMIT:
        raise ValueError("primality input beyond the supported range")
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)  # seeded: factorization is deterministic
    while True:
        c = rng.randrange(1, n)
        f = lambda x: (x * x + c) % n
        x = y = rng.randrange(2, n)
        g = 1
        while g == 1:
            x = f(x)
            y = f(f(y))
            g = math.gcd(abs(x - y), n)
        if g != n:
            return g


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as sorted (p, e) pairs."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p < 10000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        if m > 2**64:
            raise ValueError("factorization beyond desk scale")
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return tuple(sorted(out.items()))


def prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(n))


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel: n divided by its largest square factor."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    s = -1 if n < 0 else 1
    for p, e in factorize(n):
        if e % 2:
            s *= p
    return s


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def quartic_is_one(a: int, p: int) -> bool:
    """Decide whether (a/p)_4 = 1, for p = 1 mod 4 and a a nonzero QR mod p."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"quartic symbol needs a prime p = 1 mod 4, got {p}")
    if a % p == 0:
        raise ValueError("quartic symbol needs gcd(a, p) = 1")
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    return pow(a % p, (p - 1) // 4, p) == 1


def quartic_symbol(a: int, p: int) -> int:
    """(a/p)_4 as +1/-1 under the preconditions of :func:`quartic_is_one`."""
    return 1 if quartic_is_one(a, p) else -1


@dataclass(frozen=True)
class PrimeClassification:
    p: int
    splitting: str
    mod4: int
    eligible_q: bool
    eligible_p4: bool


@lru_cache(maxsize=None)
def classify_prime(p: int) -> PrimeClassification:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 7:
        splitting = "ramified"
    else:
        splitting = "split" if kronecker(-7, p) == 1 else "inert"
    mod4 = p % 4
    eligible_q = mod4 == 1 and splitting == "inert"
    eligible_p4 = mod4 == 1 and splitting == "split" and quartic_is_one(-7, p)
    return PrimeClassification(p, splitting, mod4, eligible_q, eligible_p4)


def star(p: int) -> int:
    """Prime discriminant attached to an odd prime: (-1)^((p-1)/2) p."""
    return p if p % 4 == 1 else -p


def odd_star(d: int) -> int:
    """d* for a positive odd squarefree d: the product of p* over p | d."""
    s = 1
    for p in prime_factors(d):
        s *= star(p)
    return s


@dataclass(frozen=True)
class FactoredTwist:
    """A squarefree twist label M = epsilon * 2^delta * R * N."""
    M: int
    epsilon: int
    delta: int
    R: int
    N: int
    R_plus: int
    R_minus: int
    N_plus: int
    N_minus: int
    inert: tuple[int, ...]
    split: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.inert)

    @property
    def k(self) -> int:
        return len(self.split)

    @property
    def r_minus(self) -> int:
        return sum(1 for q in self.inert if q % 4 == 3)

    @property
    def k_minus(self) -> int:
        return sum(1 for p in self.split if p % 4 == 3)

    @property
    def odd_primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.inert + self.split))

    @property
    def bad_primes(self) -> tuple[int, ...]:
        """Primes dividing 14M, i.e. the set T_M."""
        return tuple(sorted({2, 7, *self.odd_primes}))


def factor_twist(M: int) -> FactoredTwist:
    if M == 0:
        raise TwistLabelError("zero", "twist label must be nonzero")
    if M % 7 == 0:
        raise TwistLabelError("divisible_by_7", f"twist label {M} is divisible by 7")
    if not is_squarefree(M):
        raise TwistLabelError("not_squarefree", f"twist label {M} is not squarefree")
    eps = 1 if M > 0 else -1
    delta = 1 if M % 2 == 0 else 0
    inert, split = [], []
    for p in prime_factors(M):
        if p == 2:
            continue
        (split if kronecker(-7, p) == 1 else inert).append(p)
    prod = math.prod
    return FactoredTwist(
        M=M, epsilon=eps, delta=delta,
        R=prod(inert), N=prod(split),
        R_plus=prod(q for q in inert if q % 4 == 1),
        R_minus=prod(q for q in inert if q % 4 == 3),
        N_plus=prod(p for p in split if p % 4 == 1),
        N_minus=prod(p for p in split if p % 4 == 3),
        inert=tuple(inert), split=tuple(split),
    )


def fundamental_discriminant(M: int) -> int:
    """Discriminant D_M of Q(sqrt(M)) for squarefree M != 1."""
    return M if M % 4 == 1 else 4 * M


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)
