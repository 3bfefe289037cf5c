"""Eligibility scanners for the twist families.

Every instance carries the primes it was built from, so a caller can recheck
the defining conditions independently (see ``recheck``)."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
import math

from .arithmetica import (classify_prime, is_prime, is_squarefree, kronecker, primes_up_to,
                          quartic_is_one)
from .classgroup import has_order_four

FAMILIES = ("main3", "bw", "main2", "s0", "descent_oracle", "waldspurger", "heegner")
ALIASES = {"main4": "bw", "main4/bw": "bw", "mainf": "main2", "main2/mainf": "main2",
           "ii": "main3"}


@dataclass(frozen=True)
class Instance:
    family: str
    M: int
    qs: tuple = ()
    ps: tuple = ()
    l0: int | None = None
    extra: tuple = field(default=())

    @property
    def label(self) -> str:
        parts = [f"M={self.M}"]
        if self.l0:
            parts.append(f"l0={self.l0}")
        if self.qs:
            parts.append("q=" + "*".join(map(str, self.qs)))
        if self.ps:
            parts.append("p=" + "*".join(map(str, self.ps)))
        return " ".join(parts)

    @property
    def sort_key(self):
        return (self.family, abs(self.M), self.M, self.label)


def eligible_q(bound: int) -> list[int]:
    return [q for q in primes_up_to(bound) if q > 2 and classify_prime(q).eligible_q]


def splits_H(p: int, qs=()) -> bool:
    """p = 1 mod 4 splitting completely in Q(i, (-7)^(1/4), sqrt(q) for q in qs)."""
    if p % 4 != 1 or kronecker(-7, p) != 1 or not quartic_is_one(-7, p):
        return False
    return all(kronecker(q, p) == 1 for q in qs)


def _products(primes, r_max, bound):
    for r in range(r_max + 1):
        for combo in combinations(primes, r):
            if math.prod(combo) <= bound:
                yield combo


def scan_main3(bound: int, r_max: int = 3, include_one: bool = False) -> list[Instance]:
    out = []
    for qs in _products(eligible_q(bound), r_max, bound):
        if not qs and not include_one:
            continue
        out.append(Instance("main3", math.prod(qs), tuple(qs)))
    return sorted(out, key=lambda i: i.sort_key)


def scan_bw(bound: int, r_max: int = 1, k_max: int = 1) -> list[Instance]:
    qs_all = eligible_q(bound)
    ps_all = [p for p in primes_up_to(bound) if p > 2 and splits_H(p)]
    out = []
    for qs in _products(qs_all, r_max, bound):
        rest = bound // max(1, math.prod(qs))
        ps_ok = [p for p in ps_all if p <= rest and splits_H(p, qs)]
        for k in range(1, k_max + 1):
            for ps in combinations(ps_ok, k):
                M = math.prod(qs) * math.prod(ps)
                if M <= bound:
                    out.append(Instance("bw", M, tuple(qs), tuple(ps)))
    return sorted(out, key=lambda i: i.sort_key)


def eligible_l0(bound: int) -> list[int]:
    return [l for l in primes_up_to(bound)
            if l > 3 and l % 4 == 3 and kronecker(-7, l) == -1]


def scan_main2(bound: int, r_max: int = 1, k_max: int = 1) -> list[Instance]:
    """M = -l0 R N under the hypotheses of the rank-one theorem, |M| <= bound."""
    out = []
    for l0 in eligible_l0(bound):
        qs_all = [q for q in eligible_q(bound // l0) if kronecker(-l0, q) == -1]
        for qs in _products(qs_all, r_max, bound // l0):
            R = math.prod(qs)
            rest = bound // (l0 * R)
            ps_ok = [p for p in primes_up_to(rest) if p > 2 and splits_H(p, qs)]
            for k in range(k_max + 1):
                for ps in combinations(ps_ok, k):
                    N = math.prod(ps)
                    if l0 * R * N > bound:
                        continue
                    if has_order_four(-l0 * N):
                        continue
                    out.append(Instance("main2", -l0 * R * N, tuple(qs), tuple(ps), l0))
    return sorted(out, key=lambda i: i.sort_key)


def scan_s0(bound: int) -> list[Instance]:
    return [Instance("s0", p, (), (p,)) for p in primes_up_to(bound - 1)
            if p % 4 == 1 and kronecker(p, 7) == 1]


def scan_descent(bound: int) -> list[Instance]:
    out = []
    for a in range(1, bound + 1):
        if a % 7 == 0 or not is_squarefree(a):
            continue
        for M in (a, -a):
            out.append(Instance("descent_oracle", M))
    return sorted(out, key=lambda i: i.sort_key)


def scan_waldspurger(bound: int) -> list[Instance]:
    return [Instance("waldspurger", n) for n in range(5, bound + 1, 4)
            if n % 7 and is_squarefree(n)]


def scan_heegner(bound: int) -> list[Instance]:
    """Desk-size rank-one instances: r, k <= 1 with |M| <= bound."""
    return [dataclass_replace(i, family="heegner") for i in scan_main2(bound)]


def dataclass_replace(inst: Instance, **kw) -> Instance:
    from dataclasses import replace
    return replace(inst, **kw)


_SCANNERS = {
    "main3": scan_main3, "bw": scan_bw, "main2": scan_main2, "s0": scan_s0,
    "descent_oracle": scan_descent, "waldspurger": scan_waldspurger, "heegner": scan_heegner,
}


def canonical_family(family: str) -> str:
    fam = ALIASES.get(family, family)
    if fam not in _SCANNERS:
        raise ValueError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    return fam


def scan(family: str, bound: int, **kw) -> list[Instance]:
    return _SCANNERS[canonical_family(family)](bound, **kw)


# ---------------------------------------------------------------------------
# independent recheck of eligibility

def _inert_F(q: int) -> bool:
    # q inert in Q(sqrt(-7)) iff q is a non-residue mod 7 (q odd, q != 7)
    return pow(q % 7, 3, 7) == 6


def _split_H_brute(p: int, qs=()) -> bool:
    # -7 is a fourth power mod p: some x with x^4 = -7
    if p % 4 != 1:
        return False
    if not any(pow(x, 4, p) == (-7) % p for x in range(1, p)):
        return False
    return all(pow(q % p, (p - 1) // 2, p) == 1 for q in qs)


def recheck(inst: Instance) -> bool:
    """Re-verify the eligibility of an instance with brute residue tests."""
    fam = inst.family
    if fam in ("main3",):
        return all(is_prime(q) and q % 4 == 1 and _inert_F(q) for q in inst.qs) \
            and math.prod(inst.qs) == inst.M
    if fam == "bw":
        return (all(is_prime(q) and q % 4 == 1 and _inert_F(q) for q in inst.qs)
                and all(is_prime(p) and _split_H_brute(p, inst.qs) for p in inst.ps)
                and math.prod(inst.qs) * math.prod(inst.ps) == inst.M and len(inst.ps) >= 1)
    if fam in ("main2", "heegner"):
        l0 = inst.l0
        ok = l0 is not None and l0 > 3 and l0 % 4 == 3 and is_prime(l0) and _inert_F(l0)
        ok = ok and all(q % 4 == 1 and _inert_F(q) and pow((-l0) % q, (q - 1) // 2, q) == q - 1
                        for q in inst.qs)
        ok = ok and all(_split_H_brute(p, inst.qs) for p in inst.ps)
        ok = ok and inst.M == -l0 * math.prod(inst.qs) * math.prod(inst.ps)
        return ok and not has_order_four(-l0 * math.prod(inst.ps))
    if fam == "s0":
        p = inst.M
        return is_prime(p) and p % 4 == 1 and pow(p % 7, 3, 7) == 1
    if fam == "descent_oracle":
        return inst.M % 7 != 0 and is_squarefree(abs(inst.M))
    if fam == "waldspurger":
        n = inst.M
        return n % 4 == 1 and n % 7 != 0 and is_squarefree(n)
    raise ValueError(fam)
