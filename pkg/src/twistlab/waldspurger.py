"""Test vectors on Lambda = Z/4 and the character sums y_d for K = Q(sqrt(-7n)).

The ideal classes of K are mapped to Lambda through the embedding of O_K
into the maximal order O_B, and y_d is checked against central L-values via

    y_d^2 = 2^(2 + delta) L^alg(A^(d*), 1) L^alg(A^(-7n/d*), 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import math

from .arithmetica import divisors, is_squarefree, kronecker, odd_star, is_prime
from .classgroup import QuadForm, class_group, compose, genus_character, prime_form
from .quaternion import (OrderElement, ONE, J, elements_of_norm, f49_generator,
                         lambda_class)

F0, F1, F0_MINUS_F1, F0_PLUS_F1 = "f0", "f1", "f0_minus_f1", "f0_plus_f1"
LAMBDA = (0, 1, 2, 3)


class WaldspurgerError(RuntimeError):
    pass


def lambda_order(label: int) -> int:
    return 4 // math.gcd(label % 4, 4)


# ---------------------------------------------------------------------------
# test vectors

_BASIS = {
    "f0": {0: 1, 1: 0, 2: -1, 3: 0},
    "f1": {0: 0, 1: 1, 2: 0, 3: -1},
}


@dataclass(frozen=True)
class TestVector:
    kind: str
    values: dict

    @property
    def pairing_norm(self) -> int:
        return sum(v * v for v in self.values.values())

    def __call__(self, label: int) -> int:
        return self.values[label % 4]


def test_vector(kind: str) -> TestVector:
    f0, f1 = _BASIS["f0"], _BASIS["f1"]
    if kind == F0:
        vals = dict(f0)
    elif kind == F1:
        vals = dict(f1)
    elif kind == F0_MINUS_F1:
        vals = {x: f0[x] - f1[x] for x in LAMBDA}
    elif kind == F0_PLUS_F1:
        vals = {x: f0[x] + f1[x] for x in LAMBDA}
    else:
        raise ValueError(f"unknown test vector {kind!r}")
    return TestVector(kind, vals)


def pairing(f: TestVector, g: TestVector) -> int:
    return sum(f(x) * g(x) for x in LAMBDA)


def eigen_test_vector(c: int, chi: int) -> TestVector:
    """The vector in span(f0, f1) with f(-x + c) = chi f(x), i.e. the
    chi-eigenvector of the uniformizer at 7 acting by x -> -x + c."""
    for kind in (F0, F1, F0_MINUS_F1, F0_PLUS_F1):
        f = test_vector(kind)
        if all(f(-x + c) == chi * f(x) for x in LAMBDA):
            # for even c the mixed vectors are never eigen, for odd c the pure ones never are
            return f
    raise WaldspurgerError(f"no eigenvector for c = {c}, chi = {chi}")


# ---------------------------------------------------------------------------
# embedding

def _check_label(n: int):
    if n < 1 or n % 4 != 1 or n % 7 == 0 or not is_squarefree(n):
        raise ValueError(f"need squarefree n = 1 mod 4 prime to 7, got {n}")


def embeddings(n: int, limit: int | None = None):
    """Trace-zero xi in O_B with Nrd = 7n and (1 + xi)/2 in O_B, ordered by
    sup-norm of the order coordinates and then lexicographically."""
    _check_label(n)
    # xi = x1 i + x2 j + x3 k with x1 = 7y; order coordinates
    # (a, b, c, d) = (-x3, x1 - x2, 2 x2, 2 x3)
    found = []
    ymax = math.isqrt(n // 7)
    for y in range(-ymax, ymax + 1):
        r = n - 7 * y * y
        x2max = math.isqrt(r)
        for x2 in range(-x2max, x2max + 1):
            r2 = r - x2 * x2
            x3 = math.isqrt(r2)
            if x3 * x3 != r2 or x3 % 2 == 0 or (y - x2) % 2:
                continue
            for s in (x3, -x3):
                found.append(OrderElement(-s, 7 * y - x2, 2 * x2, 2 * s))
    found.sort(key=lambda e: (max(abs(v) for v in e.coords), e.coords))
    return found[:limit] if limit else found


def _half_one_plus(xi: OrderElement) -> OrderElement:
    X = tuple(u + v for u, v in zip(ONE.doubled(), xi.doubled()))
    if any(v % 2 for v in X):
        raise WaldspurgerError(f"(1 + xi)/2 not integral for {xi}")
    return OrderElement.from_doubled(tuple(v // 2 for v in X))


def switch_class(xi: OrderElement, gen=None) -> int:
    """c in Lambda with the uniformizer at 7 acting on Lambda by x -> -x + c:
    the class of j^-1 xi (xi lies in the two-sided ideal j O_B)."""
    w = (J * xi).scale(-1)            # j^-1 = -j / 7
    w = w.exact_div(7)
    return lambda_class(w, gen)


def find_embedding(n: int) -> OrderElement:
    """First embedding of sqrt(-7n) in the fixed enumeration order."""
    emb = embeddings(n, limit=1)
    if not emb:
        raise WaldspurgerError(f"no embedding for n = {n}: the ternary form must represent 7n")
    return emb[0]


# ---------------------------------------------------------------------------
# ideal classes -> Lambda

def divisor_of_norm(p: int, m: int, xi: OrderElement, side: str = "left") -> OrderElement:
    """t with Nrd t = p and m + xi in O_B t (side "right") or t O_B ("left")."""
    target = OrderElement(m, 0, 0, 0) + xi
    for t in elements_of_norm(p):
        prod = target * t.conj() if side == "right" else t.conj() * target
        if prod.divisible_by(p):
            return t
    raise WaldspurgerError(f"no norm-{p} divisor of {m} + xi: left class number 1 violated")


@dataclass
class GrossSetup:
    n: int
    xi: OrderElement
    side: str = "left"
    sign: int = -1
    gen: tuple = field(default_factory=f49_generator)
    assignment: dict = field(default_factory=dict)
    reps: dict = field(default_factory=dict)

    @property
    def D(self) -> int:
        return -7 * self.n

    @property
    def delta(self) -> int:
        return 0 if kronecker(self.n, 7) == 1 else 1

    @property
    def c(self) -> int:
        return switch_class(self.xi, self.gen)

    def chi7_pi(self, d: int) -> int:
        return kronecker(odd_star(d), 7)

    def prime_lambda(self, form: QuadForm) -> int:
        p, b = form.a, form.b
        t = divisor_of_norm(p, -b, self.xi, self.side)
        return (self.sign * lambda_class(t, self.gen)) % 4


def _class_reps(D: int, avoid: int, count: int = 1) -> dict:
    """Per reduced class, a list of prime forms (p, b, c) lying in that class,
    with p the smallest split primes coprime to ``avoid``."""
    cg = class_group(D)
    reps = {f: [] for f in cg.elements}
    todo = len(reps) * count
    p = 2
    while todo:
        p += 1
        if p > 10**6:
            raise WaldspurgerError(f"ran out of class representatives for {D}")
        if not is_prime(p) or avoid % p == 0 or kronecker(D, p) != 1:
            continue
        f = prime_form(D, p)
        for g in (f, QuadForm(f.a, -f.b, f.c)):
            cls = g.reduced()
            if len(reps[cls]) < count and all(h.a != p for h in reps[cls]):
                reps[cls].append(g)
                todo -= 1
    return reps


def oriented_embedding(n: int) -> OrderElement:
    """First embedding whose switching class is 0 (delta = 0) or 3 (delta = 1).

    With this orientation the fixed table of test vectors agrees with the
    eigenvector rule; None of the later steps rely on it, they are
    cross-checked against eigen_test_vector."""
    want = 0 if kronecker(n, 7) == 1 else 3
    emb = embeddings(n)
    for xi in emb:
        if switch_class(xi) == want:
            return xi
    raise WaldspurgerError(f"no embedding with switching class {want} for n = {n}")


def gross_setup(n: int, side: str = "left", sign: int = -1, xi: OrderElement | None = None,
                count: int = 1) -> GrossSetup:
    _check_label(n)
    xi = xi or oriented_embedding(n)
    half = _half_one_plus(xi)
    assert half.nrd() * 4 == 1 + 7 * n and xi * xi == OrderElement(-7 * n, 0, 0, 0)
    setup = GrossSetup(n, xi, side, sign)
    D = setup.D
    setup.reps = _class_reps(D, avoid=14 * n, count=count)
    ident = class_group(D).identity
    for cls, forms in setup.reps.items():
        setup.assignment[cls] = 0 if cls == ident else setup.prime_lambda(forms[0])
    return setup


def class_to_lambda(setup: GrossSetup, form: QuadForm) -> int:
    """Lambda label of the class of the prime ideal attached to the form (p, b, c)."""
    p = form.a
    if p == 1:
        return 0
    if not is_prime(p) or p == 2 or (14 * setup.n) % p == 0:
        raise ValueError(f"representative of norm {p} not allowed")
    if form.disc != setup.D:
        raise ValueError("form of the wrong discriminant")
    return setup.prime_lambda(form)


# ---------------------------------------------------------------------------
# test-vector choice and y_d

def select_test_vector(setup: GrossSetup, d: int) -> TestVector:
    """Table rule in terms of the type of K_7 and chi_7(uniformizer)."""
    chi = setup.chi7_pi(d)
    if setup.delta == 0:
        return test_vector(F0 if chi == 1 else F1)
    return test_vector(F0_MINUS_F1 if chi == 1 else F0_PLUS_F1)


def test_vector_for(setup: GrossSetup, d: int) -> TestVector:
    """Eigenvector rule, cross-checked against the table when oriented."""
    f = eigen_test_vector(setup.c, setup.chi7_pi(d))
    want = 0 if setup.delta == 0 else 3
    if setup.c == want and setup.gen == f49_generator():
        table = select_test_vector(setup, d)
        if table.kind != f.kind:
            raise WaldspurgerError(f"table vector {table.kind} is not the eigenvector {f.kind}")
    return f


def y_d(n: int, d: int, setup: GrossSetup | None = None, f: TestVector | None = None) -> int:
    if n % d or d < 1:
        raise ValueError(f"{d} does not divide {n}")
    setup = setup or gross_setup(n)
    f = f or test_vector_for(setup, d)
    D = setup.D
    ident = class_group(D).identity
    total = 0
    for cls, lab in setup.assignment.items():
        chi = 1 if cls == ident else genus_character(d, D, setup.reps[cls][0].a)
        total += f(lab) * chi
    return total


@dataclass(frozen=True)
class WaldspurgerReport:
    n: int
    d: int
    delta: int
    y: int
    lalg_d: Fraction
    lalg_co: Fraction
    rhs: Fraction
    passed: bool
    kind: str

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "delta": self.delta, "y_d": self.y,
                "test_vector": self.kind, "L_alg_d": str(self.lalg_d),
                "L_alg_complement": str(self.lalg_co), "rhs": str(self.rhs),
                "passed": self.passed}


def _lalg_or_zero(M: int) -> Fraction:
    from .lseries import l_central, root_number
    if root_number(M) == -1:
        return Fraction(0)
    return l_central(M).lalg


def verify_waldspurger(n: int, d: int, setup: GrossSetup | None = None, tol: float = 1e-6,
                       strict: bool = True) -> WaldspurgerReport:
    setup = setup or gross_setup(n)
    f = test_vector_for(setup, d)
    y = y_d(n, d, setup, f)
    # the genus character of d cuts out K(sqrt(d*)): the L-values are those of
    # the complementary fundamental discriminants d* and -7n/d*
    ds = odd_star(d)
    l1 = _lalg_or_zero(ds)
    l2 = _lalg_or_zero(-7 * n // ds)
    rhs = 2 ** (2 + setup.delta) * l1 * l2
    ok = abs(y * y - rhs) < tol * max(1, y * y)
    rep = WaldspurgerReport(n, d, setup.delta, y, l1, l2, rhs, ok, f.kind)
    if strict and not ok:
        raise WaldspurgerError(f"Waldspurger identity fails: {rep.as_dict()} "
                               f"xi={setup.xi.coords} c={setup.c} assignment="
                               f"{ {str(k): v for k, v in setup.assignment.items()} }")
    return rep


def check_homomorphism(setup: GrossSetup) -> bool:
    """lambda(c1 c2) = lambda(c1) + lambda(c2) over all pairs of classes."""
    lab = setup.assignment
    for c1, c2 in itertools.product(lab, repeat=2):
        if lab[compose(c1, c2)] != (lab[c1] + lab[c2]) % 4:
            return False
    return True


def y_sum(n: int, f: TestVector, setup: GrossSetup | None = None) -> int:
    """Sum of y_d over all positive d | n, with one test vector f for every d."""
    setup = setup or gross_setup(n)
    return sum(y_d(n, d, setup, f) for d in divisors(n))


def lambda_is_well_defined(setup: GrossSetup, count: int = 3) -> bool:
    """Every class gets the same label from several prime representatives."""
    alt = _class_reps(setup.D, avoid=14 * setup.n, count=count)
    ident = class_group(setup.D).identity
    for cls, forms in alt.items():
        labels = {setup.prime_lambda(g) for g in forms}
        if cls == ident:
            labels.add(0)
        if labels != {setup.assignment[cls]}:
            return False
    return True


def homomorphism_defect(setup: GrossSetup) -> dict:
    """Histogram of lambda(c1 c2) - lambda(c1) - lambda(c2) mod 4 over all pairs."""
    lab = setup.assignment
    out = {0: 0, 1: 0, 2: 0, 3: 0}
    for c1, c2 in itertools.product(lab, repeat=2):
        out[(lab[compose(c1, c2)] - lab[c1] - lab[c2]) % 4] += 1
    return out


def check_homomorphism_mod2(setup: GrossSetup) -> bool:
    d = homomorphism_defect(setup)
    return d[1] == 0 and d[3] == 0
