"""The definite quaternion algebra B = (-1, -7 / Q) and its maximal order
O_B = Z<1, i, (i+j)/2, (1+k)/2>, plus the residue field O_B / j O_B = F_49."""
from __future__ import annotations

from dataclasses import dataclass
import math

# i^2 = -1, j^2 = -7, k = ij
_A, _B = -1, -7


def _std_mul(x, y):
    """Product in the standard basis (1, i, j, k) of (a, b) = (-1, -7)."""
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    a, b = _A, _B
    return (
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


@dataclass(frozen=True)
class OrderElement:
    """a + b i + c (i+j)/2 + d (1+k)/2."""
    a: int
    b: int
    c: int
    d: int

    # doubled standard coordinates 2*(x0, x1, x2, x3), always integral
    def doubled(self) -> tuple[int, int, int, int]:
        return (2 * self.a + self.d, 2 * self.b + self.c, self.c, self.d)

    @classmethod
    def from_doubled(cls, X) -> "OrderElement":
        X0, X1, X2, X3 = X
        if (X0 - X3) % 2 or (X1 - X2) % 2:
            raise ValueError(f"{X} / 2 is not in the maximal order")
        return cls((X0 - X3) // 2, (X1 - X2) // 2, X2, X3)

    @classmethod
    def from_std(cls, x0, x1, x2, x3) -> "OrderElement":
        """From integer-or-half-integer standard coordinates (as Fractions or ints)."""
        X = [2 * v for v in (x0, x1, x2, x3)]
        if any(int(v) != v for v in X):
            raise ValueError("not in the maximal order")
        return cls.from_doubled(tuple(int(v) for v in X))

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "OrderElement") -> "OrderElement":
        Z = _std_mul(self.doubled(), other.doubled())
        # (X/2)(Y/2) = Z/4; doubled coordinates of the product are Z/2
        return OrderElement.from_doubled(tuple(z // 2 for z in Z))

    def __add__(self, other: "OrderElement") -> "OrderElement":
        return OrderElement(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "OrderElement") -> "OrderElement":
        return OrderElement(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "OrderElement":
        return OrderElement(-self.a, -self.b, -self.c, -self.d)

    def scale(self, m: int) -> "OrderElement":
        return OrderElement(m * self.a, m * self.b, m * self.c, m * self.d)

    def conj(self) -> "OrderElement":
        X0, X1, X2, X3 = self.doubled()
        return OrderElement.from_doubled((X0, -X1, -X2, -X3))

    def nrd(self) -> int:
        X0, X1, X2, X3 = self.doubled()
        return (X0 * X0 + X1 * X1 + 7 * X2 * X2 + 7 * X3 * X3) // 4

    def trd(self) -> int:
        return 2 * self.a + self.d

    def divisible_by(self, m: int) -> bool:
        return all(v % m == 0 for v in self.coords)

    def exact_div(self, m: int) -> "OrderElement":
        if not self.divisible_by(m):
            raise ValueError(f"{self} is not divisible by {m}")
        return OrderElement(*(v // m for v in self.coords))


ONE = OrderElement(1, 0, 0, 0)
I = OrderElement(0, 1, 0, 0)
J = OrderElement(0, -1, 2, 0)    # j = 2 (i+j)/2 - i
K = OrderElement(-1, 0, 0, 2)    # k = 2 (1+k)/2 - 1
UNITS = (ONE, -ONE, I, -I)


def integer(m: int) -> OrderElement:
    return OrderElement(m, 0, 0, 0)


def elements_of_norm(n: int) -> list[OrderElement]:
    """All elements of O_B with reduced norm n (n >= 1)."""
    out = []
    N4 = 4 * n
    x2max = math.isqrt(N4 // 7)
    for X2 in range(-x2max, x2max + 1):
        r2 = N4 - 7 * X2 * X2
        x3max = math.isqrt(r2 // 7)
        for X3 in range(-x3max, x3max + 1):
            r3 = r2 - 7 * X3 * X3
            x0max = math.isqrt(r3)
            for X0 in range(-x0max, x0max + 1):
                if (X0 - X3) % 2:
                    continue
                r4 = r3 - X0 * X0
                X1 = math.isqrt(r4)
                if X1 * X1 != r4:
                    continue
                for s in ((X1, -X1) if X1 else (0,)):
                    if (s - X2) % 2:
                        continue
                    out.append(OrderElement.from_doubled((X0, s, X2, X3)))
    return sorted(out, key=lambda e: e.coords)


# ---------------------------------------------------------------------------
# F_49 = F_7[ibar], ibar^2 = -1

F49 = tuple[int, int]


def f49_mul(x: F49, y: F49) -> F49:
    return ((x[0] * y[0] - x[1] * y[1]) % 7, (x[0] * y[1] + x[1] * y[0]) % 7)


def f49_pow(x: F49, e: int) -> F49:
    r = (1, 0)
    for _ in range(e):
        r = f49_mul(r, x)
    return r


def reduce_mod_j(e: OrderElement) -> F49:
    """O_B -> O_B / j O_B = F_49: (a, b, c, d) -> (a + 4d) + (b + 4c) ibar."""
    return ((e.a + 4 * e.d) % 7, (e.b + 4 * e.c) % 7)


def _quotient_order(x: F49) -> int:
    """Order of x in F_49^x / F_7^x."""
    k, y = 1, x
    while y[1] != 0:
        y = f49_mul(y, x)
        k += 1
    return k


def f49_generator() -> F49:
    """First element (lexicographic in (x, y)) whose class generates F_49^x / F_7^x."""
    for x in range(7):
        for y in range(7):
            if (x, y) != (0, 0) and _quotient_order((x, y)) == 8:
                return (x, y)
    raise RuntimeError("no generator of F_49^x / F_7^x")


def quotient_log(x: F49, gen: F49 | None = None) -> int:
    """k in Z/8 with x = gen^k mod F_7^x."""
    if x == (0, 0):
        raise ValueError("0 has no class")
    gen = gen or f49_generator()
    y = (1, 0)
    for k in range(8):
        # x * gen^-k in F_7  <=>  x and gen^k are proportional
        if (x[0] * y[1] - x[1] * y[0]) % 7 == 0:
            return k
        y = f49_mul(y, gen)
    raise RuntimeError("discrete log failed")


def lambda_class(e: OrderElement, gen: F49 | None = None) -> int:
    """Image in Lambda = (F_49^x / F_7^x) / <ibar> = Z/4 of a 7-adic unit."""
    return quotient_log(reduce_mod_j(e), gen) % 4
