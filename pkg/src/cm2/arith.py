"""Imaginary quadratic orders, their elements, and small integer helpers.

Everything here is exact: integers and :class:`fractions.Fraction` only.
The order is O = Z[w] where w = (1 + sqrt(-d))/2 if d = 3 mod 4 and
w = sqrt(-d)/2 if d = 0 mod 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class NonFundamentalDiscriminant(ValueError):
    pass


class Splitting(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


# ---------------------------------------------------------------------------
# integers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [q * p**k for q in divs for k in range(e + 1)]
    return sorted(divs)


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = Fraction(n)
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol (a/m)."""
    if m == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if m < 0:
        m = -m
        if a < 0:
            result = -result
    while m % 2 == 0:
        m //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # now m odd and positive: Jacobi symbol
    a %= m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def is_fundamental(disc: int) -> bool:
    """True if disc (negative or positive, != 0, 1) is a fundamental discriminant."""
    if disc % 4 == 1:
        return is_squarefree(abs(disc))
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    """Number of reduced primitive positive forms (a, b, c) with b^2 - 4ac = -d."""
    return len(reduced_forms(d))


@lru_cache(maxsize=None)
def reduced_forms(d: int) -> tuple[tuple[int, int, int], ...]:
    forms = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return tuple(forms)


# ---------------------------------------------------------------------------
# the order and its elements


@dataclass(frozen=True)
class QuadOrder:
    d: int
    t: int
    n: int

    @property
    def omega_trace(self) -> int:
        return self.t

    @property
    def omega_norm(self) -> int:
        return self.n

    @property
    def class_number(self) -> int:
        return class_number(self.d)

    def elem(self, x, y=0) -> "QuadElem":
        return QuadElem(Fraction(x), Fraction(y), self)

    @property
    def omega(self) -> "QuadElem":
        return self.elem(0, 1)

    @property
    def one(self) -> "QuadElem":
        return self.elem(1, 0)

    @property
    def zero(self) -> "QuadElem":
        return self.elem(0, 0)

    def norm(self, x, y):
        return x * x + self.t * x * y + self.n * y * y

    def splitting(self, p: int) -> Splitting:
        return splitting_type(self, p)

    def __repr__(self):
        return f"QuadOrder(d={self.d})"


@lru_cache(maxsize=None)
def make_order(d: int) -> QuadOrder:
    if d <= 3 or not is_fundamental(-d):
        raise NonFundamentalDiscriminant(f"-{d} is not a fundamental discriminant with d > 3")
    if d % 4 == 3:
        return QuadOrder(d, 1, (1 + d) // 4)
    return QuadOrder(d, 0, d // 4)


def splitting_type(O: QuadOrder, p: int) -> Splitting:
    if O.d % p == 0:
        return Splitting.RAMIFIED
    if kronecker(-O.d, p) == -1:
        return Splitting.INERT
    return Splitting.SPLIT


@dataclass(frozen=True)
class QuadElem:
    """x + y*w in O tensor Q."""

    x: Fraction
    y: Fraction
    order: QuadOrder

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            return other
        return QuadElem(Fraction(other), Fraction(0), self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.x + o.x, self.y + o.y, self.order)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.x, -self.y, self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        t, n = self.order.t, self.order.n
        # w^2 = t*w - n
        x = self.x * o.x - n * self.y * o.y
        y = self.x * o.y + self.y * o.x + t * self.y * o.y
        return QuadElem(x, y, self.order)

    __rmul__ = __mul__

    def conj(self):
        return QuadElem(self.x + self.order.t * self.y, -self.y, self.order)

    def norm(self) -> Fraction:
        return self.order.norm(self.x, self.y)

    def trace(self) -> Fraction:
        return 2 * self.x + self.order.t * self.y

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_rational(self) -> bool:
        return self.y == 0

    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.x == other.x and self.y == other.y and self.order == other.order
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.order.d))

    def __str__(self):
        return format_quad(int(self.y), int(self.x)) if self.is_integral() else f"{self.x}+{self.y}w"

    __repr__ = __str__


def format_quad(b2: int, b1: int, w: str = "w") -> str:
    """Render b1 + b2*w the way the tables do: 2w-1, w+1, w, 3."""
    if b2 == 0:
        return str(b1)
    head = w if b2 == 1 else "-" + w if b2 == -1 else f"{b2}{w}"
    if b1 == 0:
        return head
    return f"{head}{b1:+d}"


def isqrt_floor(q) -> int:
    """floor(sqrt(q)) for a non-negative rational q."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative")
    r = isqrt(q.numerator // q.denominator)
    while (r + 1) * (r + 1) <= q:
        r += 1
    while r * r > q:
        r -= 1
    return r
