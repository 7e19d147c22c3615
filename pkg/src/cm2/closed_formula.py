"""A closed formula for the discriminant of the CM genus 2 curve.

With Q1 the q/4 Gram matrix of the trace zero part L0 and Q = d Q1^-1,

    log |D| = -6 sum_{m in Z^3} sum_{n | (d - Q(m))/4} chi(n) log n,

where the outer sum runs over m with Q(m) < d and Q(m) = d mod 4.  The
character is chi(n) = (-d/n) by default, or (n/d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .arith import QuadOrder, divisors, factorize, kronecker
from .endo import HermitianForm, trace_zero_lattice
from .lattice import det, inverse, qform, short_vectors


class NotApplicableEvenD(ValueError):
    """The formula is only stated for odd d."""


class NonIntegralQ(ArithmeticError):
    """d * Q1^-1 is not an integral matrix."""


class CharConvention(str, Enum):
    MINUS_D_OVER_N = "minus_d_over_n"
    N_OVER_D = "n_over_d"


@dataclass
class FactoredProduct:
    """A signed prime power product; zero exponents are dropped."""

    exponents: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.exponents = {p: e for p, e in sorted(self.exponents.items()) if e}

    def as_json(self) -> dict[str, int]:
        return {str(p): e for p, e in self.exponents.items()}

    def value(self) -> Fraction:
        v = Fraction(1)
        for p, e in self.exponents.items():
            v *= Fraction(p) ** e
        return v

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return " ".join(f"{p}^{e}" for p, e in self.exponents.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, FactoredProduct):
            return self.exponents == other.exponents
        if isinstance(other, dict):
            return self.exponents == {int(p): e for p, e in other.items() if e}
        return NotImplemented


def closed_q(P: HermitianForm, O: QuadOrder | None = None) -> list[list[int]]:
    O = O or P.order
    if O.d % 2 == 0:
        raise NotApplicableEvenD(f"d={O.d} is even")
    Q1 = trace_zero_lattice(P).gram
    inv = inverse(Q1)
    Q = [[O.d * x for x in row] for row in inv]
    if any(Fraction(x).denominator != 1 for row in Q for x in row):
        raise NonIntegralQ(f"d Q1^-1 is not integral for d={O.d}, P={P}")
    Q = [[int(x) for x in row] for row in Q]
    # positive definite via leading minors
    if not (Q[0][0] > 0 and det([r[:2] for r in Q[:2]]) > 0 and det(Q) > 0):
        raise ArithmeticError(f"d Q1^-1 is not positive definite for d={O.d}, P={P}")
    assert det(Q) * det(Q1) == O.d**3
    return Q


def _chi(convention: CharConvention, d: int):
    if convention == CharConvention.MINUS_D_OVER_N:
        return lambda n: kronecker(-d, n)
    return lambda n: kronecker(n, d)


def evaluate_closed_formula(
    O: QuadOrder,
    P: HermitianForm,
    convention: CharConvention | str = CharConvention.MINUS_D_OVER_N,
) -> FactoredProduct:
    convention = CharConvention(convention)
    d = O.d
    Q = closed_q(P, O)
    chi = _chi(convention, d)
    # both m and -m are returned; m = 0 is added by hand
    vecs = short_vectors(Q, d, strict=True) + [(0, 0, 0)]
    acc: dict[int, int] = {}
    for m in vecs:
        s, r = divmod(d - qform(Q, list(m)), 4)
        if r or s <= 0:
            continue
        for n in divisors(s):
            if n == 1:
                continue
            c = chi(n)
            if not c:
                continue
            for ell, v in factorize(n).items():
                acc[ell] = acc.get(ell, 0) - 6 * c * v
    return FactoredProduct(acc)
