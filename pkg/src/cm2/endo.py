"""Symmetric endomorphisms of (E^2, P), the map tau, and the Gross lattice.

An endomorphism of E^2 is a 2x2 matrix over O.  It is symmetric for the
Rosati involution of P iff conj(M)^T P = P M.  The Gross lattice is
L = tau(Ends) with tau(M) = 2M - tr(M), carrying q/4(beta) = -det(beta).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import isqrt

from .arith import QuadElem, QuadOrder
from .lattice import det, hnf, integer_kernel, short_vectors


class Mat2:
    """2x2 matrix with entries in a (possibly noncommutative) ring."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __add__(self, o):
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(
                self.a * o.a + self.b * o.c,
                self.a * o.b + self.b * o.d,
                self.c * o.a + self.d * o.c,
                self.c * o.b + self.d * o.d,
            )
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    def __rmul__(self, k):
        return Mat2(k * self.a, k * self.b, k * self.c, k * self.d)

    def trace(self):
        return self.a + self.d

    def det(self):
        # only meaningful over a commutative ring
        return self.a * self.d - self.b * self.c

    def conj_transpose(self):
        return Mat2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def map(self, f):
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __eq__(self, o):
        return isinstance(o, Mat2) and self.entries() == o.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


@dataclass(frozen=True)
class HermitianForm:
    """P = [[a, b], [conj(b), c]] with b = b1 + b2*w and ac - N(b) = 1."""

    order: QuadOrder
    a: int
    c: int
    b1: int
    b2: int

    def __post_init__(self):
        if self.a * self.c - self.order.norm(self.b1, self.b2) != 1:
            raise ValueError(f"{self} does not have determinant 1")

    @property
    def b(self) -> QuadElem:
        return self.order.elem(self.b1, self.b2)

    @property
    def d(self) -> int:
        return self.order.d

    def matrix(self) -> Mat2:
        O = self.order
        return Mat2(O.elem(self.a), self.b, self.b.conj(), O.elem(self.c))

    def inverse(self) -> Mat2:
        O = self.order
        return Mat2(O.elem(self.c), -self.b, -self.b.conj(), O.elem(self.a))

    def conjugate(self) -> "HermitianForm":
        bb = self.b.conj()
        return HermitianForm(self.order, self.a, self.c, int(bb.x), int(bb.y))

    def key(self):
        return (self.a, self.c, self.b2, self.b1)

    def as_tuple(self):
        return (self.a, self.c, self.b1, self.b2)

    def __str__(self):
        from .arith import format_quad

        return f"[{self.a},{self.c},{format_quad(self.b2, self.b1)}]"

    __repr__ = __str__


def polarization(d: int, a: int, c: int, b1: int, b2: int) -> HermitianForm:
    from .arith import make_order

    return HermitianForm(make_order(d), a, c, b1, b2)


def is_symmetric(M: Mat2, P: HermitianForm) -> bool:
    Pm = P.matrix()
    return M.conj_transpose() * Pm == Pm * M


def standard_basis(O: QuadOrder) -> list[Mat2]:
    z, one, w = O.zero, O.one, O.omega
    return [
        Mat2(one, z, z, z),
        Mat2(z, z, z, one),
        Mat2(z, one, one, z),
        Mat2(z, w, w.conj(), z),
    ]


def symmetric_basis(P: HermitianForm) -> list[Mat2]:
    Pinv = P.inverse()
    return [Pinv * e for e in standard_basis(P.order)]


def tau(M: Mat2) -> Mat2:
    tr = M.trace()
    return 2 * M - Mat2(tr, tr * 0, tr * 0, tr)


def q4(beta: Mat2) -> Fraction:
    """q/4 on trace zero matrices over K."""
    v = -beta.det()
    assert v.y == 0
    return v.x


def b4(x: Mat2, y: Mat2) -> Fraction:
    return (q4(x + y) - q4(x) - q4(y)) / 2


def flatten(M: Mat2) -> list[Fraction]:
    out = []
    for e in M.entries():
        out.extend((e.x, e.y))
    return out


def unflatten(O: QuadOrder, v) -> Mat2:
    es = [O.elem(v[2 * i], v[2 * i + 1]) for i in range(4)]
    return Mat2(*es)


def gram_matrix(basis, form=b4):
    G = [[form(u, v) for v in basis] for u in basis]
    for row in G:
        for x in row:
            if Fraction(x).denominator != 1:
                raise ArithmeticError(f"non-integral Gram entry {x}")
    return [[int(x) for x in row] for row in G]


@dataclass
class GrossLattice:
    P: HermitianForm
    basis: list
    gram: list

    @property
    def det(self) -> int:
        return det(self.gram)


def _pmul(O, u, v):
    return (u[0] * v[0] - O.n * u[1] * v[1], u[0] * v[1] + u[1] * v[0] + O.t * u[1] * v[1])


def _int_gram(O, rows):
    """q/4 Gram of trace zero matrices given as flattened integer rows."""
    def pair(r, s):
        # -(1/2)(a d' + d a' - b c' - c b') over K; the result is rational
        terms = (
            _pmul(O, r[0:2], s[6:8]),
            _pmul(O, r[6:8], s[0:2]),
        )
        neg = (_pmul(O, r[2:4], s[4:6]), _pmul(O, r[4:6], s[2:4]))
        x = sum(t[0] for t in neg) - sum(t[0] for t in terms)
        y = sum(t[1] for t in neg) - sum(t[1] for t in terms)
        if y != 0 or x % 2:
            raise ArithmeticError("non-integral Gram entry")
        return x // 2
    return [[pair(r, s) for s in rows] for r in rows]


def _tau_rows(P: HermitianForm) -> list[list[int]]:
    """flatten(tau(M)) for M in symmetric_basis(P), on integer pairs."""
    O = P.order
    zero, one = (0, 0), (1, 0)
    w = (0, 1)
    wbar = (O.t, -1)
    b = (P.b1, P.b2)
    bbar = (P.b1 + O.t * P.b2, -P.b2)
    pinv = ((P.c, 0), (-b[0], -b[1]), (-bbar[0], -bbar[1]), (P.a, 0))
    rows = []
    for e in ((one, zero, zero, zero), (zero, zero, zero, one), (zero, one, one, zero), (zero, w, wbar, zero)):
        m = (
            _padd(_pmul(O, pinv[0], e[0]), _pmul(O, pinv[1], e[2])),
            _padd(_pmul(O, pinv[0], e[1]), _pmul(O, pinv[1], e[3])),
            _padd(_pmul(O, pinv[2], e[0]), _pmul(O, pinv[3], e[2])),
            _padd(_pmul(O, pinv[2], e[1]), _pmul(O, pinv[3], e[3])),
        )
        tr = _padd(m[0], m[3])
        t = (2 * m[0][0] - tr[0], 2 * m[0][1] - tr[1], 2 * m[1][0], 2 * m[1][1],
             2 * m[2][0], 2 * m[2][1], 2 * m[3][0] - tr[0], 2 * m[3][1] - tr[1])
        rows.append(list(t))
    return rows


def _padd(u, v):
    return (u[0] + v[0], u[1] + v[1])


@lru_cache(maxsize=4096)
def gross_lattice(P: HermitianForm) -> GrossLattice:
    O = P.order
    H = hnf(_tau_rows(P))
    if len(H) != 3:
        raise ArithmeticError("tau(Ends) should have rank 3")
    basis = [unflatten(O, row) for row in H]
    return GrossLattice(P, basis, _int_gram(O, H))


def lattice_from_basis(P: HermitianForm, basis) -> GrossLattice:
    return GrossLattice(P, list(basis), gram_matrix(basis))


def trace_zero_lattice(P: HermitianForm) -> GrossLattice:
    """L0 = trace zero part of Ends, with its q/4 Gram matrix (may be half-integral)."""
    O = P.order
    ends = symmetric_basis(P)
    traces = []
    for M in ends:
        t = M.trace()
        assert t.y == 0 and t.x.denominator == 1
        traces.append(int(t.x))
    kernel = integer_kernel([traces])
    basis = []
    for coeffs in kernel:
        M = Mat2(O.zero, O.zero, O.zero, O.zero)
        for c, E in zip(coeffs, ends):
            M = M + E * c
        basis.append(M)
    rows = hnf([[int(x) for x in flatten(M)] for M in basis])
    basis = [unflatten(O, r) for r in rows]
    gram = [[b4(u, v) for v in basis] for u in basis]
    return GrossLattice(P, basis, gram)


def index_of_gross_lattice(P: HermitianForm) -> int:
    """[L0 : L], from the determinant ratio (both Grams are q/4)."""
    L = gross_lattice(P)
    L0 = trace_zero_lattice(P)
    ratio = Fraction(L.det) / Fraction(det(L0.gram))
    r = isqrt(int(ratio)) if ratio.denominator == 1 else 0
    if r * r != ratio:
        raise ArithmeticError("index is not an integer")
    return r


def norm_one_vectors(G) -> list:
    return [v for v in short_vectors(G, 1)]
