"""Definite quaternion algebras B_{p,inf}, maximal orders, units and embeddings.

Elements are 4-tuples of rationals on the basis (1, i, j, k) with i^2 = a,
j^2 = b, k = ij.  Lattices (orders and ideals) are stored as rational row
bases in these coordinates, kept in Hermite normal form so that equal
lattices have equal bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .arith import QuadOrder, Splitting, is_prime, kronecker, splitting_type
from .lattice import (
    as_int_matrix,
    common_denominator,
    complete_basis,
    coords_in_basis,
    det,
    hnf,
    integer_kernel,
    inverse,
    is_isometric,
    lattice_basis,
    qform,
    short_vectors,
    transpose,
)


class MassNotReached(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# algebra and elements


@dataclass(frozen=True)
class QuatAlgebra:
    p: int
    i_sq: int
    j_sq: int

    def elem(self, *coords) -> "QuatElem":
        if len(coords) == 1:
            coords = tuple(coords[0])
        return QuatElem(self, tuple(Fraction(c) for c in coords))

    @property
    def one(self) -> "QuatElem":
        return self.elem(1, 0, 0, 0)

    def mul(self, x, y):
        a, b = self.i_sq, self.j_sq
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            a1 * a2 + a * b1 * b2 + b * c1 * c2 - a * b * d1 * d2,
            a1 * b2 + b1 * a2 - b * c1 * d2 + b * d1 * c2,
            a1 * c2 + c1 * a2 + a * b1 * d2 - a * d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        )

    def norm_form(self):
        """Diagonal of nrd on (1, i, j, k)."""
        a, b = self.i_sq, self.j_sq
        return (1, -a, -b, a * b)

    def __repr__(self):
        return f"B({self.p}; {self.i_sq},{self.j_sq})"


class QuatElem:
    __slots__ = ("alg", "c")

    def __init__(self, alg: QuatAlgebra, coords):
        self.alg = alg
        self.c = tuple(coords)

    def _coerce(self, o):
        if isinstance(o, QuatElem):
            return o
        return QuatElem(self.alg, (Fraction(o), Fraction(0), Fraction(0), Fraction(0)))

    def __add__(self, o):
        o = self._coerce(o)
        return QuatElem(self.alg, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElem(self.alg, tuple(-x for x in self.c))

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, QuatElem):
            return QuatElem(self.alg, self.alg.mul(self.c, o.c))
        return QuatElem(self.alg, tuple(x * o for x in self.c))

    def __rmul__(self, k):
        return QuatElem(self.alg, tuple(k * x for x in self.c))

    def conj(self):
        a, b, c, d = self.c
        return QuatElem(self.alg, (a, -b, -c, -d))

    def trd(self) -> Fraction:
        return 2 * self.c[0]

    def nrd(self) -> Fraction:
        return sum(n * x * x for n, x in zip(self.alg.norm_form(), self.c))

    def inverse(self):
        n = self.nrd()
        return self.conj() * (1 / n)

    def __eq__(self, o):
        if isinstance(o, QuatElem):
            return self.c == o.c
        if isinstance(o, (int, Fraction)):
            return self.c == (o, 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        names = ("", "i", "j", "k")
        parts = [f"{x}{n}" for x, n in zip(self.c, names) if x]
        return " + ".join(parts) if parts else "0"


def _hilbert_symbol(a: int, b: int, p: int) -> int:
    """(a, b)_p for a prime p (p = 2 included) and nonzero integers."""
    def split(x):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v, x

    va, ua = split(a)
    vb, ub = split(b)
    if p != 2:
        s = (-1) ** ((va * vb) * ((p - 1) // 2) % 2)
        return s * kronecker(ua, p) ** vb * kronecker(ub, p) ** va
    eps = lambda u: ((u - 1) // 2) % 2
    omg = lambda u: ((u * u - 1) // 8) % 2
    e = eps(ua) * eps(ub) + va * omg(ub) + vb * omg(ua)
    return -1 if e % 2 else 1


def ramified_primes(B: QuatAlgebra) -> list[int]:
    from .arith import factorize

    primes = set(factorize(2 * B.i_sq * B.j_sq * B.p))
    return sorted(q for q in primes if _hilbert_symbol(B.i_sq, B.j_sq, q) == -1)


def _aux_prime(p: int) -> int:
    q = 3
    while not (is_prime(q) and q % 4 == 3 and kronecker(-q, p) == -1):
        q += 4
    return q


@lru_cache(maxsize=None)
def build_algebra(p: int) -> QuatAlgebra:
    """Standard presentation of the quaternion algebra ramified at p and infinity."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        B = QuatAlgebra(2, -1, -1)
    elif p % 4 == 3:
        B = QuatAlgebra(p, -1, -p)
    elif p % 8 == 5:
        B = QuatAlgebra(p, -2, -p)
    else:
        B = QuatAlgebra(p, -_aux_prime(p), -p)
    if ramified_primes(B) != [p]:
        raise ArithmeticError(f"{B} is not ramified exactly at {p}")
    return B


# ---------------------------------------------------------------------------
# lattices in B


def _rows(elems) -> list[list[Fraction]]:
    return [list(e.c) for e in elems]


def _hnf_rows(rows) -> tuple:
    return tuple(tuple(r) for r in lattice_basis(rows))


@dataclass(frozen=True)
class QuatLattice:
    """A full rank Z-lattice of B, by its HNF row basis."""

    alg: QuatAlgebra
    rows: tuple

    @classmethod
    def span(cls, alg, elems) -> "QuatLattice":
        return cls(alg, _hnf_rows(_rows(elems)))

    @property
    def basis(self) -> list[QuatElem]:
        return [self.alg.elem(r) for r in self.rows]

    def coords(self, x: QuatElem):
        return coords_in_basis([list(r) for r in self.rows], list(x.c))

    def contains(self, x: QuatElem) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coords(x))

    def covolume(self) -> Fraction:
        return abs(det([list(r) for r in self.rows]))

    def nrd_gram(self):
        """2 * Gram of nrd (the trace form trd(x conj y)); integral on ideals of integral norm."""
        D = self.alg.norm_form()
        B = self.rows
        return [[2 * sum(D[t] * u[t] * v[t] for t in range(4)) for v in B] for u in B]

    def scaled(self, s) -> "QuatLattice":
        return QuatLattice(self.alg, _hnf_rows([[s * x for x in r] for r in self.rows]))

    def __mul__(self, other: "QuatLattice") -> "QuatLattice":
        prods = [self.alg.mul(u, v) for u in self.rows for v in other.rows]
        return QuatLattice(self.alg, _hnf_rows(prods))

    def conj(self) -> "QuatLattice":
        return QuatLattice(self.alg, _hnf_rows([[r[0], -r[1], -r[2], -r[3]] for r in self.rows]))

    def elements_of_nrd(self, value) -> list[QuatElem]:
        G = self.nrd_gram()
        target = 2 * Fraction(value)
        vecs = short_vectors(G, target)
        out = []
        for v in vecs:
            if qform(G, list(v)) == target:
                out.append(self.alg.elem([sum(v[t] * self.rows[t][s] for t in range(4)) for s in range(4)]))
        return out

    def has_element_of_nrd(self, value) -> bool:
        G = self.nrd_gram()
        target = 2 * Fraction(value)
        return any(qform(G, list(v)) == target for v in short_vectors(G, target))


@dataclass(frozen=True)
class QuatOrder(QuatLattice):
    def discriminant(self) -> int:
        """Reduced discriminant, sqrt |det trd(b_i b_j)|."""
        B = self.basis
        M = [[(x * y).trd() for y in B] for x in B]
        D = abs(det(M))
        r = isqrt(int(D))
        if r * r != D:
            raise ArithmeticError("discriminant is not a square")
        return r

    def is_order(self) -> bool:
        B = self.basis
        return self.contains(self.alg.one) and all(self.contains(x * y) for x in B for y in B)

    def is_maximal(self) -> bool:
        return self.is_order() and self.discriminant() == self.alg.p

    def gross_lattice(self):
        """Gram (nrd) of the trace zero part of Z + 2R, with its basis rows."""
        rows = [[Fraction(1), 0, 0, 0]] + [[2 * x for x in r] for r in self.rows]
        basis = lattice_basis(rows)
        traces = [[2 * r[0] for r in basis]]
        den = common_denominator(traces)
        K = integer_kernel([[int(t * den) for t in traces[0]]])
        elems = [[sum(k[t] * basis[t][s] for t in range(4)) for s in range(4)] for k in K]
        D = self.alg.norm_form()
        G = [[sum(D[t] * u[t] * v[t] for t in range(4)) for v in elems] for u in elems]
        return elems, G


def as_order(L: QuatLattice) -> QuatOrder:
    return QuatOrder(L.alg, L.rows)


def seed_order(B: QuatAlgebra) -> QuatOrder:
    """A standard maximal order for the presentation chosen by build_algebra."""
    p, q = B.p, -B.i_sq
    h = Fraction(1, 2)
    if p == 2:
        gens = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (h, h, h, h)]
    elif p % 4 == 3:
        gens = [(1, 0, 0, 0), (0, 1, 0, 0), (h, 0, h, 0), (0, h, 0, h)]
    elif p % 8 == 5:
        f = Fraction(1, 4)
        gens = [(h, 0, h, h), (0, f, h, f), (0, 0, 1, 0), (0, 0, 0, 1)]
    else:
        c = next(c for c in range(q) if (c * c * p + 1) % q == 0)
        # the classical order for i^2 = -p, j^2 = -q, with i and j swapped (k -> -k)
        gens = [(h, h, 0, 0), (0, 0, h, -h), (0, Fraction(1, q), 0, Fraction(-c, q)), (0, 0, 0, 1)]
    R = as_order(QuatLattice.span(B, [B.elem(g) for g in gens]))
    if not R.contains(B.one):
        R = as_order(QuatLattice.span(B, [B.one] + [B.elem(g) for g in gens]))
    if not R.is_maximal():
        raise ArithmeticError(f"seed order for p={p} is not maximal")
    return R


# ---------------------------------------------------------------------------
# ideals, units, conjugacy


def left_ideal(R: QuatOrder, x: QuatElem, n: int) -> QuatLattice:
    """R x + n R."""
    gens = [b * x for b in R.basis] + [b * n for b in R.basis]
    return QuatLattice.span(R.alg, gens)


def right_order(I: QuatLattice) -> QuatOrder:
    """O_r(I) = conj(I) I / nrd(I) for an invertible lattice I."""
    n = ideal_norm(I)
    return as_order((I.conj() * I).scaled(1 / n))


def left_order(I: QuatLattice) -> QuatOrder:
    n = ideal_norm(I)
    return as_order((I * I.conj()).scaled(1 / n))


def ideal_norm(I: QuatLattice) -> Fraction:
    """nrd(I) for an invertible ideal of a maximal order.

    The trace form trd(x conj y) has determinant p^2 on a maximal order and
    [R : I]^2 = nrd(I)^4 times that on I.
    """
    r4 = Fraction(det(I.nrd_gram())) / (I.alg.p ** 2)
    a, b = _iroot4(r4.numerator), _iroot4(r4.denominator)
    if a is None or b is None:
        raise ArithmeticError("lattice is not an invertible ideal of a maximal order")
    return Fraction(a, b)


def _iroot4(n: int):
    r = isqrt(isqrt(n))
    for s in (r - 1, r, r + 1):
        if s >= 0 and s ** 4 == n:
            return s
    return None


def unit_group(R: QuatLattice) -> list[QuatElem]:
    return R.elements_of_nrd(1)


def two_sided_prime(R: QuatOrder) -> QuatLattice:
    """The two-sided ideal over p: p times the dual of R for the trace pairing."""
    B = R.basis
    M = [[(x * y).trd() for y in B] for x in B]
    Minv = inverse(M)
    dual = [[sum(Minv[i][t] * R.rows[t][s] for t in range(4)) for s in range(4)] for i in range(4)]
    P = QuatLattice(R.alg, _hnf_rows([[R.alg.p * x for x in r] for r in dual]))
    return P


def is_principal_two_sided(R: QuatOrder) -> bool:
    P = two_sided_prime(R)
    return P.has_element_of_nrd(R.alg.p)


def is_principal(I: QuatLattice) -> bool:
    return I.has_element_of_nrd(ideal_norm(I))


def connecting_ideal(R1: QuatOrder, R2: QuatOrder) -> QuatLattice:
    return R1 * R2


def are_conjugate(R1: QuatOrder, R2: QuatOrder) -> bool:
    """R1 ~ R2 iff the connecting ideal, or its product with the prime of R2, is principal."""
    if not is_isometric(R1.gross_lattice()[1], R2.gross_lattice()[1]):
        return False
    I = connecting_ideal(R1, R2)
    if is_principal(I):
        return True
    return is_principal(I * two_sided_prime(R2))


def _neighbours(R: QuatOrder, ell: int) -> list[QuatOrder]:
    """Right orders of the ell + 1 left R-ideals of norm ell."""
    out = []
    seen = set()
    B = R.basis
    G = R.nrd_gram()
    rng = range(ell)
    import itertools

    for co in itertools.product(rng, repeat=4):
        if not any(co):
            continue
        x = sum((c * b for c, b in zip(co, B)), R.alg.elem(0, 0, 0, 0))
        if x.nrd() % ell:
            continue
        I = left_ideal(R, x, ell)
        if I.rows in seen:
            continue
        if ideal_norm(I) != ell:
            continue
        seen.add(I.rows)
        out.append(right_order(I))
    return out


def mass(p: int) -> Fraction:
    return Fraction(p - 1, 12)


@dataclass
class OrderType:
    order: QuatOrder
    units: list
    principal: bool

    @property
    def weight(self) -> Fraction:
        # number of left ideal classes with this right order type, over |R^x / +-1|
        c = 1 if self.principal else 2
        return Fraction(2 * c, len(self.units))


@lru_cache(maxsize=None)
def maximal_order_types(p: int, max_orders: int = 10000) -> tuple[OrderType, ...]:
    """Representatives of the conjugacy classes of maximal orders, certified by the mass formula."""
    B = build_algebra(p)
    ell = 3 if p == 2 else 2
    R0 = seed_order(B)
    types: list[OrderType] = []
    frontier = [R0]
    total = Fraction(0)
    visited = 0
    while frontier and total < mass(p):
        R = frontier.pop(0)
        visited += 1
        if visited > max_orders:
            break
        if any(are_conjugate(T.order, R) for T in types):
            continue
        T = OrderType(R, unit_group(R), is_principal_two_sided(R))
        types.append(T)
        total += T.weight
        if total < mass(p):
            frontier.extend(_neighbours(R, ell))
    if total != mass(p):
        raise MassNotReached(f"p={p}: mass {total} != {mass(p)}")
    return tuple(types)


# ---------------------------------------------------------------------------
# embeddings of imaginary quadratic orders


@dataclass(frozen=True)
class OptimalEmbedding:
    order: QuatOrder
    omega_image: QuatElem
    completion: tuple
    principal: bool
    type_index: int
    index: int

    @property
    def r1(self):
        return self.completion[0]

    @property
    def r2(self):
        return self.completion[1]

    def image(self, z) -> QuatElem:
        """Image of x + y w in O tensor Q."""
        return self.order.alg.one * z.x + self.omega_image * z.y


def _canonical_under_units(w: QuatElem, units) -> tuple:
    return min(tuple((u * w * u.inverse()).c) for u in units)


def _complete(R: QuatOrder, w: QuatElem) -> tuple:
    vecs = [R.coords(R.alg.one), R.coords(w)]
    rows = as_int_matrix(vecs)
    extra = complete_basis(rows)
    elems = []
    for e in extra:
        elems.append(R.alg.elem([sum(e[t] * R.rows[t][s] for t in range(4)) for s in range(4)]))
    return tuple(elems)


def embeddings_into(O: QuadOrder, R: QuatOrder, units=None) -> list[QuatElem]:
    """Images of w in R up to conjugation by R^x, canonical and sorted."""
    if units is None:
        units = unit_group(R)
    elems, G = R.gross_lattice()
    found = set()
    for v in short_vectors(G, O.d):
        if qform(G, list(v)) != O.d:
            continue
        x = [sum(v[t] * elems[t][s] for t in range(3)) for s in range(4)]
        w = R.alg.elem([Fraction(x[0] + O.t, 2)] + [Fraction(c, 2) for c in x[1:]])
        if not R.contains(w):
            continue
        found.add(_canonical_under_units(w, units))
    return [R.alg.elem(c) for c in sorted(found)]


@lru_cache(maxsize=None)
def optimal_embeddings(O: QuadOrder, p: int) -> tuple[OptimalEmbedding, ...]:
    if splitting_type(O, p) == Splitting.SPLIT:
        raise ValueError(f"p={p} splits in O; there are no embeddings")
    out = []
    for ti, T in enumerate(maximal_order_types(p)):
        for w in embeddings_into(O, T.order, T.units):
            out.append(OptimalEmbedding(T.order, w, _complete(T.order, w), T.principal, ti, len(out)))
    return tuple(out)


def weighted_embedding_count(O: QuadOrder, p: int) -> int:
    """Sum over embeddings of 1 (principal P) or 2; equals h (1 - (-d/p))."""
    return sum(1 if e.principal else 2 for e in optimal_embeddings(O, p))
