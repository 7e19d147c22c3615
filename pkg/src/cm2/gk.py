"""Gross-Keating invariants of ternary forms and the local intersection length.

A ternary form is given by a symmetric matrix B with B_ii integral and
2 B_ij integral (a half-integral matrix); the quadratic form is x^T B x.

For odd p the invariants are the sorted valuations of a Jordan splitting.
For p = 2 we use the definition directly: (a1, a2, a3) is the lexicographic
maximum, over all Z_2-bases, of the sequences with ord(B_ii) >= a_i and
ord(2 B_ij) >= (a_i + a_j)/2.  The first entry is the 2-adic content, the
second is found by a search over rank 2 direct summands, lifted one power
of 2 at a time, and the last comes from a1 + a2 + a3 = ord_2(4 det B).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import valuation
from .lattice import det


class GK2Unhandled(ArithmeticError):
    """The dyadic search went beyond its budget."""


class NonIntegralMultiplicity(ArithmeticError):
    """The length formula gave a non-integer."""


@dataclass(frozen=True)
class GKInvariants:
    p: int
    a1: int
    a2: int
    a3: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)


INF = 10**9


def _ord(x, p) -> int:
    return INF if x == 0 else valuation(x, p)


def _as_fractions(Q):
    return [[Fraction(x) for x in row] for row in Q]


# ---------------------------------------------------------------------------
# odd p


def jordan_valuations(Q, p: int) -> list[int]:
    """Valuations of the diagonal of a Z_p-diagonalization (p odd)."""
    if p == 2:
        raise ValueError("use the dyadic algorithm for p = 2")
    A = _as_fractions(Q)
    n = len(A)
    out = []
    idx = list(range(n))
    while idx:
        best = None
        for i in idx:
            for j in idx:
                v = _ord(A[i][j], p)
                key = (v, 0 if i == j else 1)
                if best is None or key < best[0]:
                    best = (key, i, j)
        (v, off), i, j = best
        if v >= INF:
            raise ValueError("degenerate form")
        if off:
            # e_i <- e_i + e_j makes the diagonal entry have valuation v (p odd)
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
        piv = A[i][i]
        for k in idx:
            if k == i:
                continue
            f = A[k][i] / piv
            for l in range(n):
                A[k][l] -= f * A[i][l]
            for l in range(n):
                A[l][k] -= f * A[l][i]
        out.append(_ord(piv, p))
        idx.remove(i)
    return sorted(out)


# ---------------------------------------------------------------------------
# p = 2


def _bil(B, u, v):
    return sum(u[i] * B[i][j] * v[j] for i in range(3) for j in range(3))


def _content(B) -> int:
    n = len(B)
    vals = [_ord(B[i][i], 2) for i in range(n)]
    vals += [_ord(2 * B[i][j], 2) for i in range(n) for j in range(i + 1, n)]
    return min(vals)


def _summand(f, mod):
    """(v1, m1, m2) with f(v1) = 1 and M = ker f = <m1, m2> modulo mod."""
    piv = next(i for i in range(3) if f[i] % 2)
    # f is normalized so that f[piv] = 1
    others = [i for i in range(3) if i != piv]
    v1 = [0, 0, 0]
    v1[piv] = 1
    ms = []
    for o in others:
        m = [0, 0, 0]
        m[o] = 1
        m[piv] = (-f[o]) % mod
        ms.append(m)
    return v1, ms[0], ms[1]


def _level_ok(B, f, A, a1, mod) -> bool:
    v1, m1, m2 = _summand(f, mod)
    for u, w in ((m1, m1), (m2, m2)):
        if _ord(_bil(B, u, w), 2) < A:
            return False
    if _ord(2 * _bil(B, m1, m2), 2) < A:
        return False
    c = -(-(a1 + A) // 2)
    return _ord(2 * _bil(B, v1, m1), 2) >= c and _ord(2 * _bil(B, v1, m2), 2) >= c


def _normalized_functionals(k: int):
    mod = 2**k
    for piv in range(3):
        for rest in product(range(mod), repeat=2 - piv):
            f = [0] * piv + [1] + list(rest)
            # earlier coordinates must be even so that piv is the first unit
            for low in product(range(0, mod, 2), repeat=piv):
                g = list(low) + f[piv:]
                yield g


def _dyadic_a2(B, a1: int, budget: int) -> int:
    start = max(a1, 1)
    mod = 2**start
    alive = [f for f in _normalized_functionals(start) if _level_ok(B, f, start, a1, mod)]
    if not alive:
        return a1
    A = start
    while True:
        nxt_mod = 2 ** (A + 1)
        nxt = []
        for f in alive:
            piv = next(i for i in range(3) if f[i] % 2)
            free = [i for i in range(3) if i != piv]
            for g in product((0, 1), repeat=2):
                h = list(f)
                for i, e in zip(free, g):
                    h[i] = (h[i] + e * 2**A) % nxt_mod
                if _level_ok(B, h, A + 1, a1, nxt_mod):
                    nxt.append(h)
        if not nxt:
            return A
        alive = nxt
        A += 1
        if A > budget:
            raise GK2Unhandled(f"a2 search exceeded 2^{budget}")


def dyadic_gk(B, budget: int = 40) -> tuple[int, int, int]:
    B = _as_fractions(B)
    a1 = _content(B)
    a2 = _dyadic_a2(B, a1, budget)
    total = _ord(4 * det(B), 2)
    a3 = total - a1 - a2
    if a3 < a2:
        raise GK2Unhandled(f"inconsistent dyadic invariants a1={a1}, a2={a2}, sum={total}")
    return (a1, a2, a3)


# ---------------------------------------------------------------------------


def gk_invariants(Q, p: int) -> GKInvariants:
    """Gross-Keating invariants of a positive definite half-integral ternary matrix."""
    if len(Q) != 3:
        raise ValueError("ternary forms only")
    if p == 2:
        a = dyadic_gk(Q)
    else:
        a = tuple(jordan_valuations(Q, p))
    return GKInvariants(p, *a)


def local_multiplicity(gk: GKInvariants | tuple, p: int | None = None) -> int:
    """Length of the local ring attached to (a1, a2, a3)."""
    if isinstance(gk, GKInvariants):
        p = gk.p if p is None else p
        a1, a2, a3 = gk.as_tuple()
    else:
        a1, a2, a3 = gk
    e = Fraction(0)
    for i in range(a1):
        e += (i + 1) * (a1 + a2 + a3 - 3 * i) * p**i
    if (a1 + a2) % 2 == 0:
        for i in range(a1, (a1 + a2 - 2) // 2 + 1):
            e += (a1 + 1) * (2 * a1 + a2 + a3 - 4 * i) * p**i
        e += Fraction(a1 + 1, 2) * (a3 - a2 + 1) * p ** ((a1 + a2) // 2)
    else:
        for i in range(a1, (a1 + a2 - 1) // 2 + 1):
            e += (a1 + 1) * (2 * a1 + a2 + a3 - 4 * i) * p**i
    if e.denominator != 1:
        raise NonIntegralMultiplicity(f"GK {(a1, a2, a3)} at p={p} gives {e}")
    return int(e)
