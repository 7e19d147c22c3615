"""Independent slow reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np


def _ord2_capped(x, k):
    """2-adic valuation of integers x (numpy array), capped at k."""
    x = np.asarray(x, dtype=np.int64) % (2**k)
    out = np.full(x.shape, k, dtype=np.int64)
    for e in range(k - 1, -1, -1):
        out[(x % (2 ** (e + 1))) != 0] = e
    return out


def dyadic_gk_bruteforce(B, k: int = 3):
    """Lexicographic maximum of naive dyadic GK sequences over all bases mod 2^k.

    With a1 the content, the naive sequence of a basis is
    a2 = min(b2, b3, 2 c12 - a1, 2 c13 - a1, c23) and
    a3 = min(b3, 2 c13 - a1, 2 c23 - a2), where b_i = ord B(v_i, v_i) and
    c_ij = ord 2B(v_i, v_j).  Exact whenever the result is below k.
    """
    den = 1
    for row in B:
        for x in row:
            den = max(den, Fraction(x).denominator)
    assert den <= 2
    # work with the integer matrix 2B; Q(v) = v^T (2B) v / 2, 2B(u, v) = u^T (2B) v
    M = np.array([[int(2 * Fraction(x)) for x in row] for row in B], dtype=np.int64)
    mod = 2**k
    V = np.array([v for v in product(range(mod), repeat=3) if any(x % 2 for x in v)], dtype=np.int64)
    MV = V @ M
    q = (np.einsum("ij,ij->i", MV, V) // 2)
    bq = _ord2_capped(q, k)
    C = _ord2_capped(MV @ V.T, k)
    a1 = int(min([_ord_frac(B[i][i]) for i in range(3)] + [_ord_frac(2 * B[i][j]) for i in range(3) for j in range(i + 1, 3)]))
    par = V % 2
    cross = np.cross(par[:, None, :], par[None, :, :]) % 2
    best = None
    for i1 in range(len(V)):
        c1 = C[i1]
        a2 = np.minimum.reduce([
            bq[:, None] + 0 * bq[None, :],
            np.broadcast_to(bq[None, :], (len(V), len(V))),
            (2 * c1 - a1)[:, None] + 0 * bq[None, :],
            np.broadcast_to((2 * c1 - a1)[None, :], (len(V), len(V))),
            C,
        ])
        a3 = np.minimum.reduce([
            np.broadcast_to(bq[None, :], (len(V), len(V))),
            np.broadcast_to((2 * c1 - a1)[None, :], (len(V), len(V))),
            2 * C - a2,
        ])
        ok = a3 >= a2
        # basis condition: det of (v1, v2, v3) odd
        ok &= (cross @ par[i1]) % 2 == 1
        if not ok.any():
            continue
        key = np.where(ok, a2 * (4 * k) + a3, -1)
        j = np.unravel_index(np.argmax(key), key.shape)
        seq = (a1, int(a2[j]), int(a3[j]))
        if best is None or seq > best:
            best = seq
    return best


def _ord_frac(x):
    x = Fraction(x)
    if x == 0:
        return 10**9
    v = 0
    n, d = x.numerator, x.denominator
    while n % 2 == 0:
        n //= 2
        v += 1
    while d % 2 == 0:
        d //= 2
        v -= 1
    return v


def gk_sum_local_length(a, p):
    """e from a direct count: sum over the lattice-point description of the formula."""
    a1, a2, a3 = a
    total = Fraction(0)
    for i in range(a1 + a2 + 1):
        total += _term(i, a1, a2, a3) * Fraction(p) ** i
    return total


def _term(i, a1, a2, a3):
    if i < a1:
        return (i + 1) * (a1 + a2 + a3 - 3 * i)
    half = Fraction(a1 + a2, 2)
    if i < half:
        return (a1 + 1) * (2 * a1 + a2 + a3 - 4 * i)
    if i == half:
        return Fraction(a1 + 1, 2) * (a3 - a2 + 1)
    return 0
