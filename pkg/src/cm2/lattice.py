"""Exact integer and rational linear algebra for small lattices.

Matrices are lists of rows.  Entries are ints or Fractions; nothing here ever
touches floating point.  The short vector enumerator is Fincke-Pohst with an
exact LDL^T decomposition, preceded by an exact LLL step for speed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, lcm

from .arith import isqrt_floor


# ---------------------------------------------------------------------------
# basic matrix helpers


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def qform(G, x):
    """x^T G x."""
    return dot(x, matvec(G, x))


def congruent(G, U):
    """U G U^T, i.e. the Gram matrix of the rows of U."""
    return matmul(matmul(U, G), transpose(U))


def det(A) -> Fraction | int:
    """Determinant by fraction-free elimination (Bareiss) or Fractions."""
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    result = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            sign = -sign
        result *= M[i][i]
        for r in range(i + 1, n):
            if M[r][i]:
                f = M[r][i] / M[i][i]
                M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    out = sign * result
    return int(out) if out.denominator == 1 else out


def inverse(A):
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[i], M[piv] = M[piv], M[i]
        inv = 1 / M[i][i]
        M[i] = [x * inv for x in M[i]]
        for r in range(n):
            if r != i and M[r][i]:
                f = M[r][i]
                M[r] = [a - f * b for a, b in zip(M[r], M[i])]
    return [row[n:] for row in M]


def adjugate(A):
    """Classical adjugate (integral when A is)."""
    n = len(A)
    if n == 1:
        return [[1]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            out[j][i] = (-1) ** (i + j) * det(minor)
    return out


def as_int_matrix(A):
    out = []
    for row in A:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            r.append(int(x))
        out.append(r)
    return out


def is_integral(A) -> bool:
    return all(Fraction(x).denominator == 1 for row in A for x in row)


def common_denominator(A) -> int:
    den = 1
    for row in A:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    return den


# ---------------------------------------------------------------------------
# Hermite normal form and friends


def _xgcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf_with_transform(A):
    """Row Hermite normal form of an integer matrix.

    Returns (H, U) with U unimodular and U*A = H; the nonzero rows of H come
    first, are in echelon form with positive pivots, and entries above each
    pivot are reduced into [0, pivot).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(map(int, row)) for row in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gather gcd of column c (rows r..m-1) into row r
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-bg * x + ag * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-bg * x + ag * y for x, y in zip(Ur, Ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf(A):
    """Nonzero rows of the row HNF of an integer matrix (a basis of the row lattice)."""
    if not A:
        return []
    H, _ = hnf_with_transform(A)
    return [row for row in H if any(row)]


def lattice_basis(vectors):
    """Z-basis (HNF) of the Z-span of rational vectors."""
    den = common_denominator(vectors)
    H = hnf([[int(Fraction(x) * den) for x in v] for v in vectors])
    return [[Fraction(x, den) for x in row] for row in H]


def integer_kernel(A):
    """Basis of {x in Z^n : A x = 0} (a saturated lattice)."""
    n = len(A[0])
    At = transpose(as_int_matrix(A))  # n x m
    H, U = hnf_with_transform(At)
    return [U[i] for i in range(n) if not any(H[i])]


def saturation(vectors, n=None):
    """(span_Q of vectors) intersected with Z^n, given integer vectors."""
    vectors = as_int_matrix(vectors)
    K = integer_kernel(vectors)
    if not K:
        return identity(len(vectors[0]))
    return hnf(integer_kernel(K))


def gram_of_rows(B):
    return [[dot(u, v) for v in B] for u in B]


def complete_basis(rows):
    """Extend integer rows spanning a saturated sublattice to a basis of Z^n.

    Returns the extra rows.
    """
    rows = as_int_matrix(rows)
    k, n = len(rows), len(rows[0])
    # column operations: rows * V = [H | 0]; then Z^n has basis rows of V^-1
    H, U = hnf_with_transform(transpose(rows))  # U * rows^T = H  ->  rows * U^T = H^T
    Vinv = inverse(transpose(U))
    H_top = transpose(H)[:k]
    block = [row[:k] for row in H_top]
    if abs(det(block)) != 1 or any(any(row[k:]) for row in H_top):
        raise ValueError("rows do not span a saturated sublattice")
    extra = as_int_matrix([Vinv[i] for i in range(k, n)])
    full = rows + extra
    assert abs(det(full)) == 1
    return extra


def solve_rational(A, b):
    """Solve A x = b for square invertible A."""
    return matvec(inverse(A), b)


def coords_in_basis(basis, v):
    """Rational coordinates of v in a basis of a full rank lattice (rows)."""
    return matvec(inverse(transpose(basis)), v)


# ---------------------------------------------------------------------------
# LLL and exact short vector enumeration on Gram matrices


def lll_gram(G, delta=Fraction(3, 4)):
    """Exact LLL on a positive definite Gram matrix.

    Returns (U, G') with U unimodular (rows are the new basis in old
    coordinates) and G' = U G U^T.
    """
    n = len(G)
    den = common_denominator(G)
    B = [[int(Fraction(x) * den) for x in row] for row in G]
    U = identity(n)

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = B[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
                mu[i][j] = s / bstar[j]
            bstar[i] = B[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    def reduce_row(k, j, q):
        # b_k <- b_k - q b_j, keeping B the Gram matrix of the rows of U
        U[k] = [a - q * b for a, b in zip(U[k], U[j])]
        Bkk = B[k][k] - 2 * q * B[k][j] + q * q * B[j][j]
        for r in range(n):
            B[k][r] -= q * B[j][r]
        for r in range(n):
            B[r][k] = B[k][r]
        B[k][k] = Bkk

    def swap(k):
        U[k], U[k - 1] = U[k - 1], U[k]
        B[k], B[k - 1] = B[k - 1], B[k]
        for row in B:
            row[k], row[k - 1] = row[k - 1], row[k]

    mu, bstar = gso()
    k = 1
    while k < n:
        changed = False
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                reduce_row(k, j, q)
                for l in range(j + 1):
                    mu[k][l] -= q * (mu[j][l] if l < j else 1)
                changed = True
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k)
            mu, bstar = gso()
            k = max(k - 1, 1)
    out = [[Fraction(x, den) for x in row] for row in B]
    return U, [[int(x) if x.denominator == 1 else x for x in row] for row in out]


def _ldl(G):
    """q(x) = sum_i D[i] * (x_i + sum_{j>i} M[i][j] x_j)^2."""
    n = len(G)
    Q = [[Fraction(x) for x in row] for row in G]
    for i in range(n):
        if Q[i][i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    D = [Q[i][i] for i in range(n)]
    M = [[Q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return D, M


def _enumerate_raw(G, bound, strict=False):
    """All x != 0 with x^T G x <= bound (or < bound if strict).

    The Gram matrix is scaled to integers.  Floating point is used only to
    prune the search tree, with a relative slack far above rounding error;
    every survivor is then checked exactly.
    """
    n = len(G)
    den = common_denominator(G)
    Gi = [[int(x * den) for x in row] for row in G]
    B = Fraction(bound) * den
    D, M = _ldl(Gi)
    Df = [float(x) for x in D]
    Mf = [[float(x) for x in row] for row in M]
    slack = 1e-9 * (float(B) + 1)
    x = [0] * n
    out = []

    def rec(i, rem):
        c = 0.0
        for j in range(i + 1, n):
            if x[j]:
                c += Mf[i][j] * x[j]
        r = (rem + slack) / Df[i]
        if r < 0:
            return
        s = r ** 0.5
        lo = int(-c - s) - 1
        hi = int(-c + s) + 1
        for xi in range(lo, hi + 1):
            t = xi + c
            val = Df[i] * t * t
            if val > rem + slack:
                continue
            x[i] = xi
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, rem - val)
        x[i] = 0

    rec(n - 1, float(B))
    res = []
    for v in out:
        if not any(v):
            continue
        val = qform(Gi, v)
        if val > B or (strict and val == B):
            continue
        res.append(v)
    return res


def short_vectors(G, bound, strict=False, reduce=True):
    """All nonzero integer x with x^T G x <= bound (< bound if strict).

    Both x and -x are returned.  The coordinates are with respect to the
    original basis of G.
    """
    n = len(G)
    if n == 0:
        return []
    if reduce and n > 1:
        U, Gr = lll_gram(G)
        raw = _enumerate_raw(Gr, bound, strict)
        Ut = transpose(U)
        return sorted(tuple(matvec(Ut, list(v))) for v in raw)
    return sorted(_enumerate_raw(G, bound, strict))


def vectors_of_norm(G, value):
    return [v for v in short_vectors(G, value) if qform(G, v) == value]


def minimum(G):
    """Minimum of the positive definite form (by enumeration up to the least diagonal)."""
    m = min(G[i][i] for i in range(len(G)))
    vals = [qform(G, v) for v in short_vectors(G, m)]
    return min(vals)


# ---------------------------------------------------------------------------
# isometry of positive definite lattices


def isometry(G1, G2):
    """Return U (rows = images of the basis of G1 in coordinates of G2) with
    U G2 U^T = G1, or None if the lattices are not isometric."""
    n = len(G1)
    if n != len(G2) or det(G1) != det(G2):
        return None
    U1, R1 = lll_gram(G1)
    U2, R2 = lll_gram(G2)
    diag = [R1[i][i] for i in range(n)]
    cands = {}
    vecs = short_vectors(R2, max(diag))
    norms = {}
    for v in vecs:
        norms.setdefault(qform(R2, v), []).append(v)
    for i in range(n):
        cands[i] = norms.get(diag[i], [])
        if not cands[i]:
            return None
    RV = {v: matvec(R2, list(v)) for v in vecs}
    chosen: list = []

    def rec(i):
        if i == n:
            return True
        for v in cands[i]:
            gv = RV[v]
            if all(dot(chosen[j], gv) == R1[j][i] for j in range(i)):
                chosen.append(v)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    if not rec(0):
        return None
    # chosen rows are images of R1-basis in R2 coordinates
    W = [list(v) for v in chosen]
    # basis of G1 = U1^-1 * (R1 basis); images in G2 coords via U2
    X = matmul(matmul(as_int_matrix(inverse(U1)), W), U2)
    X = as_int_matrix(X)
    assert congruent(G2, X) == [[Fraction(x) for x in row] for row in G1] or congruent(G2, X) == G1
    return X


def is_isometric(G1, G2) -> bool:
    return isometry(G1, G2) is not None
