"""Indecomposable principal polarizations on E^2 as unimodular hermitian forms.

A principal polarization is a positive definite hermitian P over O with
det P = 1, written [a, c, b].  Two forms give isomorphic polarized surfaces
when P' = U* P U for some U in GL_2(O), or when P' is equivalent to the
conjugate form.  Equivalence is decided exactly: the columns of U are vectors
of O^2 of prescribed hermitian norms, which a positive definite short vector
search finds completely.
"""

from __future__ import annotations

from math import isqrt

from .arith import QuadOrder, make_order
from .endo import HermitianForm, gross_lattice
from fractions import Fraction
from functools import lru_cache

from .lattice import det, is_isometric, qform, short_vectors


def candidates(O: QuadOrder, bound: int | None = None) -> list[HermitianForm]:
    """All [a, c, b] in the search box with a <= bound, 0 <= b2 <= a, -a < b1 <= a."""
    if bound is None:
        bound = isqrt(O.d - 1) + 1  # ceil(sqrt(d))
    out = []
    for a in range(1, bound + 1):
        for b2 in range(0, a + 1):
            for b1 in range(-a + 1, a + 1):
                nb = O.norm(b1, b2)
                if (nb + 1) % a:
                    continue
                c = (nb + 1) // a
                if c < a:
                    continue
                out.append(HermitianForm(O, a, c, b1, b2))
    return out


def is_indecomposable(P: HermitianForm) -> bool:
    """No vector of q/4-norm 1 in the Gross lattice."""
    L = gross_lattice(P)
    return not short_vectors(L.gram, 1)


# --- hermitian equivalence ---------------------------------------------------


def _mul(O, u, v):
    # (x1 + y1 w)(x2 + y2 w) with w^2 = t w - n, on integer pairs
    return (u[0] * v[0] - O.n * u[1] * v[1], u[0] * v[1] + u[1] * v[0] + O.t * u[1] * v[1])


def _conj(O, u):
    return (u[0] + O.t * u[1], -u[1])


@lru_cache(maxsize=4096)
def hermitian_data(P: HermitianForm):
    """Integer matrices HX, HY with h(u, v) = u^T HX v + (u^T HY v) w on Z^4 = O^2,
    and the integer Gram matrix of v -> 2 h(v, v)."""
    O = P.order
    rows = ((P.a, 0), (P.b1, P.b2)), ((P.b1 + O.t * P.b2, -P.b2), (P.c, 0))
    basis = [(0, (1, 0)), (0, (0, 1)), (1, (1, 0)), (1, (0, 1))]
    HX = [[0] * 4 for _ in range(4)]
    HY = [[0] * 4 for _ in range(4)]
    for i, (r, e) in enumerate(basis):
        for j, (s, f) in enumerate(basis):
            x, y = _mul(O, _conj(O, e), _mul(O, rows[r][s], f))
            HX[i][j], HY[i][j] = x, y
    # h(v, v) is rational, so v^T HY v = 0 and 2 h(v, v) = v^T (HX + HX^T) v
    G2 = [[HX[i][j] + HX[j][i] for j in range(4)] for i in range(4)]
    return HX, HY, G2


@lru_cache(maxsize=4096)
def _vectors_of_hnorm(P: HermitianForm, value: int):
    G2 = hermitian_data(P)[2]
    return [v for v in short_vectors(G2, 2 * value) if qform(G2, v) == 2 * value]


def equivalence(P: HermitianForm, P2: HermitianForm):
    """Return U (as two column vectors in Z^4 = O^2) with U* P U = P2, or None."""
    HX, HY, _ = hermitian_data(P)
    firsts = _vectors_of_hnorm(P, P2.a)
    seconds = _vectors_of_hnorm(P, P2.c)
    tx, ty = P2.b1, P2.b2
    for u in firsts:
        ux = [sum(u[i] * HX[i][j] for i in range(4)) for j in range(4)]
        uy = [sum(u[i] * HY[i][j] for i in range(4)) for j in range(4)]
        for v in seconds:
            if sum(a * b for a, b in zip(uy, v)) == ty and sum(a * b for a, b in zip(ux, v)) == tx:
                return u, v
    return None


def are_equivalent(P: HermitianForm, P2: HermitianForm) -> bool:
    """Equivalence up to GL_2(O) and conjugation."""
    return equivalence(P, P2) is not None or equivalence(P, P2.conjugate()) is not None


def _theta_invariant(G):
    """Determinant and vector counts by norm up to a bound depending only on det(G)."""
    n = len(G)
    D = int(det(G))
    root = 1
    while root**n < D:
        root += 1
    bound = 2 * root
    counts: dict = {}
    for v in short_vectors(G, bound):
        k = qform(G, v)
        counts[k] = counts.get(k, 0) + 1
    return (D, tuple(sorted(counts.items())))


# --- enumeration ---------------------------------------------------------------


def _preference(P: HermitianForm):
    # smallest a, then c, then b2, then the least |b1| with b1 >= 0 preferred
    return (P.a, P.c, P.b2, abs(P.b1), -P.b1)


def polarization_classes(O: QuadOrder, bound: int | None = None) -> list[list[HermitianForm]]:
    """Classes of indecomposable candidates: each class lists its members, best first.

    Isometry of Gross lattices is a necessary condition and is tested first;
    membership is then certified by an explicit U with U* P U = rep.
    """
    return [list(cls) for cls in _classes(O, bound)]


@lru_cache(maxsize=None)
def _classes(O: QuadOrder, bound: int | None) -> tuple[tuple[HermitianForm, ...], ...]:
    classes: list[list[HermitianForm]] = []
    grams: list = []
    for P in sorted(candidates(O, bound), key=_preference):
        if not is_indecomposable(P):
            continue
        G = gross_lattice(P).gram
        inv = _theta_invariant(G)
        for cls, (G0, inv0) in zip(classes, grams):
            if inv == inv0 and is_isometric(G0, G) and are_equivalent(P, cls[0]):
                cls.append(P)
                break
        else:
            classes.append([P])
            grams.append((G, inv))
    classes.sort(key=lambda c: c[0].key())
    return tuple(tuple(c) for c in classes)


def enumerate_polarizations(O: QuadOrder | int, bound: int | None = None) -> list[HermitianForm]:
    if isinstance(O, int):
        O = make_order(O)
    return [cls[0] for cls in polarization_classes(O, bound)]


def audit_completeness(O: QuadOrder) -> bool:
    """Rerun with the a-bound doubled; every new class must already be represented."""
    base = enumerate_polarizations(O)
    wide = enumerate_polarizations(O, 2 * (isqrt(O.d - 1) + 1))
    if len(base) != len(wide):
        return False
    return all(any(are_equivalent(P, Q) for Q in base) for P in wide)


def canonical_representative(P: HermitianForm) -> HermitianForm:
    """The representative chosen by enumerate_polarizations for the class of P."""
    for Q in enumerate_polarizations(P.order):
        if are_equivalent(P, Q):
            return Q
    raise ValueError(f"{P} is not an indecomposable principal polarization of O")
