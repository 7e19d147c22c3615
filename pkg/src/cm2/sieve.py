"""Extension matrices T of Gram(L) by a norm one row, and the primes they allow.

A vector of norm 1 in the reduction of L spans, together with L, a rank-4
lattice with Gram matrix

    T = [[S, m], [m^T, 1]],   det T = det S - m^T adj(S) m,

so both T > 0 and congruences on m and det T cut the possibilities down to a
finite list.  The primes dividing det T that are not split in O are the
candidates for potentially decomposable reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import QuadOrder, Splitting, factorize, is_prime, splitting_type
from .endo import GrossLattice
from .lattice import adjugate, det, short_vectors, qform


@dataclass(frozen=True)
class ExtensionMatrix:
    gram: tuple
    offset: tuple
    det: int

    def matrix(self) -> list[list[int]]:
        S = [list(r) for r in self.gram]
        m = list(self.offset)
        return [S[i] + [m[i]] for i in range(3)] + [m + [1]]


def _congruences_hold(S, m) -> bool:
    return all((m[i] * m[i] - S[i][i]) % 4 == 0 for i in range(3))


def enumerate_T(L: GrossLattice | list, congruences: bool = True) -> list[ExtensionMatrix]:
    """Positive definite T with 16 | det T, one of each pair +-m.

    With congruences=True the offsets also satisfy m_i^2 = S_ii mod 4.
    """
    S = L.gram if isinstance(L, GrossLattice) else L
    dS = int(det(S))
    A = adjugate(S)
    gram = tuple(tuple(int(x) for x in row) for row in S)
    out = []
    vecs = short_vectors(A, dS, strict=True) + [(0, 0, 0)]
    for m in vecs:
        neg = tuple(-x for x in m)
        if m < neg:
            continue
        dT = dS - int(qform(A, list(m)))
        assert dT > 0
        if dT % 16:
            continue
        if congruences and not _congruences_hold(S, m):
            continue
        out.append(ExtensionMatrix(gram, tuple(m), dT))
    out.sort(key=lambda t: (-t.det, t.offset))
    return out


def sieve_primes(O: QuadOrder, L: GrossLattice) -> list[int]:
    """Non-split primes p <= d/4 dividing det(T)/16 for some congruence-filtered T."""
    found = set()
    for T in enumerate_T(L):
        if T.det == 16:
            continue
        for p in factorize(T.det // 16):
            if 4 * p <= O.d and splitting_type(O, p) != Splitting.SPLIT:
                found.add(p)
    return sorted(found)


def candidate_primes(O: QuadOrder, L: GrossLattice) -> list[int]:
    """Sieve primes, plus 2 when it is not split and d/4 when it is prime."""
    found = set(sieve_primes(O, L))
    if O.d >= 8 and splitting_type(O, 2) != Splitting.SPLIT:
        found.add(2)
    if O.d % 4 == 0 and is_prime(O.d // 4):
        found.add(O.d // 4)
    return sorted(found)
