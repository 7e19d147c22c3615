"""The rank-5 lattice of the supersingular reduction and its norm one vectors.

Given an embedding w of O into a maximal order R = <1, w, r1, r2>, the
symmetric endomorphisms of the reduced surface are spanned by P^-1 e_i
(i = 1..4) and P^-1 e_5, P^-1 e_6 with e_5, e_6 the antidiagonal matrices
built from r1, r2.  On trace zero elements q/4(beta) = trd(tr(beta^2))/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .endo import GrossLattice, HermitianForm, Mat2, gross_lattice
from .lattice import det, short_vectors
from .quaternion import OptimalEmbedding, QuatAlgebra, QuatElem


class UniquenessViolated(ArithmeticError):
    """More than one pair +-l0 of norm one vectors."""


@dataclass
class SupersingularLattice:
    basis: list
    gram: list

    @property
    def det(self) -> int:
        return det(self.gram)


def _map_matrix(M: Mat2, image) -> Mat2:
    return M.map(image)


def _image_fn(alg: QuatAlgebra, w: QuatElem):
    one = alg.one

    def image(z):
        return one * z.x + w * z.y

    return image


def quat_tau(M: Mat2) -> Mat2:
    """2M - (trd(tr M)/2) Id."""
    s = M.trace().trd() / 2
    zero = M.a * 0
    return 2 * M - Mat2(zero + s, zero, zero, zero + s)


def q4(beta: Mat2) -> Fraction:
    return (beta * beta).trace().trd() / 4


def b4(x: Mat2, y: Mat2) -> Fraction:
    return (x * y + y * x).trace().trd() / 8


def _int_gram(basis) -> list[list[int]]:
    G = [[b4(u, v) for v in basis] for u in basis]
    for row in G:
        for x in row:
            if Fraction(x).denominator != 1:
                raise ArithmeticError(f"non-integral q/4 Gram entry {x} on the supersingular lattice")
    return [[int(x) for x in row] for row in G]


def build_lbar(
    P: HermitianForm,
    emb: OptimalEmbedding | None = None,
    *,
    omega_image: QuatElem | None = None,
    r1: QuatElem | None = None,
    r2: QuatElem | None = None,
    L: GrossLattice | None = None,
    L_basis: list | None = None,
    conjugate_offdiagonal: bool = False,
) -> SupersingularLattice:
    """Basis l1, l2, l3 of L (mapped through w) followed by l4, l5.

    By default e_5 = [[0, r1], [conj(r1), 0]].  With conjugate_offdiagonal the
    entries are swapped; since conj(r) = trd(r) - r this only changes l4, l5
    by elements of L and the negation, so the lattice is the same.
    """
    if emb is not None:
        omega_image, (r1, r2) = emb.omega_image, emb.completion
    if omega_image is None or r1 is None or r2 is None:
        raise ValueError("need an embedding or explicit (omega_image, r1, r2)")
    alg = omega_image.alg
    image = _image_fn(alg, omega_image)
    if L_basis is None:
        L_basis = (L or gross_lattice(P)).basis
    Pinv = _map_matrix(P.inverse(), image)
    ells = [_map_matrix(M, image) for M in L_basis]
    zero = alg.one * 0
    for r in (r1, r2):
        e = Mat2(zero, r.conj(), r, zero) if conjugate_offdiagonal else Mat2(zero, r, r.conj(), zero)
        ells.append(quat_tau(Pinv * e))
    return SupersingularLattice(ells, _int_gram(ells))


def find_norm_one(Lbar: SupersingularLattice | list) -> tuple | None:
    """The norm one vector l0 (the larger of +-l0), or None."""
    G = Lbar.gram if isinstance(Lbar, SupersingularLattice) else Lbar
    vecs = short_vectors(G, 1)
    if not vecs:
        return None
    if len(vecs) > 2:
        raise UniquenessViolated(f"{len(vecs) // 2} pairs of norm one vectors")
    return max(vecs)


def cross_terms(G5, l0) -> list[int]:
    """b(l_i, l0) for i = 1, 2, 3."""
    return [sum(G5[i][j] * l0[j] for j in range(len(l0))) for i in range(3)]


def perp_gram(L: GrossLattice | list, l0=None, cross=None) -> list[list[int]]:
    """Gram matrix of the orthogonal complement of l0 in <l1, l2, l3, l0>.

    Either give the full 5x5 Gram with l0, or the 3x3 Gram of L with the cross terms.
    """
    S = L.gram if isinstance(L, GrossLattice) else L
    if cross is None:
        cross = cross_terms(S, l0)
        S = [row[:3] for row in S[:3]]
    return [[S[i][j] - cross[i] * cross[j] for j in range(3)] for i in range(3)]


def extension_gram(S, cross) -> list[list[int]]:
    """Gram of <l1, l2, l3, l0> in q/4."""
    return [list(S[i][:3]) + [cross[i]] for i in range(3)] + [list(cross) + [1]]
