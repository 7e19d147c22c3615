"""Primes of potentially decomposable reduction and their multiplicities.

For a candidate prime p and every optimal embedding of O into a maximal
order of B_{p,inf}, a norm one vector l0 of the rank 5 lattice contributes
eps * e(GK(Q_l0)), where Q_l0 is the Gram matrix of l0^perp.  The sum is
e_{O,P,p}; the exponent of p in the discriminant is 12 e (p inert, or
p = d/4) or 6 e (p ramified).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    QuadOrder,
    Splitting,
    is_fundamental,
    make_order,
    primes_up_to,
    splitting_type,
)
from .endo import HermitianForm, gross_lattice
from .gk import GK2Unhandled, GKInvariants, NonIntegralMultiplicity, gk_invariants, local_multiplicity
from .polarizations import enumerate_polarizations
from .quaternion import optimal_embeddings
from .sieve import candidate_primes, sieve_primes
from .supersingular import build_lbar, find_norm_one, perp_gram


@dataclass(frozen=True)
class Contribution:
    embedding: int
    l0: tuple
    gk: GKInvariants
    e_l0: int
    eps: Fraction


@dataclass
class PdrEntry:
    p: int
    e: int
    contributions: list[Contribution] = field(default_factory=list)


@dataclass
class PdrReport:
    d: int
    P: HermitianForm
    entries: list[PdrEntry]
    exponents: dict[int, int]


def epsilon_weight(split: Splitting, principal: bool) -> Fraction:
    if split == Splitting.SPLIT:
        raise ValueError("no weight for split primes")
    if split == Splitting.INERT and principal:
        return Fraction(1, 2)
    if split == Splitting.RAMIFIED and not principal:
        return Fraction(2)
    return Fraction(1)


def _is_quarter_prime(O: QuadOrder, p: int) -> bool:
    return O.d % 4 == 0 and O.d // 4 == p


def _effective_splitting(O: QuadOrder, p: int) -> Splitting:
    # p = d/4 behaves as a ramified prime for the weights
    if _is_quarter_prime(O, p):
        return Splitting.RAMIFIED
    return splitting_type(O, p)


def _tag(err: Exception, O, P, p, emb) -> Exception:
    return type(err)(f"{err} [d={O.d}, P={P}, p={p}, embedding={emb}]")


def intersection_multiplicity(O: QuadOrder, P: HermitianForm, p: int) -> PdrEntry:
    split = _effective_splitting(O, p)
    if split == Splitting.SPLIT:
        return PdrEntry(p, 0)
    L = gross_lattice(P)
    total = Fraction(0)
    contributions = []
    for emb in optimal_embeddings(O, p):
        Lbar = build_lbar(P, emb, L=L)
        l0 = find_norm_one(Lbar)
        if l0 is None:
            continue
        Q = perp_gram(Lbar.gram, l0)
        if any(Q[i][i] % 4 or Q[i][j] % 2 for i in range(3) for j in range(3)):
            raise ArithmeticError(f"Q_l0 / 4 is not half-integral for d={O.d}, P={P}, p={p}")
        T = [[Fraction(x, 4) for x in row] for row in Q]
        try:
            gk = gk_invariants(T, p)
            e_l0 = local_multiplicity(gk)
        except (GK2Unhandled, NonIntegralMultiplicity) as err:
            raise _tag(err, O, P, p, emb.index) from err
        eps = epsilon_weight(split, emb.principal)
        contributions.append(Contribution(emb.index, tuple(l0), gk, e_l0, eps))
        total += eps * e_l0
    if total.denominator != 1:
        raise NonIntegralMultiplicity(f"e = {total} for d={O.d}, P={P}, p={p}")
    return PdrEntry(p, int(total), contributions)


def exponent_factor(O: QuadOrder, p: int) -> int:
    if _is_quarter_prime(O, p) or splitting_type(O, p) == Splitting.INERT:
        return 12
    return 6


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CM2_THREADS", "1")))
    except ValueError:
        return 1


def _primes_to_test(O: QuadOrder, P: HermitianForm, exhaustive: bool) -> list[int]:
    primes = set(candidate_primes(O, gross_lattice(P)))
    if exhaustive:
        primes |= {p for p in primes_up_to(O.d // 4) if splitting_type(O, p) != Splitting.SPLIT}
    return sorted(primes)


def pdr_report(O: QuadOrder, P: HermitianForm, exhaustive: bool = False) -> PdrReport:
    """All (p, e) with e > 0.  exhaustive also tests every non-split p <= d/4."""
    primes = _primes_to_test(O, P, exhaustive)
    n = _threads()
    if n > 1:
        with ThreadPoolExecutor(n) as pool:
            results = list(pool.map(lambda p: intersection_multiplicity(O, P, p), primes))
    else:
        results = [intersection_multiplicity(O, P, p) for p in primes]
    entries = [r for r in results if r.e > 0]
    exponents = {r.p: exponent_factor(O, r.p) * r.e for r in entries}
    return PdrReport(O.d, P, entries, exponents)


@dataclass
class ScanResult:
    exceptions: list[tuple[int, HermitianForm, int]]
    errors: list[str]
    checked: int


def fundamental_discriminants(d_max: int) -> list[int]:
    return [d for d in range(4, d_max + 1) if is_fundamental(-d)]


def conjecture_scan(d_max: int) -> ScanResult:
    """Sieve primes that turn out not to be primes of potentially decomposable reduction."""
    exceptions = []
    errors = []
    checked = 0
    for d in fundamental_discriminants(d_max):
        O = make_order(d)
        for P in enumerate_polarizations(O):
            checked += 1
            for p in sieve_primes(O, gross_lattice(P)):
                try:
                    e = intersection_multiplicity(O, P, p).e
                except (GK2Unhandled, NonIntegralMultiplicity) as err:
                    errors.append(str(err))
                    continue
                if e == 0:
                    exceptions.append((d, P, p))
    return ScanResult(exceptions, errors, checked)

