from fractions import Fraction

import pytest

from conftest import form
from cm2.arith import Splitting, make_order
from cm2.endo import gross_lattice
from cm2.intersection import (
    epsilon_weight,
    exponent_factor,
    fundamental_discriminants,
    intersection_multiplicity,
    pdr_report,
)
from cm2.polarizations import enumerate_polarizations
from cm2.quaternion import optimal_embeddings
from cm2.sieve import candidate_primes


def test_epsilon_table():
    assert epsilon_weight(Splitting.INERT, True) == Fraction(1, 2)
    assert epsilon_weight(Splitting.INERT, False) == 1
    assert epsilon_weight(Splitting.RAMIFIED, True) == 1
    assert epsilon_weight(Splitting.RAMIFIED, False) == 2
    with pytest.raises(ValueError):
        epsilon_weight(Splitting.SPLIT, True)


def test_exponent_factor():
    assert exponent_factor(make_order(163), 17) == 12
    assert exponent_factor(make_order(55), 5) == 6
    # p = d/4 counts twice although it ramifies
    assert exponent_factor(make_order(8), 2) == 12
    assert exponent_factor(make_order(68), 17) == 12


def test_163_at_17(P163):
    r = intersection_multiplicity(make_order(163), P163, 17)
    assert r.e == 1
    assert [c.gk.as_tuple() for c in r.contributions] == [(0, 0, 1), (0, 0, 1)]
    assert all(c.eps == Fraction(1, 2) for c in r.contributions)


def test_79_at_7():
    O = make_order(79)
    assert len(optimal_embeddings(O, 7)) == 10
    es = [intersection_multiplicity(O, P, 7).e for P in enumerate_polarizations(O)]
    assert es == [3, 0, 2]


def test_55_at_5():
    O = make_order(55)
    r = intersection_multiplicity(O, form(55, 3, 5, 0, 1), 5)
    assert r.e == 4
    assert len(r.contributions) == 4
    assert intersection_multiplicity(O, form(55, 5, 12, 1, 2), 5).e == 0


def test_split_prime_contributes_nothing(P163):
    assert intersection_multiplicity(make_order(163), P163, 41).e == 0


def test_small_reports():
    O = make_order(8)
    (P,) = enumerate_polarizations(O)
    assert pdr_report(O, P).exponents == {2: 12}
    O = make_order(35)
    assert pdr_report(O, form(35, 2, 5, 0, 1)).exponents == {2: 24, 5: 12}
    O = make_order(43)
    assert pdr_report(O, form(43, 2, 6, 0, 1)).exponents == {2: 24, 3: 12, 5: 12}


def test_163_report():
    O = make_order(163)
    rep = pdr_report(O, form(163, 7, 24, 1, 2))
    assert rep.exponents == {2: 36, 3: 12, 5: 12, 11: 12, 13: 12, 17: 12, 19: 12, 23: 12}


@pytest.mark.parametrize("d", [35, 40, 43, 55, 68, 79, 91])
def test_soundness_and_exhaustive_mode(d):
    O = make_order(d)
    for P in enumerate_polarizations(O):
        rep = pdr_report(O, P)
        cands = set(candidate_primes(O, gross_lattice(P)))
        for e in rep.entries:
            assert e.p in cands
            assert 4 * e.p <= d
            assert e.e > 0
        assert pdr_report(O, P, exhaustive=True).exponents == rep.exponents


def test_fundamental_discriminants():
    ds = fundamental_discriminants(30)
    assert ds == [4, 7, 8, 11, 15, 19, 20, 23, 24]
