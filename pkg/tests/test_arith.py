from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cm2.arith import (
    NonFundamentalDiscriminant,
    Splitting,
    class_number,
    divisors,
    factorize,
    format_quad,
    is_fundamental,
    is_prime,
    kronecker,
    make_order,
    primes_up_to,
    reduced_forms,
    splitting_type,
    valuation,
)


def legendre_by_squares(a, p):
    if a % p == 0:
        return 0
    return 1 if any((x * x - a) % p == 0 for x in range(1, p)) else -1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43])
@pytest.mark.parametrize("a", [-163, -79, -55, -43, -8, 2, 3, 10])
def test_kronecker_matches_squares(a, p):
    assert kronecker(a, p) == legendre_by_squares(a, p)


def test_kronecker_known_values():
    # -163 = 2 mod 3 is not a square, so 3 is inert
    assert kronecker(-163, 3) == -1
    assert kronecker(-163, 2) == -1
    assert kronecker(-55, 2) == 1
    assert kronecker(-8, 2) == 0
    assert kronecker(-163, 1) == 1


def test_kronecker_at_two_follows_residue_mod_8():
    for a in range(-41, 42, 2):
        expected = 1 if a % 8 in (1, 7) else -1
        assert kronecker(a, 2) == expected


@given(st.integers(-500, 500).filter(lambda a: a % 4 in (0, 1) and a != 0),
       st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=200, deadline=None)
def test_kronecker_multiplicative_in_denominator(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


@given(st.integers(1, 10**6))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in factorize(n).items():
        assert is_prime(p)
        prod *= p**e
    assert prod == n


def test_divisors_and_valuation():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert valuation(48, 2) == 4
    assert valuation(Fraction(9, 8), 2) == -3
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]


def test_fundamental_discriminants():
    assert is_fundamental(-163)
    assert is_fundamental(-8)
    assert is_fundamental(-20)
    assert not is_fundamental(-12)
    assert not is_fundamental(-16)
    assert not is_fundamental(-27)


def test_make_order_conventions():
    O = make_order(163)
    assert (O.t, O.n) == (1, 41)
    O = make_order(40)
    assert (O.t, O.n) == (0, 10)
    with pytest.raises(NonFundamentalDiscriminant):
        make_order(12)
    with pytest.raises(NonFundamentalDiscriminant):
        make_order(3)


@pytest.mark.parametrize("d,h", [(4, 1), (8, 1), (20, 2), (23, 3), (47, 5), (55, 4), (79, 5), (83, 3), (163, 1), (195, 4)])
def test_class_numbers(d, h):
    assert class_number(d) == h


def test_reduced_forms_are_reduced():
    for a, b, c in reduced_forms(199):
        assert b * b - 4 * a * c == -199
        assert abs(b) <= a <= c


def test_splitting_types():
    O = make_order(163)
    assert splitting_type(O, 2) == Splitting.INERT
    assert splitting_type(O, 163) == Splitting.RAMIFIED
    assert splitting_type(O, 41) == Splitting.SPLIT
    O = make_order(55)
    assert splitting_type(O, 5) == Splitting.RAMIFIED
    assert splitting_type(O, 2) == Splitting.SPLIT


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_norm_is_multiplicative(x, y):
    O = make_order(79)
    u = O.elem(x, y)
    v = O.elem(3, -2)
    assert (u * v).norm() == u.norm() * v.norm()
    assert u.norm() == O.norm(x, y)


def test_format_quad():
    assert format_quad(1, 0) == "w"
    assert format_quad(2, -1) == "2w-1"
    assert format_quad(0, 3) == "3"
