from collections import Counter
from fractions import Fraction
from math import isqrt

import numpy as np
import pytest

from conftest import form
from cm2.arith import divisors, factorize, kronecker, make_order
from cm2.closed_formula import (
    CharConvention,
    FactoredProduct,
    NotApplicableEvenD,
    closed_q,
    evaluate_closed_formula,
)
from cm2.lattice import det, inverse, is_isometric
from cm2.polarizations import enumerate_polarizations

ODD = [35, 43, 47, 55, 59, 79, 87, 95]


def brute_formula(d, Q, box):
    """The same sum over a full coordinate box, with numpy doing the enumeration."""
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in box]
    x, y, z = np.meshgrid(*axes, indexing="ij", sparse=True)
    val = (Q[0][0] * x * x + Q[1][1] * y * y + Q[2][2] * z * z
           + 2 * Q[0][1] * x * y + 2 * Q[0][2] * x * z + 2 * Q[1][2] * y * z)
    s = d - val
    s = s[(s > 0) & (s % 4 == 0)] // 4
    acc = {}
    for si, mult in Counter(s.tolist()).items():
        for n in divisors(si):
            for ell, v in factorize(n).items():
                acc[ell] = acc.get(ell, 0) - 6 * mult * kronecker(-d, n) * v
    return {p: e for p, e in acc.items() if e}


def test_q_163(P163):
    Q = closed_q(P163)
    assert is_isometric(Q, [[24, 4, 6], [4, 55, 1], [6, 1, 83]])
    assert det(Q) == 163**2 * 4


def test_even_d_not_applicable():
    O = make_order(40)
    for P in enumerate_polarizations(O):
        with pytest.raises(NotApplicableEvenD):
            evaluate_closed_formula(O, P)


@pytest.mark.parametrize(
    "d,pol,expected",
    [
        (55, (3, 5, 0, 1), {2: -12, 3: 48}),
        (95, (5, 5, 0, 1), {7: 48}),
        (43, (2, 6, 0, 1), {2: 24, 3: 12, 5: 12}),
        (43, (3, 4, 0, 1), {2: 12, 3: 12, 5: 12, 7: 12}),
        (163, (7, 24, 1, 2), {2: 36, 3: 12, 5: 12, 11: 12, 13: 12, 17: 12, 19: 12, 23: 12}),
    ],
)
def test_examples(d, pol, expected):
    assert evaluate_closed_formula(make_order(d), form(d, *pol)) == expected


def test_87_both_forms():
    O = make_order(87)
    for P in enumerate_polarizations(O):
        assert evaluate_closed_formula(O, P) == {2: -12, 5: 48}


@pytest.mark.parametrize("d", ODD)
def test_against_box_enumeration(d):
    O = make_order(d)
    for P in enumerate_polarizations(O):
        Q = closed_q(P)
        # Q(m) < d gives m_i^2 <= d (Q^-1)_ii
        inv = inverse(Q)
        box = [isqrt(int(d * inv[i][i])) + 1 for i in range(3)]
        assert evaluate_closed_formula(O, P).exponents == brute_formula(d, Q, box)


@pytest.mark.parametrize("d", ODD)
def test_exponents_divisible_by_six_and_conventions_agree(d):
    O = make_order(d)
    for P in enumerate_polarizations(O):
        a = evaluate_closed_formula(O, P, CharConvention.MINUS_D_OVER_N)
        b = evaluate_closed_formula(O, P, "n_over_d")
        assert a == b
        assert all(e % 6 == 0 for e in a.exponents.values())


def test_factored_product():
    fp = FactoredProduct({5: 48, 2: -12, 3: 0})
    assert str(fp) == "2^-12 5^48"
    assert fp.as_json() == {"2": -12, "5": 48}
    assert fp.value() == Fraction(5**48, 2**12)
    assert str(FactoredProduct()) == "1"
