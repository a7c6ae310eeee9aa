"""Legendre basis machinery checked against direct integration.

The oracle here deliberately avoids the library's own integration helper:
integrate_1d computes the antiderivative of x^e by hand, so orthogonality
and normalization facts rest on independent arithmetic.
"""

import random
from fractions import Fraction

from robusthit.legendre import (
    from_legendre,
    legendre_coeffs,
    legendre_value,
    legendre_weight,
    monomial_in_legendre,
    to_legendre,
    top_degree_factor,
)
from robusthit.poly import DensePoly

from conftest import corpus_instance, random_homogeneous_poly


def integrate_1d(coeffs) -> Fraction:
    """Integral of sum(c_e x^e) against dx/2 on [-1, 1], by antiderivative."""
    total = Fraction(0)
    for e, c in enumerate(coeffs):
        total += Fraction(c, 1) * (1 - (-1) ** (e + 1)) / (2 * (e + 1))
    return total


def poly_product(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def test_first_five_legendre_polynomials():
    # classical table: 1, x, (3x^2-1)/2, (5x^3-3x)/2, (35x^4-30x^2+3)/8
    assert legendre_coeffs(0) == (Fraction(1),)
    assert legendre_coeffs(1) == (Fraction(0), Fraction(1))
    assert legendre_coeffs(2) == (Fraction(-1, 2), Fraction(0), Fraction(3, 2))
    assert legendre_coeffs(3) == (Fraction(0), Fraction(-3, 2), Fraction(0), Fraction(5, 2))
    assert legendre_coeffs(4) == (
        Fraction(3, 8), Fraction(0), Fraction(-15, 4), Fraction(0), Fraction(35, 8)
    )


def test_leading_coefficient_normalization():
    # leading coefficient of L_k is C(2k, k) / 2^k
    import math

    for k in range(9):
        assert legendre_coeffs(k)[-1] == Fraction(math.comb(2 * k, k), 2**k)


def test_orthogonality_under_probability_measure():
    # integral of L_k L_m against dx/2 is 0 off-diagonal, 1/(2k+1) on it
    for k in range(7):
        for m in range(7):
            value = integrate_1d(poly_product(legendre_coeffs(k), legendre_coeffs(m)))
            assert value == (Fraction(1, 2 * k + 1) if k == m else 0)


def test_legendre_value_matches_coefficients():
    for k in range(6):
        for x in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2, 3)):
            direct = sum(c * x**e for e, c in enumerate(legendre_coeffs(k)))
            assert legendre_value(k, x) == direct
    # endpoint identity L_k(1) = 1
    assert all(legendre_value(k, Fraction(1)) == 1 for k in range(9))


def test_monomial_expansion_hand_values():
    # x^2 = (1/3) L0 + (2/3) L2; x^4 = (1/5) L0 + (4/7) L2 + (8/35) L4
    assert monomial_in_legendre(2) == (Fraction(1, 3), Fraction(0), Fraction(2, 3))
    assert monomial_in_legendre(4) == (
        Fraction(1, 5), Fraction(0), Fraction(4, 7), Fraction(0), Fraction(8, 35)
    )


def test_monomial_expansion_reconstructs_monomial():
    for e in range(8):
        ell = monomial_in_legendre(e)
        recon = [Fraction(0)] * (e + 1)
        for k, lk in enumerate(ell):
            for j, c in enumerate(legendre_coeffs(k)):
                recon[j] += lk * c
        expected = [Fraction(0)] * (e + 1)
        expected[e] = Fraction(1)
        assert recon == expected


def test_to_from_legendre_round_trip_on_corpus():
    for i in range(40):
        f = corpus_instance(i)
        assert from_legendre(f.n, to_legendre(f)) == f


def test_to_legendre_univariate_example():
    f = DensePoly.from_terms(1, [((2,), Fraction(1))])
    assert to_legendre(f) == {(0,): Fraction(1, 3), (2,): Fraction(2, 3)}


def test_top_degree_identity_on_random_instances():
    # for homogeneous f, the degree-r Legendre block is the raw coefficient
    # times prod_i 2^{e_i} / C(2 e_i, e_i)
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randrange(1, 4)
        r = rng.randrange(1, 5)
        f = random_homogeneous_poly(rng, n, r, max_mag=50)
        table = to_legendre(f)
        for e, c in f.coeffs.items():
            if c == 0:
                continue
            assert table.get(e, Fraction(0)) == c * top_degree_factor(e)


def test_top_degree_factor_and_weight():
    import math

    for e in [(1,), (2,), (1, 1), (3, 0, 1)]:
        expected = Fraction(1)
        weight = Fraction(1)
        for ei in e:
            expected *= Fraction(2**ei, math.comb(2 * ei, ei))
            weight *= Fraction(1, 2 * ei + 1)
        assert top_degree_factor(e) == expected
        assert legendre_weight(e) == weight
