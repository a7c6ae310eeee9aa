"""Shared corpus generators for the test suite.

The seeded corpus is the single source of random instances used by several
test modules and by the acceptance suite, so its construction is fixed here:
instance i draws its parameters from random.Random(derive_seed(2026,
"corpus", i)).  Changing this generator invalidates every frozen spot value
below, so treat it as append-only.
"""

from __future__ import annotations

import random
from fractions import Fraction

from robusthit.grids import derive_seed
from robusthit.poly import DensePoly, monomials_of_degree
from robusthit.scalars import GaussianRational

CORPUS_MASTER = 2026


def random_homogeneous_poly(
    rng: random.Random, n: int, r: int, max_mag: int = 100
) -> DensePoly:
    """Nonzero homogeneous degree-r polynomial with |num|, den <= max_mag."""
    monos = monomials_of_degree(n, r)
    count = rng.randrange(1, len(monos) + 1)
    chosen = rng.sample(monos, count)
    coeffs = {}
    for e in chosen:
        num = rng.randrange(1, max_mag + 1) * rng.choice((-1, 1))
        den = rng.randrange(1, max_mag + 1)
        coeffs[e] = Fraction(num, den)
    return DensePoly(n, coeffs)


def corpus_instance(i: int) -> DensePoly:
    """Instance i of the norm corpus: n <= 3, r in 1..4, entries <= 100."""
    rng = random.Random(derive_seed(CORPUS_MASTER, "corpus", i))
    n = rng.randrange(1, 4)
    r = rng.randrange(1, 5)
    return random_homogeneous_poly(rng, n, r)


def random_complex_point(rng: random.Random, n: int, q: int = 8) -> tuple:
    """Point in the complex unit box with denominator-q rational parts."""
    return tuple(
        GaussianRational(
            Fraction(rng.randrange(-q, q + 1), q),
            Fraction(rng.randrange(-q, q + 1), q),
        )
        for _ in range(n)
    )


def random_box_point(rng: random.Random, n: int, q: int = 16) -> tuple:
    """Rational point with every coordinate in [-1/n, 1/n], so ||v||^2 <= 1."""
    return tuple(Fraction(rng.randrange(-q, q + 1), q * n) for _ in range(n))
