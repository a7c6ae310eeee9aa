"""Legendre expansions under the uniform probability measure on [-1, 1].

With dmu = dx/2 the classical Legendre family L_0, L_1, ... is orthogonal
with <L_j, L_k> = delta_jk / (2k+1); products over coordinates give an
orthogonal basis of the n-variate polynomials on the cube.  Everything
here is exact Fraction arithmetic, so the transform composed with its
inverse is the identity on the nose.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Sequence

from .poly import DensePoly, ExpVec
from .scalars import GaussianRational, Scalar

LegendreTable = Dict[ExpVec, Fraction]


@lru_cache(maxsize=None)
def legendre_coeffs(k: int) -> tuple[Fraction, ...]:
    """Power-basis coefficients of L_k, index = power of x.

    Uses the three-term recurrence (k+1) L_{k+1} = (2k+1) x L_k - k L_{k-1}
    with L_0 = 1 and L_1 = x.
    """
    if k < 0:
        raise ValueError(f"negative degree {k}")
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(1))
    prev = legendre_coeffs(k - 2)
    curr = legendre_coeffs(k - 1)
    out = [Fraction(0)] * (k + 1)
    for power, c in enumerate(curr):
        out[power + 1] += Fraction(2 * k - 1, k) * c
    for power, c in enumerate(prev):
        out[power] -= Fraction(k - 1, k) * c
    return tuple(out)


def legendre_value(k: int, x: Fraction) -> Fraction:
    """Evaluate L_k at a rational point by the recurrence."""
    if k == 0:
        return Fraction(1)
    prev, curr = Fraction(1), Fraction(x)
    for j in range(1, k):
        prev, curr = curr, (Fraction(2 * j + 1) * x * curr - Fraction(j) * prev) / Fraction(j + 1)
    return curr


@lru_cache(maxsize=None)
def monomial_in_legendre(e: int) -> tuple[Fraction, ...]:
    """Coefficients a_k with x^e = sum_k a_k L_k(x); parity zeros included.

    Built by repeated use of x L_k = ((k+1) L_{k+1} + k L_{k-1}) / (2k+1),
    which keeps every step rational.
    """
    if e < 0:
        raise ValueError(f"negative exponent {e}")
    if e == 0:
        return (Fraction(1),)
    lower = monomial_in_legendre(e - 1)
    out = [Fraction(0)] * (e + 1)
    for k, a in enumerate(lower):
        if a == 0:
            continue
        out[k + 1] += a * Fraction(k + 1, 2 * k + 1)
        if k >= 1:
            out[k - 1] += a * Fraction(k, 2 * k + 1)
    return tuple(out)


def _require_real(value: Scalar) -> Fraction:
    if isinstance(value, GaussianRational):
        if value.im != 0:
            raise ValueError("Legendre transform is defined for real coefficients only")
        return value.re
    return Fraction(value)


def to_legendre(poly: DensePoly) -> LegendreTable:
    """Tensor Legendre coefficients of a real polynomial.

    Returns the map e-bar -> l_{e-bar} with f = sum l_{e-bar} prod_i
    L_{e_i}(x_i); zero entries are dropped.
    """
    table: Dict[ExpVec, Fraction] = {}
    for expvec, coeff in poly.coeffs.items():
        c = _require_real(coeff)
        per_var = [monomial_in_legendre(e) for e in expvec]
        _tensor_accumulate(table, per_var, c)
    return {k: v for k, v in table.items() if v != 0}


def _tensor_accumulate(
    table: Dict[ExpVec, Fraction], per_var: Sequence[tuple[Fraction, ...]], scale: Fraction
) -> None:
    indices = [0] * len(per_var)

    def rec(pos: int, acc: Fraction) -> None:
        if acc == 0:
            return
        if pos == len(per_var):
            key = tuple(indices)
            table[key] = table.get(key, Fraction(0)) + acc
            return
        for k, a in enumerate(per_var[pos]):
            if a == 0:
                continue
            indices[pos] = k
            rec(pos + 1, acc * a)

    rec(0, scale)


def from_legendre(n: int, table: LegendreTable) -> DensePoly:
    """Inverse transform: rebuild the polynomial from its Legendre table."""
    total = DensePoly.zero(n)
    for expvec, coeff in table.items():
        if len(expvec) != n:
            raise ValueError(f"index {expvec} has wrong arity for n={n}")
        term = DensePoly.constant(coeff, n)
        for i, k in enumerate(expvec):
            coeffs_1d = legendre_coeffs(k)
            var_poly = DensePoly.zero(n)
            for power, c in enumerate(coeffs_1d):
                if c == 0:
                    continue
                e = tuple(power if j == i else 0 for j in range(n))
                var_poly = var_poly + DensePoly(n, {e: c})
            term = term * var_poly
        total = total + term
    return total


def legendre_weight(index: ExpVec) -> Fraction:
    """Squared norm of the basis element prod L_{e_i}: prod 1/(2 e_i + 1)."""
    w = Fraction(1)
    for e in index:
        w *= Fraction(1, 2 * e + 1)
    return w


def top_degree_factor(index: ExpVec) -> Fraction:
    """prod_i 2^{e_i} / C(2 e_i, e_i).

    For f of total degree at most r and |e-bar| = r, the Legendre
    coefficient at e-bar equals this factor times the monomial coefficient
    c_{e-bar}: only the single monomial x^{e-bar} can reach that index.
    """
    factor = Fraction(1)
    for e in index:
        factor *= Fraction(2**e, math.comb(2 * e, e))
    return factor
