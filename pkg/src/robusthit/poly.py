"""Dense multivariate polynomials over Q and Q[i].

Coefficients live in a map from exponent vectors (tuples of nonnegative
ints) to scalars; zero coefficients are never stored, so equality is plain
dict equality.  Circuit expansion is just circuit evaluation in this ring.

The homogeneous monomial count C(n+r-1, r) grows quickly; callers that
expand circuits are expected to stay in the toy regime and can ask
`n_hom` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple

from .circuits import Circuit
from .errors import DimensionError
from .scalars import GaussianRational, Scalar, abs_sq, format_scalar, parse_scalar

ExpVec = Tuple[int, ...]


def n_hom(n: int, r: int) -> int:
    """Number of degree-r monomials in n variables: C(n+r-1, r)."""
    if n < 1 or r < 0:
        raise ValueError(f"n_hom needs n >= 1, r >= 0, got {n}, {r}")
    return math.comb(n + r - 1, r)


def monomials_of_degree(n: int, r: int) -> list[ExpVec]:
    """All degree-r exponent vectors, descending-lexicographic.

    The first vector is (r, 0, ..., 0); that ordering is the documented
    column order wherever a matrix is indexed by monomials.
    """
    out: list[ExpVec] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], r, n)
    return out


def _zero_like(value: Scalar) -> bool:
    if isinstance(value, GaussianRational):
        return value.re == 0 and value.im == 0
    return value == 0


@dataclass
class DensePoly:
    """Polynomial as exponent-vector -> coefficient map (no stored zeros)."""

    n: int
    coeffs: Dict[ExpVec, Scalar] = field(default_factory=dict)

    @classmethod
    def zero(cls, n: int) -> "DensePoly":
        return cls(n, {})

    @classmethod
    def constant(cls, value: Scalar | int, n: int) -> "DensePoly":
        value = Fraction(value) if isinstance(value, int) else value
        if _zero_like(value):
            return cls.zero(n)
        return cls(n, {(0,) * n: value})

    @classmethod
    def variable(cls, index: int, n: int) -> "DensePoly":
        if not 0 <= index < n:
            raise ValueError(f"variable index {index} out of range for n={n}")
        expvec = tuple(1 if i == index else 0 for i in range(n))
        return cls(n, {expvec: Fraction(1)})

    @classmethod
    def from_terms(cls, n: int, terms: Sequence[tuple[Sequence[int], Scalar | int]]) -> "DensePoly":
        poly = cls.zero(n)
        for expvec, coeff in terms:
            poly = poly + cls(n, {tuple(expvec): Fraction(coeff) if isinstance(coeff, int) else coeff})
        return poly

    def is_zero(self) -> bool:
        return not self.coeffs

    def support_size(self) -> int:
        return len(self.coeffs)

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as 0."""
        return max((sum(e) for e in self.coeffs), default=0)

    def homogeneous_degree(self) -> Optional[int]:
        """The common degree of all terms, or None if mixed; zero poly gives 0."""
        degrees = {sum(e) for e in self.coeffs}
        if not degrees:
            return 0
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def is_real(self) -> bool:
        return all(not isinstance(c, GaussianRational) or c.im == 0 for c in self.coeffs.values())

    def __add__(self, other: "DensePoly") -> "DensePoly":
        self._check_arity(other)
        coeffs = dict(self.coeffs)
        for expvec, coeff in other.coeffs.items():
            total = coeffs.get(expvec, Fraction(0)) + coeff
            if _zero_like(total):
                coeffs.pop(expvec, None)
            else:
                coeffs[expvec] = total
        return DensePoly(self.n, coeffs)

    def __neg__(self) -> "DensePoly":
        return DensePoly(self.n, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "DensePoly") -> "DensePoly":
        return self + (-other)

    def __mul__(self, other: "DensePoly") -> "DensePoly":
        self._check_arity(other)
        coeffs: Dict[ExpVec, Scalar] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                expvec = tuple(a + b for a, b in zip(e1, e2))
                total = coeffs.get(expvec, Fraction(0)) + c1 * c2
                if _zero_like(total):
                    coeffs.pop(expvec, None)
                else:
                    coeffs[expvec] = total
        return DensePoly(self.n, coeffs)

    def scale(self, factor: Scalar | int) -> "DensePoly":
        factor = Fraction(factor) if isinstance(factor, int) else factor
        if _zero_like(factor):
            return DensePoly.zero(self.n)
        return DensePoly(self.n, {e: c * factor for e, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.n == other.n and _normalized(self.coeffs) == _normalized(other.coeffs)

    def evaluate(self, point: Sequence[Scalar | int]) -> Scalar:
        """Exact evaluation; returns GaussianRational iff anything complex enters."""
        if len(point) != self.n:
            raise DimensionError(f"point has {len(point)} coordinates, poly has {self.n}")
        total: Scalar = Fraction(0)
        for expvec, coeff in self.coeffs.items():
            term: Scalar = coeff
            for value, exp in zip(point, expvec):
                if exp == 0:
                    continue
                base = Fraction(value) if isinstance(value, int) else value
                for _ in range(exp):
                    term = term * base
            total = total + term
        return total

    def partial(self, index: int) -> "DensePoly":
        """Partial derivative with respect to variable `index`."""
        coeffs: Dict[ExpVec, Scalar] = {}
        for expvec, coeff in self.coeffs.items():
            e = expvec[index]
            if e == 0:
                continue
            lowered = tuple(v - 1 if i == index else v for i, v in enumerate(expvec))
            coeffs[lowered] = coeff * Fraction(e)
        return DensePoly(self.n, coeffs)

    def gradient(self) -> list["DensePoly"]:
        return [self.partial(i) for i in range(self.n)]

    def re_im_coefficientwise(self) -> tuple["DensePoly", "DensePoly"]:
        """Split Gaussian coefficients into two real-coefficient polynomials."""
        re_c: Dict[ExpVec, Scalar] = {}
        im_c: Dict[ExpVec, Scalar] = {}
        for expvec, coeff in self.coeffs.items():
            if isinstance(coeff, GaussianRational):
                if coeff.re != 0:
                    re_c[expvec] = coeff.re
                if coeff.im != 0:
                    im_c[expvec] = coeff.im
            else:
                re_c[expvec] = coeff
        return DensePoly(self.n, re_c), DensePoly(self.n, im_c)

    def terms_sorted(self) -> list[tuple[ExpVec, Scalar]]:
        """Terms in descending-lexicographic exponent order."""
        return sorted(self.coeffs.items(), key=lambda item: item[0], reverse=True)

    def _check_arity(self, other: "DensePoly") -> None:
        if self.n != other.n:
            raise DimensionError(f"arity mismatch: {self.n} vs {other.n}")

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for expvec, coeff in self.terms_sorted():
            factors = [f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(expvec) if e]
            body = "*".join(factors) if factors else "1"
            parts.append(f"({format_scalar(coeff)})*{body}")
        return " + ".join(parts)


def _normalized(coeffs: Dict[ExpVec, Scalar]) -> Dict[ExpVec, tuple[Fraction, Fraction]]:
    out = {}
    for expvec, coeff in coeffs.items():
        if isinstance(coeff, GaussianRational):
            out[expvec] = (coeff.re, coeff.im)
        else:
            out[expvec] = (Fraction(coeff), Fraction(0))
    return out


def expand_circuit(circuit: Circuit) -> DensePoly:
    """Bottom-up expansion: evaluate the circuit over the polynomial ring."""
    n = circuit.n_vars
    point = [DensePoly.variable(i, n) for i in range(n)]
    return circuit.evaluate(point, lift_const=lambda c: DensePoly.constant(c, n))


def realify_poly(poly: DensePoly) -> tuple[DensePoly, DensePoly]:
    """Split f(a + i*b) into real and imaginary polynomials in 2n real vars.

    Variable j of the input maps to a_j = var j and b_j = var n + j of the
    outputs.  Works for real and Gaussian coefficients alike.
    """
    n = poly.n
    doubled = [
        DensePoly.variable(j, 2 * n)
        + DensePoly.variable(n + j, 2 * n).scale(GaussianRational(Fraction(0), Fraction(1)))
        for j in range(n)
    ]
    total = DensePoly.zero(2 * n)
    for expvec, coeff in poly.coeffs.items():
        term = DensePoly.constant(coeff, 2 * n)
        for j, e in enumerate(expvec):
            for _ in range(e):
                term = term * doubled[j]
        total = total + term
    return total.re_im_coefficientwise()


def group_by_prefix(poly: DensePoly, n_prefix: int) -> Dict[ExpVec, DensePoly]:
    """Regroup a poly over n_prefix + m variables by its prefix exponents.

    Returns, for each exponent vector on the first n_prefix variables, the
    coefficient polynomial in the remaining m variables.  Used to read off
    how expanded universal-circuit coefficients depend on the auxiliary
    weights.
    """
    m = poly.n - n_prefix
    grouped: Dict[ExpVec, DensePoly] = {}
    for expvec, coeff in poly.coeffs.items():
        head, tail = expvec[:n_prefix], expvec[n_prefix:]
        bucket = grouped.setdefault(head, DensePoly.zero(m))
        grouped[head] = bucket + DensePoly(m, {tail: coeff})
    return grouped


def poly_to_json(poly: DensePoly) -> dict:
    """Interchange form: sorted exponent/coefficient pairs, exact strings."""
    return {
        "n": poly.n,
        "terms": [
            {"e": list(expvec), "c": format_scalar(coeff)}
            for expvec, coeff in poly.terms_sorted()
        ],
    }


def poly_from_json(obj: dict) -> DensePoly:
    n = int(obj["n"])
    coeffs: Dict[ExpVec, Scalar] = {}
    for term in obj["terms"]:
        expvec = tuple(int(e) for e in term["e"])
        if len(expvec) != n:
            raise ValueError(f"exponent vector {expvec} has wrong arity for n={n}")
        coeff = parse_scalar(term["c"])
        if not _zero_like(coeff):
            coeffs[expvec] = coeff
    return DensePoly(n, coeffs)


def iter_poly_values(poly: DensePoly, points: Sequence[Sequence[Scalar]]) -> Iterator[Scalar]:
    for point in points:
        yield poly.evaluate(point)
