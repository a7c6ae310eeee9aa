"""L2 and sup-norm machinery on the box [-1, 1]^n.

All integrals are against the uniform probability measure, so the constant
polynomial 1 has L2 norm 1.  Comparisons are performed on squared norms to
stay inside Q; nothing here ever takes a square root.

Two independent routes compute ||f||_2^2 (termwise monomial integration
and the Legendre route); they must agree exactly and the test suite checks
that on a seeded corpus.  The inequality checker asserts only bounds with
a complete derivation: where a nominal constant is not provable under the
probability normalization, the checker reports its margin without
asserting it and asserts a documented sound replacement instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BudgetError, DimensionError
from .legendre import legendre_weight, to_legendre, top_degree_factor
from .poly import DensePoly, ExpVec, realify_poly
from .scalars import GaussianRational, Scalar, abs_sq


def integrate_monomial(expvec: ExpVec) -> Fraction:
    """E[x^e] under the uniform probability measure: prod 1/(e_i+1), odd -> 0."""
    value = Fraction(1)
    for e in expvec:
        if e % 2 == 1:
            return Fraction(0)
        value *= Fraction(1, e + 1)
    return value


def integrate_poly(poly: DensePoly) -> Fraction:
    total = Fraction(0)
    for expvec, coeff in poly.coeffs.items():
        w = integrate_monomial(expvec)
        if w == 0:
            continue
        if isinstance(coeff, GaussianRational):
            if coeff.im != 0:
                raise ValueError("integration over a real box needs real coefficients")
            coeff = coeff.re
        total += coeff * w
    return total


def l2_norm_sq_direct(poly: DensePoly) -> Fraction:
    """||f||_2^2 by expanding f*f and integrating each monomial."""
    return integrate_poly(poly * poly)


def l2_norm_sq_legendre(poly: DensePoly) -> Fraction:
    """||f||_2^2 as sum of squared Legendre coefficients times basis weights."""
    total = Fraction(0)
    for index, coeff in to_legendre(poly).items():
        total += coeff * coeff * legendre_weight(index)
    return total


def complex_l2_pair(poly: DensePoly) -> tuple[Fraction, Fraction]:
    """(||Re f||_2^2, ||Im f||_2^2) of the 2n-variable real/imaginary parts.

    The norm of a complex polynomial is defined as ||Re f||_2 + ||Im f||_2;
    that sum of square roots leaves Q, so callers work with this pair and
    the one-sided proxies below.
    """
    re_part, im_part = realify_poly(poly)
    return l2_norm_sq_direct(re_part), l2_norm_sq_direct(im_part)


def complex_norm_sq_upper(pair: tuple[Fraction, Fraction]) -> Fraction:
    """Upper proxy for (||Re||+||Im||)^2: 2(a+b) with a, b the squared norms."""
    return 2 * (pair[0] + pair[1])


def complex_norm_sq_lower(pair: tuple[Fraction, Fraction]) -> Fraction:
    """Lower proxy for (||Re||+||Im||)^2: a + b."""
    return pair[0] + pair[1]


def coeff_vector_norm_sq(poly: DensePoly) -> Fraction:
    """Squared Euclidean norm of the coefficient vector; complex moduli squared."""
    return sum((abs_sq(c) for c in poly.coeffs.values()), Fraction(0))


def coeff_abs_sum(poly: DensePoly) -> Fraction:
    """Sum of |coefficients| for a real polynomial (an upper bound route
    for the sup norm on the box)."""
    total = Fraction(0)
    for coeff in poly.coeffs.values():
        if isinstance(coeff, GaussianRational):
            if coeff.im != 0:
                raise ValueError("absolute coefficient sum needs real coefficients")
            coeff = coeff.re
        total += abs(coeff)
    return total


def max_abs_coeff_entry(poly: DensePoly) -> Optional[tuple[ExpVec, Fraction]]:
    """Exponent vector and |c|^2 of the largest-modulus coefficient.

    Ties break toward the lexicographically largest exponent vector so the
    answer is deterministic.  None for the zero polynomial.
    """
    best: Optional[tuple[ExpVec, Fraction]] = None
    for expvec, coeff in sorted(poly.coeffs.items()):
        c_sq = abs_sq(coeff)
        if best is None or c_sq >= best[1]:
            best = (expvec, c_sq)
    return best


def sup_norm_grid_lower_sq(
    poly: DensePoly, delta: Fraction, max_points: int = 4_000_000
) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Max of |f(v)|^2 over the grid with step delta, plus the argmax point.

    A certified lower bound for ||f||_inf^2.  The scan order is the grid's
    lexicographic enumeration and ties keep the earliest point, so the
    witness is deterministic.
    """
    from .grids import GridSpec, GridVariant

    grid = GridSpec(n=poly.n, delta=delta, variant=GridVariant.REAL)
    size = grid.size()
    if size > max_points:
        raise BudgetError(f"grid has {size} points, budget is {max_points}")
    best = Fraction(0)
    witness: tuple[Fraction, ...] = tuple(Fraction(-1) for _ in range(poly.n))
    for point in grid.iter_points():
        value_sq = abs_sq(poly.evaluate(point))
        if value_sq > best:
            best = value_sq
            witness = point
    return best, witness


def gradient_at(poly: DensePoly, point: Sequence[Fraction]) -> list[Scalar]:
    if len(point) != poly.n:
        raise DimensionError(f"point has {len(point)} coordinates, poly has {poly.n}")
    return [g.evaluate(point) for g in poly.gradient()]


def gradient_norm_sq_bound(poly: DensePoly) -> Fraction:
    """4 r^4 S ||f_vec||^2: bound on ||grad f(v)||^2 valid whenever ||v|| <= 1.

    Chains the gradient bound for box-bounded homogeneous polynomials with
    the coefficient upper bound ||f||_inf <= sqrt(S) ||f_vec||.
    """
    r = poly.total_degree()
    s_monomials = poly.support_size()
    return Fraction(4) * r**4 * s_monomials * coeff_vector_norm_sq(poly)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: Fraction     # must be <= rhs when asserted
    rhs: Fraction
    asserted: bool

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs


@dataclass
class NormReport:
    n: int
    degree: int
    l2_sq: Fraction
    grid_lower_sq: Fraction
    grid_witness: tuple[Fraction, ...]
    coeff_norm_sq: Fraction
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks if c.asserted)

    def failures(self) -> list[InequalityCheck]:
        return [c for c in self.checks if c.asserted and not c.holds]


def box_norm_comparison_factor_sq(n: int, r: int) -> Fraction:
    """Squared constant relating sup and L2 norms of homogeneous degree-r f:

        ||f||_2^2 >= ||f||_inf^2 * [(1/2^(2n+2)) * (1/(4 r^2 n))^n]^2.

    The ball-volume factor is replaced by the inscribed-cube lower bound
    (rho/n)^n, which only weakens the inequality.  Degree 0 gets factor 1
    (constants have equal norms).
    """
    if r == 0:
        return Fraction(1)
    base = Fraction(1, 2 ** (2 * n + 2)) * Fraction(1, (4 * r**2 * n) ** n)
    return base * base


def coeff_lower_bound_sq(alpha_sq: Fraction, r: int) -> Fraction:
    """Sound form of the largest-coefficient norm bound: alpha^2 / 12^r.

    Combines the top-degree Legendre identity (whose per-index factor is at
    least 2^-r) with prod(2 e_i + 1) <= 3^r.
    """
    return alpha_sq * Fraction(1, 12**r)


def coeff_lower_bound_nominal_sq(alpha_sq: Fraction, n: int, r: int) -> Fraction:
    """alpha^2 * 2^n * 3^(-2r): reported for comparison, never asserted.

    This shape arises from the unnormalized-measure reading of the basis
    weights; under the probability measure used here it can exceed
    ||f||_2^2 (e.g. a single variable in n = 3), so it is observational.
    """
    return alpha_sq * Fraction(2**n, 9**r)


def check_norm_inequalities(poly: DensePoly, delta: Fraction) -> NormReport:
    """Evaluate the norm-comparison chain for a real homogeneous polynomial.

    Asserted checks (violations are hard failures):
      grid_to_l2     grid max^2 * factor^2 <= ||f||_2^2
      l2_to_abs_sum  ||f||_2^2 <= (sum |c|)^2
      abs_sum_to_vec (sum |c|)^2 <= S * ||f_vec||^2
      coeff_lower    alpha^2 / 12^r <= ||f||_2^2
      coeff_exact    l_e*^2 * prod 1/(2 e_i + 1) <= ||f||_2^2  (single basis term)

    Reported only: coeff_nominal with the 2^n * 3^(-2r) shape.
    """
    degree = poly.homogeneous_degree()
    if degree is None:
        raise ValueError("inequality chain is stated for homogeneous polynomials")
    if not poly.is_real():
        raise ValueError("inequality chain is stated for real polynomials")

    l2_sq = l2_norm_sq_direct(poly)
    glb_sq, witness = sup_norm_grid_lower_sq(poly, delta)
    vec_sq = coeff_vector_norm_sq(poly)
    abs_sum = coeff_abs_sum(poly)
    s_monomials = poly.support_size()

    checks = [
        InequalityCheck(
            "grid_to_l2",
            glb_sq * box_norm_comparison_factor_sq(poly.n, degree),
            l2_sq,
            asserted=True,
        ),
        InequalityCheck("l2_to_abs_sum", l2_sq, abs_sum * abs_sum, asserted=True),
        InequalityCheck(
            "abs_sum_to_vec", abs_sum * abs_sum, Fraction(s_monomials) * vec_sq, asserted=True
        ),
    ]

    top = max_abs_coeff_entry(poly)
    if top is not None:
        expvec, alpha_sq = top
        checks.append(
            InequalityCheck("coeff_lower", coeff_lower_bound_sq(alpha_sq, degree), l2_sq, asserted=True)
        )
        factor = top_degree_factor(expvec)
        checks.append(
            InequalityCheck(
                "coeff_exact",
                alpha_sq * factor * factor * legendre_weight(expvec),
                l2_sq,
                asserted=True,
            )
        )
        checks.append(
            InequalityCheck(
                "coeff_nominal",
                coeff_lower_bound_nominal_sq(alpha_sq, poly.n, degree),
                l2_sq,
                asserted=False,
            )
        )

    return NormReport(
        n=poly.n,
        degree=degree,
        l2_sq=l2_sq,
        grid_lower_sq=glb_sq,
        grid_witness=witness,
        coeff_norm_sq=vec_sq,
        checks=checks,
    )
