"""Extracting a low-degree polynomial that vanishes on a hitting set.

Once the homogeneous monomial count exceeds the number of points, the
evaluation matrix has a nontrivial nullspace and any nullspace vector is
a nonzero witness polynomial.  Everything is exact Fraction arithmetic;
the witness is pinned down by a documented deterministic tie-break so
identical inputs always produce identical output.

The companion query asks the solver whether any admissible circuit
assignment computes a nonzero multiple of the witness.  Matching
coefficients of the symbolically expanded skeleton turns that into a
system over the auxiliary weights plus one proportionality unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetError, DimensionError, InfeasibleError
from .etr import EQ0, GT0, Atom, ETRFormula, Term, encode_psi
from .poly import DensePoly, ExpVec, expand_circuit, group_by_prefix, monomials_of_degree
from .robust import HittingSet
from .scalars import GaussianRational, Scalar, as_real
from .universal import UniversalCircuit


def choose_degree(h_size: int, n: int) -> int:
    """Smallest d with more degree-d monomials in n variables than points."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if h_size < 0:
        raise ValueError(f"need a nonnegative point count, got {h_size}")
    if n == 1 and h_size >= 1:
        raise InfeasibleError(
            "one variable has a single monomial per degree; "
            f"no degree gives more than {h_size} of them"
        )
    d = 0
    while comb(n + d - 1, d) <= h_size:
        d += 1
    return d


@dataclass
class LinearSystem:
    """Point-evaluation matrix over the degree-d monomial basis."""

    matrix: List[List[Fraction]]         # rows = points, columns = monomials
    columns: List[ExpVec]                # descending lexicographic order
    rank: int
    pivot_columns: List[int]
    rref: List[List[Fraction]]

    @property
    def free_columns(self) -> List[int]:
        pivots = set(self.pivot_columns)
        return [j for j in range(len(self.columns)) if j not in pivots]

    def nullspace_vector(self, free_column: int) -> List[Fraction]:
        """Kernel vector with 1 at `free_column` and 0 at other free columns."""
        if free_column in self.pivot_columns:
            raise ValueError(f"column {free_column} is a pivot")
        vec = [Fraction(0)] * len(self.columns)
        vec[free_column] = Fraction(1)
        for row, pivot in zip(self.rref, self.pivot_columns):
            vec[pivot] = -row[free_column]
        return vec


def _rref(matrix: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [list(row) for row in matrix]
    pivots: List[int] = []
    lead = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot_row = next((i for i in range(lead, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
        scale = rows[lead][col]
        rows[lead] = [x / scale for x in rows[lead]]
        for i, row in enumerate(rows):
            if i != lead and row[col] != 0:
                factor = row[col]
                rows[i] = [x - factor * y for x, y in zip(row, rows[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return [rows[i] for i in range(len(pivots))], pivots


def _real_point(point: Sequence[Scalar]) -> List[Fraction]:
    return [as_real(c) if isinstance(c, GaussianRational) else Fraction(c) for c in point]


def build_system(points: Sequence[Sequence[Scalar]], n: int, degree: int) -> LinearSystem:
    columns = monomials_of_degree(n, degree)
    matrix: List[List[Fraction]] = []
    for point in points:
        coords = _real_point(point)
        if len(coords) != n:
            raise DimensionError(f"point has {len(coords)} coordinates, expected {n}")
        row = []
        for expvec in columns:
            value = Fraction(1)
            for coord, e in zip(coords, expvec):
                value *= coord**e
            row.append(value)
        matrix.append(row)
    rref, pivots = _rref(matrix) if matrix else ([], [])
    return LinearSystem(matrix, columns, len(pivots), pivots, rref)


def extract_hard_poly(
    h: HittingSet, n: Optional[int] = None, degree: Optional[int] = None
) -> DensePoly:
    """Nonzero homogeneous polynomial vanishing on every point of h.

    Tie-break: among kernel vectors, take the one with coefficient 1 at
    the first free column (descending lexicographic monomial order) and 0
    at the other free columns, then flip signs if needed so the leading
    nonzero coefficient is positive.
    """
    if h.domain != "real":
        raise ValueError("hard-polynomial extraction expects real points")
    if n is None:
        if not h.points:
            raise DimensionError("empty point set needs an explicit variable count")
        n = len(h.points[0])
    if degree is None:
        degree = choose_degree(len(h.points), n)
    system = build_system(h.points, n, degree)
    free = system.free_columns
    if not free:
        raise InfeasibleError(
            f"no nonzero degree-{degree} polynomial vanishes on all "
            f"{len(h.points)} points (full column rank)"
        )
    vec = system.nullspace_vector(free[0])
    leading = next(c for c in vec if c != 0)
    if leading < 0:
        vec = [-c for c in vec]
    poly = DensePoly.from_terms(
        n, [(e, c) for e, c in zip(system.columns, vec) if c != 0]
    )
    for point in h.points:
        if poly.evaluate(_real_point(point)) != 0:
            raise AssertionError(f"extracted polynomial does not vanish at {point}")
    if poly.is_zero():
        raise AssertionError("extracted polynomial is zero")
    return poly


def _y_names(expvec: ExpVec) -> Tuple[str, ...]:
    names: List[str] = []
    for j, e in enumerate(expvec):
        names.extend([f"y{j}"] * e)
    return tuple(names)


def encode_proportionality_query(
    u: UniversalCircuit,
    f: DensePoly,
    include_admissibility: bool = True,
    cost_cap: int = 100_000,
) -> ETRFormula:
    """Can the skeleton compute t*f for some real t with t != 0?

    Expands the skeleton symbolically over the essential variables, with
    each coefficient a polynomial in the auxiliary weights, and equates it
    with t times the target coefficient, monomial by monomial.  With
    `include_admissibility` the assignment must also reach sup-norm 1 on
    the box, matching the family the search quantifies over.  Unsat means
    no family member is even proportional to f.
    """
    if f.n != u.n_essential:
        raise DimensionError(f"target has {f.n} variables, skeleton {u.n_essential}")
    if not f.is_real():
        raise ValueError("target polynomial must be real")
    total_degree = u.circuit.formal_degrees()[u.circuit.output] or 0
    estimate = comb(u.n_essential + u.m_auxiliary + total_degree - 1, total_degree)
    if estimate > cost_cap:
        raise BudgetError(
            f"symbolic expansion could reach {estimate} monomials, over cap {cost_cap}"
        )

    expanded = expand_circuit(u.circuit)
    by_x = group_by_prefix(expanded, u.n_essential)
    support = sorted(set(by_x) | set(f.coeffs), reverse=True)

    variables = [f"y{j}" for j in range(u.m_auxiliary)] + ["t"]
    atoms: List[Atom] = []
    for expvec in support:
        terms: List[Term] = []
        coeff_poly = by_x.get(expvec)
        if coeff_poly is not None:
            for y_exp, value in coeff_poly.terms_sorted():
                terms.append((as_real(value) if isinstance(value, GaussianRational)
                              else Fraction(value), _y_names(y_exp)))
        target = f.coeffs.get(expvec, Fraction(0))
        if target != 0:
            terms.append((-Fraction(target), ("t",)))
        label = "match:" + "".join(str(e) for e in expvec)
        atoms.append(Atom(tuple(terms), EQ0, label=label))
    atoms.append(Atom(((Fraction(1), ("t", "t")),), GT0, label="t!=0"))

    if include_admissibility:
        psi = encode_psi(u, aux_values=None, prefix="p")
        for name in psi.variables:
            if name not in variables:
                variables.append(name)
        atoms.extend(psi.atoms)
    formula = ETRFormula(variables, atoms)
    formula.validate()
    return formula
