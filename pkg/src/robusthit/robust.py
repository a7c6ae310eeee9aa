"""Robust hitting sets: verification, sampling, realification, demo.

A set H with parameter eps is robust for f when some point v in H has
|f(v)| >= eps * ||f||_2.  Everything is compared squared.  For complex f
the right-hand side uses the documented upper proxy

    ||f||_2^2  <=  2 (||Re f||_2^2 + ||Im f||_2^2),

so a point passing the squared check against the proxy is a sound witness
for the exact statement.

Interpolation at the imaginary unit: c_k = prod_{j != k} (i - j)/(k - j)
for nodes 0..r satisfies g(i) = sum c_k g(k) for every univariate g of
degree <= r.  Realifying a complex hitting set replaces a + i*b by the
r + 1 real points a + k*b and divides eps^2 by ((r+2)!)^2; soundness of
that exchange rests on ((r+2)!)^2 * max_k |f(a+kb)|^2 >= |f(a+i*b)|^2,
which check_realification_soundness verifies exactly on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .circuits import Circuit, CircuitBuilder
from .errors import DegenerateError, DimensionError
from .grids import GridSpec, GridVariant, Point
from .norms import complex_l2_pair, complex_norm_sq_upper, l2_norm_sq_direct
from .params import ParamBundle, n_hom
from .poly import DensePoly
from .scalars import GaussianRational, Scalar, abs_sq, format_scalar


@dataclass
class HittingSet:
    points: List[Point]
    eps_sq: Fraction
    domain: str = "real"                 # "real" | "complex"
    provenance: str = "loaded"           # "searched" | "sampled" | "loaded"

    def __post_init__(self) -> None:
        if self.eps_sq <= 0:
            raise ValueError(f"eps^2 must be positive, got {self.eps_sq}")

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "epsilon_sq": format_scalar(self.eps_sq),
            "provenance": self.provenance,
            "points": [[format_scalar(c) for c in p] for p in self.points],
        }


@dataclass(frozen=True)
class RobustResult:
    witness: Optional[int]               # index into the point list
    zero_polynomial: bool = False
    value_sq_at_witness: Optional[Fraction] = None
    threshold_sq: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        return self.zero_polynomial or self.witness is not None


def verify_robust(h: HittingSet, f: DensePoly) -> RobustResult:
    """First index i with |f(v_i)|^2 >= eps^2 ||f||_2^2 (proxy for complex)."""
    if f.is_zero():
        return RobustResult(witness=None, zero_polynomial=True)
    if h.domain == "real":
        if not f.is_real():
            raise DimensionError("real hitting set, complex polynomial")
        norm_sq = l2_norm_sq_direct(f)
    else:
        norm_sq = complex_norm_sq_upper(complex_l2_pair(f))
    threshold = h.eps_sq * norm_sq
    for i, point in enumerate(h.points):
        if len(point) != f.n:
            raise DimensionError(f"point {i} has {len(point)} coordinates, f has {f.n}")
        value_sq = abs_sq(f.evaluate(point))
        if value_sq >= threshold:
            return RobustResult(witness=i, value_sq_at_witness=value_sq, threshold_sq=threshold)
    return RobustResult(witness=None, threshold_sq=threshold)


def sample_candidate(params: ParamBundle, seed: int) -> HittingSet:
    """m uniform points from the complex grid; a candidate, not a certificate."""
    if params.m < 1:
        raise ValueError("candidate sets need m >= 1")
    grid = GridSpec(n=params.n, delta=params.delta, variant=GridVariant.COMPLEX)
    return HittingSet(
        points=grid.sample(seed, params.m),
        eps_sq=params.eps_alg**2,
        domain="complex",
        provenance="sampled",
    )


@dataclass(frozen=True)
class NetConditionReport:
    left_lhs: Fraction      # 100 eps^2 N
    left_rhs: Fraction      # (eta^2/64) 2^n 9^-r   (strengthened side)
    right_lhs: Fraction     # eta^2 2^n 4^-r
    right_rhs: Fraction     # 4
    left_ok: bool
    right_ok: bool

    @property
    def ok(self) -> bool:
        return self.left_ok and self.right_ok


def check_robust_net_condition(
    eps_net: Fraction, eta: Fraction, n: int, r: int
) -> NetConditionReport:
    """Squared, sound-direction form of the two-sided net condition

        10 eps sqrt(N) < (1/8) eta 2^(n/2) e^-r < 1/4.

    Left side: e^-2r is replaced by its rational lower bound 9^-r, which
    strengthens the requirement.  Right side: e^-2r <= 4^-r, so checking
    eta^2 2^n 4^-r < 4 certifies the true inequality.  Both margins are
    reported; callers treat a False as "condition not established".
    """
    eps_net, eta = Fraction(eps_net), Fraction(eta)
    big_n = n_hom(n, r)
    left_lhs = 100 * eps_net**2 * big_n
    left_rhs = eta**2 / 64 * Fraction(2**n, 9**r)
    right_lhs = eta**2 * Fraction(2**n, 4**r)
    return NetConditionReport(
        left_lhs=left_lhs,
        left_rhs=left_rhs,
        right_lhs=right_lhs,
        right_rhs=Fraction(4),
        left_ok=left_lhs < left_rhs,
        right_ok=right_lhs < Fraction(4),
    )


def paper_faithful_eps_net(n: int, r: int) -> Fraction:
    """(1/N^hom)^r, the net radius the sampling argument plugs in."""
    return Fraction(1, n_hom(n, r) ** r)


def interpolation_constants(r: int) -> List[GaussianRational]:
    """Lagrange weights through nodes 0..r evaluated at the imaginary unit."""
    if r < 0:
        raise ValueError(f"degree must be >= 0, got {r}")
    iota = GaussianRational(Fraction(0), Fraction(1))
    out: List[GaussianRational] = []
    for k in range(r + 1):
        value = GaussianRational(Fraction(1), Fraction(0))
        for j in range(r + 1):
            if j == k:
                continue
            value = (value * (iota - j)) * Fraction(1, k - j)
        out.append(value)
    return out


def interpolation_bound_sq(r: int) -> Fraction:
    """((r+1)!)^2, the crude per-constant modulus bound."""
    return Fraction(math.factorial(r + 1)) ** 2


def realification_factor_sq(r: int) -> Fraction:
    """((r+2)!)^2, the squared robustness loss of realify."""
    return Fraction(math.factorial(r + 2)) ** 2


def realify(h: HittingSet, r: int) -> HittingSet:
    """Replace each a + i*b by the line points a + k*b, k = 0..r.

    Duplicates are kept, so the result has exactly (r+1)|H| points and
    eps^2 shrinks by ((r+2)!)^2.
    """
    if h.domain != "complex":
        raise ValueError("realify expects a complex hitting set")
    points: List[Point] = []
    for point in h.points:
        parts = [(c.re, c.im) if isinstance(c, GaussianRational) else (Fraction(c), Fraction(0))
                 for c in point]
        for k in range(r + 1):
            points.append(tuple(a + k * b for a, b in parts))
    return HittingSet(
        points=points,
        eps_sq=h.eps_sq / realification_factor_sq(r),
        domain="real",
        provenance=h.provenance,
    )


def check_realification_soundness(
    f: DensePoly, point: Sequence[GaussianRational]
) -> tuple[Fraction, Fraction]:
    """(lhs, rhs) with lhs >= rhs sound to assert:

        ((r+2)!)^2 * max_k |f(a + k b)|^2  >=  |f(a + i b)|^2.

    Follows from writing f(a + i b) as the degree-<=r interpolation along
    the line a + t b and bounding |sum c_k g(k)| by (r+1) max|c_k| max|g(k)|,
    with (r+1)^2 ((r+1)!)^2 <= ((r+2)!)^2.
    """
    r = f.total_degree()
    parts = [(c.re, c.im) if isinstance(c, GaussianRational) else (Fraction(c), Fraction(0))
             for c in point]
    max_line_sq = Fraction(0)
    for k in range(r + 1):
        real_pt = [a + k * b for a, b in parts]
        max_line_sq = max(max_line_sq, abs_sq(f.evaluate(real_pt)))
    complex_value_sq = abs_sq(f.evaluate(list(point)))
    return realification_factor_sq(r) * max_line_sq, complex_value_sq


def build_tensor_circuit() -> Circuit:
    """x0 y0 z0 + (x1 y0 + x0 y1) z1 over variables (x0, x1, y0, y1, z0, z1)."""
    b = CircuitBuilder(6)
    x0, x1, y0, y1, z0, z1 = (b.input(i) for i in range(6))
    first = b.mul(b.mul(x0, y0), z0)
    second = b.mul(b.add(b.mul(x1, y0), b.mul(x0, y1)), z1)
    return b.finish(b.add(first, second), homogeneous=True)


def build_tensor_approx_circuit(eps: Fraction) -> Circuit:
    """(1/eps)(x0 + eps x1)(y0 + eps y1) z1 + x0 y0 (z0 - (1/eps) z1).

    Equals the rank-3 tensor plus eps * x1 y1 z1; at eps -> 0 the family
    degenerates to the tensor itself while every member is a sum of just
    two products of linear forms.
    """
    eps = Fraction(eps)
    if eps == 0:
        raise DegenerateError("eps must be nonzero")
    b = CircuitBuilder(6)
    x0, x1, y0, y1, z0, z1 = (b.input(i) for i in range(6))
    inv = b.const(1 / eps)
    neg_inv = b.const(-1 / eps)
    left = b.mul(
        b.mul(b.add(x0, b.mul(b.const(eps), x1)), b.add(y0, b.mul(b.const(eps), y1))),
        b.mul(inv, z1),
    )
    right = b.mul(b.mul(x0, y0), b.add(z0, b.mul(neg_inv, z1)))
    return b.finish(b.add(left, right), homogeneous=True)


TENSOR_BAD_POINT: tuple[Fraction, ...] = tuple(
    Fraction(v) for v in (0, 1, 0, 1, 0, 1)
)
TENSOR_GOOD_POINT: tuple[Fraction, ...] = tuple(
    Fraction(v) for v in (1, 0, 1, 0, 1, 0)
)


@dataclass
class TensorDemoReport:
    eps_schedule: List[Fraction]
    values_at_bad_point: List[Fraction]
    limit_value_at_bad_point: Fraction
    limit_value_at_good_point: Fraction
    hitting_set: HittingSet
    witnesses: List[Optional[int]]       # per schedule entry, then the limit last
    norms_sq: List[Fraction]

    @property
    def ok(self) -> bool:
        return all(w is not None for w in self.witnesses)


def tensor_limit_demo(eps_schedule: Sequence[Fraction]) -> TensorDemoReport:
    """The degeneration walkthrough: the family value at the bad point is
    exactly eps (so the single bad point stops hitting in the limit), yet
    one well-chosen point set with eps' = 1 is robust for every family
    member and for the limit simultaneously."""
    from .poly import expand_circuit

    schedule = [Fraction(e) for e in eps_schedule]
    limit_poly = expand_circuit(build_tensor_circuit())
    h = HittingSet(points=[TENSOR_GOOD_POINT], eps_sq=Fraction(1), domain="real",
                   provenance="loaded")

    values: List[Fraction] = []
    witnesses: List[Optional[int]] = []
    norms: List[Fraction] = []
    for eps in schedule:
        poly = expand_circuit(build_tensor_approx_circuit(eps))
        values.append(Fraction(poly.evaluate(TENSOR_BAD_POINT)))
        witnesses.append(verify_robust(h, poly).witness)
        norms.append(l2_norm_sq_direct(poly))
    witnesses.append(verify_robust(h, limit_poly).witness)
    norms.append(l2_norm_sq_direct(limit_poly))

    return TensorDemoReport(
        eps_schedule=schedule,
        values_at_bad_point=values,
        limit_value_at_bad_point=Fraction(limit_poly.evaluate(TENSOR_BAD_POINT)),
        limit_value_at_good_point=Fraction(limit_poly.evaluate(TENSOR_GOOD_POINT)),
        hitting_set=h,
        witnesses=witnesses,
        norms_sq=norms,
    )


def hitting_set_from_json(obj: dict) -> HittingSet:
    """Inverse of HittingSet.to_json."""
    from .scalars import as_real, parse_scalar

    return HittingSet(
        points=[tuple(parse_scalar(c) for c in p) for p in obj["points"]],
        eps_sq=as_real(parse_scalar(obj["epsilon_sq"])),
        domain=obj.get("domain", "real"),
        provenance=obj.get("provenance", "loaded"),
    )
