"""Evaluation grids on the box and their enumeration/sampling.

Three variants share one axis set {-1, -1+delta, ..., 1-delta} of size
q = 2/delta (1/delta must be a positive integer):

  REAL       points in R^n, lexicographic coordinate-major order
  COMPLEX    pairs (a, b) read as a + i*b, ordered a-major then b
  REALIFIED  real points a + k*b for 0 <= k <= extension_degree, ordered
             (a-index, b-index, k); enumerated with multiplicity because
             the defining map is not injective

Sampling uses random.Random seeded with a 64-bit value; worker streams
derive their seeds with derive_seed(master, label, index), which hashes
"{master}:{label}:{index}" with SHA-256 and keeps the top 8 bytes.  Same
seed, same stream; that is the whole determinism contract.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import BudgetError, RangeError
from .norms import l2_norm_sq_direct
from .poly import DensePoly
from .scalars import GaussianRational, Scalar

RealPoint = tuple[Fraction, ...]
Point = tuple[Scalar, ...]


def derive_seed(master: int, label: str, index: int = 0) -> int:
    digest = hashlib.sha256(f"{master}:{label}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class GridVariant(Enum):
    REAL = "real"
    COMPLEX = "complex"
    REALIFIED = "realified"


def _check_delta(delta: Fraction) -> int:
    delta = Fraction(delta)
    if delta <= 0 or (1 / delta).denominator != 1:
        raise ValueError(f"1/delta must be a positive integer, got delta={delta}")
    return int(2 / delta)


@dataclass(frozen=True)
class GridSpec:
    n: int
    delta: Fraction
    variant: GridVariant = GridVariant.REAL
    extension_degree: int = 0   # only meaningful for REALIFIED

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", Fraction(self.delta))
        _check_delta(self.delta)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.variant is GridVariant.REALIFIED and self.extension_degree < 0:
            raise ValueError("extension_degree must be >= 0")

    @property
    def q(self) -> int:
        """Axis size 2/delta."""
        return _check_delta(self.delta)

    def axis(self) -> list[Fraction]:
        return [Fraction(-1) + k * self.delta for k in range(self.q)]

    def size(self) -> int:
        if self.variant is GridVariant.REAL:
            return self.q**self.n
        if self.variant is GridVariant.COMPLEX:
            return self.q ** (2 * self.n)
        return (self.extension_degree + 1) * self.q ** (2 * self.n)

    def point_at(self, index: int) -> Point:
        """The index-th point in the documented enumeration order."""
        if not 0 <= index < self.size():
            raise RangeError(f"index {index} outside grid of size {self.size()}")
        axis = self.axis()
        if self.variant is GridVariant.REAL:
            return tuple(axis[d] for d in _digits(index, self.q, self.n))
        if self.variant is GridVariant.COMPLEX:
            digits = _digits(index, self.q, 2 * self.n)
            return tuple(
                GaussianRational(axis[digits[i]], axis[digits[self.n + i]])
                for i in range(self.n)
            )
        k = index % (self.extension_degree + 1)
        digits = _digits(index // (self.extension_degree + 1), self.q, 2 * self.n)
        a = [axis[d] for d in digits[: self.n]]
        b = [axis[d] for d in digits[self.n :]]
        return tuple(a_i + k * b_i for a_i, b_i in zip(a, b))

    def iter_points(self) -> Iterator[Point]:
        """All points in enumeration order (streaming; no budget check)."""
        axis = self.axis()
        if self.variant is GridVariant.REAL:
            yield from itertools.product(axis, repeat=self.n)
            return
        if self.variant is GridVariant.COMPLEX:
            for ab in itertools.product(axis, repeat=2 * self.n):
                yield tuple(
                    GaussianRational(ab[i], ab[self.n + i]) for i in range(self.n)
                )
            return
        for ab in itertools.product(axis, repeat=2 * self.n):
            a, b = ab[: self.n], ab[self.n :]
            for k in range(self.extension_degree + 1):
                yield tuple(a_i + k * b_i for a_i, b_i in zip(a, b))

    def enumerate_points(self, start: int, count: int) -> list[Point]:
        if start < 0 or count < 0 or start + count > self.size():
            raise RangeError(
                f"range [{start}, {start + count}) outside grid of size {self.size()}"
            )
        return [self.point_at(i) for i in range(start, start + count)]

    def sample(self, seed: int, count: int) -> list[Point]:
        """count i.i.d. uniform points; per-point draw order is documented
        as coordinate order, with (a, b, k) for the realified variant."""
        rng = random.Random(seed)
        axis = self.axis()
        out: list[Point] = []
        for _ in range(count):
            if self.variant is GridVariant.REAL:
                out.append(tuple(axis[rng.randrange(self.q)] for _ in range(self.n)))
            elif self.variant is GridVariant.COMPLEX:
                out.append(
                    tuple(
                        GaussianRational(
                            axis[rng.randrange(self.q)], axis[rng.randrange(self.q)]
                        )
                        for _ in range(self.n)
                    )
                )
            else:
                a = [axis[rng.randrange(self.q)] for _ in range(self.n)]
                b = [axis[rng.randrange(self.q)] for _ in range(self.n)]
                k = rng.randrange(self.extension_degree + 1)
                out.append(tuple(a_i + k * b_i for a_i, b_i in zip(a, b)))
        return out

    def to_json(self) -> dict:
        obj = {"n": self.n, "delta": str(self.delta), "variant": self.variant.value}
        if self.variant is GridVariant.REALIFIED:
            obj["extension_degree"] = self.extension_degree
        return obj


def _digits(index: int, base: int, width: int) -> list[int]:
    out = [0] * width
    for pos in range(width - 1, -1, -1):
        index, out[pos] = divmod(index, base)
    return out


def round_to_grid(point: Sequence[Fraction], delta: Fraction) -> RealPoint:
    """Floor each coordinate to the grid: largest multiple of delta <= v_i.

    Coordinates must lie in [-1, 1); the image is then a grid point.
    """
    delta = Fraction(delta)
    _check_delta(delta)
    out = []
    for v in point:
        v = Fraction(v)
        if not (Fraction(-1) <= v < Fraction(1)):
            raise RangeError(f"coordinate {v} outside [-1, 1)")
        out.append((v / delta).__floor__() * delta)
    return tuple(out)


def rounding_shift_factor(n: int, r: int) -> Fraction:
    """Provable Lipschitz-style constant K(n, r) with

        |f(v) - f(round(v))| <= delta * K(n, r) * ||f||_2

    for real homogeneous f of degree r.  Chain: mean value theorem, the
    gradient bound extended from the unit ball to the box by homogeneity
    (costing n^ceil(r/2) together with ||u - v|| <= delta*sqrt(n)), and the
    sup-to-L2 comparison with the inscribed-cube volume bound.
    """
    if r == 0:
        return Fraction(0)   # constants do not move under rounding
    return Fraction(2 * r**2 * n ** ((r + 1) // 2) * 2 ** (2 * n + 2) * (4 * n * r**2) ** n)


def nominal_shift_factor(n: int, r: int) -> Fraction:
    """(8 n r^2)^(n+1): the headline constant; its usual derivation applies
    the unit-ball gradient bound on the whole box, so it is reported and
    compared against but not asserted."""
    return Fraction((8 * n * r**2) ** (n + 1))


def nominal_shift_factor_complex(n: int, r: int) -> Fraction:
    """(16 n r^2)^(2n+1): the complex-grid counterpart (2n real variables)."""
    return Fraction((16 * n * r**2) ** (2 * n + 1))


@dataclass(frozen=True)
class RoundingCheck:
    diff_sq: Fraction
    bound_provable_sq: Fraction
    bound_nominal_sq: Fraction

    @property
    def provable_holds(self) -> bool:
        return self.diff_sq <= self.bound_provable_sq

    @property
    def nominal_holds(self) -> bool:
        return self.diff_sq <= self.bound_nominal_sq


def check_rounding_continuity(
    poly: DensePoly, point: Sequence[Fraction], delta: Fraction
) -> RoundingCheck:
    """Exact rounding-continuity data for one (f, v) pair.

    The provable bound uses rounding_shift_factor and is safe to assert;
    the nominal bound is informational (see rounding_shift_factor).
    """
    degree = poly.homogeneous_degree()
    if degree is None:
        raise ValueError("continuity bound is stated for homogeneous polynomials")
    rounded = round_to_grid(point, delta)
    diff = poly.evaluate(list(point)) - poly.evaluate(list(rounded))
    diff_sq = Fraction(diff) ** 2
    norm_sq = l2_norm_sq_direct(poly)
    delta = Fraction(delta)
    k_prov = rounding_shift_factor(poly.n, degree)
    k_nom = nominal_shift_factor(poly.n, degree)
    return RoundingCheck(
        diff_sq=diff_sq,
        bound_provable_sq=delta**2 * k_prov**2 * norm_sq,
        bound_nominal_sq=delta**2 * k_nom**2 * norm_sq,
    )
