"""Derived parameters for the hitting-set machinery, as exact rationals.

Every quantity a run needs is computed here from (n, s, r) plus the
configurable constants, and every field can be overridden for toy-scale
experiments; overrides are recorded so manifests stay honest.  Defaults:

  anticoncentration constant c_cw   2      (unknown in theory; fitted/falsified)
  size exponent          c_size     1      set size m = (n*s*r)^c_size
  variety exponent       c_var      1      dimension/degree bounds (s*r*n)^c_var

The driving threshold eta is 2^-n / (20 (c_cw n r^2)^r); an alternate,
easier variant 2^-n / (2 (c_cw n r)^r) is reported alongside because both
shapes appear in the derivation chain.  The grid step is eta divided by
the complex rounding-shift constant, then rounded down so 1/delta is an
integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from .grids import nominal_shift_factor_complex
from .scalars import format_rational


def n_hom(n: int, r: int) -> int:
    """Count of degree-r monomials in n variables, C(n+r-1, r)."""
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    return math.comb(n + r - 1, r)


@dataclass(frozen=True)
class ParamBundle:
    n: int
    s: int
    r: int
    c_cw: Fraction
    c_size: int
    c_var: int
    n_hom: int
    eta: Fraction
    eta_easy: Fraction
    delta_raw: Fraction
    delta: Fraction
    eps_alg: Fraction
    m: int
    d_bound: int
    log2_d_bound: int
    overrides: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "r": self.r,
            "c_cw": format_rational(self.c_cw),
            "c_size": self.c_size,
            "c_var": self.c_var,
            "n_hom": self.n_hom,
            "eta": format_rational(self.eta),
            "eta_easy": format_rational(self.eta_easy),
            "delta_raw": format_rational(self.delta_raw),
            "delta": format_rational(self.delta),
            "eps_alg": format_rational(self.eps_alg),
            "m": self.m,
            "d_bound": self.d_bound,
            "log2_d_bound": self.log2_d_bound,
            "overrides": dict(self.overrides),
        }


def _unit_fraction_floor(x: Fraction) -> Fraction:
    """Largest 1/k <= x with integer k; rounding down only strengthens the
    statements that consume delta."""
    if x <= 0:
        raise ValueError(f"expected a positive value, got {x}")
    return Fraction(1, math.ceil(1 / x))


def compute_params(
    n: int,
    s: int,
    r: int,
    c_cw: Fraction | int = Fraction(2),
    c_size: int = 1,
    c_var: int = 1,
    overrides: Optional[Dict[str, Any]] = None,
) -> ParamBundle:
    """Evaluate the whole parameter chain exactly.

    overrides maps field names (eta, delta, eps_alg, m, d_bound,
    log2_d_bound) to replacement values applied after the formula pass;
    delta overrides must keep 1/delta integral.
    """
    if min(n, s, r) < 1:
        raise ValueError(f"n, s, r must all be >= 1, got ({n}, {s}, {r})")
    c_cw = Fraction(c_cw)
    if c_cw <= 0:
        raise ValueError("c_cw must be positive")

    eta = Fraction(1, 2**n) / (20 * (c_cw * n * r**2) ** r)
    eta_easy = Fraction(1, 2**n) / (2 * (c_cw * n * r) ** r)

    applied: Dict[str, str] = {}
    if overrides:
        if "eta" in overrides:
            eta = Fraction(overrides["eta"])
            applied["eta"] = str(eta)

    delta_raw = eta / nominal_shift_factor_complex(n, r)
    delta = _unit_fraction_floor(delta_raw)
    eps_alg = Fraction(1, 4) * eta * Fraction(1, (32 * n * r**2) ** n)
    m = (n * s * r) ** c_size
    d_bound = (s * r * n) ** c_var
    log2_d_bound = (s * r * n) ** c_var

    if overrides:
        for key in ("delta", "eps_alg"):
            if key in overrides:
                value = Fraction(overrides[key])
                applied[key] = str(value)
                if key == "delta":
                    if value <= 0 or (1 / value).denominator != 1:
                        raise ValueError(f"override delta={value} is not a unit fraction")
                    delta = value
                else:
                    eps_alg = value
        for key in ("m", "d_bound", "log2_d_bound"):
            if key in overrides:
                value = int(overrides[key])
                applied[key] = str(value)
                if key == "m":
                    m = value
                elif key == "d_bound":
                    d_bound = value
                else:
                    log2_d_bound = value

    return ParamBundle(
        n=n,
        s=s,
        r=r,
        c_cw=c_cw,
        c_size=c_size,
        c_var=c_var,
        n_hom=n_hom(n, r),
        eta=eta,
        eta_easy=eta_easy,
        delta_raw=delta_raw,
        delta=delta,
        eps_alg=eps_alg,
        m=m,
        d_bound=d_bound,
        log2_d_bound=log2_d_bound,
        overrides=applied,
    )


def bundle_from_json(obj: Dict[str, Any]) -> ParamBundle:
    """Inverse of ParamBundle.to_json."""
    return ParamBundle(
        n=int(obj["n"]),
        s=int(obj["s"]),
        r=int(obj["r"]),
        c_cw=Fraction(obj["c_cw"]),
        c_size=int(obj["c_size"]),
        c_var=int(obj["c_var"]),
        n_hom=int(obj["n_hom"]),
        eta=Fraction(obj["eta"]),
        eta_easy=Fraction(obj["eta_easy"]),
        delta_raw=Fraction(obj["delta_raw"]),
        delta=Fraction(obj["delta"]),
        eps_alg=Fraction(obj["eps_alg"]),
        m=int(obj["m"]),
        d_bound=int(obj["d_bound"]),
        log2_d_bound=int(obj["log2_d_bound"]),
        overrides=dict(obj.get("overrides", {})),
    )
