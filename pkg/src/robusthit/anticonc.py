"""Empirical harness for discrete anti-concentration on grids.

The hypothesis under test, for real homogeneous f of degree r with
threshold schedule alpha = beta^r:

    Pr[ f(v)^2 <= t^2 ||f||_2^2 ]  <=  C * r * beta,
    t = alpha - delta * (8 n r^2)^(n+1),   v uniform on the grid.

Thresholds scale with ||f||_2, never the polynomial, so everything stays
rational; alphas are perfect r-th powers so the bound side C*r*beta is
rational too.  The constant C is configuration: the harness can only
falsify a candidate value or report the fitted one.

All alphas in one run share a single sample stream (points are drawn once
and each squared value is compared to every threshold), which makes
monotonicity in alpha an exact counting fact rather than a statistical
one.  A nonpositive t makes the event empty; such rows are flagged
vacuous.  Rows with empirical probability 1 are flagged saturated and
excluded from pass/fail (the fitted constant is still reported).

The complex variant counts |f(v)|^2 <= t^2 * 2(||Re f||^2 + ||Im f||^2)
with t = alpha - delta/2 * (16 n r^2)^(2n+1) and bound C * r * beta for
alpha = beta^r / 2.  The factor 2(a + b) is an upper proxy for the
(||Re f|| + ||Im f||)^2 appearing in the exact statement: it can only
enlarge the counted event, so the reported probabilities are conservative.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import BudgetError, DegenerateError
from .grids import GridSpec, GridVariant, nominal_shift_factor, nominal_shift_factor_complex
from .norms import complex_l2_pair, complex_norm_sq_upper, l2_norm_sq_direct
from .poly import DensePoly
from .scalars import abs_sq


@dataclass(frozen=True)
class CWRow:
    beta: Fraction
    alpha: Fraction
    threshold: Fraction          # t, possibly <= 0
    vacuous: bool
    saturated: bool
    hits: int
    total: int
    empirical: Fraction
    bound: Fraction
    fitted: Optional[Fraction]   # empirical / (r * beta); None when beta = 0
    passed: Optional[bool]       # None when vacuous or saturated


@dataclass
class CWReport:
    mode: str                    # "sampled" or "exhaustive"
    domain: str                  # "real" or "complex"
    degree: int
    delta: Fraction
    c_config: Fraction
    sample_count: int
    seed: Optional[int]
    norm_sq_scale: Fraction      # the squared-norm factor thresholds were scaled by
    rows: List[CWRow] = field(default_factory=list)

    @property
    def fitted_c(self) -> Fraction:
        candidates = [row.fitted for row in self.rows if not row.vacuous and row.fitted is not None]
        return max(candidates, default=Fraction(0))

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows if row.passed is not None)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("beta,alpha,threshold,vacuous,saturated,hits,total,empirical,bound,fitted,passed\n")
        for row in self.rows:
            out.write(
                f"{row.beta},{row.alpha},{row.threshold},{int(row.vacuous)},"
                f"{int(row.saturated)},{row.hits},{row.total},{row.empirical},"
                f"{row.bound},{'' if row.fitted is None else row.fitted},"
                f"{'' if row.passed is None else int(row.passed)}\n"
            )
        return out.getvalue()


def _rows_from_counts(
    schedule: Sequence[tuple[Fraction, Fraction, Fraction]],
    values_sq: Sequence[Fraction],
    norm_sq_scale: Fraction,
    r: int,
    c_config: Fraction,
) -> List[CWRow]:
    rows: List[CWRow] = []
    total = len(values_sq)
    for beta, alpha, t in schedule:
        if t < 0:
            rows.append(
                CWRow(beta, alpha, t, True, False, 0, total, Fraction(0),
                      c_config * r * beta, None, None)
            )
            continue
        cutoff = t * t * norm_sq_scale
        hits = sum(1 for v in values_sq if v <= cutoff)
        empirical = Fraction(hits, total) if total else Fraction(0)
        saturated = total > 0 and hits == total
        fitted = None if beta == 0 else empirical / (Fraction(r) * beta)
        bound = c_config * r * beta
        passed = None if saturated else empirical <= bound
        rows.append(CWRow(beta, alpha, t, False, saturated, hits, total, empirical, bound, fitted, passed))
    return rows


def cw_test_real(
    f: DensePoly,
    delta: Fraction,
    betas: Sequence[Fraction],
    c_config: Fraction = Fraction(2),
    samples: int = 2000,
    seed: int = 0,
    exhaustive: bool = False,
    max_grid: int = 4_000_000,
) -> CWReport:
    """Run the real-grid experiment for the schedule alpha = beta^r."""
    r = f.homogeneous_degree()
    if r is None:
        raise ValueError("anti-concentration statements require homogeneous f")
    if not f.is_real():
        raise ValueError("cw_test_real needs real coefficients")
    norm_sq = l2_norm_sq_direct(f)
    if norm_sq == 0:
        raise DegenerateError("f has zero norm")

    delta = Fraction(delta)
    shift = delta * nominal_shift_factor(f.n, r)
    schedule = [(Fraction(b), Fraction(b) ** r, Fraction(b) ** r - shift) for b in betas]

    grid = GridSpec(n=f.n, delta=delta, variant=GridVariant.REAL)
    if exhaustive:
        if grid.size() > max_grid:
            raise BudgetError(f"grid size {grid.size()} over budget {max_grid}")
        points = grid.iter_points()
        mode = "exhaustive"
        used_seed: Optional[int] = None
    else:
        points = iter(grid.sample(seed, samples))
        mode = "sampled"
        used_seed = seed

    values_sq = [abs_sq(f.evaluate(p)) for p in points]
    rows = _rows_from_counts(schedule, values_sq, norm_sq, r, Fraction(c_config))
    return CWReport(
        mode=mode,
        domain="real",
        degree=r,
        delta=delta,
        c_config=Fraction(c_config),
        sample_count=len(values_sq),
        seed=used_seed,
        norm_sq_scale=norm_sq,
        rows=rows,
    )


def cw_test_complex(
    f: DensePoly,
    delta: Fraction,
    betas: Sequence[Fraction],
    c_config: Fraction = Fraction(2),
    samples: int = 2000,
    seed: int = 0,
    exhaustive: bool = False,
    max_grid: int = 4_000_000,
) -> CWReport:
    """Complex-grid variant; alpha = beta^r / 2 keeps the bound rational."""
    r = f.homogeneous_degree()
    if r is None:
        raise ValueError("anti-concentration statements require homogeneous f")
    pair = complex_l2_pair(f)
    norm_sq_proxy = complex_norm_sq_upper(pair)
    if norm_sq_proxy == 0:
        raise DegenerateError("f has zero norm")

    delta = Fraction(delta)
    shift = delta / 2 * nominal_shift_factor_complex(f.n, r)
    schedule = [
        (Fraction(b), Fraction(b) ** r / 2, Fraction(b) ** r / 2 - shift) for b in betas
    ]

    grid = GridSpec(n=f.n, delta=delta, variant=GridVariant.COMPLEX)
    if exhaustive:
        if grid.size() > max_grid:
            raise BudgetError(f"grid size {grid.size()} over budget {max_grid}")
        points = grid.iter_points()
        mode = "exhaustive"
        used_seed: Optional[int] = None
    else:
        points = iter(grid.sample(seed, samples))
        mode = "sampled"
        used_seed = seed

    values_sq = [abs_sq(f.evaluate(p)) for p in points]
    rows = _rows_from_counts(schedule, values_sq, norm_sq_proxy, r, Fraction(c_config))
    return CWReport(
        mode=mode,
        domain="complex",
        degree=r,
        delta=delta,
        c_config=Fraction(c_config),
        sample_count=len(values_sq),
        seed=used_seed,
        norm_sq_scale=norm_sq_proxy,
        rows=rows,
    )


def three_sigma_tolerance(p: Fraction, samples: int) -> float:
    """3 sqrt(p(1-p)/samples): the documented sampled-vs-exhaustive tolerance.

    Statistical only; never part of an exact pass/fail decision.
    """
    if samples <= 0:
        return 0.0
    return 3.0 * (float(p * (1 - p)) / samples) ** 0.5
