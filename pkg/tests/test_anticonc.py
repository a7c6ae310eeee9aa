"""Discrete anti-concentration harness for f = x on the 2000-point axis.

The exhaustive counts asserted here are recomputable by a five-line loop
(see test_exhaustive_count_matches_brute_force); the sampled counts are
frozen for seed 0 and must stay within the documented three-sigma band of
the exhaustive probabilities.
"""

from fractions import Fraction

import pytest

from robusthit.anticonc import cw_test_complex, cw_test_real, three_sigma_tolerance
from robusthit.errors import DegenerateError
from robusthit.norms import l2_norm_sq_direct
from robusthit.poly import DensePoly
from robusthit.scalars import GaussianRational

X = DensePoly.from_terms(1, [((1,), Fraction(1))])
DELTA = Fraction(1, 1000)
BETAS = [Fraction(1, 100), Fraction(1, 10), Fraction(1, 4)]


def exhaustive_report():
    return cw_test_real(X, DELTA, BETAS, c_config=Fraction(2), exhaustive=True)


def test_threshold_arithmetic():
    # t = beta - delta * (8 n r^2)^(n+1) with n = r = 1
    rows = exhaustive_report().rows
    assert [r.threshold for r in rows] == [
        Fraction(-27, 500), Fraction(9, 250), Fraction(93, 500)
    ]
    assert rows[0].vacuous and not rows[1].vacuous


def test_exhaustive_count_matches_brute_force():
    # independent recount: x = k/1000 hits iff x^2 <= t^2 * ||x||_2^2
    rows = exhaustive_report().rows
    norm_sq = l2_norm_sq_direct(X)
    assert norm_sq == Fraction(1, 3)
    for row in rows[1:]:
        t = row.threshold
        hits = sum(
            1
            for k in range(-1000, 1000)
            if Fraction(k, 1000) ** 2 <= t * t * norm_sq
        )
        assert (row.hits, row.total) == (hits, 2000)
    assert (rows[1].hits, rows[2].hits) == (41, 215)


def test_exhaustive_bounds_and_fit():
    rep = exhaustive_report()
    rows = rep.rows
    assert [r.bound for r in rows] == [Fraction(1, 50), Fraction(1, 5), Fraction(1, 2)]
    assert rows[1].empirical == Fraction(41, 2000)
    assert rows[2].empirical == Fraction(43, 400)
    assert rows[1].fitted == Fraction(41, 200)
    assert rows[2].fitted == Fraction(43, 100)
    assert rep.fitted_c == Fraction(43, 100)
    assert rep.all_passed


def test_monotonicity_is_exact():
    # smaller alpha can only shrink the hit set (same sample stream)
    for rep in (
        exhaustive_report(),
        cw_test_real(X, DELTA, BETAS, samples=500, seed=3),
    ):
        hits = [row.hits for row in rep.rows]
        assert hits == sorted(hits)


def test_sampled_within_three_sigma_of_exhaustive():
    exact = exhaustive_report()
    sampled = cw_test_real(X, DELTA, BETAS, samples=2000, seed=0)
    assert [r.hits for r in sampled.rows] == [0, 48, 204]  # frozen for seed 0
    for erow, srow in zip(exact.rows, sampled.rows):
        if erow.vacuous:
            continue
        tol = three_sigma_tolerance(erow.empirical, 2000)
        assert abs(float(srow.empirical - erow.empirical)) <= tol


def test_scale_invariance():
    # thresholds scale with the norm, so alpha*f reproduces the report
    base = exhaustive_report()
    for alpha in (Fraction(5), Fraction(-1, 7)):
        scaled = cw_test_real(X.scale(alpha), DELTA, BETAS, exhaustive=True)
        assert [(r.hits, r.total) for r in scaled.rows] == [
            (r.hits, r.total) for r in base.rows
        ]


def test_saturated_alpha_reports_fit_only():
    rep = cw_test_real(X, DELTA, [Fraction(2)], exhaustive=True)
    row = rep.rows[0]
    assert row.saturated and row.empirical == 1
    assert row.passed is None and row.fitted is not None


def test_zero_schedule_and_zero_polynomial():
    assert cw_test_real(X, DELTA, [], exhaustive=True).rows == []
    with pytest.raises(DegenerateError):
        cw_test_real(DensePoly.zero(1), DELTA, BETAS, exhaustive=True)


def test_sampled_determinism():
    a = cw_test_real(X, DELTA, BETAS, samples=400, seed=11)
    b = cw_test_real(X, DELTA, BETAS, samples=400, seed=11)
    assert [r.hits for r in a.rows] == [r.hits for r in b.rows]


def test_complex_route_smoke():
    rep = cw_test_complex(X, Fraction(1, 4), [Fraction(1, 2)], exhaustive=True)
    assert rep.domain == "complex"
    row = rep.rows[0]
    assert row.total == 64  # (2/delta)^(2n) grid points
    assert rep.fitted_c >= 0


def test_csv_shape():
    text = exhaustive_report().to_csv()
    lines = text.strip().splitlines()
    assert lines[0].startswith("beta,alpha,threshold")
    assert len(lines) == 1 + len(BETAS)
