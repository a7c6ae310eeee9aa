"""Derived parameter bundle: exact formulas, rounding, overrides."""

from fractions import Fraction

import pytest

from robusthit.params import ParamBundle, bundle_from_json, compute_params, n_hom


def test_toy_bundle_exact_values():
    b = compute_params(1, 1, 1, c_cw=1)
    assert b.eta == Fraction(1, 40)
    assert b.delta == Fraction(1, 163840)
    assert b.eps_alg == Fraction(1, 5120)
    assert b.m == 1
    assert b.n_hom == 1


def test_eta_formula_general():
    # eta = 2^-n / (20 (C n r^2)^r)
    b = compute_params(2, 3, 2, c_cw=2)
    assert b.eta == Fraction(1, 4) / (20 * Fraction(2 * 2 * 4) ** 2)
    assert b.eps_alg == Fraction(1, 4) * b.eta * Fraction(1, (32 * 2 * 4) ** 2)


def test_delta_is_unit_fraction_rounded_down():
    for n, s, r in [(1, 1, 1), (2, 2, 2), (3, 1, 3), (2, 5, 4)]:
        b = compute_params(n, s, r)
        raw = b.eta / Fraction((16 * n * r**2) ** (2 * n + 1))
        assert b.delta.numerator == 1
        assert b.delta <= raw
        # smallest adjustment: bumping the denominator down would exceed raw
        if b.delta < raw:
            assert Fraction(1, b.delta.denominator - 1) > raw


def test_monotonicity_in_n_and_r():
    etas_n = [compute_params(n, 1, 2).eta for n in range(1, 5)]
    assert all(a > b for a, b in zip(etas_n, etas_n[1:]))
    etas_r = [compute_params(2, 1, r).eta for r in range(1, 5)]
    assert all(a > b for a, b in zip(etas_r, etas_r[1:]))
    for n in range(1, 4):
        for r in range(1, 4):
            b = compute_params(n, 2, r)
            assert 0 < b.delta <= b.eta
            assert 0 < b.eps_alg < b.eta / 4


def test_positivity_and_sizes():
    for n, s, r in [(1, 1, 1), (3, 3, 3), (2, 4, 1)]:
        b = compute_params(n, s, r)
        assert b.eta > 0 and b.delta > 0 and b.eps_alg > 0
        assert b.m == (n * s * r) ** b.c_size >= 1
        assert b.d_bound == (s * r * n) ** b.c_var
        assert b.log2_d_bound == (s * r * n) ** b.c_var


def test_m_grows_with_c_size():
    assert compute_params(2, 2, 2, c_size=2).m == 64
    assert compute_params(2, 2, 2, c_size=1).m == 8


def test_n_hom_examples():
    assert n_hom(3, 2) == 6
    assert n_hom(1, 9) == 1
    assert n_hom(2, 3) == 4


def test_overrides_recorded_and_applied():
    b = compute_params(1, 1, 1, overrides={"delta": Fraction(1, 2), "m": 2, "eps_alg": Fraction(1, 100)})
    assert b.delta == Fraction(1, 2)
    assert b.m == 2
    assert b.eps_alg == Fraction(1, 100)
    assert set(b.overrides) == {"delta", "m", "eps_alg"}
    # untouched fields keep their derived values
    assert b.eta == compute_params(1, 1, 1).eta


def test_json_round_trip():
    b = compute_params(2, 3, 2, c_cw=1, overrides={"m": 5})
    again = bundle_from_json(b.to_json())
    assert again == b


def test_rejects_nonpositive_parameters():
    with pytest.raises(ValueError):
        compute_params(0, 1, 1)
    with pytest.raises(ValueError):
        compute_params(1, 1, -2)
