"""Robust hitting sets: verification, realification, interpolation
constants, the net condition, and the tensor limit demonstration.

Interpolation constants get an independent oracle: a Vandermonde solve
over Q[i] performed inside the test, then compared entry by entry.
"""

import math
import random
from fractions import Fraction

import pytest

from robusthit.errors import DegenerateError, DimensionError
from robusthit.norms import l2_norm_sq_direct
from robusthit.params import compute_params
from robusthit.poly import DensePoly, expand_circuit
from robusthit.robust import (
    TENSOR_BAD_POINT,
    TENSOR_GOOD_POINT,
    HittingSet,
    build_tensor_approx_circuit,
    build_tensor_circuit,
    check_realification_soundness,
    check_robust_net_condition,
    hitting_set_from_json,
    interpolation_bound_sq,
    interpolation_constants,
    paper_faithful_eps_net,
    realification_factor_sq,
    realify,
    sample_candidate,
    verify_robust,
)
from robusthit.scalars import GaussianRational, abs_sq

from conftest import corpus_instance, random_complex_point


def gauss_solve(matrix, rhs):
    """Exact Gauss-Jordan over Q[i]; used only as the test-side oracle."""
    size = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if abs_sq(aug[r][col]) != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_den = aug[col][col]
        inv = inv_den.conjugate() * (Fraction(1) / abs_sq(inv_den))
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and abs_sq(aug[r][col]) != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][size] for r in range(size)]


def test_interpolation_constants_small_cases():
    i_unit = GaussianRational(Fraction(0), Fraction(1))
    assert interpolation_constants(0) == [GaussianRational(Fraction(1), Fraction(0))]
    assert interpolation_constants(1) == [
        GaussianRational(Fraction(1), Fraction(-1)),
        i_unit,
    ]


def _imag_powers(count):
    # 1, i, i^2, ... as GaussianRationals, built by repeated multiplication
    i_unit = GaussianRational(Fraction(0), Fraction(1))
    powers = [GaussianRational(Fraction(1), Fraction(0))]
    while len(powers) < count:
        powers.append(powers[-1] * i_unit)
    return powers


def test_interpolation_constants_against_vandermonde_oracle():
    # solve V^T c = (1, i, i^2, ...) with V_jk = k^j, independently
    for r in range(0, 9):
        matrix = [
            [GaussianRational(Fraction(k**j), Fraction(0)) for k in range(r + 1)]
            for j in range(r + 1)
        ]
        expected = gauss_solve(matrix, _imag_powers(r + 1))
        assert interpolation_constants(r) == expected


def test_interpolation_identity_and_magnitude_bound():
    for r in range(0, 9):
        c = interpolation_constants(r)
        rhs = _imag_powers(r + 1)
        for j in range(r + 1):
            total = GaussianRational(Fraction(0), Fraction(0))
            for k, ck in enumerate(c):
                total = total + ck * Fraction(k**j)
            assert total == rhs[j]
        bound = interpolation_bound_sq(r)
        assert bound == Fraction(math.factorial(r + 1) ** 2)
        assert all(abs_sq(ck) <= bound for ck in c)


def test_realification_factor():
    assert realification_factor_sq(1) == 36  # (3!)^2
    assert realification_factor_sq(2) == 576  # (4!)^2


def test_realification_soundness_on_seeded_instances():
    rng = random.Random(41)
    from conftest import random_homogeneous_poly

    for _ in range(50):
        n = rng.randrange(1, 3)
        r = rng.randrange(1, 4)
        f = random_homogeneous_poly(rng, n, r, max_mag=20)
        v = random_complex_point(rng, n)
        lhs, rhs = check_realification_soundness(f, v)
        assert lhs >= rhs


def test_verify_robust_witness_and_threshold():
    f = DensePoly.from_terms(1, [((1,), Fraction(1))])  # ||f||_2^2 = 1/3
    h = HittingSet(
        points=[(Fraction(0),), (Fraction(1, 2),)],
        eps_sq=Fraction(1, 2),
        domain="real",
        provenance="loaded",
    )
    res = verify_robust(h, f)
    # need f(v)^2 >= (1/2) * (1/3) = 1/6; the origin fails, 1/4 >= 1/6 passes
    assert res.ok and res.witness == 1
    assert res.value_sq_at_witness == Fraction(1, 4)
    assert res.threshold_sq == Fraction(1, 6)
    strict = HittingSet(
        points=[(Fraction(0),)], eps_sq=Fraction(1, 2), domain="real", provenance="loaded"
    )
    assert not verify_robust(strict, f).ok


def test_verify_robust_zero_polynomial_is_distinguished():
    h = HittingSet(
        points=[(Fraction(1),)], eps_sq=Fraction(1, 4), domain="real", provenance="loaded"
    )
    res = verify_robust(h, DensePoly.zero(1))
    assert res.zero_polynomial and res.ok


def test_verify_robust_scale_invariance():
    h = HittingSet(
        points=[(Fraction(0),), (Fraction(1, 4),), (Fraction(-1,),)],
        eps_sq=Fraction(1, 9),
        domain="real",
        provenance="loaded",
    )
    for i in range(12):
        f = corpus_instance(i)
        if f.n != 1:
            continue
        base = verify_robust(h, f)
        for alpha in (Fraction(3), Fraction(-2, 7)):
            scaled = verify_robust(h, f.scale(alpha))
            assert scaled.witness == base.witness and scaled.ok == base.ok


def test_verify_robust_dimension_check():
    h = HittingSet(
        points=[(Fraction(0), Fraction(0))], eps_sq=Fraction(1), domain="real", provenance="loaded"
    )
    with pytest.raises(DimensionError):
        verify_robust(h, DensePoly.variable(0, 1))


def test_sample_candidate_deterministic_and_in_grid():
    params = compute_params(1, 1, 1, overrides={"delta": Fraction(1, 4), "m": 5})
    a = sample_candidate(params, seed=3)
    b = sample_candidate(params, seed=3)
    assert a.points == b.points and len(a.points) == 5
    assert a.domain == "complex" and a.provenance == "sampled"
    assert a.eps_sq == params.eps_alg**2
    axis = {Fraction(-1) + k * Fraction(1, 4) for k in range(8)}
    for (z,) in a.points:
        assert z.re in axis and z.im in axis


def test_realify_counts_and_epsilon():
    h = HittingSet(
        points=[(GaussianRational(Fraction(0), Fraction(1)),)],
        eps_sq=Fraction(1, 4),
        domain="complex",
        provenance="loaded",
    )
    hr = realify(h, 1)
    assert hr.domain == "real"
    assert hr.points == [(Fraction(0),), (Fraction(1),)]
    assert hr.eps_sq == Fraction(1, 4) / 36
    # b = 0: r+1 copies of a, multiplicity kept
    h0 = HittingSet(
        points=[(GaussianRational(Fraction(1, 2), Fraction(0)),)],
        eps_sq=Fraction(1),
        domain="complex",
        provenance="loaded",
    )
    assert realify(h0, 2).points == [(Fraction(1, 2),)] * 3


def test_net_condition_frozen_toy_margins():
    rep = check_robust_net_condition(Fraction(1), Fraction(1, 40), 1, 1)
    assert (rep.left_lhs, rep.left_rhs) == (Fraction(100), Fraction(1, 460800))
    assert (rep.right_lhs, rep.right_rhs) == (Fraction(1, 3200), Fraction(4))
    assert not rep.left_ok and rep.right_ok


def test_net_condition_right_side_fails_for_large_eta():
    rep = check_robust_net_condition(Fraction(0), Fraction(10**6), 1, 1)
    assert rep.left_ok  # eps_net = 0 makes the left side trivially strict
    assert not rep.right_ok


def test_paper_faithful_eps_net():
    assert paper_faithful_eps_net(1, 1) == 1
    assert paper_faithful_eps_net(3, 2) == Fraction(1, 36)  # (1/6)^2


def test_tensor_bad_point_values_exact():
    T = expand_circuit(build_tensor_circuit())
    assert T.evaluate(TENSOR_BAD_POINT) == 0
    assert T.evaluate(TENSOR_GOOD_POINT) == 1
    for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
        T_eps = expand_circuit(build_tensor_approx_circuit(eps))
        assert T_eps.evaluate(TENSOR_BAD_POINT) == eps
        # the approximants differ from T only in the extra top corner term
        diff = T_eps - T
        assert diff.coeffs == {(0, 1, 0, 1, 0, 1): eps}
    with pytest.raises(DegenerateError):
        build_tensor_approx_circuit(Fraction(0))


def test_tensor_norms():
    assert l2_norm_sq_direct(expand_circuit(build_tensor_circuit())) == Fraction(1, 9)
    assert l2_norm_sq_direct(
        expand_circuit(build_tensor_approx_circuit(Fraction(1, 2)))
    ) == Fraction(13, 108)
    assert l2_norm_sq_direct(
        expand_circuit(build_tensor_approx_circuit(Fraction(1, 10)))
    ) == Fraction(301, 2700)


def test_hitting_set_json_round_trip():
    h = HittingSet(
        points=[(GaussianRational(Fraction(1, 2), Fraction(-1, 3)),)],
        eps_sq=Fraction(2, 7),
        domain="complex",
        provenance="sampled",
    )
    again = hitting_set_from_json(h.to_json())
    assert again.points == h.points
    assert again.eps_sq == h.eps_sq
    assert again.domain == h.domain
