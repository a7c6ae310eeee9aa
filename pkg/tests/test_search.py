"""Search driver: candidate enumeration, certificates, independent checks.

The toy configuration throughout is the n=1, s=1, r=1 linear family with
delta 1/2, m=2, eps 1/100.  For that family an exhaustive hand analysis
fixes the outcome: membership forces |a| >= 1, every nonzero grid point
has magnitude >= 1/2, so the very first lexicographic tuple is accepted.
Fake shell backends stand in for the solver wherever only the driver's
bookkeeping is under test.
"""

import random
from fractions import Fraction

import pytest

from robusthit.errors import BudgetError, ExhaustedError
from robusthit.etr import SolverConfig, encode_search_query, solve
from robusthit.grids import GridSpec, GridVariant, derive_seed
from robusthit.params import compute_params
from robusthit.search import (
    LEX,
    RAND,
    QueryRecord,
    SearchCertificate,
    SearchConfig,
    candidate_at,
    certificate_from_json,
    recheck_certificate,
    run_search,
    verify_certificate,
)
from robusthit.universal import build_universal

TOY_OVERRIDES = {
    "delta": Fraction(1, 2),
    "m": 2,
    "eps_alg": Fraction(1, 100),
}


def toy_config(**kw):
    params = compute_params(1, 1, 1, overrides=TOY_OVERRIDES)
    return SearchConfig(params=params, **kw)


def _fake_solver(script):
    # request_model off so the canned output never needs a model section
    return SolverConfig(command=["sh", "-c", script, "fake"], request_model=False)


def _toy_grid():
    return GridSpec(n=1, delta=Fraction(1, 2), variant=GridVariant.REALIFIED,
                    extension_degree=1)


def test_candidate_enumeration_is_mixed_radix():
    grid = _toy_grid()
    size = grid.size()
    assert size == 32
    assert candidate_at(grid, 2, 0) == [(-1,), (-1,)]
    assert candidate_at(grid, 2, 1) == [(-1,), (-2,)]
    # first point is the most significant digit
    assert candidate_at(grid, 2, size) == [(-2,), (-1,)]
    assert candidate_at(grid, 1, size - 1) == [grid.point_at(size - 1)]
    with pytest.raises(ValueError):
        candidate_at(grid, 1, size)
    with pytest.raises(ValueError):
        candidate_at(grid, 2, size * size)


def test_mode_must_be_known_and_m_positive():
    with pytest.raises(ValueError):
        toy_config(mode="exhaustive")
    params = compute_params(1, 1, 1, overrides={**TOY_OVERRIDES, "m": 0})
    with pytest.raises(ValueError):
        SearchConfig(params=params)


def test_true_scale_parameters_are_refused():
    cfg = SearchConfig(params=compute_params(1, 1, 1))
    with pytest.raises(BudgetError) as info:
        run_search(cfg)
    assert "candidate tuples" in str(info.value)


def test_toy_run_accepts_the_first_tuple():
    cert = run_search(toy_config())
    assert cert.accepted_at == 0
    assert cert.h.points == [(-1,), (-1,)]
    assert cert.h.eps_sq == Fraction(1, 100) ** 2
    assert cert.h.domain == "real"
    assert cert.h.provenance == "searched"
    assert not cert.tainted
    assert [q.status for q in cert.queries] == ["unsat"]
    assert recheck_certificate(toy_config(), cert) == "unsat"


def test_identical_configs_reproduce_the_certificate():
    a = run_search(toy_config())
    b = run_search(toy_config())
    assert a.to_json() == b.to_json()


def test_certificate_json_round_trip():
    cert = run_search(toy_config())
    assert certificate_from_json(cert.to_json()).to_json() == cert.to_json()


def test_origin_candidate_advances():
    # a tuple visiting only the origin cannot pin down the family: a = 1
    # stays in it and vanishes there, so the query must come back sat
    params = compute_params(1, 1, 1, overrides=TOY_OVERRIDES)
    u = build_universal(params.n, params.s, params.r)
    f = encode_search_query(u, [(Fraction(0),)], params.eps_alg)
    assert solve(f).status == "sat"


def test_randomized_mode_replays_its_sample_stream():
    cfg = toy_config(mode=RAND, seed=11, max_candidates=8, jobs=8)
    cert = run_search(cfg)
    again = run_search(toy_config(mode=RAND, seed=11, max_candidates=8, jobs=8))
    assert cert.to_json() == again.to_json()
    grid = _toy_grid()
    expected = grid.sample(derive_seed(11, "candidate", cert.accepted_at), 2)
    assert cert.h.points == expected
    assert cert.mode == RAND and cert.seed == 11


def test_exhaustion_reports_the_query_log():
    cfg = toy_config(max_candidates=3, solver=_fake_solver("echo sat"))
    with pytest.raises(ExhaustedError) as info:
        run_search(cfg)
    assert [q.status for q in info.value.queries] == ["sat"] * 3
    assert {q.index for q in info.value.queries} == {0, 1, 2}


def test_zero_budget_exhausts_immediately():
    cfg = toy_config(max_candidates=0, solver=_fake_solver("echo sat"))
    with pytest.raises(ExhaustedError) as info:
        run_search(cfg)
    assert info.value.queries == []


def test_unknown_verdicts_taint_the_certificate(tmp_path):
    # the first line answers the driver's version probe, not a query
    flag = tmp_path / "answered-once"
    script = (
        f'if grep -q get-info "$1"; then echo probe; '
        f'elif [ -f "{flag}" ]; then echo unsat; '
        f'else touch "{flag}"; echo unknown; fi'
    )
    cert = run_search(toy_config(solver=_fake_solver(script)))
    assert cert.tainted
    assert cert.accepted_at == 1
    assert [q.status for q in cert.queries] == ["unknown", "unsat"]


def test_certificate_validation_rules():
    params = compute_params(1, 1, 1, overrides=TOY_OVERRIDES)

    def cert(statuses, tainted):
        return SearchCertificate(
            h=_dummy_h(params),
            accepted_at=len(statuses) - 1,
            queries=[QueryRecord(i, "00" * 8, s) for i, s in enumerate(statuses)],
            tainted=tainted,
            params=params,
            mode=LEX,
            seed=0,
            solver_identity="fake",
        )

    cert(["sat", "unsat"], tainted=False).validate()
    cert(["unknown", "unsat"], tainted=True).validate()
    with pytest.raises(ValueError):
        cert(["unknown", "unsat"], tainted=False).validate()
    with pytest.raises(ValueError):
        cert(["unsat", "unsat"], tainted=False).validate()
    with pytest.raises(ValueError):
        cert(["sat"], tainted=False).validate()
    with pytest.raises(ValueError):
        cert([], tainted=False).validate()


def _dummy_h(params):
    from robusthit.robust import HittingSet

    return HittingSet(
        points=[(Fraction(-1),)],
        eps_sq=params.eps_alg ** 2,
        domain="real",
        provenance="searched",
    )


def test_verify_certificate_passes_the_toy_family():
    cert = run_search(toy_config())
    check = verify_certificate(cert, trials=100, seed=7)
    assert check.trials == 100
    assert check.passes + check.zero_skipped == 100
    assert check.failures == []
    assert check.pass_fraction == 1


def test_verify_certificate_flags_an_adversarial_set():
    cert = run_search(toy_config())
    cert.h.points = [(Fraction(0),)]    # every degree-1 form vanishes here
    check = verify_certificate(cert, trials=40, seed=5)
    assert check.passes == 0
    assert check.zero_skipped < 40
    assert check.pass_fraction == 0
    assert check.failures


def test_verify_certificate_vacuous_when_sampler_gives_zero():
    cert = run_search(toy_config())
    check = verify_certificate(
        cert, trials=6, seed=1, sampler=lambda rng: [Fraction(0)]
    )
    assert check.zero_skipped == 6
    assert check.pass_fraction == 1
