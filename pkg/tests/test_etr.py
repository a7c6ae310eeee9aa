"""Existential-formula encodings and the external solver bridge.

Solver-backed tests batch their queries through one backend launch where
possible; the backend itself is resolved by default_solver_config (the
bundled shim in this repo).
"""

import random
from fractions import Fraction

import pytest

from robusthit.errors import BackendError, DimensionError
from robusthit.etr import (
    EQ0,
    GE0,
    GT0,
    Atom,
    ETRFormula,
    SolverConfig,
    SolverVerdict,
    _parse_verdict,
    default_solver_config,
    encode_phi,
    encode_psi,
    encode_search_query,
    solve,
    solve_many,
)
from robusthit.poly import expand_circuit
from robusthit.universal import build_universal, fix_auxiliary

ONE = Fraction(1)


def _formula(atoms, variables):
    f = ETRFormula(list(variables), list(atoms))
    f.validate()
    return f


def _x_squared_plus_one():
    # x^2 + 1 = 0, unsatisfiable over the reals
    return _formula([Atom(((ONE, ("x", "x")), (ONE, ())), EQ0)], ["x"])


def _x_equals(value):
    return _formula([Atom(((ONE, ("x",)), (-Fraction(value), ())), EQ0)], ["x"])


def test_atom_evaluation_per_relation():
    a = {"u": Fraction(2), "w": Fraction(-3)}
    terms = ((ONE, ("u", "w")), (Fraction(6), ()))   # u*w + 6 = 0 at the point
    assert Atom(terms, EQ0).evaluate(a)
    assert Atom(terms, GE0).evaluate(a)
    assert not Atom(terms, GT0).evaluate(a)
    assert Atom(((ONE, ("u",)),), GT0).evaluate(a)
    assert not Atom(((ONE, ("w",)),), GE0).evaluate(a)
    with pytest.raises(ValueError):
        Atom(terms, "le0")


def test_formula_validation():
    good = Atom(((ONE, ("x",)),), GE0, label="ok")
    stray = Atom(((ONE, ("ghost",)),), GE0, label="stray")
    with pytest.raises(ValueError):
        _formula([good, stray], ["x"])
    with pytest.raises(ValueError):
        _formula([good], ["x", "x"])


def test_smt2_serialization_shape():
    f = _formula(
        [
            Atom(((Fraction(-1, 2), ("x",)), (Fraction(3), ())), GE0, label="half"),
            Atom(((ONE, ("x", "x")),), GT0),
        ],
        ["x"],
    )
    text = f.to_smt2()
    lines = text.splitlines()
    assert lines[0] == "(set-logic QF_NRA)"
    assert "(declare-const x Real)" in lines
    assert "; half" in lines
    assert "(- (/ 1 2))" in text
    assert "(assert (> (* x x) 0))" in text
    assert lines[-2] == "(check-sat)"
    assert lines[-1] == "(get-model)"
    assert "(get-model)" not in f.to_smt2(request_model=False)


def test_solver_verdict_invariants():
    SolverVerdict("sat", model={"x": Fraction(1)})
    with pytest.raises(ValueError):
        SolverVerdict("unsat", model={"x": Fraction(1)})
    with pytest.raises(ValueError):
        SolverVerdict("maybe")


def test_phi_encoding_size_is_linear_in_gates():
    for n, s, r in [(1, 1, 1), (2, 1, 2), (2, 2, 3), (3, 2, 4)]:
        u = build_universal(n, s, r)
        gates = len(u.circuit.gates)
        v = [Fraction(1, k + 2) for k in range(n)]
        ground = encode_phi(u, v, Fraction(1, 3), aux_values=[0] * u.m_auxiliary)
        assert len(ground.atoms) == gates + 1
        assert len(ground.variables) == gates
        symbolic = encode_phi(u, v, Fraction(1, 3))
        assert len(symbolic.atoms) == gates + 1
        assert len(symbolic.variables) == gates + u.m_auxiliary
        # every atom stays at degree <= 2: gate atoms are bilinear at worst
        for atom in symbolic.atoms:
            assert max(len(names) for _, names in atom.terms) <= 2


def test_psi_encoding_size_adds_box_atoms():
    for n, s, r in [(1, 1, 1), (2, 2, 2), (3, 1, 3)]:
        u = build_universal(n, s, r)
        gates = len(u.circuit.gates)
        f = encode_psi(u)
        assert len(f.atoms) == gates + 1 + n
        assert len(f.variables) == gates + u.m_auxiliary + n
        assert sum(a.label.startswith("box") for a in f.atoms) == n


def test_search_query_with_no_candidates_is_psi():
    u = build_universal(1, 1, 2)
    combined = encode_search_query(u, [], Fraction(1, 10))
    base = encode_psi(u, prefix="p")
    assert combined.variables == base.variables
    assert combined.atoms == base.atoms


def test_encode_dimension_errors():
    u = build_universal(2, 1, 1)
    with pytest.raises(DimensionError):
        encode_phi(u, [Fraction(0)], Fraction(1))
    with pytest.raises(DimensionError):
        encode_phi(u, [0, 0], Fraction(1), aux_values=[0] * (u.m_auxiliary + 1))
    with pytest.raises(DimensionError):
        encode_psi(u, aux_values=[0] * (u.m_auxiliary + 1))


def test_solve_rejects_x_squared_plus_one():
    assert solve(_x_squared_plus_one()).status == "unsat"


def test_psi_verdicts_on_pinned_families():
    # one skeleton large enough to carry x0*x1/4; output wire order is
    # left sum, right sum, output sum, so the assignment below is exact
    u2 = build_universal(2, 1, 2)
    quarter = [Fraction(1, 2), 0, 0, Fraction(1, 2), 1]
    assert expand_circuit(fix_auxiliary(u2, quarter)).terms_sorted() == [
        ((1, 1), Fraction(1, 4))
    ]
    u1 = build_universal(1, 1, 1)
    queries = [
        encode_psi(u1, aux_values=[2]),        # 2*x0 clears 1 inside the box
        encode_psi(u1, aux_values=[0]),        # zero polynomial never does
        encode_psi(u2, aux_values=quarter),    # sup of x0*x1/4 is 1/4 < 1
    ]
    verdicts = solve_many(queries, jobs=2)
    assert [v.status for v in verdicts] == ["sat", "unsat", "unsat"]
    witness = verdicts[0]
    assert witness.model is not None
    assert queries[0].check_model(witness.model) == []
    assert abs(witness.model["v0"]) >= Fraction(1, 2)


def test_ground_phi_agrees_with_direct_evaluation():
    u = build_universal(2, 1, 2)
    rng = random.Random(20260814)
    queries = []
    expected = []
    for _ in range(12):
        aux = [
            Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
            for _ in range(u.m_auxiliary)
        ]
        v = [Fraction(rng.randrange(-8, 9), 8) for _ in range(2)]
        eps = rng.choice([Fraction(1, 10), Fraction(1, 2), Fraction(1)])
        value = fix_auxiliary(u, aux).evaluate(v)
        expected.append("sat" if value * value >= eps * eps else "unsat")
        queries.append(encode_phi(u, v, eps, aux_values=aux))
    got = [v.status for v in solve_many(queries, jobs=2)]
    assert got == expected


def test_negated_output_atom_is_strict():
    u = build_universal(1, 1, 1)
    value = fix_auxiliary(u, [Fraction(3, 4)]).evaluate([Fraction(1, 2)])
    assert value == Fraction(3, 8)
    at_value = encode_phi(u, [Fraction(1, 2)], value, aux_values=[Fraction(3, 4)],
                          negate_output=True)
    above = encode_phi(u, [Fraction(1, 2)], value + Fraction(1, 100),
                       aux_values=[Fraction(3, 4)], negate_output=True)
    statuses = [v.status for v in solve_many([at_value, above])]
    assert statuses == ["unsat", "sat"]


def test_zero_threshold_is_vacuous():
    u = build_universal(1, 1, 1)
    f = encode_phi(u, [Fraction(1, 3)], Fraction(0), aux_values=[0])
    assert solve(f).status == "sat"


def test_solve_many_preserves_query_order():
    formulas = [
        _x_equals(1),
        _x_squared_plus_one(),
        _x_equals(-2),
        _x_squared_plus_one(),
        _x_equals(Fraction(1, 3)),
        _x_squared_plus_one(),
    ]
    verdicts = solve_many(formulas, jobs=3)
    assert [v.status for v in verdicts] == ["sat", "unsat"] * 3
    for want, verdict in zip([1, None, -2, None, Fraction(1, 3), None], verdicts):
        if want is not None:
            assert verdict.model == {"x": Fraction(want)}


def test_verdict_parsing_from_canned_transcripts():
    sat = "sat\n(model\n  (define-fun x () Real (- (/ 1 2)))\n)\n"
    parsed = _parse_verdict(sat, request_model=True)
    assert parsed.status == "sat"
    assert parsed.model == {"x": Fraction(-1, 2)}

    algebraic = (
        "sat\n(model\n"
        "  (define-fun x () Real (root-obj (+ (^ x 2) (- 2)) 2))\n)\n"
    )
    assert _parse_verdict(algebraic, request_model=True).model is None

    assert _parse_verdict("unknown\n", request_model=True).status == "unknown"
    with pytest.raises(BackendError):
        _parse_verdict("segmentation fault\n", request_model=True)


def test_backend_timeout_and_launch_failures():
    slow = SolverConfig(command=["sh", "-c", "sleep 5", "backend"], timeout_sec=0.2)
    assert solve(_x_equals(1), slow).status == "timeout"
    missing = SolverConfig(command=["/nonexistent/decision-procedure"])
    with pytest.raises(BackendError):
        solve(_x_equals(1), missing)


def test_default_config_uses_bundled_shim(monkeypatch):
    monkeypatch.delenv("ROBUSTHIT_SMT_SOLVER", raising=False)
    config = default_solver_config(timeout_sec=30)
    assert config.timeout_sec == 30
    name = config.command[0].rsplit("/", 1)[-1]
    if name.startswith("z3smt2"):
        assert config.supports_batch
