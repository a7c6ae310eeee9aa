"""Command-line front end.

One executable, one subcommand per operation family.  All quantities that
feed a pass/fail decision print as exact rationals; every artifact file
written under --output (and every --csv/--dump) embeds the run-manifest
digest so a result can be traced back to the exact invocation.

Exit codes: 0 success, 1 domain failure (violated invariant, exhausted
search, infeasible extraction), 2 usage error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import anticonc, etr, grids, hardpoly, manifest, norms, params, robust, search
from .circuits import check_homogeneous, parse_circuit
from .errors import BackendError, BudgetError, ExhaustedError, WorkbenchError
from .poly import expand_circuit, poly_from_json, poly_to_json
from .scalars import Scalar, format_rational, format_scalar, parse_scalar
from .universal import build_universal, embed_normal_form, universal_to_json

try:
    from importlib.metadata import PackageNotFoundError, version

    try:
        TOOL_VERSION = version("artifact")
    except PackageNotFoundError:
        TOOL_VERSION = "0.0.0+local"
except ImportError:   # pragma: no cover
    TOOL_VERSION = "0.0.0+local"


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def rational_list(text: str) -> List[Fraction]:
    return [rational(part) for part in text.split(",") if part.strip()]


def point_arg(text: str) -> Tuple[Scalar, ...]:
    try:
        return tuple(parse_scalar(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}: {exc}") from exc


def points_arg(text: str) -> List[Tuple[Scalar, ...]]:
    return [point_arg(part) for part in text.split(";") if part.strip()]


@dataclass
class Context:
    argv: List[str]
    config: Dict[str, Any]
    config_digest: Optional[str]
    jobs: int
    output: Optional[Path]

    def get(self, args: argparse.Namespace, name: str, default: Any = None) -> Any:
        """Flag value, else config-file value, else default (flags win)."""
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in self.config:
            return self.config[name]
        return default

    def manifest(
        self,
        seeds: Optional[Dict[str, int]] = None,
        solver_identity: Optional[str] = None,
    ) -> manifest.RunManifest:
        return manifest.RunManifest(
            command_line=self.argv,
            tool_version=TOOL_VERSION,
            seeds=seeds or {},
            config_digest=self.config_digest,
            solver_identity=solver_identity,
        )

    def write_json(self, name: str, payload: dict, run: manifest.RunManifest) -> None:
        if self.output is None:
            return
        path = self.output / name
        manifest.write_artifact(path, payload, run)
        print(f"wrote {path}")

    def write_csv(self, args: argparse.Namespace, text: str,
                  run: manifest.RunManifest) -> None:
        target = getattr(args, "csv", None)
        if target:
            manifest.write_csv(Path(target), text, run)
            print(f"wrote {target}")


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _solver_config(ctx: Context, args: argparse.Namespace) -> etr.SolverConfig:
    spec = ctx.get(args, "solver")
    timeout = ctx.get(args, "timeout")
    if spec:
        command = shlex.split(spec)
        return etr.SolverConfig(
            command=command,
            timeout_sec=float(timeout) if timeout is not None else None,
            supports_batch=Path(command[0]).name.startswith("z3smt2"),
        )
    return etr.default_solver_config(
        timeout_sec=float(timeout) if timeout is not None else None
    )


def _param_overrides(ctx: Context, args: argparse.Namespace) -> Optional[Dict[str, Any]]:
    overrides: Dict[str, Any] = {}
    for field, flag in (
        ("eta", "eta"),
        ("delta", "delta"),
        ("eps_alg", "eps"),
        ("m", "m"),
        ("d_bound", "d_bound"),
        ("log2_d_bound", "log2_d_bound"),
    ):
        value = ctx.get(args, flag)
        if value is not None:
            overrides[field] = value
    return overrides or None


def _bundle(ctx: Context, args: argparse.Namespace) -> params.ParamBundle:
    return params.compute_params(
        int(ctx.get(args, "n")),
        int(ctx.get(args, "s")),
        int(ctx.get(args, "r")),
        c_cw=ctx.get(args, "ccw", Fraction(2)),
        c_size=int(ctx.get(args, "csize", 1)),
        c_var=int(ctx.get(args, "cvar", 1)),
        overrides=_param_overrides(ctx, args),
    )


# ---------------------------------------------------------------- handlers


def cmd_params(ctx: Context, args: argparse.Namespace) -> int:
    bundle = _bundle(ctx, args)
    rows = [(k, v) for k, v in bundle.to_json().items() if k != "overrides"]
    for key, value in rows:
        print(f"{key} = {value}")
    if bundle.overrides:
        print(f"overrides = {json.dumps(bundle.overrides)}")
    if args.net:
        eps_net = robust.paper_faithful_eps_net(bundle.n, bundle.r)
        report = robust.check_robust_net_condition(eps_net, bundle.eta, bundle.n, bundle.r)
        print(f"net eps = {format_rational(eps_net)}")
        print(f"net left: {format_rational(report.left_lhs)} < "
              f"{format_rational(report.left_rhs)} -> {report.left_ok}")
        print(f"net right: {format_rational(report.right_lhs)} < "
              f"{format_rational(report.right_rhs)} -> {report.right_ok}")
    run = ctx.manifest()
    csv = "field,value\n" + "\n".join(f"{k},{v}" for k, v in rows) + "\n"
    ctx.write_csv(args, csv, run)
    ctx.write_json("params.json", bundle.to_json(), run)
    return 0


def cmd_circuit_eval(ctx: Context, args: argparse.Namespace) -> int:
    circuit = parse_circuit(_load_json(args.circuit))
    circuit.validate()
    print(format_scalar(circuit.evaluate(list(args.point))))
    return 0


def cmd_circuit_expand(ctx: Context, args: argparse.Namespace) -> int:
    circuit = parse_circuit(_load_json(args.circuit))
    circuit.validate()
    expanded = expand_circuit(circuit)
    payload = poly_to_json(expanded)
    print(json.dumps(payload, indent=2))
    ctx.write_json("expanded.json", payload, ctx.manifest())
    return 0


def cmd_circuit_check(ctx: Context, args: argparse.Namespace) -> int:
    circuit = parse_circuit(_load_json(args.circuit))
    circuit.validate()
    degree = check_homogeneous(circuit)
    print(f"gates = {len(circuit.gates)}")
    print(f"size (wires) = {circuit.size()}")
    print(f"computed homogeneous degree = {degree if degree is not None else 'none'}")
    if circuit.homogeneous and degree is None:
        print("declared homogeneous but gate structure is not")
        return 1
    return 0


def cmd_norm(ctx: Context, args: argparse.Namespace) -> int:
    target = poly_from_json(_load_json(args.poly))
    delta = Fraction(ctx.get(args, "delta", Fraction(1, 8)))
    if not target.is_real():
        pair = norms.complex_l2_pair(target)
        print(f"real part norm_sq = {format_rational(pair[0])}")
        print(f"imaginary part norm_sq = {format_rational(pair[1])}")
        print(f"norm_sq upper proxy = {format_rational(norms.complex_norm_sq_upper(pair))}")
        print(f"norm_sq lower proxy = {format_rational(norms.complex_norm_sq_lower(pair))}")
        return 0
    print(f"l2_norm_sq(direct) = {format_rational(norms.l2_norm_sq_direct(target))}")
    print(f"l2_norm_sq(orthogonal route) = "
          f"{format_rational(norms.l2_norm_sq_legendre(target))}")
    report = norms.check_norm_inequalities(target, delta)
    lines = ["name,lhs,rhs,holds,asserted"]
    for check in report.checks:
        marker = "ok" if check.holds else "VIOLATED"
        advisory = "" if check.asserted else " (advisory)"
        print(f"{check.name}: {format_rational(check.lhs)} <= "
              f"{format_rational(check.rhs)} -> {marker}{advisory}")
        lines.append(f"{check.name},{check.lhs},{check.rhs},"
                     f"{int(check.holds)},{int(check.asserted)}")
    run = ctx.manifest()
    ctx.write_csv(args, "\n".join(lines) + "\n", run)
    return 0 if report.ok else 1


def cmd_universal_build(ctx: Context, args: argparse.Namespace) -> int:
    u = build_universal(args.n, args.s, args.r, width_override=args.width)
    payload = universal_to_json(u)
    print(json.dumps(payload, indent=2))
    ctx.write_json("universal.json", payload, ctx.manifest())
    return 0


def cmd_universal_embed(ctx: Context, args: argparse.Namespace) -> int:
    u = build_universal(args.n, args.s, args.r, width_override=args.width)
    circuit = parse_circuit(_load_json(args.circuit))
    circuit.validate()
    assignment = embed_normal_form(u, circuit)
    for j, value in enumerate(assignment):
        print(f"y{j} = {format_scalar(value)}")
    return 0


_VARIANTS = {
    "real": grids.GridVariant.REAL,
    "complex": grids.GridVariant.COMPLEX,
    "realified": grids.GridVariant.REALIFIED,
}


def _grid(ctx: Context, args: argparse.Namespace) -> grids.GridSpec:
    return grids.GridSpec(
        n=int(ctx.get(args, "n")),
        delta=Fraction(ctx.get(args, "delta")),
        variant=_VARIANTS[ctx.get(args, "variant", "real")],
        extension_degree=int(ctx.get(args, "ext_degree", 1)),
    )


def cmd_grid_enum(ctx: Context, args: argparse.Namespace) -> int:
    grid = _grid(ctx, args)
    size = grid.size()
    count = args.count if args.count is not None else size
    if args.count is None and size > 4096:
        raise BudgetError(f"grid has {size} points; pass --count/--start to page")
    start = args.start or 0
    for point in grid.enumerate_points(start, min(count, size - start)):
        print(",".join(format_scalar(c) for c in point))
    return 0


def cmd_grid_sample(ctx: Context, args: argparse.Namespace) -> int:
    grid = _grid(ctx, args)
    for point in grid.sample(args.seed, args.count):
        print(",".join(format_scalar(c) for c in point))
    return 0


def cmd_anticonc(ctx: Context, args: argparse.Namespace) -> int:
    target = poly_from_json(_load_json(args.poly))
    betas = ctx.get(args, "betas") or [Fraction(1, 100), Fraction(1, 10), Fraction(1, 4)]
    runner = anticonc.cw_test_real if args.domain == "real" else anticonc.cw_test_complex
    report = runner(
        target,
        Fraction(ctx.get(args, "delta")),
        [Fraction(b) for b in betas],
        c_config=Fraction(ctx.get(args, "c", Fraction(2))),
        samples=int(ctx.get(args, "samples", 2000)),
        seed=int(ctx.get(args, "seed", 0)),
        exhaustive=bool(args.exhaustive),
    )
    print(f"domain={report.domain} mode={report.mode} degree={report.degree} "
          f"delta={format_rational(report.delta)} c={format_rational(report.c_config)}")
    for row in report.rows:
        status = ("vacuous" if row.vacuous else
                  "saturated" if row.saturated else
                  "pass" if row.passed else "FAIL")
        print(f"beta={format_rational(row.beta)} alpha={format_rational(row.alpha)} "
              f"hits={row.hits}/{row.total} "
              f"empirical={format_rational(row.empirical)} "
              f"bound={format_rational(row.bound)} {status}")
    print(f"fitted_C = {format_rational(report.fitted_c)}")
    run = ctx.manifest(seeds={"anticonc": int(ctx.get(args, 'seed', 0))})
    ctx.write_csv(args, report.to_csv(), run)
    return 0 if report.all_passed else 1


def cmd_robust_verify(ctx: Context, args: argparse.Namespace) -> int:
    h = robust.hitting_set_from_json(_load_json(args.set))
    target = poly_from_json(_load_json(args.poly))
    result = robust.verify_robust(h, target)
    if result.zero_polynomial:
        print("zero polynomial: outside the hitting claim, vacuously fine")
        return 0
    if result.witness is not None:
        print(f"witness index {result.witness}: value_sq = "
              f"{format_rational(result.value_sq_at_witness)} >= threshold_sq = "
              f"{format_rational(result.threshold_sq)}")
        return 0
    print(f"no witness: every point fell below threshold_sq = "
          f"{format_rational(result.threshold_sq)}")
    return 1


def cmd_robust_sample(ctx: Context, args: argparse.Namespace) -> int:
    bundle = _bundle(ctx, args)
    h = robust.sample_candidate(bundle, args.seed)
    payload = h.to_json()
    print(json.dumps(payload, indent=2))
    ctx.write_json("candidate.json", payload, ctx.manifest(seeds={"sample": args.seed}))
    return 0


def cmd_robust_realify(ctx: Context, args: argparse.Namespace) -> int:
    h = robust.hitting_set_from_json(_load_json(args.set))
    flattened = robust.realify(h, args.degree)
    payload = flattened.to_json()
    print(json.dumps(payload, indent=2))
    ctx.write_json("realified.json", payload, ctx.manifest())
    return 0


def cmd_robust_demo_tensor(ctx: Context, args: argparse.Namespace) -> int:
    schedule = ctx.get(args, "eps") or [Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)]
    report = robust.tensor_limit_demo(schedule)
    lines = ["eps,value_at_bad_point,norm_sq,witness"]
    for eps, value, norm_sq, witness in zip(
        report.eps_schedule, report.values_at_bad_point, report.norms_sq,
        report.witnesses,
    ):
        print(f"eps = {format_rational(eps)}: value at bad point = "
              f"{format_rational(value)}, norm_sq = {format_rational(norm_sq)}, "
              f"witness index = {witness}")
        lines.append(f"{eps},{value},{norm_sq},{witness}")
    print(f"limit: value at bad point = {format_rational(report.limit_value_at_bad_point)}, "
          f"value at good point = {format_rational(report.limit_value_at_good_point)}, "
          f"norm_sq = {format_rational(report.norms_sq[-1])}, "
          f"witness index = {report.witnesses[-1]}")
    print(f"all members hit: {report.ok}")
    run = ctx.manifest()
    ctx.write_csv(args, "\n".join(lines) + "\n", run)
    return 0 if report.ok else 1


def _dump_or_print(ctx: Context, args: argparse.Namespace, formula: etr.ETRFormula) -> None:
    text = formula.to_smt2()
    dump = getattr(args, "dump", None)
    if dump:
        digest = ctx.manifest().digest()
        Path(dump).write_text(f"; manifest {digest}\n{text}")
        print(f"wrote {dump}")
    else:
        print(text, end="")


def cmd_etr_encode_phi(ctx: Context, args: argparse.Namespace) -> int:
    u = build_universal(args.n, args.s, args.r, width_override=args.width)
    formula = etr.encode_phi(
        u, list(args.point), args.eps,
        aux_values=list(args.aux) if args.aux else None,
        negate_output=args.negate,
    )
    _dump_or_print(ctx, args, formula)
    return 0


def cmd_etr_encode_psi(ctx: Context, args: argparse.Namespace) -> int:
    u = build_universal(args.n, args.s, args.r, width_override=args.width)
    formula = etr.encode_psi(u, aux_values=list(args.aux) if args.aux else None)
    _dump_or_print(ctx, args, formula)
    return 0


def cmd_etr_encode_search(ctx: Context, args: argparse.Namespace) -> int:
    u = build_universal(args.n, args.s, args.r, width_override=args.width)
    formula = etr.encode_search_query(u, args.points, args.eps)
    _dump_or_print(ctx, args, formula)
    return 0


def cmd_etr_solve(ctx: Context, args: argparse.Namespace) -> int:
    config = _solver_config(ctx, args)
    if args.no_model:
        config.request_model = False
    verdict = etr.solve_file(Path(args.file), config)
    print(verdict.status)
    if verdict.model:
        for name in sorted(verdict.model):
            print(f"{name} = {format_rational(verdict.model[name])}")
    return 0


def cmd_search_run(ctx: Context, args: argparse.Namespace) -> int:
    bundle = _bundle(ctx, args)
    cfg = search.SearchConfig(
        params=bundle,
        mode=ctx.get(args, "mode", search.LEX),
        seed=int(ctx.get(args, "seed", 0)),
        max_candidates=args.max_candidates,
        solver=_solver_config(ctx, args),
        timeout_sec=float(args.timeout) if args.timeout is not None else None,
        cost_cap=int(ctx.get(args, "cost_cap", 1_000_000)),
        jobs=ctx.jobs,
    )
    try:
        cert = search.run_search(cfg)
    except ExhaustedError as exc:
        print(f"exhausted: {exc}")
        for record in getattr(exc, "queries", []):
            print(f"  candidate {record.index} [{record.candidate_hash}]: {record.status}")
        return 1
    print(f"accepted candidate {cert.accepted_at} after {len(cert.queries)} queries"
          f"{' (tainted)' if cert.tainted else ''}")
    for i, point in enumerate(cert.h.points):
        print(f"  v{i} = ({', '.join(format_scalar(c) for c in point)})")
    print(f"eps_sq = {format_rational(cert.h.eps_sq)}")
    print(f"solver: {cert.solver_identity}")
    run = ctx.manifest(seeds={"search": cfg.seed},
                       solver_identity=cert.solver_identity)
    ctx.write_json("certificate.json", cert.to_json(), run)
    return 0


def cmd_search_verify_cert(ctx: Context, args: argparse.Namespace) -> int:
    cert = search.certificate_from_json(_load_json(args.cert))
    check = search.verify_certificate(cert, trials=args.trials, seed=args.seed)
    print(f"trials = {check.trials}")
    print(f"zero polynomials skipped = {check.zero_skipped}")
    print(f"passes = {check.passes}")
    print(f"pass fraction = {format_rational(check.pass_fraction)}")
    if check.failures:
        print(f"failing trial indices: {check.failures}")
    run = ctx.manifest(seeds={"verify": args.seed})
    ctx.write_csv(args, "trials,passes,zero_skipped,pass_fraction\n"
                  f"{check.trials},{check.passes},{check.zero_skipped},"
                  f"{check.pass_fraction}\n", run)
    return 0 if check.pass_fraction == 1 else 1


def cmd_hardpoly(ctx: Context, args: argparse.Namespace) -> int:
    h = robust.hitting_set_from_json(_load_json(args.hitting_set))
    extracted = hardpoly.extract_hard_poly(h, n=args.n, degree=args.degree)
    print(extracted)
    payload = poly_to_json(extracted)
    ctx.write_json("hardpoly.json", payload, ctx.manifest())
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robusthit",
        description="Exact-arithmetic workbench for robust hitting sets "
                    "of low-degree algebraic circuits.",
    )
    parser.add_argument("--config", help="JSON file of default flag values")
    parser.add_argument("--jobs", type=int, default=1, help="parallel backend processes")
    parser.add_argument("--output", help="directory for JSON artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    def nsr(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--n", type=int, required=required)
        p.add_argument("--s", type=int, required=required)
        p.add_argument("--r", type=int, required=required)

    def param_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--ccw", type=rational)
        p.add_argument("--csize", type=int)
        p.add_argument("--cvar", type=int)
        p.add_argument("--eta", type=rational)
        p.add_argument("--delta", type=rational)
        p.add_argument("--eps", type=rational)
        p.add_argument("--m", type=int)
        p.add_argument("--d-bound", dest="d_bound", type=int)
        p.add_argument("--log2-d-bound", dest="log2_d_bound", type=int)

    def csv_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--csv", help="also write the report as CSV")

    p = sub.add_parser("params", help="derive the exact parameter bundle")
    nsr(p)
    param_flags(p)
    p.add_argument("--net", action="store_true",
                   help="also evaluate the net-condition margins")
    csv_flag(p)
    p.set_defaults(func=cmd_params)

    c = sub.add_parser("circuit", help="evaluate, expand, or check a circuit file")
    csub = c.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("eval")
    p.add_argument("--circuit", required=True)
    p.add_argument("--point", type=point_arg, required=True)
    p.set_defaults(func=cmd_circuit_eval)
    p = csub.add_parser("expand")
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_circuit_expand)
    p = csub.add_parser("check")
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_circuit_check)

    p = sub.add_parser("norm", help="norm values and the inequality suite")
    p.add_argument("--poly", required=True)
    p.add_argument("--delta", type=rational)
    csv_flag(p)
    p.set_defaults(func=cmd_norm)

    u = sub.add_parser("universal", help="universal circuit skeletons")
    usub = u.add_subparsers(dest="subcommand", required=True)
    p = usub.add_parser("build")
    nsr(p)
    p.add_argument("--width", type=int)
    p.set_defaults(func=cmd_universal_build)
    p = usub.add_parser("embed")
    nsr(p)
    p.add_argument("--width", type=int)
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_universal_embed)

    g = sub.add_parser("grid", help="enumerate or sample discretized points")
    gsub = g.add_subparsers(dest="subcommand", required=True)
    for name, handler in (("enum", cmd_grid_enum), ("sample", cmd_grid_sample)):
        p = gsub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--delta", type=rational, required=True)
        p.add_argument("--variant", choices=sorted(_VARIANTS), default="real")
        p.add_argument("--ext-degree", dest="ext_degree", type=int, default=1)
        if name == "enum":
            p.add_argument("--start", type=int)
            p.add_argument("--count", type=int)
        else:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--count", type=int, required=True)
        p.set_defaults(func=handler)

    a = sub.add_parser("anticonc", help="point-mass experiments on grids")
    asub = a.add_subparsers(dest="domain", required=True)
    for name in ("real", "complex"):
        p = asub.add_parser(name)
        p.add_argument("--poly", required=True)
        p.add_argument("--delta", type=rational, required=True)
        p.add_argument("--betas", type=rational_list)
        p.add_argument("--c", type=rational)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--exhaustive", action="store_true")
        csv_flag(p)
        p.set_defaults(func=cmd_anticonc, domain=name)

    r = sub.add_parser("robust", help="hitting-set verification and demos")
    rsub = r.add_subparsers(dest="subcommand", required=True)
    p = rsub.add_parser("verify")
    p.add_argument("--set", required=True)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_robust_verify)
    p = rsub.add_parser("sample")
    nsr(p)
    param_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_robust_sample)
    p = rsub.add_parser("realify")
    p.add_argument("--set", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_robust_realify)
    p = rsub.add_parser("demo-tensor")
    p.add_argument("--eps", type=rational_list)
    csv_flag(p)
    p.set_defaults(func=cmd_robust_demo_tensor)

    e = sub.add_parser("etr", help="encode and solve existential real queries")
    esub = e.add_subparsers(dest="subcommand", required=True)
    p = esub.add_parser("encode-phi")
    nsr(p)
    p.add_argument("--width", type=int)
    p.add_argument("--point", type=point_arg, required=True)
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--aux", type=point_arg)
    p.add_argument("--negate", action="store_true")
    p.add_argument("--dump")
    p.set_defaults(func=cmd_etr_encode_phi)
    p = esub.add_parser("encode-psi")
    nsr(p)
    p.add_argument("--width", type=int)
    p.add_argument("--aux", type=point_arg)
    p.add_argument("--dump")
    p.set_defaults(func=cmd_etr_encode_psi)
    p = esub.add_parser("encode-search")
    nsr(p)
    p.add_argument("--width", type=int)
    p.add_argument("--points", type=points_arg, required=True)
    p.add_argument("--eps", type=rational, required=True)
    p.add_argument("--dump")
    p.set_defaults(func=cmd_etr_encode_search)
    p = esub.add_parser("solve")
    p.add_argument("--file", required=True)
    p.add_argument("--solver")
    p.add_argument("--timeout", type=float)
    p.add_argument("--no-model", action="store_true")
    p.set_defaults(func=cmd_etr_solve)

    s = sub.add_parser("search", help="candidate search and certificate checking")
    ssub = s.add_subparsers(dest="subcommand", required=True)
    p = ssub.add_parser("run")
    nsr(p)
    param_flags(p)
    p.add_argument("--mode", choices=(search.LEX, search.RAND))
    p.add_argument("--seed", type=int)
    p.add_argument("--solver")
    p.add_argument("--timeout", type=float)
    p.add_argument("--max-candidates", dest="max_candidates", type=int)
    p.add_argument("--cost-cap", dest="cost_cap", type=int)
    p.set_defaults(func=cmd_search_run)
    p = ssub.add_parser("verify-cert")
    p.add_argument("--cert", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    csv_flag(p)
    p.set_defaults(func=cmd_search_verify_cert)

    p = sub.add_parser("hardpoly", help="extract a vanishing polynomial from a set")
    p.add_argument("--hitting-set", dest="hitting_set", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_hardpoly)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(argv) if argv is not None else sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)

    config: Dict[str, Any] = {}
    config_digest = None
    if args.config:
        path = Path(args.config)
        try:
            config = json.loads(path.read_text())
            config_digest = manifest.file_digest(path)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {path}: {exc}", file=sys.stderr)
            return 1

    ctx = Context(
        argv=argv,
        config=config,
        config_digest=config_digest,
        jobs=args.jobs,
        output=Path(args.output) if args.output else None,
    )
    try:
        return args.func(ctx, args)
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    except (WorkbenchError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
