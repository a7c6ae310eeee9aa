"""Desk-scale search for robust hitting sets, with independent re-checking.

The driver walks candidate m-tuples of grid points (lexicographically, or
seeded-random), asks the solver whether any admissible circuit assignment
evades the whole tuple, and accepts the first tuple for which the answer
is no.  Acceptance is committed strictly in candidate order even when
queries are pipelined, so a run is reproducible from its config snapshot.

True-scale parameters are refused up front with a cost estimate: even the
smallest interesting configuration puts the per-axis grid in the 10^5
range, and the m-fold tuple space far beyond enumeration.  Every run here
is expected to carry explicit overrides.

`unknown` and timeout verdicts are recorded, skipped, and taint the
certificate: the idealized decision procedure never answers that, so a
tainted certificate is weaker than a clean one.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import BudgetError, ExhaustedError
from .etr import SolverConfig, default_solver_config, encode_search_query, solve_many
from .grids import GridSpec, GridVariant, Point, derive_seed
from .norms import sup_norm_grid_lower_sq
from .params import ParamBundle
from .poly import DensePoly, expand_circuit
from .robust import HittingSet, verify_robust
from .scalars import Scalar, format_scalar
from .universal import UniversalCircuit, build_universal, fix_auxiliary

LEX = "lex"
RAND = "rand"


@dataclass
class SearchConfig:
    params: ParamBundle
    mode: str = LEX
    seed: int = 0                         # candidate stream seed (rand mode)
    max_candidates: Optional[int] = None
    solver: Optional[SolverConfig] = None
    timeout_sec: Optional[float] = None
    cost_cap: int = 1_000_000
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.mode not in (LEX, RAND):
            raise ValueError(f"mode must be {LEX!r} or {RAND!r}")
        if self.params.m < 1:
            raise ValueError("search needs m >= 1")

    def solver_config(self) -> SolverConfig:
        base = self.solver or default_solver_config()
        if self.timeout_sec is not None:
            base.timeout_sec = self.timeout_sec
        return base


@dataclass(frozen=True)
class QueryRecord:
    index: int
    candidate_hash: str
    status: str


@dataclass
class SearchCertificate:
    h: HittingSet
    accepted_at: int
    queries: List[QueryRecord]
    tainted: bool
    params: ParamBundle
    mode: str
    seed: int
    solver_identity: str

    def validate(self) -> None:
        if not self.queries or self.queries[-1].status != "unsat":
            raise ValueError("certificate must end in an unsat query")
        for record in self.queries[:-1]:
            if record.status == "unsat":
                raise ValueError(f"non-final unsat at candidate {record.index}")
            if record.status in ("unknown", "timeout") and not self.tainted:
                raise ValueError("skipped verdicts present but certificate not tainted")

    def to_json(self) -> dict:
        return {
            "hitting_set": self.h.to_json(),
            "accepted_at": self.accepted_at,
            "tainted": self.tainted,
            "mode": self.mode,
            "seed": self.seed,
            "solver": self.solver_identity,
            "params": self.params.to_json(),
            "queries": [
                {"index": q.index, "candidate": q.candidate_hash, "status": q.status}
                for q in self.queries
            ],
        }


def candidate_hash(points: Sequence[Point]) -> str:
    text = ";".join(",".join(format_scalar(c) for c in p) for p in points)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _search_grid(params: ParamBundle) -> GridSpec:
    return GridSpec(
        n=params.n,
        delta=params.delta,
        variant=GridVariant.REALIFIED,
        extension_degree=params.r,
    )


def candidate_at(grid: GridSpec, m: int, index: int) -> List[Point]:
    """Tuple number `index` in lexicographic order, first point most significant."""
    size = grid.size()
    digits = []
    for _ in range(m):
        index, digit = divmod(index, size)
        digits.append(digit)
    if index:
        raise ValueError("candidate index out of range")
    return [grid.point_at(d) for d in reversed(digits)]


def _candidates(cfg: SearchConfig, grid: GridSpec) -> Tuple[int, Callable[[int], List[Point]]]:
    """(total candidate count, index -> point tuple)."""
    m = cfg.params.m
    if cfg.mode == LEX:
        total = grid.size() ** m
        if cfg.max_candidates is None and total > cfg.cost_cap:
            raise BudgetError(
                f"lexicographic search would enumerate {total} candidate tuples "
                f"(grid size {grid.size()}, m={m}), over the cap {cfg.cost_cap}; "
                f"set max_candidates or override the parameters"
            )
        if cfg.max_candidates is not None:
            total = min(total, cfg.max_candidates)
        return total, lambda i: candidate_at(grid, m, i)
    total = cfg.max_candidates if cfg.max_candidates is not None else cfg.cost_cap
    return total, lambda i: grid.sample(derive_seed(cfg.seed, "candidate", i), m)


def run_search(cfg: SearchConfig) -> SearchCertificate:
    """First accepted candidate tuple, as a re-checkable certificate.

    Raises ExhaustedError (with the query log attached as `.queries`) when
    the candidate budget runs out without an unsat verdict.
    """
    params = cfg.params
    u = build_universal(params.n, params.s, params.r)
    grid = _search_grid(params)
    solver = cfg.solver_config()
    identity = solver.identity()
    eps = params.eps_alg
    total, point_tuple = _candidates(cfg, grid)

    records: List[QueryRecord] = []
    tainted = False
    chunk = max(1, cfg.jobs)
    for start in range(0, total, chunk):
        indices = range(start, min(start + chunk, total))
        tuples = [point_tuple(i) for i in indices]
        formulas = [encode_search_query(u, pts, eps) for pts in tuples]
        verdicts = solve_many(formulas, solver, jobs=cfg.jobs)
        for i, points, verdict in zip(indices, tuples, verdicts):
            records.append(QueryRecord(i, candidate_hash(points), verdict.status))
            if verdict.status == "unsat":
                cert = SearchCertificate(
                    h=HittingSet(
                        points=list(points),
                        eps_sq=eps * eps,
                        domain="real",
                        provenance="searched",
                    ),
                    accepted_at=i,
                    queries=records,
                    tainted=tainted,
                    params=params,
                    mode=cfg.mode,
                    seed=cfg.seed,
                    solver_identity=identity,
                )
                cert.validate()
                return cert
            if verdict.status in ("unknown", "timeout"):
                tainted = True

    exc = ExhaustedError(
        f"no candidate accepted after {len(records)} queries (budget {total})"
    )
    exc.queries = records
    raise exc


def recheck_certificate(cfg: SearchConfig, cert: SearchCertificate) -> str:
    """Re-solve the accepted query; a well-formed certificate returns unsat."""
    u = build_universal(cert.params.n, cert.params.s, cert.params.r)
    formula = encode_search_query(u, cert.h.points, cert.params.eps_alg)
    return solve_many([formula], cfg.solver_config())[0].status


Sampler = Callable[[random.Random], List[Fraction]]


def axis_sampler(u: UniversalCircuit, delta: Fraction) -> Sampler:
    """Each auxiliary weight drawn uniformly from the grid axis."""
    axis = GridSpec(n=1, delta=delta, variant=GridVariant.REAL).axis()

    def draw(rng: random.Random) -> List[Fraction]:
        return [rng.choice(axis) for _ in range(u.m_auxiliary)]

    return draw


@dataclass
class CertificateCheck:
    trials: int
    passes: int
    zero_skipped: int
    failures: List[int] = field(default_factory=list)   # trial indices

    @property
    def pass_fraction(self) -> Fraction:
        effective = self.trials - self.zero_skipped
        return Fraction(1) if effective == 0 else Fraction(self.passes, effective)


def verify_certificate(
    cert: SearchCertificate,
    trials: int,
    seed: int,
    sampler: Optional[Sampler] = None,
) -> CertificateCheck:
    """Spot-check: sampled family members must be hit by the certificate set.

    Each trial draws auxiliary weights, expands the circuit, rescales so
    the best grid point has value exactly 1 (an admissible representative;
    the hit test itself is scale-invariant), and asks for a witness at the
    certificate's strength.  Zero polynomials are outside the claim and
    are skipped.
    """
    params = cert.params
    u = build_universal(params.n, params.s, params.r)
    draw = sampler or axis_sampler(u, params.delta)
    rng = random.Random(seed)
    passes = 0
    zero_skipped = 0
    failures: List[int] = []
    for trial in range(trials):
        weights = draw(rng)
        poly = expand_circuit(fix_auxiliary(u, weights))
        if poly.is_zero():
            zero_skipped += 1
            continue
        peak_sq, witness = sup_norm_grid_lower_sq(poly, params.delta)
        if peak_sq == 0:   # nonzero but grid-invisible; rescaling impossible
            failures.append(trial)
            continue
        scaled = poly.scale(1 / Fraction(poly.evaluate(witness)))
        if verify_robust(cert.h, scaled).ok:
            passes += 1
        else:
            failures.append(trial)
    return CertificateCheck(trials, passes, zero_skipped, failures)


def certificate_from_json(obj: dict) -> SearchCertificate:
    """Inverse of SearchCertificate.to_json."""
    from .params import bundle_from_json
    from .robust import hitting_set_from_json

    cert = SearchCertificate(
        h=hitting_set_from_json(obj["hitting_set"]),
        accepted_at=int(obj["accepted_at"]),
        queries=[
            QueryRecord(int(q["index"]), q["candidate"], q["status"])
            for q in obj["queries"]
        ],
        tainted=bool(obj["tainted"]),
        params=bundle_from_json(obj["params"]),
        mode=obj["mode"],
        seed=int(obj["seed"]),
        solver_identity=obj["solver"],
    )
    cert.validate()
    return cert
