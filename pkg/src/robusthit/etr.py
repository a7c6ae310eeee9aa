"""Existential real-arithmetic encodings and the external solver bridge.

Circuit evaluation becomes a conjunction of polynomial atoms with one
fresh real unknown per gate: add gates give linear atoms, mul gates give
bilinear ones, so every gate atom has degree at most 2.  The only other
atoms are the degree-2 output condition, and for the membership formula
the per-coordinate box constraints.

Queries are serialized as SMT-LIB 2 (logic QF_NRA) and handed to an
external decision procedure, one process per query.  Verdicts are parsed
back together with a rational model when the backend offers one; models
with irrational (algebraic) coordinates are dropped rather than rounded.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .circuits import ADD, CONST, INPUT, MUL, Circuit
from .errors import BackendError, DimensionError
from .scalars import GaussianRational, Scalar, as_real
from .universal import UniversalCircuit

Term = Tuple[Fraction, Tuple[str, ...]]

EQ0 = "eq0"   # p  = 0
GE0 = "ge0"   # p >= 0
GT0 = "gt0"   # p  > 0

_REL_SMT = {EQ0: "=", GE0: ">=", GT0: ">"}


@dataclass(frozen=True)
class Atom:
    """Polynomial constraint sum(coeff * prod(vars)) REL 0."""

    terms: Tuple[Term, ...]
    rel: str
    label: str = ""

    def __post_init__(self) -> None:
        if self.rel not in _REL_SMT:
            raise ValueError(f"unknown relation {self.rel!r}")

    def variables(self) -> set:
        return {name for _, names in self.terms for name in names}

    def evaluate(self, assignment: Dict[str, Fraction]) -> bool:
        total = Fraction(0)
        for coeff, names in self.terms:
            value = coeff
            for name in names:
                value *= assignment[name]
            total += value
        if self.rel == EQ0:
            return total == 0
        if self.rel == GE0:
            return total >= 0
        return total > 0


@dataclass
class ETRFormula:
    """Existentially quantified conjunction of polynomial atoms."""

    variables: List[str]
    atoms: List[Atom]

    def validate(self) -> None:
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise ValueError("duplicate variable declaration")
        for atom in self.atoms:
            stray = atom.variables() - declared
            if stray:
                raise ValueError(f"atom {atom.label!r} uses undeclared {sorted(stray)}")

    def to_smt2(self, request_model: bool = True) -> str:
        lines = ["(set-logic QF_NRA)"]
        for name in self.variables:
            lines.append(f"(declare-const {name} Real)")
        for atom in self.atoms:
            if atom.label:
                lines.append(f"; {atom.label}")
            lines.append(f"(assert ({_REL_SMT[atom.rel]} {_poly_smt(atom.terms)} 0))")
        lines.append("(check-sat)")
        if request_model:
            lines.append("(get-model)")
        return "\n".join(lines) + "\n"

    def check_model(self, model: Dict[str, Fraction]) -> List[str]:
        """Labels of atoms the model fails to satisfy exactly (empty = good)."""
        missing = [v for v in self.variables if v not in model]
        if missing:
            raise ValueError(f"model missing variables {missing}")
        return [a.label or f"atom#{i}" for i, a in enumerate(self.atoms)
                if not a.evaluate(model)]


def _rat_smt(value: Fraction) -> str:
    if value < 0:
        return f"(- {_rat_smt(-value)})"
    if value.denominator == 1:
        return str(value.numerator)
    return f"(/ {value.numerator} {value.denominator})"


def _term_smt(coeff: Fraction, names: Tuple[str, ...]) -> str:
    if not names:
        return _rat_smt(coeff)
    factors = list(names) if coeff == 1 else [_rat_smt(coeff), *names]
    return factors[0] if len(factors) == 1 else "(* " + " ".join(factors) + ")"


def _poly_smt(terms: Tuple[Term, ...]) -> str:
    if not terms:
        return "0"
    rendered = [_term_smt(c, names) for c, names in terms]
    return rendered[0] if len(rendered) == 1 else "(+ " + " ".join(rendered) + ")"


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, GaussianRational):
        return as_real(value)
    return Fraction(value)


def _gate_atoms(
    circuit: Circuit,
    n_essential: int,
    prefix: str,
    essential: Sequence[Optional[Fraction]],   # None = symbolic v-variable
    aux_values: Optional[Sequence[Fraction]],  # None = symbolic shared y block
    variables: List[str],
) -> List[Atom]:
    """One defining atom per gate; appends fresh z names to `variables`."""
    atoms: List[Atom] = []
    z = [f"{prefix}z{g.id}" for g in circuit.gates]
    variables.extend(z)
    one = Fraction(1)
    for gate in circuit.gates:
        zg = z[gate.id]
        if gate.kind == INPUT:
            if gate.var < n_essential:
                pin = essential[gate.var]
                if pin is None:
                    terms = ((one, (zg,)), (-one, (f"{prefix}v{gate.var}",)))
                else:
                    terms = ((one, (zg,)), (-pin, ()))
            else:
                j = gate.var - n_essential
                if aux_values is None:
                    terms = ((one, (zg,)), (-one, (f"y{j}",)))
                else:
                    terms = ((one, (zg,)), (-aux_values[j], ()))
        elif gate.kind == CONST:
            terms = ((one, (zg,)), (-_as_fraction(gate.value), ()))
        elif gate.kind == ADD:
            a, b = gate.args
            terms = ((one, (zg,)), (-one, (z[a],)), (-one, (z[b],)))
        else:
            a, b = gate.args
            terms = ((one, (zg,)), (-one, (z[a], z[b])))
        atoms.append(Atom(terms, EQ0, label=f"{prefix}gate{gate.id}:{gate.kind}"))
    return atoms


def _declare_aux(u: UniversalCircuit, variables: List[str]) -> None:
    for j in range(u.m_auxiliary):
        name = f"y{j}"
        if name not in variables:
            variables.append(name)


def encode_phi(
    u: UniversalCircuit,
    v: Sequence[Scalar],
    eps: Fraction,
    aux_values: Optional[Sequence[Scalar]] = None,
    negate_output: bool = False,
    prefix: str = "",
) -> ETRFormula:
    """|Psi(v, y)| >= eps at the fixed point v, as an existential formula.

    `aux_values=None` leaves the shared y block symbolic; otherwise the
    formula is ground.  `negate_output` swaps the output atom for the
    strict complement z_o^2 < eps^2, the per-point condition the search
    imposes on every candidate.
    """
    circuit = u.circuit
    if len(v) != u.n_essential:
        raise DimensionError(f"point has {len(v)} coordinates, expected {u.n_essential}")
    if aux_values is not None and len(aux_values) != u.m_auxiliary:
        raise DimensionError(
            f"{len(aux_values)} auxiliary values, expected {u.m_auxiliary}"
        )
    eps = Fraction(eps)
    pins = [_as_fraction(c) for c in v]
    aux = None if aux_values is None else [_as_fraction(a) for a in aux_values]

    variables: List[str] = []
    if aux is None:
        _declare_aux(u, variables)
    atoms = _gate_atoms(circuit, u.n_essential, prefix, pins, aux, variables)
    zo = f"{prefix}z{circuit.output}"
    one = Fraction(1)
    if negate_output:
        out = Atom(((eps * eps, ()), (-one, (zo, zo))), GT0, label=f"{prefix}output<eps")
    else:
        out = Atom(((one, (zo, zo)), (-eps * eps, ())), GE0, label=f"{prefix}output>=eps")
    formula = ETRFormula(variables, atoms + [out])
    formula.validate()
    return formula


def encode_psi(
    u: UniversalCircuit,
    aux_values: Optional[Sequence[Scalar]] = None,
    prefix: str = "",
) -> ETRFormula:
    """Some point of the box has |Psi(v, y)| >= 1: v existential, boxed."""
    circuit = u.circuit
    aux = None if aux_values is None else [_as_fraction(a) for a in aux_values]
    if aux is not None and len(aux) != u.m_auxiliary:
        raise DimensionError(f"{len(aux)} auxiliary values, expected {u.m_auxiliary}")

    variables: List[str] = []
    if aux is None:
        _declare_aux(u, variables)
    v_names = [f"{prefix}v{i}" for i in range(u.n_essential)]
    variables.extend(v_names)
    atoms = _gate_atoms(
        circuit, u.n_essential, prefix, [None] * u.n_essential, aux, variables
    )
    one = Fraction(1)
    for i, name in enumerate(v_names):
        atoms.append(Atom(((one, ()), (-one, (name, name))), GE0,
                          label=f"{prefix}box{i}"))
    zo = f"{prefix}z{circuit.output}"
    atoms.append(Atom(((one, (zo, zo)), (-one, ())), GE0, label=f"{prefix}output>=1"))
    formula = ETRFormula(variables, atoms)
    formula.validate()
    return formula


def encode_search_query(
    u: UniversalCircuit,
    candidate: Sequence[Sequence[Scalar]],
    eps: Fraction,
) -> ETRFormula:
    """Does any admissible assignment evade every candidate point?

    Shares one symbolic y block across a membership copy (prefix "p") and
    one negated ground-point copy per candidate (prefixes "c0", "c1", ...).
    Unsat means the candidate tuple is accepted.
    """
    base = encode_psi(u, aux_values=None, prefix="p")
    variables = list(base.variables)
    atoms = list(base.atoms)
    for i, point in enumerate(candidate):
        part = encode_phi(u, point, eps, aux_values=None,
                          negate_output=True, prefix=f"c{i}")
        for name in part.variables:
            if name not in variables:
                variables.append(name)
        atoms.extend(part.atoms)
    formula = ETRFormula(variables, atoms)
    formula.validate()
    return formula


@dataclass(frozen=True)
class SolverVerdict:
    status: str                                # sat | unsat | unknown | timeout
    model: Optional[Dict[str, Fraction]] = None
    transcript: str = ""

    def __post_init__(self) -> None:
        if self.status not in ("sat", "unsat", "unknown", "timeout"):
            raise ValueError(f"bad status {self.status!r}")
        if self.model is not None and self.status != "sat":
            raise ValueError("model requires status sat")


@dataclass
class SolverConfig:
    command: List[str]
    timeout_sec: Optional[float] = None
    request_model: bool = True
    supports_batch: bool = False   # command accepts many files, delimits results

    def identity(self) -> str:
        """Backend version string, best effort (used in config snapshots)."""
        try:
            with tempfile.TemporaryDirectory() as td:
                probe = Path(td) / "probe.smt2"
                probe.write_text("(get-info :version)\n")
                proc = subprocess.run(
                    [*self.command, str(probe)],
                    capture_output=True, text=True, timeout=60,
                )
            for line in proc.stdout.splitlines():
                token = line.strip()
                if token and not token.startswith(";;"):   # skip batch delimiters
                    return token
            return "unknown"
        except (OSError, subprocess.SubprocessError):
            return "unknown"


_SHIM_RELATIVE = Path("tools") / "z3backend" / "z3smt2"


def default_solver_command() -> List[str]:
    """Backend resolution order: environment, PATH, bundled shim."""
    env = os.environ.get("ROBUSTHIT_SMT_SOLVER")
    if env:
        return shlex.split(env)
    z3 = shutil.which("z3")
    if z3:
        return [z3]
    shim = Path(__file__).resolve().parents[2] / _SHIM_RELATIVE
    if shim.exists():
        return [str(shim)]
    raise BackendError(
        "no SMT backend: set ROBUSTHIT_SMT_SOLVER, install z3, or build the bundled shim"
    )


def default_solver_config(timeout_sec: Optional[float] = None) -> SolverConfig:
    command = default_solver_command()
    return SolverConfig(
        command=command,
        timeout_sec=timeout_sec,
        supports_batch=Path(command[0]).name.startswith("z3smt2"),
    )


def solve(formula: ETRFormula, config: Optional[SolverConfig] = None) -> SolverVerdict:
    config = config or default_solver_config()
    return solve_many([formula], config)[0]


def solve_many(
    formulas: Sequence[ETRFormula],
    config: Optional[SolverConfig] = None,
    jobs: int = 1,
) -> List[SolverVerdict]:
    """Independent queries, parallel up to `jobs` backend processes.

    Batch-capable backends get contiguous chunks of files per process and
    must echo a `;; ---- <path>` line before each file's output; the
    per-process timeout then covers its whole chunk.
    """
    config = config or default_solver_config()
    if not formulas:
        return []
    jobs = max(1, jobs)
    with tempfile.TemporaryDirectory() as td:
        paths: List[Path] = []
        for i, formula in enumerate(formulas):
            path = Path(td) / f"query{i:04d}.smt2"
            path.write_text(formula.to_smt2(request_model=config.request_model))
            paths.append(path)

        if config.supports_batch:
            chunk_size = -(-len(paths) // jobs)
            chunks = [paths[i:i + chunk_size] for i in range(0, len(paths), chunk_size)]
            with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
                outputs = list(pool.map(lambda c: _run_process(c, config), chunks))
            by_path: Dict[str, str] = {}
            for chunk, output in zip(chunks, outputs):
                by_path.update(_split_batch(output, chunk))
            return [_parse_verdict(by_path[str(p)], config.request_model) for p in paths]

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(lambda p: _run_process([p], config), paths))
        return [_parse_verdict(out, config.request_model) for out in outputs]


_TIMEOUT_MARK = "\x00timeout\x00"


def _run_process(paths: Sequence[Path], config: SolverConfig) -> str:
    argv = [*config.command, *(str(p) for p in paths)]
    try:
        proc = subprocess.run(
            argv, capture_output=True, text=True, timeout=config.timeout_sec
        )
    except subprocess.TimeoutExpired as exc:
        partial = exc.stdout if isinstance(exc.stdout, str) else ""
        return partial + "\n" + _TIMEOUT_MARK
    except OSError as exc:
        raise BackendError(f"cannot launch {argv[0]}: {exc}") from exc
    if proc.returncode != 0 and not proc.stdout.strip():
        raise BackendError(
            f"{argv[0]} exited {proc.returncode}: {proc.stderr.strip()[:500]}"
        )
    return proc.stdout


def _split_batch(output: str, chunk: Sequence[Path]) -> Dict[str, str]:
    """Map each chunk path to its delimited slice of the batch output."""
    if _TIMEOUT_MARK in output:
        return {str(p): _TIMEOUT_MARK for p in chunk}
    pieces: Dict[str, str] = {}
    current: Optional[str] = None
    lines: List[str] = []
    for line in output.splitlines():
        if line.startswith(";; ---- "):
            if current is not None:
                pieces[current] = "\n".join(lines)
            current = line[len(";; ---- "):].strip()
            lines = []
        else:
            lines.append(line)
    if current is not None:
        pieces[current] = "\n".join(lines)
    missing = [str(p) for p in chunk if str(p) not in pieces]
    if missing:
        raise BackendError(f"batch output missing results for {missing}")
    return pieces


def _parse_verdict(output: str, request_model: bool) -> SolverVerdict:
    if _TIMEOUT_MARK in output:
        return SolverVerdict("timeout", transcript=output.replace(_TIMEOUT_MARK, ""))
    status = None
    rest_start = 0
    lines = output.splitlines()
    for i, line in enumerate(lines):
        token = line.strip()
        if token in ("sat", "unsat", "unknown"):
            status, rest_start = token, i + 1
            break
    if status is None:
        raise BackendError(f"no verdict in backend output: {output.strip()[:500]!r}")
    model = None
    if status == "sat" and request_model:
        model = _parse_model("\n".join(lines[rest_start:]))
    return SolverVerdict(status, model=model, transcript=output)


def _parse_model(text: str) -> Optional[Dict[str, Fraction]]:
    """Read `(define-fun name () Real value)` entries; None unless every
    value is exactly rational (numerals, decimals, (/ p q), unary minus)."""
    try:
        sexps = _read_all_sexps(_tokenize(text))
    except ValueError:
        return None
    model: Dict[str, Fraction] = {}
    stack = list(sexps)
    while stack:
        node = stack.pop()
        if not isinstance(node, list):
            continue
        if len(node) == 5 and node[0] == "define-fun" and node[2] == []:
            value = _sexp_to_fraction(node[4])
            if value is None:
                return None
            model[node[1]] = value
        else:
            stack.extend(node)
    return model or None


def _sexp_to_fraction(node) -> Optional[Fraction]:
    if isinstance(node, str):
        try:
            return Fraction(node)
        except (ValueError, ZeroDivisionError):
            return None
    if not node:
        return None
    head = node[0]
    if head == "-" and len(node) == 2:
        inner = _sexp_to_fraction(node[1])
        return None if inner is None else -inner
    if head == "/" and len(node) == 3:
        num, den = _sexp_to_fraction(node[1]), _sexp_to_fraction(node[2])
        if num is None or den is None or den == 0:
            return None
        return num / den
    return None   # root-obj and friends: algebraic, not rational


def _tokenize(text: str) -> List[str]:
    out: List[str] = []
    token = []
    for ch in text:
        if ch in "()":
            if token:
                out.append("".join(token))
                token = []
            out.append(ch)
        elif ch.isspace():
            if token:
                out.append("".join(token))
                token = []
        else:
            token.append(ch)
    if token:
        out.append("".join(token))
    return out


def _read_all_sexps(tokens: List[str]) -> List:
    pos = 0
    out = []

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(read())
            if pos >= len(tokens):
                raise ValueError("unbalanced parenthesis")
            pos += 1
            return items
        if tok == ")":
            raise ValueError("stray close parenthesis")
        return tok

    while pos < len(tokens):
        out.append(read())
    return out


def solve_file(path: Path, config: Optional[SolverConfig] = None) -> SolverVerdict:
    """Run an already-serialized SMT-LIB 2 query as-is."""
    config = config or default_solver_config()
    if not Path(path).exists():
        raise BackendError(f"no such query file: {path}")
    output = _run_process([Path(path)], config)
    if config.supports_batch:
        output = _split_batch(output, [Path(path)])[str(Path(path))]
    return _parse_verdict(output, config.request_model)
