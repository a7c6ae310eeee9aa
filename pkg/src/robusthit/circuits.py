"""Algebraic circuits as topologically ordered gate lists.

A circuit is a DAG of input / constant / add / mul gates with fan-in two on
the binary gates.  Gates are stored in one list whose position equals the
gate id, and every argument must point at a strictly earlier gate, so a
single forward pass evaluates the circuit.  Size is counted in wires:
two per binary gate.

Evaluation is generic over the value ring: anything supporting `+` and `*`
with itself and with the stored constants works, which is how polynomial
expansion reuses this module (inputs get bound to monomials instead of
numbers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Sequence

from .errors import DimensionError
from .scalars import Scalar, format_scalar, parse_scalar

INPUT = "input"
CONST = "const"
ADD = "add"
MUL = "mul"

_KINDS = (INPUT, CONST, ADD, MUL)


class CircuitError(ValueError):
    """Malformed circuit: bad ids, dangling references, wrong arg shapes."""


@dataclass(frozen=True)
class Gate:
    """One gate; exactly one of `var`, `value`, `args` is set per kind."""

    id: int
    kind: str
    var: Optional[int] = None
    value: Optional[Scalar] = None
    args: Optional[tuple[int, int]] = None


@dataclass
class Circuit:
    """Gate list plus variable count and output gate ids.

    `homogeneous` mirrors the declared flag from the interchange format;
    `check_homogeneous` computes the truth from the gate structure.
    """

    n_vars: int
    gates: list[Gate] = field(default_factory=list)
    outputs: tuple[int, ...] = ()
    homogeneous: Optional[bool] = None

    def gate(self, gate_id: int) -> Gate:
        return self.gates[gate_id]

    @property
    def output(self) -> int:
        if len(self.outputs) != 1:
            raise CircuitError(f"expected a single output, got {self.outputs!r}")
        return self.outputs[0]

    def binary_gate_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in (ADD, MUL))

    def size(self) -> int:
        """Wire count: two incoming wires per binary gate."""
        return 2 * self.binary_gate_count()

    def validate(self) -> None:
        if self.n_vars < 0:
            raise CircuitError("n_vars must be nonnegative")
        for pos, gate in enumerate(self.gates):
            if gate.id != pos:
                raise CircuitError(f"gate id {gate.id} at position {pos}")
            if gate.kind == INPUT:
                if gate.var is None or not 0 <= gate.var < self.n_vars:
                    raise CircuitError(f"gate {pos}: input var {gate.var!r} out of range")
            elif gate.kind == CONST:
                if gate.value is None:
                    raise CircuitError(f"gate {pos}: const without value")
            elif gate.kind in (ADD, MUL):
                if gate.args is None or len(gate.args) != 2:
                    raise CircuitError(f"gate {pos}: {gate.kind} needs exactly two args")
                for arg in gate.args:
                    if not 0 <= arg < pos:
                        raise CircuitError(
                            f"gate {pos}: arg {arg} does not point at an earlier gate"
                        )
            else:
                raise CircuitError(f"gate {pos}: unknown kind {gate.kind!r}")
        if not self.outputs:
            raise CircuitError("circuit has no outputs")
        for out in self.outputs:
            if not 0 <= out < len(self.gates):
                raise CircuitError(f"output {out} is not a gate id")
        if self.homogeneous:
            degrees = self.formal_degrees()
            for gate_id, degree in enumerate(degrees):
                if degree is None:
                    raise CircuitError(
                        f"gate {gate_id}: add combines unequal degrees but the "
                        "circuit is declared homogeneous"
                    )

    def evaluate(
        self,
        point: Sequence[Any],
        lift_const: Callable[[Scalar], Any] = lambda c: c,
    ) -> Any:
        """Forward evaluation at `point` (one value per variable).

        `lift_const` maps stored constants into the value ring; the default
        keeps them as scalars, which is right for numeric evaluation.
        """
        if len(point) != self.n_vars:
            raise DimensionError(
                f"point has {len(point)} coordinates, circuit has {self.n_vars}"
            )
        values: list[Any] = [None] * len(self.gates)
        for gate in self.gates:
            if gate.kind == INPUT:
                values[gate.id] = point[gate.var]
            elif gate.kind == CONST:
                values[gate.id] = lift_const(gate.value)
            elif gate.kind == ADD:
                values[gate.id] = values[gate.args[0]] + values[gate.args[1]]
            else:
                values[gate.id] = values[gate.args[0]] * values[gate.args[1]]
        return values[self.output]

    def formal_degrees(self) -> list[Optional[int]]:
        """Per-gate syntactic degree; None marks an inhomogeneous gate.

        Add gates must combine equal degrees, mul gates sum them.  A gate
        fed by an inhomogeneous gate is itself inhomogeneous.
        """
        degs: list[Optional[int]] = [None] * len(self.gates)
        for gate in self.gates:
            if gate.kind == INPUT:
                degs[gate.id] = 1
            elif gate.kind == CONST:
                degs[gate.id] = 0
            elif gate.kind == ADD:
                a, b = (degs[i] for i in gate.args)
                degs[gate.id] = a if (a is not None and a == b) else None
            else:
                a, b = (degs[i] for i in gate.args)
                degs[gate.id] = a + b if (a is not None and b is not None) else None
        return degs


def check_homogeneous(circuit: Circuit) -> Optional[int]:
    """Syntactic degree of the output if the circuit is homogeneous, else None."""
    return circuit.formal_degrees()[circuit.output]


def substitute_suffix(circuit: Circuit, n_keep: int, values: Sequence[Scalar]) -> Circuit:
    """Pin variables n_keep..n_vars-1 to constants, keeping the first n_keep.

    Input gates on the pinned suffix become constant gates; the result is a
    circuit over `n_keep` variables with the same shape otherwise.
    """
    if n_keep + len(values) != circuit.n_vars:
        raise CircuitError(
            f"need {circuit.n_vars - n_keep} values for the pinned suffix, got {len(values)}"
        )
    gates: list[Gate] = []
    for gate in circuit.gates:
        if gate.kind == INPUT and gate.var >= n_keep:
            gates.append(Gate(gate.id, CONST, value=values[gate.var - n_keep]))
        else:
            gates.append(gate)
    out = Circuit(n_keep, gates, circuit.outputs, homogeneous=None)
    out.validate()
    return out


def parse_circuit(obj: Mapping[str, Any]) -> Circuit:
    """Decode the JSON interchange form; validates structure on the way in.

    Expected shape::

        {"n_vars": 2,
         "gates": [{"id": 0, "kind": "input", "args": [0]},
                   {"id": 1, "kind": "const", "args": ["3/2"]},
                   {"id": 2, "kind": "mul",   "args": [0, 1]}],
         "outputs": [2],
         "homogeneous": true}

    Constants are rational strings ("p/q" or "p/q+r/s i").
    """
    try:
        n_vars = int(obj["n_vars"])
        raw_gates = obj["gates"]
        outputs = tuple(int(o) for o in obj["outputs"])
    except (KeyError, TypeError) as exc:
        raise CircuitError(f"missing or malformed circuit field: {exc}") from exc
    gates: list[Gate] = []
    for raw in raw_gates:
        kind = raw.get("kind")
        gid = int(raw.get("id", -1))
        args = raw.get("args", [])
        if kind == INPUT:
            if len(args) != 1:
                raise CircuitError(f"gate {gid}: input takes one arg, got {args!r}")
            gates.append(Gate(gid, INPUT, var=int(args[0])))
        elif kind == CONST:
            if len(args) != 1 or not isinstance(args[0], str):
                raise CircuitError(f"gate {gid}: const takes one string arg, got {args!r}")
            gates.append(Gate(gid, CONST, value=parse_scalar(args[0])))
        elif kind in (ADD, MUL):
            if len(args) != 2:
                raise CircuitError(f"gate {gid}: {kind} takes two args, got {args!r}")
            gates.append(Gate(gid, kind, args=(int(args[0]), int(args[1]))))
        else:
            raise CircuitError(f"gate {gid}: unknown kind {kind!r}")
    homogeneous = obj.get("homogeneous")
    circuit = Circuit(n_vars, gates, outputs, homogeneous)
    circuit.validate()
    return circuit


def circuit_to_json(circuit: Circuit) -> dict[str, Any]:
    """Inverse of parse_circuit; round-trips bit-exactly."""
    gates = []
    for gate in circuit.gates:
        if gate.kind == INPUT:
            args: list[Any] = [gate.var]
        elif gate.kind == CONST:
            args = [format_scalar(gate.value)]
        else:
            args = list(gate.args)
        gates.append({"id": gate.id, "kind": gate.kind, "args": args})
    out: dict[str, Any] = {
        "n_vars": circuit.n_vars,
        "gates": gates,
        "outputs": list(circuit.outputs),
    }
    if circuit.homogeneous is not None:
        out["homogeneous"] = circuit.homogeneous
    return out


class CircuitBuilder:
    """Imperative helper for assembling circuits in code.

    Methods return gate ids; `finish` seals the gate list into a Circuit.
    """

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self._gates: list[Gate] = []

    def _push(self, kind: str, **kw: Any) -> int:
        gid = len(self._gates)
        self._gates.append(Gate(gid, kind, **kw))
        return gid

    def input(self, var: int) -> int:
        if not 0 <= var < self.n_vars:
            raise CircuitError(f"input var {var} out of range for {self.n_vars} variables")
        return self._push(INPUT, var=var)

    def const(self, value: Scalar | int | str) -> int:
        if isinstance(value, str):
            value = parse_scalar(value)
        elif isinstance(value, int):
            value = Fraction(value)
        return self._push(CONST, value=value)

    def add(self, a: int, b: int) -> int:
        return self._push(ADD, args=(a, b))

    def mul(self, a: int, b: int) -> int:
        return self._push(MUL, args=(a, b))

    def sum(self, terms: Sequence[int]) -> int:
        """Left-folded add chain; a single term passes through unchanged."""
        if not terms:
            raise CircuitError("cannot sum zero terms")
        acc = terms[0]
        for term in terms[1:]:
            acc = self.add(acc, term)
        return acc

    def finish(self, output: int, homogeneous: Optional[bool] = None) -> Circuit:
        circuit = Circuit(self.n_vars, list(self._gates), (output,), homogeneous)
        circuit.validate()
        return circuit
