"""Universal homogeneous circuit skeleton and constructive embeddings.

The skeleton over essential variables x_0..x_{n-1} and auxiliary weights
y_0..y_{m-1} is built layer by layer: the degree-1 pool is the inputs;
for each degree t from 2 to r there are `width` product gates, each
multiplying two fresh weighted sums over the ceil(t/2)- and floor(t/2)-
pools; the output is a weighted sum over the degree-r pool.  Every wire
carries a distinct fresh y variable, so an assignment to y picks an
arbitrary circuit of that shape.

Auxiliary variables are numbered in wire-creation order (left sum, right
sum, slot by slot, degree ascending, output last); assignment vectors use
that order.  Degree counting: a pool-t gate has formal degree 3t - 2 in
(x, y) jointly and degree t in x once y is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .circuits import ADD, CONST, INPUT, MUL, Circuit, Gate, circuit_to_json, substitute_suffix
from .errors import CapacityError, DimensionError, ShapeError
from .scalars import GaussianRational, Scalar, format_scalar


@dataclass(frozen=True)
class WireSpec:
    """One weighted wire: auxiliary index y_index scales pool gate source."""

    y_index: int
    source: int


@dataclass(frozen=True)
class SumSpec:
    gate_id: int
    wires: Tuple[WireSpec, ...]


@dataclass(frozen=True)
class ProductSpec:
    gate_id: int
    degree: int
    left: SumSpec      # spans the ceil(t/2) pool
    right: SumSpec     # spans the floor(t/2) pool


@dataclass
class UniversalCircuit:
    circuit: Circuit
    n_essential: int
    m_auxiliary: int
    width: int
    params: Tuple[int, int, int]              # the (n, s, r) it was built for
    pools: Dict[int, List[int]] = field(default_factory=dict)
    products: Dict[int, List[ProductSpec]] = field(default_factory=dict)
    output: Optional[SumSpec] = None

    @property
    def degree(self) -> int:
        return self.params[2]


class _Builder:
    def __init__(self, n: int) -> None:
        self.gates: List[Gate] = []
        self.n = n
        self.y_count = 0

    def gate(self, kind: str, *, var: Optional[int] = None, value=None, args=()) -> int:
        gid = len(self.gates)
        self.gates.append(Gate(id=gid, kind=kind, var=var, value=value, args=tuple(args)))
        return gid

    def fresh_y(self) -> tuple[int, int]:
        """Returns (auxiliary index, its input-gate id); var index fixed later
        as n_essential + auxiliary index."""
        j = self.y_count
        self.y_count += 1
        gid = self.gate(INPUT, var=self.n + j)
        return j, gid

    def weighted_sum(self, pool: Sequence[int]) -> SumSpec:
        wires: List[WireSpec] = []
        terms: List[int] = []
        for source in pool:
            j, y_gate = self.fresh_y()
            terms.append(self.gate(MUL, args=(y_gate, source)))
            wires.append(WireSpec(j, source))
        acc = terms[0]
        for term in terms[1:]:
            acc = self.gate(ADD, args=(acc, term))
        return SumSpec(acc, tuple(wires))


def build_universal(
    n: int, s: int, r: int, width_override: Optional[int] = None, width_cap: int = 64
) -> UniversalCircuit:
    """Construct the skeleton for n-variate, size-s, degree-r circuits."""
    if min(n, s, r) < 1:
        raise ValueError(f"n, s, r must all be >= 1, got ({n}, {s}, {r})")
    width = s if width_override is None else width_override
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    if width > width_cap:
        raise CapacityError(f"width {width} exceeds the cap {width_cap}")

    b = _Builder(n)
    pools: Dict[int, List[int]] = {1: [b.gate(INPUT, var=i) for i in range(n)]}
    products: Dict[int, List[ProductSpec]] = {}

    for t in range(2, r + 1):
        hi, lo = (t + 1) // 2, t // 2
        level: List[ProductSpec] = []
        for _ in range(width):
            left = b.weighted_sum(pools[hi])
            right = b.weighted_sum(pools[lo])
            gid = b.gate(MUL, args=(left.gate_id, right.gate_id))
            level.append(ProductSpec(gid, t, left, right))
        products[t] = level
        pools[t] = [p.gate_id for p in level]

    output = b.weighted_sum(pools[r])
    circuit = Circuit(
        n_vars=n + b.y_count,
        gates=tuple(b.gates),
        outputs=(output.gate_id,),
        homogeneous=True,
    )
    circuit.validate()
    return UniversalCircuit(
        circuit=circuit,
        n_essential=n,
        m_auxiliary=b.y_count,
        width=width,
        params=(n, s, r),
        pools=pools,
        products=products,
        output=output,
    )


def fix_auxiliary(u: UniversalCircuit, assignment: Sequence[Scalar]) -> Circuit:
    """Pin the auxiliary variables to constants, leaving an n-variate circuit."""
    if len(assignment) != u.m_auxiliary:
        raise DimensionError(
            f"assignment has {len(assignment)} entries, skeleton has {u.m_auxiliary}"
        )
    return substitute_suffix(u.circuit, u.n_essential, list(assignment))


def scale_embedding(u: UniversalCircuit, assignment: Sequence[Scalar], alpha: Scalar) -> list[Scalar]:
    """Multiply the output-layer weights by alpha: embeds alpha*f."""
    if u.output is None:
        raise ShapeError("skeleton has no output sum")
    scaled = list(assignment)
    for wire in u.output.wires:
        scaled[wire.y_index] = scaled[wire.y_index] * alpha
    return scaled


def _as_weight(value) -> Scalar:
    if isinstance(value, GaussianRational):
        return value.coerce()
    return Fraction(value)


def embed_normal_form(u: UniversalCircuit, c: Circuit) -> list[Scalar]:
    """Recover an assignment a with the skeleton computing exactly c.

    c must be homogeneous of the skeleton's degree, over the same essential
    variables, with every product splitting its degree t as
    ceil(t/2) + floor(t/2) and every summation a constant-weighted sum over
    one pool.  Products are assigned slots in first-seen DFS order from the
    output; running out of slots at some degree raises CapacityError.
    """
    n, _, r = u.params
    if c.n_vars != u.n_essential:
        raise DimensionError(f"circuit has {c.n_vars} variables, skeleton wants {u.n_essential}")
    degrees = c.formal_degrees()
    out_deg = degrees[c.output]
    if out_deg != r:
        raise ShapeError(f"circuit degree {out_deg} does not match skeleton degree {r}")

    assignment: list[Scalar] = [Fraction(0)] * u.m_auxiliary
    slot_of: Dict[int, Tuple[int, int]] = {}   # c gate id -> (degree, slot index)

    def parse_term(gid: int) -> tuple[Scalar, int]:
        """Peel constant factors: returns (weight, member gate id)."""
        weight: Scalar = Fraction(1)
        gate = c.gate(gid)
        while gate.kind == MUL:
            left, right = gate.args
            lk, rk = c.gate(left).kind, c.gate(right).kind
            if lk == CONST:
                weight = weight * _as_weight(c.gate(left).value)
                gate = c.gate(right)
            elif rk == CONST:
                weight = weight * _as_weight(c.gate(right).value)
                gate = c.gate(left)
            else:
                break
        return weight, gate.id

    def parse_weighted_sum(gid: int, pool_degree: int) -> Dict[int, Scalar]:
        """Collect {member gate id: weight} for a sum over the given pool."""
        weights: Dict[int, Scalar] = {}

        def walk(g: int, scale: Scalar) -> None:
            gate = c.gate(g)
            if gate.kind == ADD:
                walk(gate.args[0], scale)
                walk(gate.args[1], scale)
                return
            if gate.kind == CONST:
                raise ShapeError(f"gate {g}: bare constant inside a homogeneous sum")
            weight, member = parse_term(g)
            if degrees[member] != pool_degree:
                raise ShapeError(
                    f"gate {member} has degree {degrees[member]}, expected pool degree {pool_degree}"
                )
            total = weights.get(member, Fraction(0)) + scale * weight
            weights[member] = total
            ensure_member(member, pool_degree)

        walk(gid, Fraction(1))
        return weights

    def ensure_member(gid: int, degree: int) -> None:
        """Members of degree >= 2 must be recognized products with a slot."""
        if degree == 1:
            if c.gate(gid).kind != INPUT:
                raise ShapeError(f"gate {gid}: degree-1 pool member must be an input")
            return
        if gid in slot_of:
            return
        level = u.products.get(degree)
        if level is None:
            raise ShapeError(f"no pool of degree {degree} in the skeleton")
        used = sum(1 for (d, _) in slot_of.values() if d == degree)
        if used >= len(level):
            raise CapacityError(f"more than {len(level)} distinct degree-{degree} products")
        slot_of[gid] = (degree, used)
        spec = level[used]

        gate = c.gate(gid)
        weight, member = parse_term(gid)
        if member != gid or weight != 1:
            raise ShapeError(f"gate {gid}: product carries a constant factor; fold it into a sum wire")
        left_arg, right_arg = gate.args
        hi, lo = (degree + 1) // 2, degree // 2
        left_deg, right_deg = degrees[left_arg], degrees[right_arg]
        if (left_deg, right_deg) == (lo, hi) and hi != lo:
            left_arg, right_arg = right_arg, left_arg
            left_deg, right_deg = right_deg, left_deg
        if (left_deg, right_deg) != (hi, lo):
            raise ShapeError(
                f"gate {gid}: degree split {left_deg}+{right_deg}, skeleton wants {hi}+{lo}"
            )
        write_sum(spec.left, parse_weighted_sum(left_arg, hi), hi)
        write_sum(spec.right, parse_weighted_sum(right_arg, lo), lo)

    def position_of(member: int, degree: int) -> int:
        if degree == 1:
            return c.gate(member).var  # pool order equals variable order
        return slot_of[member][1]

    def write_sum(spec: SumSpec, weights: Dict[int, Scalar], degree: int) -> None:
        # distinct gate ids can denote the same pool position (two input
        # gates reading one variable), so weights accumulate per position
        by_position: Dict[int, Scalar] = {}
        for member, weight in weights.items():
            position = position_of(member, degree)
            by_position[position] = by_position.get(position, Fraction(0)) + weight
        pool = u.pools[degree]
        for position, wire in enumerate(spec.wires):
            assert wire.source == pool[position]
            if position in by_position:
                assignment[wire.y_index] = by_position[position]

    if u.output is None:
        raise ShapeError("skeleton has no output sum")
    write_sum(u.output, parse_weighted_sum(c.output, r), r)
    return assignment


def universal_to_json(u: UniversalCircuit) -> dict:
    def sum_json(s: SumSpec) -> dict:
        return {"gate": s.gate_id, "wires": [[w.y_index, w.source] for w in s.wires]}

    return {
        "circuit": circuit_to_json(u.circuit),
        "universal": {
            "n_essential": u.n_essential,
            "m_auxiliary": u.m_auxiliary,
            "width": u.width,
            "params": list(u.params),
            "pools": {str(t): ids for t, ids in u.pools.items()},
            "products": {
                str(t): [
                    {
                        "gate": p.gate_id,
                        "left": sum_json(p.left),
                        "right": sum_json(p.right),
                    }
                    for p in specs
                ]
                for t, specs in u.products.items()
            },
            "output": sum_json(u.output) if u.output else None,
        },
    }
