"""Circuit intermediate representation and dataflow validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from qfusion.gates import SHAPE_CHANGING, GateError, GateInstance, matrix

RESOURCE_PREPS = ("F", "G")


class CircuitError(ValueError):
    """Base class for malformed circuits."""


class DataflowError(CircuitError):
    def __init__(self, message: str, op_index: int | None = None, wire: str | None = None):
        where = []
        if op_index is not None:
            where.append(f"op {op_index}")
        if wire is not None:
            where.append(f"wire {wire!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.op_index = op_index
        self.wire = wire


@dataclass(frozen=True)
class Wire:
    id: str
    dim: int


@dataclass(frozen=True)
class ClassicalBit:
    id: str
    width: int = 2


@dataclass(frozen=True)
class Prep:
    """Prepare ``wire`` in basis state ``value`` or, on a ququart, in the
    resource state ``"F"`` or ``"G"``."""

    wire: str
    value: Union[int, str] = 0


@dataclass(frozen=True)
class Gate:
    name: str
    targets: tuple[str, ...]
    power: int = 1
    classical_power: str | None = None
    condition: tuple[str, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.condition is not None:
            object.__setattr__(self, "condition", (str(self.condition[0]), int(self.condition[1])))


@dataclass(frozen=True)
class Fuse:
    inputs: tuple[str, str]
    output: str
    map: str = "F"

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))


@dataclass(frozen=True)
class Split:
    input: str
    outputs: tuple[str, str]
    map: str = "F"

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True)
class Measure:
    wire: str
    cbit: str


@dataclass(frozen=True)
class Discard:
    wire: str


Op = Union[Prep, Gate, Fuse, Split, Measure, Discard]


@dataclass(frozen=True)
class Layout:
    """Facts derived by validation."""

    inputs: tuple[str, ...]
    dims: dict
    cbit_widths: dict
    gate_dims: dict  # op index -> dims of the gate's targets
    leftover: tuple[str, ...]  # alive at the end but not outputs (traced out)


@dataclass(frozen=True)
class Circuit:
    wires: tuple[Wire, ...]
    ops: tuple[Op, ...]
    outputs: tuple[str, ...]
    classical_inputs: tuple[ClassicalBit, ...] = ()
    classical_outputs: tuple[str, ...] = ()
    _layout: Layout | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(self.wires))
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "classical_inputs", tuple(self.classical_inputs))
        object.__setattr__(self, "classical_outputs", tuple(self.classical_outputs))
        object.__setattr__(self, "_layout", validate(self))

    @property
    def layout(self) -> Layout:
        return self._layout

    @property
    def inputs(self) -> tuple[str, ...]:
        return self._layout.inputs

    @property
    def input_dims(self) -> tuple[int, ...]:
        return tuple(self._layout.dims[w] for w in self.inputs)

    @property
    def output_dims(self) -> tuple[int, ...]:
        return tuple(self._layout.dims[w] for w in self.outputs)

    def dim(self, wire: str) -> int:
        return self._layout.dims[wire]

    def gate_instance(self, index: int, power: int | None = None) -> GateInstance:
        op = self.ops[index]
        return GateInstance(op.name, op.power if power is None else power, self._layout.gate_dims[index])

    def has_measurement(self) -> bool:
        return any(isinstance(op, Measure) for op in self.ops)


def validate(c: Circuit) -> Layout:
    dims: dict[str, int] = {}
    for w in c.wires:
        if w.id in dims:
            raise DataflowError("duplicate wire id", wire=w.id)
        if w.dim not in (2, 4):
            raise DataflowError(f"wire dimension must be 2 or 4, got {w.dim}", wire=w.id)
        dims[w.id] = w.dim

    widths: dict[str, int] = {}
    for b in c.classical_inputs:
        if b.id in widths:
            raise DataflowError(f"duplicate classical bit {b.id!r}")
        if b.width not in (2, 4):
            raise DataflowError(f"classical width must be 2 or 4, got {b.width}")
        widths[b.id] = b.width

    created = set()
    for op in c.ops:
        if isinstance(op, Prep):
            created.add(op.wire)
        elif isinstance(op, Fuse):
            created.add(op.output)
        elif isinstance(op, Split):
            created.update(op.outputs)
    inputs = tuple(w.id for w in c.wires if w.id not in created)

    alive = set(inputs)
    seen = set(inputs)
    gate_dims = {}

    def need(wire, i, dim=None):
        if wire not in dims:
            raise DataflowError("undeclared wire", i, wire)
        if wire not in alive:
            state = "consumed" if wire in seen else "not yet created"
            raise DataflowError(f"wire used while {state}", i, wire)
        if dim is not None and dims[wire] != dim:
            raise DataflowError(f"wire must have dimension {dim}", i, wire)

    def make(wire, i, dim):
        if wire not in dims:
            raise DataflowError("undeclared wire", i, wire)
        if wire in alive:
            raise DataflowError("wire is already alive", i, wire)
        if dims[wire] != dim:
            raise DataflowError(f"wire must have dimension {dim}", i, wire)
        alive.add(wire)
        seen.add(wire)

    def read(cbit, i):
        if cbit not in widths:
            raise DataflowError(f"classical bit {cbit!r} read before it is written", i)
        return widths[cbit]

    for i, op in enumerate(c.ops):
        if isinstance(op, Prep):
            if op.wire not in dims:
                raise DataflowError("undeclared wire", i, op.wire)
            d = dims[op.wire]
            if isinstance(op.value, str):
                if op.value not in RESOURCE_PREPS or d != 4:
                    raise DataflowError(f"invalid resource preparation {op.value!r}", i, op.wire)
            elif not 0 <= op.value < d:
                raise DataflowError(f"basis value {op.value} out of range", i, op.wire)
            make(op.wire, i, d)
        elif isinstance(op, Gate):
            if len(set(op.targets)) != len(op.targets) or not op.targets:
                raise DataflowError("gate targets must be distinct and non-empty", i)
            for t in op.targets:
                need(t, i)
            if op.name in SHAPE_CHANGING:
                raise DataflowError(f"{op.name} changes register shape; use a fuse/split op", i)
            gd = tuple(dims[t] for t in op.targets)
            try:
                matrix(GateInstance(op.name, op.power, gd))
            except GateError as exc:
                raise DataflowError(str(exc), i) from exc
            gate_dims[i] = gd
            if op.classical_power is not None:
                read(op.classical_power, i)
            if op.condition is not None:
                width = read(op.condition[0], i)
                if not 0 <= op.condition[1] < width:
                    raise DataflowError(f"condition value {op.condition[1]} out of range", i)
        elif isinstance(op, Fuse):
            if op.map not in ("F", "G"):
                raise DataflowError(f"unknown fusion map {op.map!r}", i)
            a, b = op.inputs
            if a == b:
                raise DataflowError("fuse inputs must differ", i, a)
            need(a, i, 2)
            need(b, i, 2)
            alive.discard(a)
            alive.discard(b)
            make(op.output, i, 4)
        elif isinstance(op, Split):
            if op.map not in ("F", "G"):
                raise DataflowError(f"unknown fusion map {op.map!r}", i)
            need(op.input, i, 4)
            o1, o2 = op.outputs
            if o1 == o2:
                raise DataflowError("split outputs must differ", i, o1)
            alive.discard(op.input)
            make(o1, i, 2)
            make(o2, i, 2)
        elif isinstance(op, Measure):
            need(op.wire, i)
            if op.cbit in widths:
                raise DataflowError(f"classical bit {op.cbit!r} written twice", i, op.wire)
            widths[op.cbit] = dims[op.wire]
        elif isinstance(op, Discard):
            need(op.wire, i)
            alive.discard(op.wire)
        else:
            raise DataflowError(f"unknown op type {type(op).__name__}", i)

    if len(set(c.outputs)) != len(c.outputs):
        raise DataflowError("duplicate output wire")
    for w in c.outputs:
        if w not in alive:
            raise DataflowError("output wire is not alive at the end", None, w)
    for b in c.classical_outputs:
        if b not in widths:
            raise DataflowError(f"classical output {b!r} is never written")
    leftover = tuple(w for w in dims if w in alive and w not in c.outputs)
    return Layout(inputs, dims, widths, gate_dims, leftover)


class CircuitBuilder:
    """Fluent helper for assembling circuits in code, e.g.
    ``CircuitBuilder().qubit("a").gate("H", "a").measure("a", "m").build([], ["m"])``.
    Wires not created by prep/fuse/split become circuit inputs in declaration order.
    """

    def __init__(self):
        self._wires: list[Wire] = []
        self._ids: set[str] = set()
        self._cin: list[ClassicalBit] = []
        self._ops: list[Op] = []

    def wire(self, wid: str, dim: int) -> "CircuitBuilder":
        if wid not in self._ids:
            self._wires.append(Wire(wid, dim))
            self._ids.add(wid)
        return self

    def qubit(self, *ids: str) -> "CircuitBuilder":
        for w in ids:
            self.wire(w, 2)
        return self

    def qudit(self, *ids: str) -> "CircuitBuilder":
        for w in ids:
            self.wire(w, 4)
        return self

    def classical_input(self, cid: str, width: int = 2) -> "CircuitBuilder":
        self._cin.append(ClassicalBit(cid, width))
        return self

    def prep(self, wire: str, value: int | str = 0) -> "CircuitBuilder":
        self._ops.append(Prep(wire, value))
        return self

    def gate(self, name: str, *targets: str, power: int = 1, cpower: str | None = None,
             cond: tuple[str, int] | None = None) -> "CircuitBuilder":
        self._ops.append(Gate(name, tuple(targets), power, cpower, cond))
        return self

    def fuse(self, x: str, y: str, out: str, map: str = "F") -> "CircuitBuilder":
        self._ops.append(Fuse((x, y), out, map))
        return self

    def split(self, src: str, low: str, high: str, map: str = "F") -> "CircuitBuilder":
        self._ops.append(Split(src, (low, high), map))
        return self

    def measure(self, wire: str, cbit: str) -> "CircuitBuilder":
        self._ops.append(Measure(wire, cbit))
        return self

    def discard(self, wire: str) -> "CircuitBuilder":
        self._ops.append(Discard(wire))
        return self

    def append(self, op: Op) -> "CircuitBuilder":
        self._ops.append(op)
        return self

    def append_all(self, ops) -> "CircuitBuilder":
        self._ops.extend(ops)
        return self

    def build(self, outputs, classical_outputs=()) -> Circuit:
        return Circuit(tuple(self._wires), tuple(self._ops), tuple(outputs),
                       tuple(self._cin), tuple(classical_outputs))
