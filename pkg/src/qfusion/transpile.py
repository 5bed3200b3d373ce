"""Clifford+T to Clifford+F recompilation.

Each T, CS and Toffoli is replaced by a magic-state preparation that consumes
one, two or three |F> qudits, followed by a teleportation-style injection that
uses only Clifford gates, measurement and classically controlled corrections.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import count

from qfusion.circuit import Circuit, CircuitBuilder, CircuitError, Fuse, Gate, Measure, Prep, Split
from qfusion.gates import CLIFFORD_QUBIT, GateInstance, is_clifford_qubit_gate

NON_CLIFFORD = ("T", "CS", "CCX")


class TranspileError(CircuitError):
    pass


@dataclass(frozen=True)
class ResourceReport:
    t_count: int = 0
    cs_count: int = 0
    toffoli_count: int = 0
    gadget_depth: int = 0

    @property
    def f_states_used(self) -> int:
        return self.t_count + 2 * self.cs_count + 3 * self.toffoli_count

    @property
    def t_states_equivalent(self) -> int:
        return self.t_count + 3 * self.cs_count + 4 * self.toffoli_count

    def lines(self) -> list[str]:
        """``key=value`` report; depth counts sequential non-Clifford layers."""
        return [
            f"t_count={self.t_count}",
            f"cs_count={self.cs_count}",
            f"toffoli_count={self.toffoli_count}",
            f"f_states_used={self.f_states_used}",
            f"t_states_equivalent={self.t_states_equivalent}",
            f"gadget_depth={self.gadget_depth}",
        ]


def _check_input(c: Circuit) -> None:
    for w in c.wires:
        if w.dim != 2:
            raise TranspileError(f"wire {w.id!r} has dimension {w.dim}; only qubit circuits are accepted")
    for i, op in enumerate(c.ops):
        if isinstance(op, (Fuse, Split)):
            raise TranspileError(f"op {i}: fuse/split is not allowed in a Clifford+T circuit")
        if isinstance(op, Prep) and isinstance(op.value, str):
            raise TranspileError(f"op {i}: resource-state preparation is not allowed in a Clifford+T circuit")
        if isinstance(op, Gate) and op.name not in CLIFFORD_QUBIT and op.name not in NON_CLIFFORD:
            raise TranspileError(f"op {i}: gate {op.name} is outside Clifford+T")


def _non_clifford(c: Circuit, i: int, op: Gate) -> bool:
    if op.name not in NON_CLIFFORD:
        return False
    if op.classical_power is not None:
        raise TranspileError(f"op {i}: classically powered {op.name} is not supported")
    return not is_clifford_qubit_gate(op.name, op.power, c.layout.gate_dims[i])


def count_resources(c: Circuit) -> ResourceReport:
    """Non-Clifford gate counts and the non-Clifford depth of ``c``."""
    _check_input(c)
    counts = {k: 0 for k in NON_CLIFFORD}
    depth: dict[str, int] = {}
    for i, op in enumerate(c.ops):
        if not isinstance(op, Gate):
            continue
        level = max((depth.get(t, 0) for t in op.targets), default=0)
        if _non_clifford(c, i, op):
            counts[op.name] += 1
            level += 1
        for t in op.targets:
            depth[t] = level
    return ResourceReport(counts["T"], counts["CS"], counts["CCX"], max(depth.values(), default=0))


# --- gadgets ------------------------------------------------------------------


def _prep_t(b: CircuitBuilder, tag: str) -> str:
    f, out, junk = f"{tag}f", f"{tag}m", f"{tag}j"
    b.qudit(f).qubit(out, junk)
    b.prep(f, "F").gate("S", f).split(f, out, junk).discard(junk)
    return out


def _prep_cs(b: CircuitBuilder, tag: str) -> tuple[str, str]:
    f1, f2 = f"{tag}f1", f"{tag}f2"
    a0, a1, b0, b1 = (f"{tag}{s}" for s in ("a0", "a1", "b0", "b1"))
    b.qudit(f1, f2).qubit(a0, a1, b0, b1)
    b.prep(f1, "F").prep(f2, "F").gate("CZ", f1, f2)
    b.split(f1, a0, a1).split(f2, b0, b1).discard(a1).discard(b1)
    return a0, b0


def _prep_ccx(b: CircuitBuilder, tag: str) -> tuple[str, str, str]:
    f1, f2 = f"{tag}f1", f"{tag}f2"
    a0, a1, b0, b1 = (f"{tag}{s}" for s in ("a0", "a1", "b0", "b1"))
    b.qudit(f1, f2).qubit(a0, a1, b0, b1)
    b.prep(f1, "F").prep(f2, "F").gate("CNOT", f1, f2, power=-1)
    b.split(f1, a0, a1).split(f2, b0, b1).discard(a1)
    return a0, b0, b1


def _inject_t(b: CircuitBuilder, tag: str, data: str, magic: str) -> None:
    m = f"{tag}c"
    b.gate("CNOT", data, magic).measure(magic, m).gate("S", data, cond=(m, 1)).discard(magic)


def _inject_cs(b: CircuitBuilder, tag: str, q1: str, q2: str, a: str, c: str) -> None:
    m1, m2 = f"{tag}c1", f"{tag}c2"
    b.gate("CNOT", q1, a).measure(a, m1)
    b.gate("CZ", q1, c, cond=(m1, 1)).gate("S", c, power=-1, cond=(m1, 1))
    b.gate("CNOT", q2, c).measure(c, m2)
    b.gate("CZ", q1, q2, cond=(m2, 1)).gate("S", q1, power=-1, cond=(m2, 1))
    b.discard(a).discard(c)


def _inject_ccx(b: CircuitBuilder, tag: str, x: str, y: str, z: str, a: str, bb: str, c: str) -> None:
    m1, m2, m3 = f"{tag}c1", f"{tag}c2", f"{tag}c3"
    b.gate("CNOT", a, x).gate("CNOT", bb, y).gate("CNOT", z, c)
    b.measure(x, m1).measure(y, m2).gate("H", z).measure(z, m3)
    b.gate("CNOT", bb, c, cond=(m1, 1)).gate("X", bb, cond=(m2, 1)).gate("X", a, cond=(m1, 1))
    b.gate("CNOT", a, c, cond=(m2, 1))
    b.gate("Z", c, cond=(m3, 1)).gate("CZ", a, bb, cond=(m3, 1))
    # results sit on the magic wires; move them back onto the data wires
    for d, m in ((x, a), (y, bb), (z, c)):
        b.gate("SWAP", d, m).discard(m)


def _emit(b: CircuitBuilder, name: str, targets: tuple[str, ...], tag: str) -> None:
    if name == "T":
        _inject_t(b, tag, targets[0], _prep_t(b, tag))
    elif name == "CS":
        _inject_cs(b, tag, *targets, *_prep_cs(b, tag))
    elif name == "CCX":
        _inject_ccx(b, tag, *targets, *_prep_ccx(b, tag))
    else:
        raise TranspileError(f"no gadget for {name}")


@dataclass(frozen=True)
class Gadget:
    name: str
    preparation: Circuit
    injection: Circuit
    full: Circuit


def gadget(name: str) -> Gadget:
    """Preparation, injection and combined circuits for ``T``, ``CS`` or ``CCX``."""
    preps = {"T": _prep_t, "CS": _prep_cs, "CCX": _prep_ccx}
    if name not in preps:
        raise TranspileError(f"no gadget for {name!r}")
    n = {"T": 1, "CS": 2, "CCX": 3}[name]
    data = tuple(f"d{k}" for k in range(n))

    b = CircuitBuilder()
    magic = preps[name](b, "g_")
    magic = (magic,) if isinstance(magic, str) else magic
    preparation = b.build(magic)

    b = CircuitBuilder().qubit(*data).qubit(*magic)
    {"T": _inject_t, "CS": _inject_cs, "CCX": _inject_ccx}[name](b, "g_", *data, *magic)
    injection = b.build(data)

    b = CircuitBuilder().qubit(*data)
    _emit(b, name, data, "g_")
    return Gadget(name, preparation, injection, b.build(data))


# --- recompilation ----------------------------------------------------------------


def recompile(c: Circuit) -> Circuit:
    """Replace every non-Clifford gate by its |F>-consuming gadget."""
    _check_input(c)
    b = CircuitBuilder()
    for w in c.wires:
        b.wire(w.id, w.dim)
    for cb in c.classical_inputs:
        b.classical_input(cb.id, cb.width)
    taken = {w.id for w in c.wires} | {cb.id for cb in c.classical_inputs}
    taken |= {op.cbit for op in c.ops if isinstance(op, Measure)}
    serial = count()

    def fresh_tag() -> str:
        while True:
            tag = f"_g{next(serial)}_"
            if not any(t.startswith(tag) for t in taken):
                return tag

    for i, op in enumerate(c.ops):
        if not (isinstance(op, Gate) and op.name in NON_CLIFFORD):
            b.append(op)
            continue
        if not _non_clifford(c, i, op):
            b.append_all(_clifford_power(c, i, op))
            continue
        if op.condition is not None:
            raise TranspileError(f"op {i}: classically conditioned {op.name} is not supported")
        p = GateInstance(op.name, op.power, c.layout.gate_dims[i]).reduced_power
        _emit(b, op.name, op.targets, fresh_tag())
        # leftover Clifford part: T^p = S^((p-1)/2) T, CS^p = CZ^((p-1)/2) CS
        if op.name == "T" and p > 1:
            b.gate("S", *op.targets, power=(p - 1) // 2)
        elif op.name == "CS" and p == 3:
            b.gate("CZ", *op.targets)
    return b.build(c.outputs, c.classical_outputs)


def _clifford_power(c: Circuit, i: int, op: Gate) -> list[Gate]:
    """Rename a Clifford power of T, CS or CCX: T^2k = S^k, CS^2 = CZ, CCX^2 = I."""
    p = GateInstance(op.name, op.power, c.layout.gate_dims[i]).reduced_power
    if p == 0:
        return []
    return [replace(op, name="S" if op.name == "T" else "CZ", power=p // 2)]


def has_non_clifford(c: Circuit) -> bool:
    return any(isinstance(op, Gate) and op.name in NON_CLIFFORD for op in c.ops)
