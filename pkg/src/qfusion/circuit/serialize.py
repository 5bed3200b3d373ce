"""JSON circuit format.

::

    {"wires": [{"id": str, "dim": 2|4}, ...],
     "classical_inputs": [{"id": str, "width": 2|4}, ...],
     "ops": [{"type": "prep", "wire": str, "value": int | "F" | "G"},
             {"type": "gate", "name": str, "power": int, "targets": [str, ...],
              "classical_power": str, "condition": {"cbit": str, "equals": int}},
             {"type": "fuse", "inputs": [x, y], "output": str},
             {"type": "split", "input": str, "outputs": [low, high]},
             {"type": "measure", "wire": str, "cbit": str},
             {"type": "discard", "wire": str}],
     "outputs": [str, ...], "classical_outputs": [str, ...]}

``fuse``/``split`` accept an optional ``"map": "G"`` for the alternate fusion.
"""

from __future__ import annotations

import json

from qfusion.circuit.ir import (
    Circuit,
    CircuitError,
    ClassicalBit,
    Discard,
    Fuse,
    Gate,
    Measure,
    Prep,
    Split,
    Wire,
)
from qfusion.gates import GATE_NAMES


class ParseError(CircuitError):
    """Malformed JSON or a document that does not follow the circuit schema."""


def _req(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _str(v, where: str) -> str:
    if not isinstance(v, str):
        raise ParseError(f"{where}: expected a string, got {v!r}")
    return v


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _op_from_json(i: int, o) -> object:
    where = f"op {i}"
    if not isinstance(o, dict):
        raise ParseError(f"{where}: expected an object")
    kind = _req(o, "type", where)
    if kind == "prep":
        value = o.get("value", 0)
        if not isinstance(value, str):
            value = _int(value, where)
        return Prep(_str(_req(o, "wire", where), where), value)
    if kind == "gate":
        name = _str(_req(o, "name", where), where)
        if name not in GATE_NAMES:
            raise ParseError(f"{where}: unknown gate name {name!r}")
        targets = _req(o, "targets", where)
        if not isinstance(targets, list):
            raise ParseError(f"{where}: targets must be a list")
        cond = o.get("condition")
        if cond is not None:
            if not isinstance(cond, dict):
                raise ParseError(f"{where}: condition must be an object")
            cond = (_str(_req(cond, "cbit", where), where), _int(_req(cond, "equals", where), where))
        cpow = o.get("classical_power")
        return Gate(
            name,
            tuple(_str(t, where) for t in targets),
            _int(o.get("power", 1), where),
            None if cpow is None else _str(cpow, where),
            cond,
        )
    if kind == "fuse":
        ins = _req(o, "inputs", where)
        if not isinstance(ins, list) or len(ins) != 2:
            raise ParseError(f"{where}: fuse needs exactly two inputs")
        return Fuse(tuple(_str(w, where) for w in ins), _str(_req(o, "output", where), where), o.get("map", "F"))
    if kind == "split":
        outs = _req(o, "outputs", where)
        if not isinstance(outs, list) or len(outs) != 2:
            raise ParseError(f"{where}: split needs exactly two outputs")
        return Split(_str(_req(o, "input", where), where), tuple(_str(w, where) for w in outs), o.get("map", "F"))
    if kind == "measure":
        return Measure(_str(_req(o, "wire", where), where), _str(_req(o, "cbit", where), where))
    if kind == "discard":
        return Discard(_str(_req(o, "wire", where), where))
    raise ParseError(f"{where}: unknown op type {kind!r}")


def from_dict(doc) -> Circuit:
    if not isinstance(doc, dict):
        raise ParseError("circuit document must be a JSON object")
    wires = []
    for k, w in enumerate(_req(doc, "wires", "circuit")):
        where = f"wire {k}"
        if not isinstance(w, dict):
            raise ParseError(f"{where}: expected an object")
        wires.append(Wire(_str(_req(w, "id", where), where), _int(_req(w, "dim", where), where)))
    cins = []
    for k, b in enumerate(doc.get("classical_inputs", [])):
        where = f"classical input {k}"
        if not isinstance(b, dict):
            raise ParseError(f"{where}: expected an object")
        cins.append(ClassicalBit(_str(_req(b, "id", where), where), _int(b.get("width", 2), where)))
    ops_raw = _req(doc, "ops", "circuit")
    if not isinstance(ops_raw, list):
        raise ParseError("ops must be a list")
    ops = [_op_from_json(i, o) for i, o in enumerate(ops_raw)]
    outputs = [_str(w, "outputs") for w in doc.get("outputs", [])]
    couts = [_str(b, "classical_outputs") for b in doc.get("classical_outputs", [])]
    return Circuit(tuple(wires), tuple(ops), tuple(outputs), tuple(cins), tuple(couts))


def parse(text: bytes | str) -> Circuit:
    """Parse and validate a circuit document.

    Raises ParseError for malformed JSON or schema problems and DataflowError
    (with op index and wire id) for invalid wire usage.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return from_dict(doc)


def _op_to_json(op) -> dict:
    if isinstance(op, Prep):
        return {"type": "prep", "wire": op.wire, "value": op.value}
    if isinstance(op, Gate):
        d = {"type": "gate", "name": op.name, "power": op.power, "targets": list(op.targets)}
        if op.classical_power is not None:
            d["classical_power"] = op.classical_power
        if op.condition is not None:
            d["condition"] = {"cbit": op.condition[0], "equals": op.condition[1]}
        return d
    if isinstance(op, Fuse):
        d = {"type": "fuse", "inputs": list(op.inputs), "output": op.output}
        if op.map != "F":
            d["map"] = op.map
        return d
    if isinstance(op, Split):
        d = {"type": "split", "input": op.input, "outputs": list(op.outputs)}
        if op.map != "F":
            d["map"] = op.map
        return d
    if isinstance(op, Measure):
        return {"type": "measure", "wire": op.wire, "cbit": op.cbit}
    if isinstance(op, Discard):
        return {"type": "discard", "wire": op.wire}
    raise TypeError(f"unknown op {op!r}")


def to_dict(c: Circuit) -> dict:
    return {
        "wires": [{"id": w.id, "dim": w.dim} for w in c.wires],
        "classical_inputs": [{"id": b.id, "width": b.width} for b in c.classical_inputs],
        "ops": [_op_to_json(op) for op in c.ops],
        "outputs": list(c.outputs),
        "classical_outputs": list(c.classical_outputs),
    }


def serialize(c: Circuit) -> bytes:
    return (json.dumps(to_dict(c), indent=2) + "\n").encode()
