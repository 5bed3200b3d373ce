"""Registry of circuit identities and operator equations, with a verifier.

Each case holds two constructible sides and a comparison mode. A side is a
``Circuit``, an ``OperatorSum`` over qudit gate products, or a ``Literal``
(an explicit matrix or state, used for independently coded formulas).

Circuit diagrams are read left to right, so a circuit's op list is in time
order while an ``OperatorSum`` product is written in matrix order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from qfusion.circuit import Circuit, CircuitBuilder, Gate, channel_of, compile_unitary, final_state
from qfusion.gates import GateInstance, matrix, resource_state
from qfusion.hilbert import CHOI_TOL, UNITARY_TOL, equal_up_to_global_phase

MODES = ("unitary_up_to_phase", "unitary_exact", "operator_sum_exact", "channel", "state_up_to_phase")
TOLERANCES = {
    "unitary_up_to_phase": UNITARY_TOL,
    "unitary_exact": UNITARY_TOL,
    "operator_sum_exact": 1e-12,
    "channel": CHOI_TOL,
    "state_up_to_phase": UNITARY_TOL,
}
W = cmath.exp(1j * math.pi / 4)


@dataclass(frozen=True)
class OperatorSum:
    """``sum_k c_k * G_k1 @ G_k2 @ ...`` with every factor a GateInstance."""

    terms: tuple[tuple[complex, tuple[GateInstance, ...]], ...]

    def evaluate(self) -> np.ndarray:
        acc = None
        for coeff, factors in self.terms:
            m = matrix(factors[0]).matrix
            for g in factors[1:]:
                m = m @ matrix(g).matrix
            acc = coeff * m if acc is None else acc + coeff * m
        return acc

    def mutated(self, term: int, factor: int) -> "OperatorSum":
        terms = [list(t) for t in self.terms]
        fs = list(terms[term][1])
        g = fs[factor]
        fs[factor] = GateInstance(g.name, g.power + 1, g.dims)
        terms[term][1] = tuple(fs)
        return OperatorSum(tuple((c, f) for c, f in terms))


@dataclass(frozen=True)
class Literal:
    """An explicit matrix or state vector with a short description."""

    value: np.ndarray = field(compare=False)
    description: str = ""


Side = Union[Circuit, OperatorSum, Literal]


@dataclass(frozen=True)
class IdentityCase:
    id: str
    lhs: Side
    rhs: Side
    mode: str
    anchor: str
    # channel mode: every assignment of classical inputs to check
    classical_inputs: tuple[dict, ...] = ({},)
    note: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class VerificationReport:
    id: str
    mode: str
    passed: bool
    max_deviation: float
    phase: complex | None = None
    status: str = "pass"  # pass | fail | error
    detail: str = ""


# --- side evaluation --------------------------------------------------------


def _as_matrix(side: Side, classical=None) -> np.ndarray:
    if isinstance(side, Circuit):
        return compile_unitary(side, classical).matrix
    if isinstance(side, OperatorSum):
        return side.evaluate()
    return np.asarray(side.value, dtype=complex)


def _as_state(side: Side) -> np.ndarray:
    if isinstance(side, Circuit):
        return final_state(side).amplitudes
    if isinstance(side, OperatorSum):
        raise TypeError("an operator sum is not a state")
    return np.asarray(side.value, dtype=complex).reshape(-1)


def _compare(case: IdentityCase) -> tuple[float, complex | None]:
    if case.mode == "channel":
        worst = 0.0
        for cin in case.classical_inputs:
            a = channel_of(case.lhs, cin)
            b = channel_of(case.rhs, cin)
            if a.matrix.shape != b.matrix.shape:
                raise ValueError(f"channel shapes differ: {a.matrix.shape} vs {b.matrix.shape}")
            worst = max(worst, float(np.max(np.abs(a.matrix - b.matrix))))
            labels = set(a.sub_channels) | set(b.sub_channels)
            zero = np.zeros_like(a.matrix)
            for lab in labels:
                da = a.sub_channels.get(lab, zero)
                db = b.sub_channels.get(lab, zero)
                worst = max(worst, float(np.max(np.abs(da - db))))
        return worst, None
    if case.mode == "state_up_to_phase":
        u, v = _as_state(case.lhs), _as_state(case.rhs)
    else:
        u, v = _as_matrix(case.lhs), _as_matrix(case.rhs)
    if u.shape != v.shape:
        raise ValueError(f"side shapes differ: {u.shape} vs {v.shape}")
    if case.mode in ("unitary_up_to_phase", "state_up_to_phase"):
        cmp = equal_up_to_global_phase(u, v, TOLERANCES[case.mode])
        return cmp.max_deviation, cmp.phase
    return float(np.max(np.abs(u - v))), None


def verify(case: IdentityCase) -> VerificationReport:
    """Build both sides and compare them under the case's mode.

    Construction errors produce ``status="error"`` (never a pass).
    """
    try:
        dev, phase = _compare(case)
    except Exception as exc:  # noqa: BLE001 - surfaced in the report
        return VerificationReport(case.id, case.mode, False, math.inf, None, "error",
                                  f"{type(exc).__name__}: {exc}")
    ok = dev <= TOLERANCES[case.mode]
    return VerificationReport(case.id, case.mode, ok, dev, phase, "pass" if ok else "fail")


def verify_all(prefix: str | None = None, cases: Sequence[IdentityCase] | None = None) -> list[VerificationReport]:
    """Reports for every case whose id starts with ``prefix``, ordered by id.

    An empty-string prefix matches nothing; ``None`` matches everything.
    """
    cases = registry() if cases is None else list(cases)
    if prefix is not None:
        cases = [c for c in cases if prefix and c.id.startswith(prefix)]
    return [verify(c) for c in sorted(cases, key=lambda c: c.id)]


def mutation_sites(case: IdentityCase) -> list[tuple]:
    """Places where :func:`mutate` can raise a gate's power by one."""
    side = case.rhs
    if isinstance(side, Circuit):
        return [("op", i) for i, op in enumerate(side.ops) if isinstance(op, Gate)]
    if isinstance(side, OperatorSum):
        return [("term", t, f) for t, (_, fs) in enumerate(side.terms) for f in range(len(fs))]
    return []


def mutate(case: IdentityCase, site: tuple) -> IdentityCase:
    """Negative control: raise the power of one gate on the right-hand side by one."""
    side = case.rhs
    if site[0] == "op":
        ops = list(side.ops)
        op = ops[site[1]]
        ops[site[1]] = replace(op, power=op.power + 1)
        new = Circuit(side.wires, tuple(ops), side.outputs, side.classical_inputs, side.classical_outputs)
    else:
        new = side.mutated(site[1], site[2])
    return replace(case, id=case.id + "~mutated", rhs=new)


# --- independent basis-action formulas -------------------------------------
# Written with plain Python loops over kets, separate from the gates catalog.


def formula_matrix(name: str) -> np.ndarray:
    """Qudit X, Z, CNOT, H, S and H^2 from their basis-state action."""
    if name == "CNOT":
        m = np.zeros((16, 16), dtype=complex)
        for x in range(4):
            for y in range(4):
                m[x * 4 + (x + y) % 4, x * 4 + y] = 1
        return m
    m = np.zeros((4, 4), dtype=complex)
    for x in range(4):
        if name == "X":
            m[(x + 1) % 4, x] = 1
        elif name == "Z":
            m[x, x] = 1j**x
        elif name == "H":
            for y in range(4):
                m[y, x] = 0.5 * 1j ** (x * y)
        elif name == "S":
            m[x, x] = W ** (x * x)
        elif name == "H2":
            m[(3 * x) % 4, x] = 1
        else:
            raise KeyError(name)
    return m


# --- construction helpers ---------------------------------------------------


def _g(name: str, power: int = 1, dims=(4,)) -> GateInstance:
    return GateInstance(name, power, dims)


def _osum(*terms) -> OperatorSum:
    return OperatorSum(tuple((complex(c), tuple(fs)) for c, fs in terms))


def _circ(wires: dict, steps, outputs=None, build: Callable | None = None) -> Circuit:
    """Measurement-free circuit on input wires ``{id: dim}``; each step is
    ``(name, targets)``, ``(name, targets, power)`` or a fuse/split tuple."""
    b = CircuitBuilder()
    for w, d in wires.items():
        b.wire(w, d)
    for st in steps:
        if st[0] == "fuse":
            _, x, y, out = st[:4]
            b.wire(out, 4).fuse(x, y, out, st[4] if len(st) > 4 else "F")
        elif st[0] == "split":
            _, src, lo, hi = st[:4]
            b.wire(lo, 2).wire(hi, 2).split(src, lo, hi, st[4] if len(st) > 4 else "F")
        else:
            name, targets = st[0], st[1]
            power = st[2] if len(st) > 2 else 1
            b.gate(name, *((targets,) if isinstance(targets, str) else targets), power=power)
    return b.build(tuple(wires) if outputs is None else outputs)


def _qudit_conj(map_: str, steps, outputs=("q",)) -> Circuit:
    """Split one qudit ``q`` with ``map_``, run qubit ``steps`` on (lo, hi), fuse back."""
    return _circ({"q": 4}, [("split", "q", "lo", "hi", map_), *steps, ("fuse", "lo", "hi", "r", map_)], ("r",))


def _pair_conj(map_: str, steps) -> Circuit:
    """Fuse qubits (lo, hi) with ``map_``, run qudit ``steps`` on ``q``, split back."""
    return _circ({"lo": 2, "hi": 2}, [("fuse", "lo", "hi", "q", map_), *steps, ("split", "q", "a", "b", map_)], ("a", "b"))


def _state(vec) -> Literal:
    return Literal(np.asarray(vec, dtype=complex), "state")


# --- groups -----------------------------------------------------------------


def _pauli_algebra():
    A = "Pauli algebra on a qudit"
    X, Z = _g("X"), _g("Z")
    return [
        IdentityCase("eq2_zx", _osum((1, [Z, X])), _osum((1j, [X, Z])), "operator_sum_exact", A),
        IdentityCase("eq2_zdag", _osum((1, [_g("Z", -1)])), _osum((1, [Z, Z, Z])), "operator_sum_exact", A),
        IdentityCase("eq2_xdag", _osum((1, [_g("X", -1)])), _osum((1, [X, X, X])), "operator_sum_exact", A),
        IdentityCase("eq2_order4", _osum((1, [X, X, X, X]), (1, [Z, Z, Z, Z])),
                     Literal(2 * np.eye(4), "2I"), "operator_sum_exact", A),
    ]


def _clifford_action():
    A = "qudit Clifford action on X and Z"
    two = {"c": 4, "t": 4}
    one = {"q": 4}
    return [
        IdentityCase("eq3a", _circ(two, [("X", "c"), ("CNOT", ("c", "t"))]),
                     _circ(two, [("CNOT", ("c", "t")), ("X", "c"), ("X", "t")]), "unitary_exact", A),
        IdentityCase("eq3b", _circ(two, [("X", "t"), ("CNOT", ("c", "t"))]),
                     _circ(two, [("CNOT", ("c", "t")), ("X", "t")]), "unitary_exact", A),
        IdentityCase("eq3c", _circ(two, [("Z", "c"), ("CNOT", ("c", "t"))]),
                     _circ(two, [("CNOT", ("c", "t")), ("Z", "c")]), "unitary_exact", A),
        IdentityCase("eq3d", _circ(two, [("Z", "t"), ("CNOT", ("c", "t"))]),
                     _circ(two, [("CNOT", ("c", "t")), ("Z", "c", -1), ("Z", "t")]), "unitary_exact", A),
        IdentityCase("eq3e", _circ(one, [("X", "q"), ("H", "q")]),
                     _circ(one, [("H", "q"), ("Z", "q")]), "unitary_exact", A),
        IdentityCase("eq3f", _circ(one, [("Z", "q"), ("H", "q")]),
                     _circ(one, [("H", "q"), ("X", "q", -1)]), "unitary_exact", A),
        IdentityCase("eq3g", _circ(one, [("X", "q"), ("S", "q")]),
                     _circ(one, [("S", "q"), ("Z", "q"), ("X", "q"), ("OMEGA", "q")]), "unitary_exact", A,
                     note="explicit omega factor carried by an OMEGA gate"),
        IdentityCase("eq3h", _circ(one, [("Z", "q"), ("S", "q")]),
                     _circ(one, [("S", "q"), ("Z", "q")]), "unitary_exact", A),
    ]


def _basis_action():
    A = "qudit basis-state action"
    cases = []
    for tag, name in (("eq5a_x", "X"), ("eq5b_z", "Z"), ("eq5d_h", "H"), ("eq5e_s", "S")):
        cases.append(IdentityCase(tag, _circ({"q": 4}, [(name, "q")]), Literal(formula_matrix(name), "formula"),
                                  "unitary_exact", A))
    cases.append(IdentityCase("eq5c_cnot", _circ({"c": 4, "t": 4}, [("CNOT", ("c", "t"))]),
                              Literal(formula_matrix("CNOT"), "formula"), "unitary_exact", A))
    cases.append(IdentityCase("eq5_h2_negation", _circ({"q": 4}, [("H", "q"), ("H", "q")]),
                              Literal(formula_matrix("H2"), "|x> -> |3x mod 4>"), "unitary_exact", A))
    return cases


def _qubit_action(map_: str, prefix: str, anchor: str):
    """Qudit X, Z, CNOT, H, S against their conjugated qubit circuits."""
    c = map_
    if map_ == "F":
        xs = [("CNOT", ("lo", "hi")), ("X", "lo")]
        zs = [("S", "lo"), ("Z", "hi")]
        cnot = [("CCX", ("a0", "b0", "b1")), ("CNOT", ("a0", "b0")), ("CNOT", ("a1", "b1"))]
    else:
        xs = [("H", "hi"), ("S", "hi"), ("H", "hi"), ("X", "lo")]
        zs = [("Z", "hi"), ("CNOT", ("lo", "hi"))]
        cnot = [("CNOT", ("a0", "b0")), ("CNOT", ("a1", "b1")), ("H", "a1"),
                ("CCX", ("a0", "a1", "b1")), ("H", "a1")]
    hs = [("H", "hi"), ("CS", ("lo", "hi")), ("H", "lo"), ("SWAP", ("lo", "hi"))]
    ss = [("T", "lo"), ("Z", "hi"), ("CZ", ("lo", "hi"))]
    two = {"A": 4, "B": 4}
    cnot_rhs = _circ(two, [("split", "A", "a0", "a1", c), ("split", "B", "b0", "b1", c), *cnot,
                           ("fuse", "a0", "a1", "A2", c), ("fuse", "b0", "b1", "B2", c)], ("A2", "B2"))
    m = "unitary_up_to_phase"
    return [
        IdentityCase(f"{prefix}a_x", _circ({"q": 4}, [("X", "q")]), _qudit_conj(c, xs), m, anchor),
        IdentityCase(f"{prefix}b_z", _circ({"q": 4}, [("Z", "q")]), _qudit_conj(c, zs), m, anchor),
        IdentityCase(f"{prefix}c_cnot", _circ(two, [("CNOT", ("A", "B"))]), cnot_rhs, m, anchor),
        IdentityCase(f"{prefix}d_h", _circ({"q": 4}, [("H", "q")]), _qudit_conj(c, hs), m, anchor),
        IdentityCase(f"{prefix}e_s", _circ({"q": 4}, [("S", "q")]), _qudit_conj(c, ss), m, anchor),
    ]


def _qubit_paulis(map_: str, prefix_pauli: str, prefix_cliff: str):
    """Single-qubit Paulis on the fused pair as qudit Pauli/Clifford operators."""
    pair = {"lo": 2, "hi": 2}
    P = "qubit Paulis in the qudit Pauli group"
    C = "qubit Paulis in the qudit Clifford group"
    if map_ == "F":
        x_low = [("H", "q"), ("H", "q"), ("X", "q")]
        z_high = [("S", "q"), ("S", "q"), ("Z", "q", -1)]
    else:
        x_low = [("H", "q"), ("S", "q"), ("S", "q"), ("Z", "q", -1), ("H", "q", -1)]
        z_high = [("H", "q"), ("H", "q"), ("Z", "q", -1)]
    return [
        IdentityCase(f"{prefix_pauli}a_x_high", _circ(pair, [("X", "hi")]),
                     _pair_conj(map_, [("X", "q"), ("X", "q")]), "unitary_exact", P),
        IdentityCase(f"{prefix_pauli}b_z_low", _circ(pair, [("Z", "lo")]),
                     _pair_conj(map_, [("Z", "q"), ("Z", "q")]), "unitary_exact", P),
        IdentityCase(f"{prefix_cliff}a_x_low", _circ(pair, [("X", "lo")]),
                     _pair_conj(map_, x_low), "unitary_exact", C),
        IdentityCase(f"{prefix_cliff}b_z_high", _circ(pair, [("Z", "hi")]),
                     _pair_conj(map_, z_high), "unitary_exact", C),
    ]


def _operator_sums():
    X, Z, H, S = _g("X"), _g("Z"), _g("H"), _g("S")
    Xd, Zd, Hd = _g("X", -1), _g("Z", -1), _g("H", -1)
    r2 = 1 / math.sqrt(2)
    A = "qudit Pauli-basis decomposition"
    return [
        IdentityCase("eq9a", _osum((1, [X, H, H])), _osum((0.5, [X]), (0.5, [X, Z, Z]), (0.5, [Xd]), (0.5, [Z, Z, Xd])),
                     "operator_sum_exact", A),
        IdentityCase("eq9b", _osum((1, [Zd, S, S])), _osum((r2 * W.conjugate(), [Z]), (r2 * W, [Zd])),
                     "operator_sum_exact", A),
        IdentityCase("eqA5a", _osum((1, [Hd, Zd, S, S, H])), _osum((r2 * W.conjugate(), [X]), (r2 * W, [Xd])),
                     "operator_sum_exact", "complementary Pauli-basis decomposition"),
        IdentityCase("eqA5b", _osum((1, [Zd, H, H])),
                     _osum((0.5, [Z]), (0.5, [X, X, Z]), (0.5, [Zd]), (0.5, [Zd, X, X])),
                     "operator_sum_exact", "complementary Pauli-basis decomposition"),
        IdentityCase("eq8_macro_xh2", _osum((1, [_g("XH2")])), _osum((1, [X, H, H])), "operator_sum_exact",
                     "correction box macro"),
        IdentityCase("eq8_macro_zds2", _osum((1, [_g("ZDS2")])), _osum((1, [Zd, S, S])), "operator_sum_exact",
                     "correction box macro"),
    ]


def _hybrid():
    A = "hybrid CNOT definitions"
    qq = {"Q": 4, "b": 2}
    bq = {"b": 2, "Q": 4}
    defs = [
        IdentityCase("eq10a_def", _circ(qq, [("CNOT", ("Q", "b"))]),
                     _circ(qq, [("split", "Q", "lo", "hi"), ("CNOT", ("lo", "b")), ("fuse", "lo", "hi", "Q2")], ("Q2", "b")),
                     "unitary_exact", A),
        IdentityCase("eq10b_def", _circ(bq, [("CNOT", ("b", "Q"))]),
                     _circ(bq, [("split", "Q", "lo", "hi"), ("CNOT", ("b", "hi")), ("fuse", "lo", "hi", "Q2")], ("b", "Q2")),
                     "unitary_exact", A),
    ]
    fa = np.zeros((8, 8))
    fb = np.zeros((8, 8))
    for x in range(4):
        for bit in range(2):
            fa[x * 2 + (bit ^ (x % 2)), x * 2 + bit] = 1
            fb[bit * 4 + (x + 2 * bit) % 4, bit * 4 + x] = 1
    defs += [
        IdentityCase("eq10a_formula", _circ(qq, [("CNOT", ("Q", "b"))]), Literal(fa, "|x,b> -> |x, b xor x mod 2>"),
                     "unitary_exact", A),
        IdentityCase("eq10b_formula", _circ(bq, [("CNOT", ("b", "Q"))]), Literal(fb, "|b,x> -> |b, x + 2b mod 4>"),
                     "unitary_exact", A),
        # qubit-control orientation from the qudit-control one by H on both wires
        IdentityCase("eq10_h_conjugation", _circ(bq, [("CNOT", ("b", "Q"))]),
                     _circ(bq, [("H", "b"), ("H", "Q"), ("CNOT", ("Q", "b")), ("H", "b"), ("H", "Q", -1)]),
                     "unitary_up_to_phase", "orientations related by H conjugation"),
    ]
    R = "hybrid Pauli propagation"
    rules = [
        ("eq11a", qq, [("X", "Q")], ("Q", "b"), [("X", "Q"), ("X", "b")]),
        ("eq11b", qq, [("X", "b")], ("Q", "b"), [("X", "b")]),
        ("eq11c", qq, [("Z", "Q")], ("Q", "b"), [("Z", "Q")]),
        ("eq11d", qq, [("Z", "b")], ("Q", "b"), [("Z", "Q", 2), ("Z", "b")]),
        ("eq11e", bq, [("X", "b")], ("b", "Q"), [("X", "b"), ("X", "Q", 2)]),
        ("eq11f", bq, [("X", "Q")], ("b", "Q"), [("X", "Q")]),
        ("eq11g", bq, [("Z", "b")], ("b", "Q"), [("Z", "b")]),
        ("eq11h", bq, [("Z", "Q")], ("b", "Q"), [("Z", "b"), ("Z", "Q")]),
    ]
    for tag, wires, before, targets, after in rules:
        defs.append(IdentityCase(tag, _circ(wires, [*before, ("CNOT", targets)]),
                                 _circ(wires, [("CNOT", targets), *after]), "unitary_exact", R))
    return defs


def _resource_state():
    A = "the |F> resource state"
    F = resource_state("F").amplitudes
    prep = CircuitBuilder().qubit("x", "y").qudit("q").prep("x").prep("y").gate("H", "x").fuse("x", "y", "q").build(["q"])

    def on_f(*gates):
        b = CircuitBuilder().qudit("q").prep("q", "F")
        for name, power in gates:
            b.gate(name, "q", power=power)
        return b.build(["q"])

    return [
        IdentityCase("eq13_fused_plus", prep, _state(F), "state_up_to_phase", A),
        IdentityCase("eq13_stabilizer_xh2", on_f(("H", 1), ("H", 1), ("X", 1)), _state(F),
                     "state_up_to_phase", "stabilizers of |F>"),
        IdentityCase("eq13_stabilizer_zds2", on_f(("S", 1), ("S", 1), ("Z", -1)), _state(F),
                     "state_up_to_phase", "stabilizers of |F>"),
    ]


# --- partial and complete fusion/fission channels ----------------------------


def eq14a() -> Circuit:
    return (CircuitBuilder().qubit("psi", "y").qudit("out").classical_input("r")
            .prep("y").gate("H", "y").gate("Z", "y", cpower="r").fuse("psi", "y", "out").build(["out"]))


def eq15a() -> Circuit:
    return (CircuitBuilder().qubit("psi").qudit("out").classical_input("r")
            .prep("out").gate("H", "out").gate("CNOT", "out", "psi").measure("psi", "m")
            .gate("XH2", "out", cond=("m", 1)).gate("ZDS2", "out", cpower="r").build(["out"]))


def eq14b() -> Circuit:
    return (CircuitBuilder().qubit("x", "psi").qudit("out").classical_input("r")
            .prep("x").gate("X", "x", cpower="r").fuse("x", "psi", "out").build(["out"]))


def eq15b() -> Circuit:
    return (CircuitBuilder().qudit("out").qubit("psi").classical_input("r")
            .prep("out").gate("CNOT", "psi", "out").gate("XH2", "out", cond=("r", 1))
            .gate("H", "psi").measure("psi", "m").gate("ZDS2", "out", cpower="m").build(["out"]))


def eq14c() -> Circuit:
    return (CircuitBuilder().qudit("in").qubit("lo", "hi")
            .split("in", "lo", "hi").gate("H", "hi").measure("hi", "m").build(["lo"], ["m"]))


def eq15c() -> Circuit:
    return (CircuitBuilder().qubit("out").qudit("in").qubit("anc")
            .prep("out").prep("anc").gate("H", "anc").gate("CNOT", "anc", "in").gate("CNOT", "in", "out")
            .gate("H", "anc").measure("anc", "m").gate("ZDS2", "in", cpower="m").gate("H", "in")
            .measure("in", "k").gate("S", "out", cpower="k").build(["out"], ["m"]))


def eq14d() -> Circuit:
    return (CircuitBuilder().qudit("in").qubit("lo", "hi")
            .split("in", "lo", "hi").measure("lo", "m").build(["hi"], ["m"]))


def eq15d() -> Circuit:
    return (CircuitBuilder().qubit("anc").qudit("in").qubit("out")
            .prep("anc").prep("out").gate("H", "out").gate("CNOT", "out", "in").gate("CNOT", "in", "anc")
            .measure("anc", "m").gate("XH2", "in", cpower="m").measure("in", "k")
            .gate("HSH", "out", cpower="k").build(["out"], ["m"]))


def ideal_fuse() -> Circuit:
    return CircuitBuilder().qubit("x", "y").qudit("q").fuse("x", "y", "q").build(["q"])


def ideal_split() -> Circuit:
    return CircuitBuilder().qudit("q").qubit("x", "y").split("q", "x", "y").build(["x", "y"])


def eq16a() -> Circuit:
    return (CircuitBuilder().qubit("x").qudit("f").qubit("y")
            .prep("f", "F").gate("CNOT", "y", "f").gate("CNOT", "f", "x").measure("x", "m1")
            .gate("XH2", "f", cond=("m1", 1)).gate("H", "y").measure("y", "m2")
            .gate("ZDS2", "f", cond=("m2", 1)).build(["f"]))


def eq16b() -> Circuit:
    return (CircuitBuilder().qudit("A", "B").qubit("a0", "a1", "b0", "b1")
            .prep("B", "F").gate("CNOT", "A", "B", power=-1)
            .split("A", "a0", "a1").gate("H", "a1").measure("a1", "ma")
            .split("B", "b0", "b1").measure("b0", "mb")
            .gate("CNOT", "a0", "b1", cond=("mb", 1)).gate("Z", "b1", cond=("ma", 1))
            .build(["a0", "b1"]))


def eq16b_partial() -> Circuit:
    """Complete fission with both partial fissions expanded into their
    stabilizer implementations (the qudit ``A`` is consumed by them)."""
    return (CircuitBuilder().qudit("A", "B").qubit("o1", "k1", "o2", "k2")
            .prep("B", "F").gate("CNOT", "A", "B", power=-1)
            # A: keep the low qubit, H-measure the high one
            .prep("o1").prep("k1").gate("H", "k1").gate("CNOT", "k1", "A").gate("CNOT", "A", "o1")
            .gate("H", "k1").measure("k1", "ma").gate("ZDS2", "A", cpower="ma").gate("H", "A")
            .measure("A", "ja").gate("S", "o1", cpower="ja")
            # B: Z-measure the low qubit, keep the high one
            .prep("k2").prep("o2").gate("H", "o2").gate("CNOT", "o2", "B").gate("CNOT", "B", "k2")
            .measure("k2", "mb").gate("XH2", "B", cpower="mb").measure("B", "jb")
            .gate("HSH", "o2", cpower="jb")
            .gate("CNOT", "o1", "o2", cond=("mb", 1)).gate("Z", "o2", cond=("ma", 1))
            .build(["o1", "o2"]))


def _channels():
    A14 = "partial fusion/fission as teleportation circuits"
    r_vals = ({"r": 0}, {"r": 1})
    return [
        IdentityCase("eq15a_partial_fuse_classical_high", eq14a(), eq15a(), "channel", A14, r_vals),
        IdentityCase("eq15b_partial_fuse_classical_low", eq14b(), eq15b(), "channel", A14, r_vals),
        IdentityCase("eq15c_partial_split_measure_high", eq14c(), eq15c(), "channel", A14),
        IdentityCase("eq15d_partial_split_measure_low", eq14d(), eq15d(), "channel", A14),
        IdentityCase("eq16a_fusion_channel", ideal_fuse(), eq16a(), "channel", "complete fusion with an |F> ancilla"),
        IdentityCase("eq16b_fission_channel", ideal_split(), eq16b(), "channel", "complete fission with an |F> ancilla"),
        IdentityCase("eq16b_fission_channel_expanded", ideal_split(), eq16b_partial(), "channel",
                     "complete fission with partial fissions expanded"),
    ]


# --- resource compilation ---------------------------------------------------


def eq17a() -> Circuit:
    return (CircuitBuilder().qudit("f").qubit("t", "junk")
            .prep("f", "F").gate("S", "f").split("f", "t", "junk").discard("junk").build(["t"]))


def eq17b() -> Circuit:
    return (CircuitBuilder().qudit("f1", "f2").qubit("a0", "a1", "b0", "b1")
            .prep("f1", "F").prep("f2", "F").gate("CZ", "f1", "f2")
            .split("f1", "a0", "a1").split("f2", "b0", "b1").discard("a1").discard("b1")
            .build(["a0", "b0"]))


def eq17c() -> Circuit:
    return (CircuitBuilder().qudit("f1", "f2").qubit("a0", "a1", "b0", "b1")
            .prep("f1", "F").prep("f2", "F").gate("CNOT", "f1", "f2", power=-1)
            .split("f1", "a0", "a1").split("f2", "b0", "b1").discard("a1")
            .build(["a0", "b0", "b1"]))


def _magic(n, gates) -> Circuit:
    ids = [f"q{k}" for k in range(n)]
    b = CircuitBuilder().qubit(*ids)
    for w in ids:
        b.prep(w)
    for name, targets in gates:
        b.gate(name, *[ids[t] for t in targets])
    return b.build(ids)


def _compilation():
    A = "non-Clifford resource states from |F>"
    return [
        IdentityCase("eq17a_t_state", _magic(1, [("H", [0]), ("T", [0])]), eq17a(), "state_up_to_phase", A),
        IdentityCase("eq17b_cs_state", _magic(2, [("H", [0]), ("H", [1]), ("CS", [0, 1])]), eq17b(),
                     "state_up_to_phase", A),
        IdentityCase("eq17c_toffoli_state", _magic(3, [("H", [0]), ("H", [1]), ("CCX", [0, 1, 2])]), eq17c(),
                     "state_up_to_phase", A,
                     note="no relabeling needed: the output already equals the Toffoli state"),
    ]


# --- alternate representation -----------------------------------------------


def _appendix():
    A1 = "alternate fusion gate G"
    pair = {"x": 2, "y": 2}
    g_def = _circ(pair, [("SWAP", ("x", "y")), ("H", "x"), ("H", "y"), ("fuse", "x", "y", "q"), ("H", "q", -1)], ("q",))
    g_cat = _circ(pair, [("fuse", "x", "y", "q", "G")], ("q",))
    plus_plus = CircuitBuilder().qubit("x", "y").qudit("q").prep("x").prep("y").gate("H", "x").gate("H", "y") \
        .fuse("x", "y", "q", "G").build(["q"])
    fg = [("split", "q", "lo", "hi", "G"), ("fuse", "lo", "hi", "r")]  # F G^dagger as a circuit
    one = {"q": 4}
    g_state = CircuitBuilder().qubit("x", "y").qudit("q").prep("x").prep("y").gate("H", "x") \
        .fuse("x", "y", "q", "G").gate("H", "q").build(["q"])
    cases = [
        IdentityCase("eqA1_g_definition", g_cat, g_def, "unitary_exact", A1),
        IdentityCase("eqA1_g_plus_plus", plus_plus, _state(np.full(4, 0.5)), "state_up_to_phase", A1),
        IdentityCase("eqA_commute_h_fg", _circ(one, [*fg, ("H", "r")], ("r",)), _circ(one, [("H", "q"), *fg], ("r",)),
                     "unitary_exact", "H commutes with F G^dagger"),
        IdentityCase("eqA_commute_s_fg", _circ(one, [*fg, ("S", "r")], ("r",)), _circ(one, [("S", "q"), *fg], ("r",)),
                     "unitary_exact", "S commutes with F G^dagger"),
        IdentityCase("eqA_g_state_h", g_state, _state(resource_state("F").amplitudes), "state_up_to_phase",
                     "|G> and |F> differ by H", note="holds as H|G> = |F>, i.e. |G> = H^dagger |F>"),
    ]
    cases += _qubit_action("G", "eqA2", "alternate qubit action")
    cases += _qubit_paulis("G", "eqA3", "eqA4")
    return cases


def registry() -> list[IdentityCase]:
    """Every registered identity, in a fixed order."""
    cases = []
    cases += _pauli_algebra()
    cases += _clifford_action()
    cases += _basis_action()
    cases += _qubit_action("F", "eq6", "qudit Cliffords as qubit circuits")
    cases += _qubit_paulis("F", "eq7", "eq8")
    cases += _operator_sums()
    cases += _hybrid()
    cases += _resource_state()
    cases += _channels()
    cases += _compilation()
    cases += _appendix()
    ids = [c.id for c in cases]
    assert len(ids) == len(set(ids)), "duplicate identity ids"
    return cases


def get_case(case_id: str) -> IdentityCase:
    for c in registry():
        if c.id == case_id:
            return c
    raise KeyError(case_id)
