import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfusion.circuit import CircuitBuilder, Gate, Prep, channel_of, enumerate_branches, final_state, parse, serialize
from qfusion.gates import CLIFFORD_QUBIT, gate
from qfusion.hilbert import equal_up_to_global_phase
from qfusion.transpile import NON_CLIFFORD, TranspileError, count_resources, gadget, has_non_clifford, recompile

ARITY = {"T": 1, "CS": 2, "CCX": 3, "H": 1, "S": 1, "X": 1, "Z": 1, "CNOT": 2, "CZ": 2, "SWAP": 2}


def circuit(n, gates):
    ids = [f"q{k}" for k in range(n)]
    b = CircuitBuilder().qubit(*ids)
    for name, targets, *power in gates:
        b.gate(name, *[ids[t] for t in targets], power=power[0] if power else 1)
    return b.build(ids)


def channel_distance(a, b):
    return float(np.max(np.abs(channel_of(a).matrix - channel_of(b).matrix)))


@st.composite
def clifford_t(draw, max_qubits=3, max_non_clifford=2):
    n = draw(st.integers(1, max_qubits))
    names = [g for g in ARITY if ARITY[g] <= n]
    gates, non_clifford = [], 0
    for _ in range(draw(st.integers(0, 8))):
        pool = names if non_clifford < max_non_clifford else [g for g in names if g not in NON_CLIFFORD]
        name = draw(st.sampled_from(pool))
        targets = draw(st.permutations(range(n)))[: ARITY[name]]
        power = draw(st.integers(-3, 3))
        non_clifford += name in NON_CLIFFORD
        gates.append((name, targets, power))
    return circuit(n, gates)


# --- counting -------------------------------------------------------------------


GOLDEN = [
    ([("T", [0])], 1, (1, 0, 0, 1, 1, 1)),
    ([("CS", [0, 1])], 2, (0, 1, 0, 2, 3, 1)),
    ([("T", [0]), ("T", [1]), ("CCX", [0, 1, 2])], 3, (2, 0, 1, 5, 6, 2)),
    ([("H", [0]), ("CNOT", [0, 1])], 2, (0, 0, 0, 0, 0, 0)),
    ([("T", [0], 2), ("CS", [0, 1], 2), ("CCX", [0, 1, 2], 2)], 3, (0, 0, 0, 0, 0, 0)),
    ([("T", [0], -1), ("T", [0]), ("CS", [1, 2], 3)], 3, (2, 1, 0, 4, 5, 2)),
    ([("T", [0]), ("T", [1]), ("CNOT", [0, 1]), ("T", [1])], 2, (3, 0, 0, 3, 3, 2)),
]


@pytest.mark.parametrize("gates,n,expected", GOLDEN)
def test_golden_counts(gates, n, expected):
    r = count_resources(circuit(n, gates))
    got = (r.t_count, r.cs_count, r.toffoli_count, r.f_states_used, r.t_states_equivalent, r.gadget_depth)
    assert got == expected


@given(clifford_t(max_qubits=3, max_non_clifford=6))
def test_report_invariants(c):
    r = count_resources(parse(serialize(c)))
    assert r.f_states_used == r.t_count + 2 * r.cs_count + 3 * r.toffoli_count
    assert r.t_states_equivalent == r.t_count + 3 * r.cs_count + 4 * r.toffoli_count
    assert r.f_states_used <= r.t_states_equivalent
    assert (r.f_states_used == r.t_states_equivalent) == (r.cs_count == r.toffoli_count == 0)


def test_report_lines():
    lines = count_resources(circuit(1, [("T", [0])])).lines()
    assert [l.split("=")[0] for l in lines] == [
        "t_count", "cs_count", "toffoli_count", "f_states_used", "t_states_equivalent", "gadget_depth"]


def test_rejects_non_qubit_circuits():
    with pytest.raises(TranspileError):
        count_resources(CircuitBuilder().qudit("a").gate("H", "a").build(["a"]))
    with pytest.raises(TranspileError):
        count_resources(CircuitBuilder().qubit("a", "b").qudit("f").fuse("a", "b", "f").build(["f"]))


# --- gadgets ----------------------------------------------------------------------


def test_t_preparation_state():
    g = gadget("T")
    w = np.exp(1j * np.pi / 4)
    assert equal_up_to_global_phase(final_state(g.preparation).amplitudes, np.array([1, w]) / np.sqrt(2))


@pytest.mark.parametrize("name,f_preps", [("T", 1), ("CS", 2), ("CCX", 2)])
def test_preparation_uses_f_states(name, f_preps):
    prep = gadget(name).preparation
    assert sum(isinstance(op, Prep) and op.value == "F" for op in prep.ops) == f_preps


def test_magic_states():
    h = gate("H").matrix
    plus = h @ [1, 0]
    cs = gate("CS", (2, 2)).matrix @ np.kron(plus, plus)
    ccx = gate("CCX", (2, 2, 2)).matrix @ np.kron(np.kron(plus, plus), [1, 0])
    assert equal_up_to_global_phase(final_state(gadget("CS").preparation).amplitudes, cs)
    assert equal_up_to_global_phase(final_state(gadget("CCX").preparation).amplitudes, ccx)


@pytest.mark.parametrize("name,n", [("T", 1), ("CS", 2), ("CCX", 3)])
def test_gadget_channel(name, n):
    g = gadget(name)
    assert channel_distance(g.full, circuit(n, [(name, list(range(n)))])) < 1e-9
    assert not has_non_clifford(g.injection) and not has_non_clifford(g.full)
    for op in g.injection.ops:
        if isinstance(op, Gate):
            assert op.name in CLIFFORD_QUBIT


def test_gadget_unknown():
    with pytest.raises(TranspileError):
        gadget("H")


# --- recompilation ------------------------------------------------------------------


def test_identity_circuit_unchanged():
    c = circuit(2, [])
    assert recompile(c) == c


def test_t_on_plus():
    c = CircuitBuilder().qubit("q").prep("q").gate("H", "q").gate("T", "q").build(["q"])
    r = recompile(c)
    branches = enumerate_branches(r)
    w = np.exp(1j * np.pi / 4)
    for br in branches:
        assert equal_up_to_global_phase(br.state() / np.sqrt(br.probability), np.array([1, w]) / np.sqrt(2))


def test_ccx_channel():
    c = circuit(3, [("CCX", [0, 1, 2])])
    assert channel_distance(recompile(c), c) < 1e-9


def test_four_data_qubits():
    c = circuit(4, [("H", [0]), ("T", [3]), ("CS", [0, 2]), ("CNOT", [1, 3])])
    assert channel_distance(recompile(c), c) < 1e-9


def test_fresh_names_avoid_collisions():
    ids = ["_g0_f", "q"]
    c = CircuitBuilder().qubit(*ids).gate("T", "q").gate("T", "_g0_f").build(ids)
    assert channel_distance(recompile(c), c) < 1e-9


@settings(max_examples=150)
@given(clifford_t())
def test_recompile_preserves_channel(c):
    r = recompile(c)
    assert not has_non_clifford(r)
    assert channel_distance(r, c) < 1e-9
