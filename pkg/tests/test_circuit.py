import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfusion.circuit import (
    CircuitBuilder,
    CircuitError,
    DataflowError,
    ParseError,
    channel_of,
    compile_unitary,
    enumerate_branches,
    final_state,
    outcome_distribution,
    parse,
    sample,
    serialize,
)
from qfusion.gates import fusion_map, gate, resource_state
from qfusion.hilbert import RegisterShape, choi_of_branches, equal_up_to_global_phase
from qfusion.identities import eq16a, eq16b, ideal_fuse, registry

H_TEXT = json.dumps({
    "wires": [{"id": "q", "dim": 2}],
    "ops": [{"type": "gate", "name": "H", "targets": ["q"]}],
    "outputs": ["q"],
})


def measure_circuit(dim=2, h=True):
    b = CircuitBuilder().wire("q", dim).prep("q")
    if h:
        b.gate("H", "q")
    return b.measure("q", "m").build([], ["m"])


# --- IR and serialization -----------------------------------------------------


def test_parse_minimal():
    c = parse(H_TEXT)
    assert len(c.wires) == 1 and len(c.ops) == 1
    assert c.inputs == ("q",)


def test_parse_fused_plus_circuit():
    doc = {
        "wires": [{"id": "a", "dim": 2}, {"id": "b", "dim": 2}, {"id": "f", "dim": 4}],
        "ops": [{"type": "prep", "wire": "a", "value": 0}, {"type": "prep", "wire": "b", "value": 0},
                {"type": "gate", "name": "H", "targets": ["a"]},
                {"type": "fuse", "inputs": ["a", "b"], "output": "f"}],
        "outputs": ["f"],
    }
    c = parse(json.dumps(doc))
    assert sum(w.dim == 2 for w in c.wires) == 2
    assert c.output_dims == (4,)
    np.testing.assert_allclose(final_state(c).amplitudes, resource_state("F").amplitudes, atol=1e-12)


def test_gate_on_consumed_wire_names_the_wire():
    doc = {
        "wires": [{"id": "q", "dim": 2}],
        "ops": [{"type": "measure", "wire": "q", "cbit": "m"}, {"type": "discard", "wire": "q"},
                {"type": "gate", "name": "X", "targets": ["q"]}],
        "outputs": [],
    }
    with pytest.raises(DataflowError) as err:
        parse(json.dumps(doc))
    assert err.value.wire == "q" and err.value.op_index == 2
    assert "q" in str(err.value)


@pytest.mark.parametrize("text", ["{bad", "[]", '{"wires": []}', json.dumps({
    "wires": [{"id": "q", "dim": 2}], "ops": [{"type": "gate", "name": "NOPE", "targets": ["q"]}]})])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_dataflow_errors():
    with pytest.raises(DataflowError):
        CircuitBuilder().qubit("a").qubit("b").gate("CNOT", "a", "a").build(["a"])
    with pytest.raises(DataflowError):
        CircuitBuilder().qubit("a").gate("X", "a", cond=("m", 1)).build(["a"])
    with pytest.raises(DataflowError):
        CircuitBuilder().qubit("a").discard("a").build(["a"])
    with pytest.raises(DataflowError):
        CircuitBuilder().qudit("a").gate("T", "a").build(["a"])
    with pytest.raises(DataflowError):
        CircuitBuilder().qubit("a").measure("a", "m").measure("a", "m").build(["a"])


def test_serialize_round_trip_registry():
    for case in registry():
        for side in (case.lhs, case.rhs):
            if hasattr(side, "ops"):
                again = parse(serialize(side))
                assert again == side
                assert serialize(again) == serialize(side)


# --- simulation ---------------------------------------------------------------


def test_compile_unitary_examples():
    c = CircuitBuilder().qudit("q").gate("X", "q").gate("X", "q").build(["q"])
    np.testing.assert_allclose(compile_unitary(c).matrix, gate("X", (4,), 2).matrix, atol=1e-12)
    empty = CircuitBuilder().qudit("q").build(["q"])
    np.testing.assert_allclose(compile_unitary(empty).matrix, np.eye(4))
    with pytest.raises(CircuitError):
        compile_unitary(measure_circuit())


def test_measure_plus_has_two_branches():
    branches = enumerate_branches(measure_circuit())
    assert len(branches) == 2
    np.testing.assert_allclose([b.probability for b in branches], [0.5, 0.5], atol=1e-12)


def test_fusion_channel_branches():
    c = eq16a()
    branches = enumerate_branches(c)
    # two qubit measurements: outcome pairs (m1, m2)
    assert len(branches) == 4
    assert abs(sum(b.probability for b in branches) - 1) < 1e-10
    ideal = channel_of(ideal_fuse()).matrix
    assert np.max(np.abs(channel_of(c).matrix - ideal)) < 1e-9


def test_fission_on_f_state():
    c = eq16b()
    f = resource_state("F").amplitudes
    expected = np.kron([2**-0.5, 2**-0.5], [1, 0])
    for br in enumerate_branches(c, input_state=f):
        out = br.state() / np.sqrt(br.probability)
        assert equal_up_to_global_phase(out, expected)


def test_channel_of_identity_rank_one():
    c = CircuitBuilder().qubit("q").build(["q"])
    assert channel_of(c).rank() == 1


def test_fuse_split_round_trips():
    fs = (CircuitBuilder().qubit("a", "b").qudit("f").qubit("c", "d")
          .fuse("a", "b", "f").split("f", "c", "d").build(["c", "d"]))
    np.testing.assert_allclose(compile_unitary(fs).matrix, np.eye(4), atol=1e-12)
    sf = CircuitBuilder().qudit("f", "g").qubit("a", "b").split("f", "a", "b").fuse("a", "b", "g").build(["g"])
    np.testing.assert_allclose(compile_unitary(sf).matrix, np.eye(4), atol=1e-12)


def test_fuse_matches_fusion_map():
    c = CircuitBuilder().qubit("a", "b").qudit("f").fuse("a", "b", "f").build(["f"])
    np.testing.assert_allclose(compile_unitary(c).matrix, fusion_map("fuse").matrix, atol=1e-12)


def test_classical_power_and_condition():
    b = CircuitBuilder().qudit("q").classical_input("c", 4).gate("X", "q", cpower="c").build(["q"])
    for c in range(4):
        np.testing.assert_allclose(compile_unitary(b, {"c": c}).matrix, gate("X", (4,), c).matrix, atol=1e-12)
    with pytest.raises(CircuitError):
        compile_unitary(b, {})
    with pytest.raises(CircuitError):
        compile_unitary(b, {"c": 4})


def test_registry_branch_probabilities_sum_to_one():
    for case in registry():
        for side in (case.lhs, case.rhs):
            if not hasattr(side, "ops"):
                continue
            for cin in case.classical_inputs:
                total = sum(b.probability for b in enumerate_branches(side, cin))
                assert abs(total - 1) < 1e-10, case.id


def test_measurement_free_channel_is_unitary_choi():
    for case in registry():
        side = case.rhs
        if not hasattr(side, "ops") or side.has_measurement() or not side.inputs or not side.outputs:
            continue
        try:
            u = compile_unitary(side, case.classical_inputs[0])
        except CircuitError:
            continue
        expected = choi_of_branches([((), u.matrix)], RegisterShape(side.input_dims), RegisterShape(side.output_dims))
        assert np.max(np.abs(channel_of(side, case.classical_inputs[0]).matrix - expected.matrix)) < 1e-9


# --- sampling -----------------------------------------------------------------


def test_sample_zero_state():
    hist = sample(measure_circuit(h=False), 1000, seed=7)
    assert hist == {(0,): 1000}


def test_sample_plus_state():
    n = 10**6
    hist = sample(measure_circuit(), n, seed=1)
    assert abs(hist[(0,)] / n - 0.5) < 0.002


def test_sample_qudit_fourier():
    n = 10**5
    hist = sample(measure_circuit(4), n, seed=3)
    assert sorted(hist) == [(0,), (1,), (2,), (3,)]
    sigma = np.sqrt(0.25 * 0.75 / n)
    for k in hist.values():
        assert abs(k / n - 0.25) < 4 * sigma


@given(st.integers(0, 2**31), st.integers(1, 4))
def test_sample_shards_merge(seed, shards):
    c = measure_circuit(4)
    total = sample(c, 10000, seed)
    merged = {}
    for k in range(shards):
        for label, n in sample(c, 10000, seed, shard=(k, shards)).items():
            merged[label] = merged.get(label, 0) + n
    assert dict(sorted(merged.items())) == total


def test_sample_agrees_with_branches():
    c = (CircuitBuilder().qubit("a", "b").prep("a").prep("b").gate("H", "a").gate("T", "a").gate("H", "a")
         .gate("CNOT", "a", "b").measure("a", "m1").measure("b", "m2").build([], ["m1", "m2"]))
    n = 10**5
    dist = outcome_distribution(c)
    hist = sample(c, n, seed=11)
    for label, p in dist.items():
        assert abs(hist.get(label, 0) / n - p) <= 4 * np.sqrt(p * (1 - p) / n) + 1e-12
