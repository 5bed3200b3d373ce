import numpy as np
import pytest

from qfusion.gates import (
    GateError,
    GateInstance,
    OMEGA,
    fusion_map,
    g_fusion_map,
    gate,
    hybrid_cnot,
    is_clifford_qubit_gate,
    matrix,
    order,
    resource_state,
)
from qfusion.hilbert import DenseState, apply_gate, equal_up_to_global_phase

X4, Z4, H4, S4 = (gate(n, (4,)).matrix for n in ("X", "Z", "H", "S"))
I4 = np.eye(4)


def test_qudit_z_and_s_diagonals():
    np.testing.assert_allclose(np.diag(Z4), [1, 1j, -1, -1j], atol=1e-12)
    np.testing.assert_allclose(np.diag(S4), [1, OMEGA, -1, OMEGA], atol=1e-12)


def test_qubit_x_power_minus_one():
    np.testing.assert_allclose(matrix(GateInstance("X", -1, (2,))).matrix, [[0, 1], [1, 0]])


def test_pauli_algebra():
    np.testing.assert_allclose(Z4 @ X4, 1j * X4 @ Z4, atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(X4, 4), I4, atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(Z4, 4), I4, atol=1e-12)
    np.testing.assert_allclose(Z4.conj().T, np.linalg.matrix_power(Z4, 3), atol=1e-12)
    np.testing.assert_allclose(X4.conj().T, np.linalg.matrix_power(X4, 3), atol=1e-12)


def test_qudit_h_squared_negates():
    np.testing.assert_allclose(np.linalg.matrix_power(H4, 4), I4, atol=1e-12)
    h2 = H4 @ H4
    for x in range(4):
        assert np.argmax(np.abs(h2[:, x])) == (-x) % 4


def test_s_conjugation():
    np.testing.assert_allclose(S4 @ X4 @ S4.conj().T, OMEGA * X4 @ Z4, atol=1e-12)
    np.testing.assert_allclose(S4 @ Z4 @ S4.conj().T, Z4, atol=1e-12)


def test_orders():
    assert order("X", (4,)) == 4
    assert order("H", (4,)) == 4
    assert order("S", (4,)) == 8
    assert order("H", (2,)) == 2
    assert GateInstance("S", -1, (4,)).reduced_power == 7


CATALOG = [(n, d) for n in ("I", "X", "Z", "H", "S") for d in (2, 4)] + [("T", 2), ("OMEGA", 2)]


@pytest.mark.parametrize("name,d", CATALOG)
def test_catalog_unitary(name, d):
    u = gate(name, (d,)).matrix
    np.testing.assert_allclose(u.conj().T @ u, np.eye(d), atol=1e-10)


@pytest.mark.parametrize("name,dims", [("CNOT", (4, 4)), ("CZ", (4, 4)), ("CS", (2, 2)), ("CCX", (2, 2, 2)),
                                       ("XH2", (4,)), ("ZDS2", (4,)), ("HSH", (2,))])
def test_catalog_unitary_multi(name, dims):
    u = gate(name, dims).matrix
    np.testing.assert_allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10)


def test_fusion_map_examples():
    f = fusion_map("fuse").matrix
    assert np.argmax(np.abs(f @ np.eye(4)[3])) == 3  # |1>|1> -> |3>
    assert np.argmax(np.abs(f @ np.eye(4)[0])) == 0
    # |x=0>|y=1> -> |2>, split returns low then high
    split = fusion_map("split").matrix
    np.testing.assert_allclose(split @ np.eye(4)[2], np.eye(4)[1], atol=1e-12)
    np.testing.assert_allclose(f @ split, I4, atol=1e-12)
    np.testing.assert_allclose(split @ f, I4, atol=1e-12)
    with pytest.raises(ValueError):
        fusion_map("sideways")


def test_g_fusion_map_definition():
    h = gate("H").matrix
    swap = gate("SWAP", (2, 2)).matrix
    expected = H4.conj().T @ fusion_map("fuse").matrix @ np.kron(h, h) @ swap
    np.testing.assert_allclose(g_fusion_map("fuse").matrix, expected, atol=1e-12)
    plus = h @ [1, 0]
    np.testing.assert_allclose(g_fusion_map("fuse").matrix @ np.kron(plus, plus), np.full(4, 0.5), atol=1e-12)


def test_hybrid_cnots():
    down = hybrid_cnot(4, 2).matrix
    np.testing.assert_allclose(down @ np.eye(8)[1 * 2 + 0], np.eye(8)[1 * 2 + 1])
    up = hybrid_cnot(2, 4).matrix
    np.testing.assert_allclose(up @ np.eye(8)[1 * 4 + 1], np.eye(8)[1 * 4 + 3])
    np.testing.assert_allclose(up[:4, :4], I4)
    with pytest.raises(GateError):
        hybrid_cnot(2, 2)


def test_resource_states():
    f = resource_state("F").amplitudes
    np.testing.assert_allclose(f, [2**-0.5, 2**-0.5, 0, 0], atol=1e-12)
    g = resource_state("G").amplitudes
    # the two states differ by a qudit Fourier transform
    assert equal_up_to_global_phase(H4 @ g, f)
    assert not equal_up_to_global_phase(H4 @ f, g)


def test_macros():
    h2 = H4 @ H4
    np.testing.assert_allclose(gate("XH2", (4,)).matrix, X4 @ h2, atol=1e-12)
    zds2 = gate("ZDS2", (4,)).matrix
    np.testing.assert_allclose(zds2, Z4.conj().T @ S4 @ S4, atol=1e-12)
    np.testing.assert_allclose(np.diag(zds2), [1, 1, -1, -1], atol=1e-12)


def test_cliffordness():
    assert is_clifford_qubit_gate("T", 2, (2,))
    assert not is_clifford_qubit_gate("T", 1, (2,))
    assert is_clifford_qubit_gate("CS", 2, (2, 2))
    assert not is_clifford_qubit_gate("CCX", 1, (2, 2, 2))
    assert is_clifford_qubit_gate("CCX", 2, (2, 2, 2))


def test_unknown_gate():
    with pytest.raises(GateError):
        GateInstance("QQ", 1, (2,))
    with pytest.raises(GateError):
        gate("CNOT", (2,))


def test_apply_qudit_cnot_adds():
    s = DenseState.basis((4, 4), (3, 2))
    out = apply_gate(s, gate("CNOT", (4, 4)), [0, 1])
    assert np.argmax(np.abs(out.amplitudes)) == 3 * 4 + (3 + 2) % 4
