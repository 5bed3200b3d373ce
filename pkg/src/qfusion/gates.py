"""Gate catalog for qubits (dim 2) and ququarts (dim 4).

Qudit conventions: ``X|x> = |x+1 mod 4>``, ``Z|x> = i^x |x>``,
``H|x> = 1/2 sum_y i^(xy) |y>``, ``S|x> = w^(x^2) |x>`` with ``w = exp(i pi/4)``,
``CNOT|x, y> = |x, x+y mod 4>`` and ``CZ|x, y> = i^(xy) |x, y>``. A controlled
gate on a qudit control is applied ``x`` times.

The fusion map ``F`` sends the qubit pair ``|x>|y>`` (first wire ``x``) to the
ququart ``|2y + x>``; ``FDG`` is its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from qfusion.hilbert import DenseState, DenseUnitary, RegisterShape, apply_to_axes

OMEGA = np.exp(1j * np.pi / 4)

GATE_NAMES = (
    "I", "X", "Z", "H", "S", "T", "CNOT", "CZ", "CS", "SWAP", "CCX",
    "F", "FDG", "G", "GDG", "OMEGA", "XH2", "ZDS2", "HSH",
)
SHAPE_CHANGING = {"F": ((2, 2), (4,)), "FDG": ((4,), (2, 2)), "G": ((2, 2), (4,)), "GDG": ((4,), (2, 2))}
CLIFFORD_QUBIT = {"I", "X", "Z", "H", "S", "CNOT", "CZ", "SWAP", "OMEGA", "HSH"}
NON_CLIFFORD_QUBIT = {"T", "CS", "CCX"}


class GateError(ValueError):
    """Unknown gate name or a name/dimension combination the catalog lacks."""


@dataclass(frozen=True)
class GateInstance:
    name: str
    power: int = 1
    dims: tuple[int, ...] = (2,)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "power", int(self.power))
        if self.name not in GATE_NAMES:
            raise GateError(f"unknown gate name {self.name!r}")

    @property
    def reduced_power(self) -> int:
        if self.name in SHAPE_CHANGING:
            return self.power
        return self.power % order(self.name, self.dims)

    def matrix(self) -> DenseUnitary:
        return matrix(self)

    def dagger(self) -> "GateInstance":
        return GateInstance(self.name, -self.power, self.dims)


# --- primitive matrices ---------------------------------------------------


def _qubit(name: str) -> np.ndarray | None:
    s2 = 1 / np.sqrt(2)
    table = {
        "I": np.eye(2),
        "X": np.array([[0, 1], [1, 0]]),
        "Z": np.diag([1, -1]),
        "H": s2 * np.array([[1, 1], [1, -1]]),
        "S": np.diag([1, 1j]),
        "T": np.diag([1, OMEGA]),
        "CNOT": np.eye(4)[[0, 1, 3, 2]],
        "CZ": np.diag([1, 1, 1, -1]),
        "CS": np.diag([1, 1, 1, 1j]),
        "SWAP": np.eye(4)[[0, 2, 1, 3]],
        "CCX": np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]],
    }
    return table.get(name)


def _qudit(name: str) -> np.ndarray | None:
    x = np.arange(4)
    if name == "I":
        return np.eye(4)
    if name == "X":
        return np.roll(np.eye(4), 1, axis=0)
    if name == "Z":
        return np.diag(1j**x)
    if name == "H":
        return 0.5 * 1j ** np.outer(x, x)
    if name == "S":
        return np.diag(OMEGA ** (x * x))
    if name == "CNOT":
        m = np.zeros((16, 16))
        for a in range(4):
            for b in range(4):
                m[4 * a + (a + b) % 4, 4 * a + b] = 1
        return m
    if name == "CZ":
        return np.diag([1j ** (a * b) for a in range(4) for b in range(4)])
    return None


def _fuse_permutation() -> np.ndarray:
    # column: qubit-pair index 2x + y; row: qudit index 2y + x
    m = np.zeros((4, 4))
    for xbit in range(2):
        for ybit in range(2):
            m[2 * ybit + xbit, 2 * xbit + ybit] = 1
    return m


def _compose(dims: Sequence[int], steps) -> np.ndarray:
    """Product of ``(operator, sites)`` steps over a register, applied in order."""
    dims = tuple(dims)
    total = int(np.prod(dims))
    t = np.eye(total, dtype=complex).reshape(dims + (total,))
    for op, sites in steps:
        t = apply_to_axes(t, op, sites)
    return t.reshape(-1, total)


def _u(m, dims_in, dims_out=None) -> DenseUnitary:
    return DenseUnitary(m, RegisterShape(tuple(dims_in)), None if dims_out is None else RegisterShape(tuple(dims_out)), check=False)


def fusion_map(direction: str = "fuse") -> DenseUnitary:
    """``F`` (``fuse``): (2, 2) -> (4,), ``|x>|y> -> |2y + x>``; ``split`` inverts."""
    f = _fuse_permutation()
    if direction == "fuse":
        return _u(f, (2, 2), (4,))
    if direction == "split":
        return _u(f.T, (4,), (2, 2))
    raise ValueError(f"direction must be 'fuse' or 'split', not {direction!r}")


def g_fusion_map(direction: str = "fuse") -> DenseUnitary:
    """The alternate fusion ``G = H4^dagger F (H (x) H) SWAP``."""
    g = _base("H", (4,)).conj().T @ _fuse_permutation() @ np.kron(_base("H", (2,)), _base("H", (2,))) @ _base("SWAP", (2, 2))
    if direction == "fuse":
        return _u(g, (2, 2), (4,))
    if direction == "split":
        return _u(g.conj().T, (4,), (2, 2))
    raise ValueError(f"direction must be 'fuse' or 'split', not {direction!r}")


def hybrid_cnot(control_dim: int, target_dim: int) -> DenseUnitary:
    """Qubit/qudit CNOT built from its fission-conjugated qubit circuit.

    Qudit control: split the control, CNOT from its low qubit onto the target,
    fuse back. Qubit control: split the target, CNOT onto its high qubit, fuse.
    """
    if {control_dim, target_dim} != {2, 4}:
        raise GateError("hybrid CNOT needs exactly one qubit and one qudit")
    split, fuse = fusion_map("split"), fusion_map("fuse")
    cx = _u(_base("CNOT", (2, 2)), (2, 2))
    if control_dim == 4:
        # register (4, 2) -> (2, 2, 2) -> (4, 2)
        m = _compose((4, 2), [(split, [0]), (cx, [0, 2]), (fuse, [0, 1])])
        return _u(m, (4, 2))
    m = _compose((2, 4), [(split, [1]), (cx, [0, 2]), (fuse, [1, 2])])
    return _u(m, (2, 4))


@lru_cache(maxsize=None)
def _base_cached(name: str, dims: tuple[int, ...]) -> np.ndarray:
    if name in SHAPE_CHANGING:
        d_in, _ = SHAPE_CHANGING[name]
        if dims != d_in:
            raise GateError(f"{name} acts on dims {d_in}, not {dims}")
        if name == "F":
            return fusion_map("fuse").matrix
        if name == "FDG":
            return fusion_map("split").matrix
        if name == "G":
            return g_fusion_map("fuse").matrix
        return g_fusion_map("split").matrix
    if name == "OMEGA":
        return OMEGA * np.eye(int(np.prod(dims)))
    if name == "I" and len(dims) == 1:
        return np.eye(dims[0])
    if name == "XH2" and dims == (4,):
        return _base("X", (4,)) @ np.linalg.matrix_power(_base("H", (4,)), 2)
    if name == "ZDS2" and dims == (4,):
        return _base("Z", (4,)).conj().T @ np.linalg.matrix_power(_base("S", (4,)), 2)
    if name == "HSH" and len(dims) == 1:
        h = _base("H", dims)
        return h @ _base("S", dims) @ h
    if name == "CNOT" and dims in ((4, 2), (2, 4)):
        return hybrid_cnot(*dims).matrix
    if all(d == 2 for d in dims):
        m = _qubit(name)
        if m is not None and m.shape[0] == 2 ** len(dims):
            return m
    if all(d == 4 for d in dims):
        m = _qudit(name)
        if m is not None and m.shape[0] == 4 ** len(dims):
            return m
    raise GateError(f"gate {name} is not defined on dims {dims}")


def _base(name: str, dims: Sequence[int]) -> np.ndarray:
    return np.array(_base_cached(name, tuple(dims)), dtype=complex)


@lru_cache(maxsize=None)
def order(name: str, dims: tuple[int, ...]) -> int:
    """Smallest k with gate^k = I exactly (not up to phase)."""
    if name in SHAPE_CHANGING:
        raise GateError(f"{name} has no multiplicative order")
    m = _base(name, dims)
    acc = np.eye(m.shape[0], dtype=complex)
    for k in range(1, 33):
        acc = acc @ m
        if np.max(np.abs(acc - np.eye(m.shape[0]))) < 1e-10:
            return k
    raise GateError(f"gate {name} on {dims} has no finite order <= 32")


def matrix(g: GateInstance) -> DenseUnitary:
    """Exact matrix of ``g`` with its power applied (negative powers are daggers)."""
    dims = g.dims
    if g.name in SHAPE_CHANGING:
        if g.power != 1:
            raise GateError(f"{g.name} only supports power 1; use its inverse name")
        d_in, d_out = SHAPE_CHANGING[g.name]
        return _u(_base(g.name, dims), d_in, d_out)
    m = np.linalg.matrix_power(_base(g.name, dims), g.reduced_power)
    return _u(m, dims)


def gate(name: str, dims: Sequence[int] = (2,), power: int = 1) -> DenseUnitary:
    return matrix(GateInstance(name, power, tuple(dims)))


def resource_state(which: str = "F") -> DenseState:
    """``|F> = (|0> + |1>)/sqrt(2)``; ``|G>`` is ``G`` applied to ``H|0> (x) |0>``."""
    if which == "F":
        return DenseState(RegisterShape((4,)), np.array([1, 1, 0, 0]) / np.sqrt(2))
    if which == "G":
        plus_zero = np.kron(_base("H", (2,)) @ np.array([1, 0]), np.array([1, 0]))
        return DenseState(RegisterShape((4,)), g_fusion_map("fuse").matrix @ plus_zero)
    raise ValueError(f"resource state must be 'F' or 'G', not {which!r}")


def is_clifford_qubit_gate(name: str, power: int, dims: Sequence[int]) -> bool:
    """Whether a qubit gate instance is Clifford (T^even, CS^even are)."""
    if name in CLIFFORD_QUBIT:
        return True
    p = GateInstance(name, power, tuple(dims)).reduced_power
    if name == "T":
        return p % 2 == 0
    if name == "CS":
        return p % 2 == 0
    if name == "CCX":
        return p == 0
    return False
