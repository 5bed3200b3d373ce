"""Dense linear algebra over mixed qubit/ququart registers.

Every register is a tuple of site dimensions drawn from {2, 4}. Basis states are
indexed in mixed radix with the first site as the most significant digit, which
is exactly numpy's C-order reshape of a flat vector into ``dims``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

ALLOWED_DIMS = (2, 4)

UNITARY_TOL = 1e-10
NORM_TOL = 1e-12
CHOI_TOL = 1e-9


class ShapeError(ValueError):
    """Raised when operator and register dimensions disagree."""


@dataclass(frozen=True)
class RegisterShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ShapeError("register must have at least one site")
        bad = [d for d in dims if d not in ALLOWED_DIMS]
        if bad:
            raise ShapeError(f"site dimensions must be 2 or 4, got {bad}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)


def as_shape(dims: RegisterShape | Iterable[int]) -> RegisterShape:
    if isinstance(dims, RegisterShape):
        return dims
    return RegisterShape(tuple(dims))


@dataclass(frozen=True, eq=False)
class DenseState:
    shape: RegisterShape
    amplitudes: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != shape.total:
            raise ShapeError(f"expected {shape.total} amplitudes, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, dims: Sequence[int], values: Sequence[int]) -> "DenseState":
        shape = as_shape(dims)
        if len(values) != len(shape):
            raise ShapeError("one basis value per site is required")
        for v, d in zip(values, shape.dims):
            if not 0 <= v < d:
                raise ValueError(f"basis value {v} out of range for dimension {d}")
        amps = np.zeros(shape.total, dtype=complex)
        amps[np.ravel_multi_index(tuple(values), shape.dims)] = 1.0
        return cls(shape, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape.dims)

    def kron(self, other: "DenseState") -> "DenseState":
        return DenseState(
            RegisterShape(self.shape.dims + other.shape.dims),
            np.kron(self.amplitudes, other.amplitudes),
        )

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """A linear map between two registers (isometries, Kraus operators, ...)."""

    matrix: np.ndarray
    in_shape: RegisterShape
    out_shape: RegisterShape

    def __post_init__(self):
        in_shape = as_shape(self.in_shape)
        out_shape = as_shape(self.out_shape)
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (out_shape.total, in_shape.total):
            raise ShapeError(
                f"matrix shape {m.shape} does not match "
                f"{out_shape.dims} <- {in_shape.dims}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "in_shape", in_shape)
        object.__setattr__(self, "out_shape", out_shape)

    @property
    def shape(self) -> RegisterShape:
        if self.in_shape != self.out_shape:
            raise ShapeError("operator changes register shape")
        return self.in_shape

    @property
    def dagger(self) -> "DenseOperator":
        return type(self)(self.matrix.conj().T, self.out_shape, self.in_shape)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            return False
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if self.in_shape.total != other.out_shape.total:
            raise ShapeError("cannot compose operators of mismatched size")
        return DenseOperator(self.matrix @ other.matrix, other.in_shape, self.out_shape)

    def apply(self, state: DenseState) -> DenseState:
        if state.shape.total != self.in_shape.total:
            raise ShapeError("state does not match operator input")
        return DenseState(self.out_shape, self.matrix @ state.amplitudes)


class DenseUnitary(DenseOperator):
    """A unitary operator; input and output registers may differ only in
    factorisation, as for the fusion maps (2, 2) <-> (4,)."""

    def __init__(self, matrix, in_shape, out_shape=None, *, check: bool = True):
        super().__init__(matrix, in_shape, in_shape if out_shape is None else out_shape)
        if check and not self.is_unitary():
            raise ValueError("matrix is not unitary within tolerance")

    def __matmul__(self, other):
        prod = super().__matmul__(other)
        if isinstance(other, DenseUnitary):
            return DenseUnitary(prod.matrix, prod.in_shape, prod.out_shape, check=False)
        return prod

    @property
    def dagger(self) -> "DenseUnitary":
        return DenseUnitary(self.matrix.conj().T, self.out_shape, self.in_shape, check=False)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "DenseUnitary":
        shape = as_shape(dims)
        return cls(np.eye(shape.total), shape, check=False)


def apply_gate(state: DenseState, gate: DenseOperator, sites: Sequence[int]) -> DenseState:
    """Apply ``gate`` to ``sites`` of ``state`` (identity elsewhere).

    The gate's input factorisation must match the listed sites. Shape-changing
    gates replace the listed sites, in order, by the gate's output sites at the
    position of the first listed site.
    """
    sites = [int(s) for s in sites]
    n = len(state.shape)
    if len(set(sites)) != len(sites):
        raise ShapeError(f"repeated site index in {sites}")
    if any(s < 0 or s >= n for s in sites):
        raise ShapeError(f"site index out of range in {sites} for {n} sites")
    site_dims = tuple(state.shape.dims[s] for s in sites)
    if site_dims != gate.in_shape.dims:
        raise ShapeError(f"gate expects dims {gate.in_shape.dims}, sites have {site_dims}")
    tensor = apply_to_axes(state.tensor(), gate, sites)
    return DenseState(RegisterShape(_result_dims(state.shape.dims, gate, sites)), tensor.reshape(-1))


def apply_to_axes(tensor: np.ndarray, gate: DenseOperator, axes: Sequence[int]) -> np.ndarray:
    """Contract ``gate`` into ``axes`` of ``tensor``.

    A gate with as many output as input sites writes output ``j`` back to
    ``axes[j]``. A shape-changing gate (fuse/split) places its outputs, in order,
    where the first listed axis was; other axes keep their relative order. Axes
    not listed (including any trailing bookkeeping axes) are untouched.
    """
    axes = list(axes)
    k_in = len(gate.in_shape)
    k_out = len(gate.out_shape)
    g = gate.matrix.reshape(gate.out_shape.dims + gate.in_shape.dims)
    moved = np.tensordot(g, tensor, axes=(list(range(k_out, k_out + k_in)), axes))
    rest = [i for i in range(tensor.ndim) if i not in axes]
    if k_in == k_out:
        perm = [axes.index(p) if p in axes else k_out + rest.index(p) for p in range(tensor.ndim)]
        return np.transpose(moved, perm)
    insert_at = sum(1 for i in rest if i < axes[0])
    order = (
        list(range(k_out, k_out + insert_at))
        + list(range(k_out))
        + list(range(k_out + insert_at, k_out + len(rest)))
    )
    return np.transpose(moved, order)


def _result_dims(dims: Sequence[int], gate: DenseOperator, sites: Sequence[int]) -> tuple[int, ...]:
    dims = list(dims)
    if len(gate.in_shape) == len(gate.out_shape):
        for s, d in zip(sites, gate.out_shape.dims):
            dims[s] = d
        return tuple(dims)
    rest = [d for i, d in enumerate(dims) if i not in sites]
    insert_at = sum(1 for i in range(sites[0]) if i not in sites)
    return tuple(rest[:insert_at] + list(gate.out_shape.dims) + rest[insert_at:])


def embed(gate: DenseOperator, sites: Sequence[int], dims: Sequence[int]) -> DenseOperator:
    """Full-register matrix of a shape-preserving gate acting on ``sites``."""
    shape = as_shape(dims)
    if gate.in_shape != gate.out_shape:
        raise ShapeError("embed requires a shape-preserving gate")
    eye = np.eye(shape.total, dtype=complex).reshape(shape.dims + (shape.total,))
    out = apply_to_axes(eye, gate, sites)
    return DenseOperator(out.reshape(shape.total, shape.total), shape, shape)


@dataclass(frozen=True)
class PhaseComparison:
    equal: bool
    max_deviation: float
    phase: complex | None = None

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to_global_phase(U, V, tol: float = UNITARY_TOL) -> PhaseComparison:
    """Decide whether ``U == phase * V`` for some unit-modulus ``phase``.

    The phase is read off the first entry of ``V`` (row-major) whose magnitude
    exceeds ``tol``; ``max_deviation`` is the largest entrywise ``|U - phase V|``.
    Accepts DenseOperator, DenseState or raw arrays.
    """
    u, v = _raw(U), _raw(V)
    if u.shape != v.shape:
        raise ShapeError(f"cannot compare shapes {u.shape} and {v.shape}")
    if _shapes(U) is not None and _shapes(V) is not None and _shapes(U) != _shapes(V):
        raise ShapeError(f"register shapes differ: {_shapes(U)} vs {_shapes(V)}")
    flat_v = v.reshape(-1)
    big = np.flatnonzero(np.abs(flat_v) > tol)
    if big.size == 0:
        dev = float(np.max(np.abs(u))) if u.size else 0.0
        return PhaseComparison(dev <= tol, dev, None)
    k = big[0]
    ratio = u.reshape(-1)[k] / flat_v[k]
    phase = ratio / abs(ratio) if abs(ratio) > 0 else 1.0 + 0j
    dev = float(np.max(np.abs(u - phase * v)))
    return PhaseComparison(dev <= tol, dev, complex(phase))


def max_deviation(U, V) -> float:
    u, v = _raw(U), _raw(V)
    if u.shape != v.shape:
        raise ShapeError(f"cannot compare shapes {u.shape} and {v.shape}")
    return float(np.max(np.abs(u - v))) if u.size else 0.0


def _raw(x) -> np.ndarray:
    if isinstance(x, DenseOperator):
        return x.matrix
    if isinstance(x, DenseState):
        return x.amplitudes
    if isinstance(x, ChoiMatrix):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _shapes(x):
    if isinstance(x, DenseOperator):
        return (x.in_shape.dims, x.out_shape.dims)
    if isinstance(x, DenseState):
        return x.shape.dims
    return None


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        ax = i - count
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d, d)


# --- channels -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi matrix ``J = sum_ij |i><j| (x) E(|i><j|)`` (input factor first).

    ``sub_channels`` maps outcome labels to the Choi matrix of the corresponding
    trace-decreasing branch; their sum is ``matrix``.
    """

    in_shape: RegisterShape | None
    out_shape: RegisterShape | None
    matrix: np.ndarray
    sub_channels: dict = field(default_factory=dict)

    @property
    def d_in(self) -> int:
        return self.in_shape.total if self.in_shape else 1

    @property
    def d_out(self) -> int:
        return self.out_shape.total if self.out_shape else 1

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def rank(self, tol: float = CHOI_TOL) -> int:
        w = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
        return int(np.sum(w > tol))

    def is_psd(self, tol: float = CHOI_TOL) -> bool:
        w = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
        return bool(w.min() >= -tol)

    def output_for(self, rho_in: np.ndarray) -> np.ndarray:
        """Apply the channel to an input density matrix."""
        j = self.matrix.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
        return np.einsum("iajb,ij->ab", j, rho_in.T)


class CompletenessError(ValueError):
    pass


def _choi_from_kraus(ops: Sequence[np.ndarray]) -> np.ndarray:
    d_out, d_in = ops[0].shape
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in ops:
        v = k.T.reshape(-1)  # index (i, a) = <a|K|i>
        j += np.outer(v, v.conj())
    return j


def choi_of_branches(
    branches: Sequence[tuple[Hashable, DenseOperator | np.ndarray]],
    in_shape: RegisterShape | Sequence[int] | None = None,
    out_shape: RegisterShape | Sequence[int] | None = None,
    tol: float = CHOI_TOL,
    check_complete: bool = True,
) -> ChoiMatrix:
    """Choi matrix of ``rho -> sum_k K_k rho K_k^dagger`` with per-label parts."""
    if not branches:
        raise ValueError("at least one branch is required")
    mats = []
    for _, op in branches:
        if isinstance(op, DenseOperator):
            in_shape = in_shape or op.in_shape
            out_shape = out_shape or op.out_shape
            mats.append(op.matrix)
        else:
            mats.append(np.asarray(op, dtype=complex))
    shape0 = mats[0].shape
    if any(m.shape != shape0 for m in mats):
        raise ShapeError("branch operators must share input and output shapes")
    if check_complete:
        total = sum(m.conj().T @ m for m in mats)
        dev = float(np.max(np.abs(total - np.eye(shape0[1]))))
        if dev > tol:
            raise CompletenessError(f"sum K^dagger K deviates from identity by {dev:.3e}")
    groups: dict = {}
    for (label, _), m in zip(branches, mats):
        groups.setdefault(label, []).append(m)
    subs = {label: _choi_from_kraus(ms) for label, ms in groups.items()}
    return ChoiMatrix(
        as_shape(in_shape) if in_shape is not None else None,
        as_shape(out_shape) if out_shape is not None else None,
        sum(subs.values()),
        subs,
    )
