"""Dense simulation of circuits: branch enumeration, unitaries, channels, sampling.

A branch carries a tensor whose leading axes are the live wires (in creation
order) and whose last axis indexes the input basis, so each finished branch is
a Kraus operator from the input register to the output register. Measurement
keeps the wire in the observed basis state; discarded and leftover wires are
traced out by splitting the branch over their basis values.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from qfusion.circuit.ir import Circuit, CircuitError, Discard, Fuse, Gate, Measure, Prep, Split
from qfusion.gates import fusion_map, g_fusion_map, matrix, resource_state, GateInstance
from qfusion.hilbert import (
    ChoiMatrix,
    DenseState,
    DenseUnitary,
    RegisterShape,
    apply_to_axes,
    choi_of_branches,
)

PRUNE_TOL = 1e-24
SHOTS_PER_BLOCK = 4096


@dataclass(frozen=True)
class BranchOutcome:
    """One measurement history.

    ``labels`` are the classical-output values (in ``classical_outputs`` order),
    ``record`` holds every classical bit, ``matrix`` is the sub-normalized
    branch operator of shape ``(prod(out_dims), prod(in_dims))``.
    """

    labels: tuple[int, ...]
    record: dict = field(compare=False)
    matrix: np.ndarray = field(compare=False, repr=False)
    in_dims: tuple[int, ...] = ()
    out_dims: tuple[int, ...] = ()
    probability: float = 0.0

    def state(self) -> np.ndarray:
        """Unnormalized output vector for single-column (state-input) branches."""
        return self.matrix[:, 0]


@dataclass
class _Branch:
    axes: list
    tensor: np.ndarray
    record: dict


def _bind_classical(c: Circuit, values) -> dict:
    values = dict(values or {})
    bound = {}
    for b in c.classical_inputs:
        if b.id not in values:
            raise CircuitError(f"classical input {b.id!r} is not assigned")
        v = int(values.pop(b.id))
        if not 0 <= v < b.width:
            raise CircuitError(f"classical input {b.id!r}={v} out of range for width {b.width}")
        bound[b.id] = v
    if values:
        raise CircuitError(f"unknown classical inputs {sorted(values)}")
    return bound


def _initial(c: Circuit, input_state) -> np.ndarray:
    dims = c.input_dims
    if input_state is None:
        total = int(np.prod(dims)) if dims else 1
        return np.eye(total, dtype=complex).reshape(dims + (total,))
    vec = input_state.amplitudes if isinstance(input_state, DenseState) else np.asarray(input_state)
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    if vec.size != (int(np.prod(dims)) if dims else 1):
        raise CircuitError(f"input state has length {vec.size}, circuit inputs have dims {dims}")
    return vec.reshape(dims + (1,))


def _prep_vector(value, dim: int) -> np.ndarray:
    if isinstance(value, str):
        return resource_state(value).amplitudes
    v = np.zeros(dim, dtype=complex)
    v[value] = 1
    return v


def _split_on(branch: _Branch, wire: str, dim: int, keep_axis: bool):
    """Yield (value, tensor) for each basis value of ``wire`` with nonzero weight."""
    ax = branch.axes.index(wire)
    for v in range(dim):
        part = np.take(branch.tensor, v, axis=ax)
        if np.vdot(part, part).real < PRUNE_TOL:
            continue
        if keep_axis:
            t = np.zeros_like(branch.tensor)
            idx = [slice(None)] * t.ndim
            idx[ax] = v
            t[tuple(idx)] = part
            yield v, t
        else:
            yield v, part


def _step(c: Circuit, i: int, op, branches: list[_Branch]) -> list[_Branch]:
    dims = c.layout.dims
    out = []
    for br in branches:
        if isinstance(op, Prep):
            vec = _prep_vector(op.value, dims[op.wire])
            t = np.tensordot(br.tensor, vec, axes=0)  # new wire axis is last
            t = np.moveaxis(t, -1, len(br.axes))
            out.append(_Branch(br.axes + [op.wire], t, br.record))
        elif isinstance(op, Gate):
            power = op.power
            if op.condition is not None and br.record[op.condition[0]] != op.condition[1]:
                out.append(br)
                continue
            if op.classical_power is not None:
                power *= br.record[op.classical_power]
            u = matrix(GateInstance(op.name, power, c.layout.gate_dims[i]))
            t = apply_to_axes(br.tensor, u, [br.axes.index(w) for w in op.targets])
            out.append(_Branch(br.axes, t, br.record))
        elif isinstance(op, Fuse):
            f = (fusion_map if op.map == "F" else g_fusion_map)("fuse")
            a, b = (br.axes.index(w) for w in op.inputs)
            t = apply_to_axes(br.tensor, f, [a, b])
            axes = [w for w in br.axes if w not in op.inputs]
            axes.insert(sum(1 for k in range(a) if k != b), op.output)
            out.append(_Branch(axes, t, br.record))
        elif isinstance(op, Split):
            f = (fusion_map if op.map == "F" else g_fusion_map)("split")
            a = br.axes.index(op.input)
            t = apply_to_axes(br.tensor, f, [a])
            axes = br.axes[:a] + list(op.outputs) + br.axes[a + 1:]
            out.append(_Branch(axes, t, br.record))
        elif isinstance(op, Measure):
            for v, t in _split_on(br, op.wire, dims[op.wire], keep_axis=True):
                out.append(_Branch(br.axes, t, {**br.record, op.cbit: v}))
        elif isinstance(op, Discard):
            axes = [w for w in br.axes if w != op.wire]
            for _, t in _split_on(br, op.wire, dims[op.wire], keep_axis=False):
                out.append(_Branch(axes, t, br.record))
    return out


def _run(c: Circuit, classical_inputs=None, input_state=None) -> list[_Branch]:
    record = _bind_classical(c, classical_inputs)
    branches = [_Branch(list(c.inputs), _initial(c, input_state), record)]
    for i, op in enumerate(c.ops):
        branches = _step(c, i, op, branches)
    for w in c.layout.leftover:
        dim = c.layout.dims[w]
        nxt = []
        for br in branches:
            axes = [a for a in br.axes if a != w]
            nxt.extend(_Branch(axes, t, br.record) for _, t in _split_on(br, w, dim, keep_axis=False))
        branches = nxt
    return branches


def enumerate_branches(c: Circuit, classical_inputs=None, input_state=None) -> list[BranchOutcome]:
    """All nonzero measurement/trace branches as Kraus operators.

    With ``input_state`` the operators have a single column (the output vector)
    and probabilities are squared norms; otherwise probabilities are averaged
    over the maximally mixed input, so they sum to one either way.
    """
    in_dims = c.input_dims if input_state is None else ()
    out_dims = c.output_dims
    d_in = int(np.prod(c.input_dims)) if c.input_dims else 1
    results = []
    for br in _run(c, classical_inputs, input_state):
        perm = [br.axes.index(w) for w in c.outputs] + [len(br.axes)]
        m = np.transpose(br.tensor, perm).reshape(int(np.prod(out_dims)) if out_dims else 1, -1)
        norm2 = float(np.vdot(m, m).real)
        prob = norm2 if input_state is not None else norm2 / d_in
        labels = tuple(br.record[b] for b in c.classical_outputs)
        results.append(BranchOutcome(labels, dict(br.record), m, in_dims, out_dims, prob))
    return results


def outcome_distribution(c: Circuit, classical_inputs=None, input_state=None) -> dict:
    """Probability of each classical-output assignment, sorted by label."""
    acc: dict = {}
    for b in enumerate_branches(c, classical_inputs, input_state):
        acc[b.labels] = acc.get(b.labels, 0.0) + b.probability
    return dict(sorted(acc.items()))


def _shape(dims) -> RegisterShape | None:
    return RegisterShape(tuple(dims)) if dims else None


def compile_unitary(c: Circuit, classical_inputs=None) -> DenseUnitary:
    """Matrix of a measurement-free circuit with at least one input and output wire."""
    if c.has_measurement():
        raise CircuitError("compile_unitary: circuit contains a measurement")
    if not c.inputs or not c.outputs:
        raise CircuitError("compile_unitary: circuit needs input and output wires (use final_state)")
    branches = enumerate_branches(c, classical_inputs)
    if len(branches) != 1:
        raise CircuitError("compile_unitary: circuit discards a wire, so it is not unitary")
    return DenseUnitary(branches[0].matrix, _shape(c.input_dims), _shape(c.output_dims))


def final_state(c: Circuit, classical_inputs=None) -> DenseState:
    """Output state of a measurement-free circuit without input wires."""
    if c.inputs:
        raise CircuitError("final_state: circuit has input wires")
    branches = enumerate_branches(c, classical_inputs)
    if len(branches) != 1:
        raise CircuitError("final_state: circuit output is not a pure state")
    return DenseState(RegisterShape(c.output_dims), branches[0].matrix[:, 0])


def channel_of(c: Circuit, classical_inputs=None) -> ChoiMatrix:
    """Choi matrix from input wires to output wires, sub-channels keyed by labels."""
    branches = enumerate_branches(c, classical_inputs)
    return choi_of_branches(
        [(b.labels, b.matrix) for b in branches], _shape(c.input_dims), _shape(c.output_dims)
    )


def _block_counts(labels, cdf, n: int, seed: int, block: int) -> Counter:
    rng = np.random.default_rng(np.random.SeedSequence([seed, block]))
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    idx = np.minimum(idx, len(labels) - 1)
    return Counter(labels[k] for k in idx)


def sample(c: Circuit, shots: int, seed: int, classical_inputs=None, input_state=None,
           shard: tuple[int, int] = (0, 1)) -> dict:
    """Histogram of classical-output assignments over ``shots`` runs.

    Shots are drawn in fixed blocks, each seeded from ``(seed, block index)``,
    so shard ``(k, n)`` handles blocks ``k, k+n, ...`` and merging all shards
    reproduces the unsharded histogram exactly. Circuits with input wires are
    run on the all-zero basis state unless ``input_state`` is given.
    """
    if shots < 0:
        raise ValueError("shots must be non-negative")
    k, n = shard
    if not 0 <= k < n:
        raise ValueError(f"invalid shard {shard}")
    if input_state is None and c.inputs:
        input_state = DenseState.basis(c.input_dims, [0] * len(c.inputs))
    dist = outcome_distribution(c, classical_inputs, input_state)
    labels = list(dist)
    cdf = np.cumsum([dist[l] for l in labels])
    cdf /= cdf[-1]
    counts: Counter = Counter()
    nblocks = -(-shots // SHOTS_PER_BLOCK)
    for block in range(k, nblocks, n):
        size = min(SHOTS_PER_BLOCK, shots - block * SHOTS_PER_BLOCK)
        counts.update(_block_counts(labels, cdf, size, seed, block))
    return dict(sorted(counts.items()))
