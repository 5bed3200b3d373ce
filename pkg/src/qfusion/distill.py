"""Detection-block analysis for noisy |F> states.

Error classes on a twirled |F> are indexed ``0 = I, 1 = X^2, 2 = Z^2,
3 = X^2 Z^2``; the X-bit of class ``k`` is ``k & 1`` and the Z-bit ``k >> 1``.

Slot layout. X-block: slot 0 is the protected state, slot 1 the consumed one.
Z-block: slot 0 is the protected state; slots 1..3 are the states consumed by
the three splits (ancilla 1, ancilla 2, protected wire) and slots 4..6 those
consumed by the three fuses, in the same wire order. A consumed state's Z-bit
becomes a Z on the low qubit and its X-bit an X on the high qubit.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from qfusion.circuit import CircuitBuilder, enumerate_branches
from qfusion.gates import gate, resource_state
from qfusion.hilbert import equal_up_to_global_phase

CLASS_NAMES = ("I", "X2", "Z2", "X2Z2")
ARITY = {"X": 2, "Z": 7}
SUM_TOL = 1e-12
MC_BLOCK = 1 << 16


class DistillError(ValueError):
    pass


class BracketError(DistillError):
    """The threshold predicate does not change sign (or is not monotone) on the bracket."""


@dataclass(frozen=True)
class ErrorDistribution:
    p_i: float
    p_x: float
    p_z: float
    p_xz: float

    def __post_init__(self):
        vals = self.as_array()
        if np.any(vals < -SUM_TOL) or not np.all(np.isfinite(vals)):
            raise DistillError(f"probabilities must be non-negative: {vals}")
        if abs(vals.sum() - 1) > SUM_TOL:
            raise DistillError(f"probabilities sum to {vals.sum()!r}, not 1")

    @classmethod
    def ideal(cls) -> "ErrorDistribution":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_errors(cls, p_x=0.0, p_z=0.0, p_xz=0.0) -> "ErrorDistribution":
        return cls(1.0 - p_x - p_z - p_xz, p_x, p_z, p_xz)

    @classmethod
    def from_array(cls, a) -> "ErrorDistribution":
        a = np.asarray(a, dtype=float)
        return cls(*(float(v) for v in a))

    def as_array(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_z, self.p_xz], dtype=float)

    @property
    def total_error(self) -> float:
        return self.p_x + self.p_z + self.p_xz

    @property
    def marginal_x(self) -> float:
        return self.p_x + self.p_xz

    @property
    def marginal_z(self) -> float:
        return self.p_z + self.p_xz

    def swapped(self) -> "ErrorDistribution":
        """Exchange the X^2 and Z^2 labels (the G-frame relabeling)."""
        return ErrorDistribution(self.p_i, self.p_z, self.p_x, self.p_xz)


@dataclass(frozen=True)
class NoiseModel:
    """Independent flips with probability ``p`` on both underlying qubits."""

    p: float

    def __post_init__(self):
        if not 0 <= self.p < 1:
            raise DistillError(f"p must lie in [0, 1), got {self.p}")

    def distribution(self) -> ErrorDistribution:
        p = self.p
        return ErrorDistribution((1 - p) ** 2, (1 - p) * p, (1 - p) * p, p * p)


@dataclass(frozen=True)
class BlockResult:
    block: str
    accept_probability: float
    output: ErrorDistribution | None  # None when nothing is accepted

    @property
    def rejected_all(self) -> bool:
        return self.output is None


# --- twirling ----------------------------------------------------------------


def _f_basis() -> np.ndarray:
    f = resource_state("F").amplitudes
    x2, z2 = gate("X", (4,), 2).matrix, gate("Z", (4,), 2).matrix
    return np.stack([f, x2 @ f, z2 @ f, x2 @ z2 @ f])


def twirl(rho, tol: float = 1e-9, with_residual: bool = False):
    """Twirl ``rho`` over the |F> stabilizers and read off the error classes.

    Each twirl averages ``rho`` with ``K rho K^dagger`` for the stabilizer ``K``
    (``X H^2`` and ``Z^dagger S^2``). Returns the class probabilities and,
    with ``with_residual``, the weight left outside the four-state span.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DistillError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DistillError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise DistillError(f"density matrix has trace {np.trace(rho).real:.6g}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise DistillError("density matrix is not positive semidefinite")
    for name in ("XH2", "ZDS2"):
        k = gate(name, (4,)).matrix
        rho = 0.5 * (rho + k @ rho @ k.conj().T)
    basis = _f_basis()
    probs = np.real(np.einsum("ki,ij,kj->k", basis.conj(), rho, basis))
    probs = np.clip(probs, 0.0, None)
    residual = float(max(0.0, 1.0 - probs.sum()))
    dist = ErrorDistribution.from_array(probs / probs.sum())
    return (dist, residual) if with_residual else dist


def noisy_state(dist: ErrorDistribution) -> np.ndarray:
    """The mixture ``sum_k p_k E_k |F><F| E_k^dagger`` as a density matrix."""
    basis = _f_basis()
    return sum(p * np.outer(v, v.conj()) for p, v in zip(dist.as_array(), basis))


# --- parity tables -------------------------------------------------------------


@dataclass(frozen=True)
class BlockTable:
    """All ``4^n`` error patterns of a block with their syndromes and outputs."""

    block: str
    patterns: np.ndarray = field(repr=False)  # (4^n, n) class per slot
    syndrome: np.ndarray = field(repr=False)  # (4^n, s) bits
    output: np.ndarray = field(repr=False)  # (4^n,) output class

    @property
    def accept(self) -> np.ndarray:
        return ~self.syndrome.any(axis=1)

    @property
    def slots(self) -> int:
        return self.patterns.shape[1]


def xblock_rule(x: np.ndarray, z: np.ndarray):
    """Syndrome and output bits from per-slot X/Z bits (last axis = slot)."""
    a, b = x[..., 0], z[..., 0]
    c, d = x[..., 1], z[..., 1]
    return np.stack([a ^ c], axis=-1), a, b ^ d


def zblock_rule(x: np.ndarray, z: np.ndarray):
    a, b = x[..., 0], z[..., 0]
    c, e, g, j, l, n = (z[..., k] for k in range(1, 7))
    d, f, h, k_, m, o = (x[..., k] for k in range(1, 7))
    syn = np.stack([(b + c + e + g) % 2, (c + g + j + n) % 2, (e + g + l + n) % 2], axis=-1)
    return syn, (a + d + f + h + k_ + m + o) % 2, (b + g + n) % 2


RULES = {"X": xblock_rule, "Z": zblock_rule}


@lru_cache(maxsize=None)
def block_table(block: str) -> BlockTable:
    n = ARITY[block]
    pats = np.array(list(itertools.product(range(4), repeat=n)), dtype=np.int64)
    syn, ox, oz = RULES[block](pats & 1, pats >> 1)
    return BlockTable(block, pats, syn.astype(np.int64), (ox + 2 * oz).astype(np.int64))


def _block_map(block: str, dists: Sequence[ErrorDistribution], frame: str = "F") -> BlockResult:
    if frame not in ("F", "G"):
        raise DistillError(f"frame must be 'F' or 'G', not {frame!r}")
    n = ARITY[block]
    if len(dists) != n:
        raise DistillError(f"{block}-block takes {n} distributions, got {len(dists)}")
    if frame == "G":
        dists = [d.swapped() for d in dists]
    tab = block_table(block)
    probs = np.stack([d.as_array() for d in dists])  # (n, 4)
    weight = np.prod(probs[np.arange(n), tab.patterns], axis=1)
    acc = tab.accept
    a = float(weight[acc].sum())
    if a <= 0:
        return BlockResult(block, 0.0, None)
    out = np.bincount(tab.output[acc], weights=weight[acc], minlength=4) / a
    out = out / out.sum()
    dist = ErrorDistribution.from_array(out)
    if frame == "G":
        dist = dist.swapped()
    return BlockResult(block, a, dist)


def xdetect_map(d1: ErrorDistribution, d2: ErrorDistribution | None = None, frame: str = "F") -> BlockResult:
    """Exact X^2-detection: protected ``d1``, consumed ``d2`` (defaults to ``d1``)."""
    return _block_map("X", [d1, d1 if d2 is None else d2], frame)


def zdetect_map(inputs, frame: str = "F") -> BlockResult:
    """Exact Z^2-detection over all 4^7 patterns; ``inputs`` is one distribution
    (used for every slot) or a sequence of seven."""
    if isinstance(inputs, ErrorDistribution):
        inputs = [inputs] * 7
    return _block_map("Z", list(inputs), frame)


def apply_block(block: str, dist: ErrorDistribution, frame: str = "F") -> BlockResult:
    return _block_map(block, [dist] * ARITY[block], frame)


def z_parity_structure() -> dict:
    """Counts over pure-Z^2 patterns of the Z-block (Z-bits b, c, e, g, j, l, n)."""
    tab = block_table("Z")
    pure = np.all((tab.patterns == 0) | (tab.patterns == 2), axis=1)
    weight = (tab.patterns == 2).sum(axis=1)
    acc = tab.accept
    flips = (tab.output >> 1) == 1
    return {
        "single_detected": int(np.sum(pure & (weight == 1) & ~acc)),
        "single_total": int(np.sum(pure & (weight == 1))),
        "weight3_undetected": int(np.sum(pure & (weight == 3) & acc)),
        "weight3_undetected_flipping": int(np.sum(pure & (weight == 3) & acc & flips)),
    }


# --- symbolic expansion ----------------------------------------------------------


def composition_counts(block: str) -> dict:
    """For i.i.d. inputs: number of patterns per ``(n_x, n_z, n_xz)`` in each
    category (``"reject"`` or an output class 0..3 among accepted patterns)."""
    tab = block_table(block)
    counts = {cat: Counter() for cat in ("reject", 0, 1, 2, 3)}
    comp = np.stack([(tab.patterns == k).sum(axis=1) for k in (1, 2, 3)], axis=1)
    for row, ok, out in zip(map(tuple, comp), tab.accept, tab.output):
        counts[int(out) if ok else "reject"][row] += 1
    return counts


def exact_polynomials(block: str):
    """Sympy polynomials in (p_x, p_z, p_xz) for the detection probability and
    the unnormalized accepted weight of each output class."""
    import sympy as sp

    px, pz, pxz = sp.symbols("p_x p_z p_xz", nonnegative=True)
    pi = 1 - px - pz - pxz
    n = ARITY[block]
    polys = {}
    for cat, cnt in composition_counts(block).items():
        polys[cat] = sp.expand(sum(c * pi ** (n - a - b - d) * px**a * pz**b * pxz**d for (a, b, d), c in cnt.items()))
    return (px, pz, pxz), polys


def leading_order(block: str) -> dict:
    """Lowest-degree part of each block polynomial.

    Keys: ``detect`` (rejection probability) and ``p_x``/``p_z``/``p_xz`` (output
    class weights, equal to the normalized output at leading order).
    """
    import sympy as sp

    syms, polys = exact_polynomials(block)
    out = {}
    for key, cat in (("detect", "reject"), ("p_x", 1), ("p_z", 2), ("p_xz", 3)):
        poly = sp.Poly(polys[cat], *syms)
        if poly.is_zero:
            out[key] = sp.Integer(0)
            continue
        low = min(sum(m) for m in poly.monoms())
        out[key] = sp.expand(sum(c * sp.prod([s**e for s, e in zip(syms, m)])
                                 for m, c in poly.terms() if sum(m) == low))
    return out


# --- dense cross-validation -------------------------------------------------------


def xdetect_circuit(pattern: Sequence[int] = (0, 0)):
    """X^2-detection circuit with error classes ``pattern`` on (protected, consumed)."""
    b = CircuitBuilder().qudit("A", "B").qubit("b0", "b1")
    for w, cls in zip(("A", "B"), pattern):
        b.prep(w, "F")
        if cls >> 1:
            b.gate("Z", w, power=2)
        if cls & 1:
            b.gate("X", w, power=2)
    (b.gate("CNOT", "A", "B", power=-1).split("B", "b0", "b1").measure("b0", "mb")
     .gate("CNOT", "A", "b1", cond=("mb", 1)).measure("b1", "s0"))
    return b.build(["A"], ["s0"])


def zdetect_circuit(pattern: Sequence[int] = (0,) * 7):
    """Z^2-detection circuit (128-dimensional register) with error classes
    ``pattern`` in the slot layout of this module."""
    b = CircuitBuilder().qubit("c").qudit("Q1", "Q2", "A")
    b.qubit("q1l", "q1h", "q2l", "q2h", "al", "ah").qudit("R1", "R2", "RA")
    b.prep("c").prep("Q1").prep("Q2").prep("A", "F")
    cls0 = pattern[0]
    if cls0 >> 1:
        b.gate("Z", "A", power=2)
    if cls0 & 1:
        b.gate("X", "A", power=2)
    b.gate("H", "c").gate("H", "Q1").gate("H", "Q2")
    b.gate("CNOT", "Q2", "A", power=-1).gate("CNOT", "Q1", "A", power=-1)
    pairs = (("q1l", "q1h"), ("q2l", "q2h"), ("al", "ah"))
    for (lo, hi), src in zip(pairs, ("Q1", "Q2", "A")):
        b.split(src, lo, hi)

    def inject(slot, lo, hi):
        cls = pattern[slot]
        if cls >> 1:
            b.gate("Z", lo)
        if cls & 1:
            b.gate("X", hi)

    for k, (lo, hi) in enumerate(pairs):
        inject(1 + k, lo, hi)
    for t in ("q1l", "q2l", "al", "ah"):
        b.gate("CNOT", "c", t)
    for k, (lo, hi) in enumerate(pairs):
        inject(4 + k, lo, hi)
    for (lo, hi), dst in zip(pairs, ("R1", "R2", "RA")):
        b.fuse(lo, hi, dst)
    b.gate("CNOT", "R1", "RA").gate("CNOT", "R2", "RA")
    b.gate("H", "R1").gate("H", "R2").gate("H", "c")
    b.measure("c", "s0").measure("R1", "s1").measure("R2", "s2")
    return b.build(["RA"], ["s0", "s1", "s2"])


@dataclass(frozen=True)
class InjectionCheck:
    block: str
    pattern: tuple[int, ...]
    expected_outcome: tuple[int, ...]
    observed_outcomes: tuple[tuple[int, ...], ...]
    expected_class: int
    output_matches: bool
    total_probability: float

    @property
    def ok(self) -> bool:
        return (self.observed_outcomes == (self.expected_outcome,) and self.output_matches
                and abs(self.total_probability - 1) < 1e-10)

    def describe(self) -> str:
        names = ",".join(CLASS_NAMES[c] for c in self.pattern)
        return (f"{self.block}-block [{names}]: outcomes {self.observed_outcomes} "
                f"(expected {self.expected_outcome}), output {'ok' if self.output_matches else 'MISMATCH'}")


def check_pattern(block: str, pattern: Sequence[int]) -> InjectionCheck:
    """Simulate one error pattern densely and compare with the parity table."""
    pattern = tuple(int(c) for c in pattern)
    tab = block_table(block)
    idx = int(np.ravel_multi_index(pattern, (4,) * tab.slots))
    syn = tuple(int(s) for s in tab.syndrome[idx])
    # qudit syndromes read out as 0 or 2
    expected = syn if block == "X" else (syn[0], 2 * syn[1], 2 * syn[2])
    cls = int(tab.output[idx])
    circuit = xdetect_circuit(pattern) if block == "X" else zdetect_circuit(pattern)
    branches = enumerate_branches(circuit)
    f = resource_state("F").amplitudes
    target = gate("X", (4,), 2 * (cls & 1)).matrix @ gate("Z", (4,), 2 * (cls >> 1)).matrix @ f
    matches = True
    for br in branches:
        vec = br.matrix[:, 0] / math.sqrt(br.probability)
        matches &= bool(equal_up_to_global_phase(vec, target, 1e-9))
    observed = tuple(sorted({br.labels for br in branches}))
    return InjectionCheck(block, pattern, expected, observed, cls, matches,
                          float(sum(br.probability for br in branches)))


def single_injections(block: str) -> list[tuple[int, ...]]:
    n = ARITY[block]
    pats = [(0,) * n]
    for slot in range(n):
        for cls in (1, 2, 3):
            p = [0] * n
            p[slot] = cls
            pats.append(tuple(p))
    return pats


@dataclass(frozen=True)
class DenseValidation:
    checks: tuple[InjectionCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[InjectionCheck]:
        return [c for c in self.checks if not c.ok]


def validate_blocks_against_dense(extra_patterns: dict | None = None) -> DenseValidation:
    """Certify both parity tables against full simulation of the detection
    circuits, for no error and every single-slot error (plus any extra patterns)."""
    checks = []
    for block in ("X", "Z"):
        pats = single_injections(block) + list((extra_patterns or {}).get(block, ()))
        checks.extend(check_pattern(block, p) for p in pats)
    return DenseValidation(tuple(checks))


# --- nesting ---------------------------------------------------------------------


def marginal_rule(d: ErrorDistribution) -> str:
    """Suppress the larger marginal error; ties go to the cheaper X-block."""
    return "X" if d.marginal_x >= d.marginal_z else "Z"


@dataclass(frozen=True)
class NestingRound:
    block: str
    accept_probability: float
    output: ErrorDistribution


@dataclass(frozen=True)
class NestingSchedule:
    initial: ErrorDistribution
    rounds: tuple[NestingRound, ...]
    converged: bool
    diverged: bool

    @property
    def final(self) -> ErrorDistribution:
        return self.rounds[-1].output if self.rounds else self.initial

    @property
    def blocks(self) -> str:
        return "".join(r.block for r in self.rounds)

    @property
    def raw_per_output(self) -> float:
        """Raw input states consumed per output state."""
        cost = 1.0
        for r in self.rounds:
            cost *= ARITY[r.block] / r.accept_probability
        return cost


def greedy_nesting(model: NoiseModel | ErrorDistribution, max_rounds: int = 200, stop_eps: float = 1e-12,
                   window: int = 5, rule: Callable[[ErrorDistribution], str] = marginal_rule,
                   frame: str = "F") -> NestingSchedule:
    """Nest detection blocks greedily on i.i.d. copies of the current state.

    Converged when the total error drops below ``stop_eps``; diverged when it
    fails to decrease for ``window`` consecutive rounds or every state is
    rejected.
    """
    if max_rounds < 1:
        raise DistillError("max_rounds must be at least 1")
    d = model.distribution() if isinstance(model, NoiseModel) else model
    start = d
    rounds = []
    stall = 0
    for _ in range(max_rounds):
        if d.total_error < stop_eps:
            return NestingSchedule(start, tuple(rounds), True, False)
        res = apply_block(rule(d), d, frame)
        if res.rejected_all:
            return NestingSchedule(start, tuple(rounds), False, True)
        rounds.append(NestingRound(res.block, res.accept_probability, res.output))
        stall = stall + 1 if res.output.total_error >= d.total_error else 0
        d = res.output
        if stall >= window:
            return NestingSchedule(start, tuple(rounds), False, True)
    return NestingSchedule(start, tuple(rounds), d.total_error < stop_eps, False)


def converges(p: float, **kwargs) -> bool:
    return greedy_nesting(NoiseModel(p), **kwargs).converged


def threshold_scan(lo: float, hi: float, tol: float = 1e-3, grid: int = 9, **kwargs) -> float:
    """Critical noise level of greedy nesting, located by bisection.

    The predicate must hold at ``lo``, fail at ``hi`` and switch only once on
    a uniform grid of ``grid`` points over the bracket.
    """
    if not (0 <= lo < hi < 1):
        raise BracketError(f"need 0 <= lo < hi < 1, got [{lo}, {hi}]")
    pts = np.linspace(lo, hi, grid)
    flags = [converges(float(p), **kwargs) for p in pts]
    if not flags[0] or flags[-1]:
        raise BracketError(
            f"bracket [{lo}, {hi}] does not straddle the threshold "
            f"(converges at lo: {flags[0]}, at hi: {flags[-1]})")
    switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
    if switches != 1:
        raise BracketError(f"convergence is not monotone on [{lo}, {hi}]: {flags}")
    k = flags.index(False)
    a, b = float(pts[k - 1]), float(pts[k])
    while b - a > tol:
        mid = 0.5 * (a + b)
        if converges(mid, **kwargs):
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


# --- cost --------------------------------------------------------------------------


def amortized_ratio(x_arity: int = 2, x_order: int = 2, z_arity: int = 7, z_order: int = 3) -> float:
    """Inputs per output per quadratic error reduction: a block of arity ``n``
    that raises the error to the power ``k`` costs ``n ** (log 2 / log k)``."""
    return x_arity ** (math.log(2) / math.log(x_order)) * z_arity ** (math.log(2) / math.log(z_order))


@dataclass(frozen=True)
class CostReport:
    raw_per_output: float
    quadratic_amortized_ratio: float
    raw_composite_ratio: int


def cost_report(schedule: NestingSchedule) -> CostReport:
    if not schedule.rounds:
        raise DistillError("cost_report needs a schedule with at least one round")
    return CostReport(schedule.raw_per_output, amortized_ratio(), ARITY["X"] * ARITY["Z"])


def single_block_schedule(block: str, dist: ErrorDistribution) -> NestingSchedule:
    res = apply_block(block, dist)
    return NestingSchedule(dist, (NestingRound(block, res.accept_probability, res.output),), False, False)


# --- Monte Carlo ---------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    block: str
    trials: int
    accepted: int
    output_counts: tuple[int, int, int, int]

    @property
    def accept_probability(self) -> float:
        return self.accepted / self.trials

    @property
    def output(self) -> ErrorDistribution | None:
        if not self.accepted:
            return None
        return ErrorDistribution.from_array(np.array(self.output_counts) / self.accepted)

    def accept_sigma(self) -> float:
        p = self.accept_probability
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)


def _mc_chunk(block: str, probs: np.ndarray, n: int, seed: int, chunk: int):
    tab = block_table(block)
    rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
    slots = probs.shape[0]
    u = rng.random((n, slots))
    cls = (u[..., None] >= np.cumsum(probs, axis=1)[None, :, :-1]).sum(axis=2)
    idx = np.ravel_multi_index(tuple(cls.T), (4,) * slots)
    ok = tab.accept[idx]
    return int(ok.sum()), np.bincount(tab.output[idx][ok], minlength=4)


def monte_carlo_block(block: str, dist, trials: int, seed: int, shards: int = 1) -> MonteCarloResult:
    """Sample error patterns and apply the parity rules.

    Trials are drawn in fixed chunks seeded by ``(seed, chunk index)``; shard
    ``s`` of ``shards`` takes chunks ``s, s + shards, ...``. The merged result is
    the same for any shard count.
    """
    if trials < 1:
        raise DistillError("trials must be at least 1")
    if block not in ARITY:
        raise DistillError(f"unknown block {block!r}")
    return merge_mc([mc_shard(block, dist, trials, seed, s, shards) for s in range(shards)])


def mc_shard(block: str, dist, trials: int, seed: int, shard: int, shards: int) -> MonteCarloResult:
    """One shard's partial result; merge shards with :func:`merge_mc`."""
    dists = [dist] * ARITY[block] if isinstance(dist, ErrorDistribution) else list(dist)
    probs = np.stack([d.as_array() for d in dists])
    nchunks = -(-trials // MC_BLOCK)
    accepted, counts, done = 0, np.zeros(4, dtype=np.int64), 0
    for chunk in range(shard, nchunks, shards):
        n = min(MC_BLOCK, trials - chunk * MC_BLOCK)
        a, c = _mc_chunk(block, probs, n, seed, chunk)
        accepted += a
        counts += c
        done += n
    return MonteCarloResult(block, done, accepted, tuple(int(v) for v in counts))


def merge_mc(parts: Sequence[MonteCarloResult]) -> MonteCarloResult:
    counts = np.sum([p.output_counts for p in parts], axis=0)
    return MonteCarloResult(parts[0].block, sum(p.trials for p in parts), sum(p.accepted for p in parts),
                            tuple(int(v) for v in counts))
