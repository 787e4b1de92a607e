"""Dense statevector simulator.

Qubit 0 is the least significant bit of the basis index, so the basis index
of a register is ``sum(bit_i * 2**i)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 24
AMP_TOL = 1e-10
NORM_TOL = 1e-8


class SimulationError(ValueError):
    pass


class Gate(str, enum.Enum):
    X = "X"
    H = "H"
    Z = "Z"
    S = "S"
    T = "T"
    RX = "Rx"
    RY = "Ry"
    RZ = "Rz"
    R1 = "R1"
    CNOT = "CNOT"
    CZ = "CZ"

    @property
    def arity(self) -> int:
        return 2 if self in (Gate.CNOT, Gate.CZ) else 1

    @property
    def parametric(self) -> bool:
        return self in (Gate.RX, Gate.RY, Gate.RZ, Gate.R1)


_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    Gate.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Gate.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    Gate.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    Gate.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    Gate.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
}


def gate_matrix(kind: Gate, angle: float | None = None) -> np.ndarray:
    """2x2 unitary for a single-qubit gate kind."""
    if kind in _FIXED:
        return _FIXED[kind]
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if kind is Gate.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is Gate.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is Gate.RZ:
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)
    if kind is Gate.R1:
        return np.array([[1, 0], [0, np.exp(1j * angle)]], dtype=complex)
    raise SimulationError(f"{kind} has no single-qubit matrix")


@dataclass(frozen=True)
class GateOp:
    kind: Gate
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        kind = Gate(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != kind.arity:
            raise SimulationError(f"{kind.value} takes {kind.arity} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise SimulationError(f"repeated target in {self.targets}")
        if any(t < 0 for t in self.targets):
            raise SimulationError(f"negative target in {self.targets}")
        if kind.parametric:
            if self.angle is None or not math.isfinite(self.angle):
                raise SimulationError(f"{kind.value} needs a finite angle, got {self.angle}")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise SimulationError(f"{kind.value} takes no angle")

    def inverse(self) -> "GateOp":
        if self.kind.parametric:
            return GateOp(self.kind, self.targets, -self.angle)
        if self.kind is Gate.S:
            return GateOp(Gate.R1, self.targets, -math.pi / 2)
        if self.kind is Gate.T:
            return GateOp(Gate.R1, self.targets, -math.pi / 4)
        return self

    def to_text(self) -> str:
        parts = [self.kind.value, *map(str, self.targets)]
        if self.angle is not None:
            parts.append(repr(self.angle))
        return " ".join(parts)

    @classmethod
    def from_text(cls, line: str) -> "GateOp":
        kind, *rest = line.split()
        gate = Gate(kind)
        targets = tuple(int(t) for t in rest[: gate.arity])
        angle = float(rest[gate.arity]) if gate.parametric else None
        return cls(gate, targets, angle)


# Convenience constructors used throughout the package.
def X(q): return GateOp(Gate.X, (q,))
def H(q): return GateOp(Gate.H, (q,))
def Z(q): return GateOp(Gate.Z, (q,))
def S(q): return GateOp(Gate.S, (q,))
def T(q): return GateOp(Gate.T, (q,))
def Rx(q, theta): return GateOp(Gate.RX, (q,), theta)
def Ry(q, theta): return GateOp(Gate.RY, (q,), theta)
def Rz(q, theta): return GateOp(Gate.RZ, (q,), theta)
def R1(q, theta): return GateOp(Gate.R1, (q,), theta)
def CNOT(c, t): return GateOp(Gate.CNOT, (c, t))
def CZ(a, b): return GateOp(Gate.CZ, (a, b))


@dataclass(frozen=True, eq=False)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.num_qubits,):
            raise SimulationError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


def _check_qubits(num_qubits: int) -> None:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise SimulationError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")


def new_zero_state(num_qubits: int) -> StateVector:
    _check_qubits(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def basis_state(index: int, num_qubits: int) -> StateVector:
    _check_qubits(num_qubits)
    if not 0 <= index < (1 << num_qubits):
        raise SimulationError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def from_amplitudes(amplitudes: Sequence[complex], normalize: bool = False) -> StateVector:
    amps = np.asarray(amplitudes, dtype=complex)
    n = int(round(math.log2(len(amps))))
    if len(amps) != 1 << n:
        raise SimulationError(f"amplitude count {len(amps)} is not a power of two")
    norm = np.linalg.norm(amps)
    if normalize:
        if norm == 0:
            raise SimulationError("cannot normalize the zero vector")
        amps = amps / norm
    elif abs(norm - 1.0) > NORM_TOL:
        raise SimulationError(f"amplitudes have norm {norm!r}; pass normalize=True to rescale")
    return StateVector(n, amps)


def _apply_inplace(amps: np.ndarray, n: int, op: GateOp) -> np.ndarray:
    # amps is a fresh array owned by the caller; it may be overwritten.
    if any(t >= n for t in op.targets):
        raise SimulationError(f"target {op.targets} out of range for {n} qubits")
    amps = np.ascontiguousarray(amps)
    kind = op.kind
    if kind.arity == 1:
        q = op.targets[0]
        view = amps.reshape(-1, 2, 1 << q)
        if kind in (Gate.Z, Gate.S, Gate.T, Gate.R1, Gate.RZ):
            m = gate_matrix(kind, op.angle)
            if m[0, 0] != 1:
                view[:, 0, :] *= m[0, 0]
            view[:, 1, :] *= m[1, 1]
            return amps
        if kind is Gate.X:
            return view[:, ::-1, :].reshape(-1).copy()
        m = gate_matrix(kind, op.angle)
        return np.einsum("ij,ajb->aib", m, view).reshape(-1)
    c, t = op.targets
    tensor = amps.reshape([2] * n)
    ca, ta = n - 1 - c, n - 1 - t
    idx = [slice(None)] * n
    if kind is Gate.CZ:
        idx[ca], idx[ta] = 1, 1
        tensor[tuple(idx)] *= -1
        return amps
    idx[ca] = 1
    sub_axis = ta - (1 if ta > ca else 0)
    tensor[tuple(idx)] = np.flip(tensor[tuple(idx)], axis=sub_axis).copy()
    return amps


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    """Return a new state with ``op`` applied; the input is left untouched."""
    amps = _apply_inplace(state.amplitudes.copy(), state.num_qubits, op)
    return StateVector(state.num_qubits, amps)


def apply_gates(state: StateVector, ops: Iterable[GateOp]) -> StateVector:
    amps = state.amplitudes.copy()
    n = state.num_qubits
    for op in ops:
        amps = _apply_inplace(amps, n, op)
    return StateVector(n, amps)


def _checked_probabilities(state: StateVector) -> np.ndarray:
    probs = state.probabilities()
    total = probs.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise SimulationError(f"state norm {total!r} deviates from 1")
    return probs / total


def measure_all(state: StateVector, rng: np.random.Generator) -> int:
    """Measure every qubit in the computational basis and return the basis index."""
    probs = _checked_probabilities(state)
    return int(rng.choice(state.dim, p=probs))


def sample_outcomes(state: StateVector, rng: np.random.Generator, shots: int) -> np.ndarray:
    """Independent full-register measurements of identically prepared copies of ``state``."""
    probs = _checked_probabilities(state)
    return rng.choice(state.dim, size=shots, p=probs)


def probability_of(state: StateVector, basis: int) -> float:
    if not 0 <= basis < state.dim:
        raise SimulationError(f"basis index {basis} out of range")
    return float(abs(state.amplitudes[basis]) ** 2)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise SimulationError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def make_rng(*keys: int) -> np.random.Generator:
    """Deterministic generator derived from a tuple of non-negative integer keys."""
    return np.random.default_rng(np.random.SeedSequence([int(k) & 0xFFFFFFFFFFFFFFFF for k in keys]))
