"""Gate-level preparation of basis states and two-value superpositions.

``build_basis_prep(s)`` maps ``|0...0>`` to ``|s>``.  ``build_twovalue_prep``
maps ``|0...0>`` to ``(|s1> + e^{i theta}|s2>)/sqrt(2)``.  Inverses are used
for uncomputation in the test loop.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .simulator import CNOT, R1, GateOp, H, StateVector, X, apply_gates, new_zero_state


class PrepError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    s: int


@dataclass(frozen=True)
class TwoValue:
    s1: int
    s2: int
    theta: float


@dataclass(frozen=True)
class PrepCircuit:
    gates: tuple[GateOp, ...]
    num_qubits: int
    description: Basis | TwoValue
    inverted: bool = False

    def inverse(self) -> "PrepCircuit":
        return PrepCircuit(
            tuple(g.inverse() for g in reversed(self.gates)),
            self.num_qubits,
            self.description,
            not self.inverted,
        )

    def apply(self, state: StateVector) -> StateVector:
        return apply_gates(state, self.gates)

    def prepare(self) -> StateVector:
        return self.apply(new_zero_state(self.num_qubits))

    def to_text(self) -> str:
        """One gate per line: ``KIND targets [angle]``."""
        return "\n".join(g.to_text() for g in self.gates)


def inverse(circuit: PrepCircuit) -> PrepCircuit:
    return circuit.inverse()


def _bits(s: int, num_qubits: int) -> list[int]:
    return [q for q in range(num_qubits) if (s >> q) & 1]


def _check(s: int, num_qubits: int) -> None:
    if not 0 <= s < (1 << num_qubits):
        raise PrepError(f"basis index {s} out of range for {num_qubits} qubits")


def build_basis_prep(s: int, num_qubits: int) -> PrepCircuit:
    _check(s, num_qubits)
    return PrepCircuit(tuple(X(q) for q in _bits(s, num_qubits)), num_qubits, Basis(s))


def build_twovalue_prep(s1: int, s2: int, theta: float, num_qubits: int) -> PrepCircuit:
    """Circuit for ``(|s1> + e^{i theta}|s2>)/sqrt(2)``.

    X on bits where both strings hold 1; H then R1(theta) on the lowest
    differing bit (the pivot); CNOT from the pivot to every other differing
    bit in ascending order; finally X on the differing bits where ``s1`` holds
    1.  Before the last layer the pivot's 0 branch has all differing bits at 0
    and its 1 branch has them all at 1, so the last layer turns the 0 branch
    into ``s1`` and the 1 branch (which carries the phase) into ``s2``.
    """
    _check(s1, num_qubits)
    _check(s2, num_qubits)
    if s1 == s2:
        raise PrepError(f"two-value state needs distinct strings, got s1 = s2 = {s1}")
    diff = _bits(s1 ^ s2, num_qubits)
    pivot, rest = diff[0], diff[1:]
    gates: list[GateOp] = [X(q) for q in _bits(s1 & s2, num_qubits)]
    gates += [H(pivot), R1(pivot, theta)]
    gates += [CNOT(pivot, q) for q in rest]
    gates += [X(q) for q in diff if (s1 >> q) & 1]
    return PrepCircuit(tuple(gates), num_qubits, TwoValue(s1, s2, float(theta)))


def ghz_prep(num_qubits: int, qubits: Iterable[int] | None = None) -> PrepCircuit:
    """GHZ over ``qubits`` (default: all) with the remaining qubits at 0."""
    qs = sorted(range(num_qubits) if qubits is None else qubits)
    ones = sum(1 << q for q in qs)
    return build_twovalue_prep(0, ones, 0.0, num_qubits)
