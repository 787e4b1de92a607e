"""Classical reference functions and the black-box program abstraction.

An oracle program on ``m + n`` qubits maps ``|x>|y>`` to
``exp(i G(x, y)) |x>|F(x, y)>`` where ``y -> F(x, y)`` is a bijection for each
fixed ``x``.  The ``x`` register occupies qubits ``[0, m)`` and ``y`` occupies
``[m, m + n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .simulator import StateVector, SimulationError

TWO_PI = 2 * math.pi
BRUTE_FORCE_MAX_N = 12


class SpecError(ValueError):
    """The classical specification is inconsistent (e.g. F is not bijective in y)."""


@dataclass(frozen=True)
class OracleSpec:
    m: int
    n: int
    F: Callable[[int, int], int]
    G: Callable[[int, int], float]
    name: str = "oracle"

    def __post_init__(self):
        if self.m < 0 or self.n < 1:
            raise SpecError(f"need m >= 0 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def num_qubits(self) -> int:
        return self.m + self.n

    def concat(self, x: int, y: int) -> int:
        """Basis index of ``|x>|y>`` with ``x`` in the low qubits."""
        return x | (y << self.m)

    def split(self, index: int) -> tuple[int, int]:
        return index & ((1 << self.m) - 1), index >> self.m

    def check_input(self, x: int, y: int) -> None:
        if not (0 <= x < (1 << self.m) and 0 <= y < (1 << self.n)):
            raise SpecError(f"input (x={x}, y={y}) outside [0,2^{self.m}) x [0,2^{self.n})")

    def inputs(self):
        """Every (x, y) pair in index order."""
        for idx in range(1 << self.num_qubits):
            yield self.split(idx)


@dataclass(frozen=True)
class OracleProgram:
    """Opaque unitary on ``num_qubits`` qubits, given as a state transformer."""

    num_qubits: int
    transform: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    name: str = "program"

    def apply(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise SimulationError(
                f"{self.name} acts on {self.num_qubits} qubits, state has {state.num_qubits}"
            )
        return StateVector(self.num_qubits, self.transform(state.amplitudes))

    __call__ = apply


class Bijectivity(NamedTuple):
    ok: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self):
        return self.ok


def validate_bijectivity(spec: OracleSpec) -> Bijectivity:
    """Brute-force check that ``y -> F(x, y)`` is one-to-one for every ``x``.

    On failure the witness is ``(x, y1, y2)`` with ``y1 < y2`` and
    ``F(x, y1) == F(x, y2)`` (or ``y1 == y2`` when ``F`` leaves the range).
    """
    if spec.n > BRUTE_FORCE_MAX_N:
        raise SpecError(f"brute-force bijectivity check limited to n <= {BRUTE_FORCE_MAX_N}")
    size = 1 << spec.n
    for x in range(1 << spec.m):
        seen: dict[int, int] = {}
        for y in range(size):
            f = spec.F(x, y)
            if not 0 <= f < size:
                return Bijectivity(False, (x, y, y))
            if f in seen:
                return Bijectivity(False, (x, seen[f], y))
            seen[f] = y
    return Bijectivity(True)


def expected_output(spec: OracleSpec, x: int, y: int) -> tuple[int, float]:
    """Basis index and phase angle that ``spec`` prescribes for input ``|x>|y>``."""
    spec.check_input(x, y)
    return spec.concat(x, spec.F(x, y)), float(spec.G(x, y))


def oracle_tables(spec: OracleSpec) -> tuple[np.ndarray, np.ndarray]:
    """(destination index, phase) for every source basis index."""
    dim = 1 << spec.num_qubits
    dest = np.empty(dim, dtype=np.int64)
    phase = np.empty(dim, dtype=float)
    for idx in range(dim):
        x, y = spec.split(idx)
        dest[idx], phase[idx] = expected_output(spec, x, y)
    if not np.all(np.isfinite(phase)):
        raise SpecError(f"{spec.name}: G returned a non-finite value")
    return dest, phase


def permutation_program(num_qubits: int, dest: np.ndarray, phase: np.ndarray, name: str) -> OracleProgram:
    """Program sending amplitude at index ``k`` to ``dest[k]`` with factor ``exp(i phase[k])``."""
    if np.unique(dest).size != dest.size:
        raise SpecError(f"{name}: destination map is not a permutation")
    factors = np.exp(1j * phase)

    def transform(amps: np.ndarray) -> np.ndarray:
        out = np.empty_like(amps)
        out[dest] = amps * factors
        return out

    return OracleProgram(num_qubits, transform, name)


def reference_oracle(spec: OracleSpec) -> OracleProgram:
    """Exact implementation of ``spec`` as a basis permutation with phases."""
    if spec.n <= BRUTE_FORCE_MAX_N:
        check = validate_bijectivity(spec)
        if not check:
            raise SpecError(f"{spec.name}: F is not bijective in y; witness (x, y1, y2) = {check.witness}")
    dest, phase = oracle_tables(spec)
    return permutation_program(spec.num_qubits, dest, phase, spec.name)


def phase_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = math.fmod(abs(a - b), TWO_PI)
    return min(d, TWO_PI - d)
