"""Benchmark oracle programs, their classical partitions and mutants.

Expected-pass programs are exact basis permutations with phases built from
the classical functions; the tester only sees them as black boxes.
Mutants either append one gate to the expected-pass program or re-implement a
behavioural variant of its classical functions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .eqclass import ClassicalClass
from .oracle import OracleProgram, OracleSpec, reference_oracle
from .simulator import CNOT, CZ, GateOp, Ry, Rz, S, T, Z, apply_gates, StateVector

PI = math.pi


class BenchmarkError(KeyError):
    pass


# classical helpers

def parity(v: int) -> int:
    return bin(v).count("1") & 1


def is2power(v: int) -> int:
    return int(v > 0 and v & (v - 1) == 0)


def lessthan(v: int, k: int) -> int:
    return int(v < k)


def reverse_bits(v: int, width: int) -> int:
    out = 0
    for i in range(width):
        if (v >> i) & 1:
            out |= 1 << (width - 1 - i)
    return out


def ising_energy(y: int, n: int, J: float, B: float) -> float:
    spin = [1 - 2 * ((y >> i) & 1) for i in range(n)]
    coupling = sum(spin[i] * spin[(i + 1) % n] for i in range(n))
    return J * coupling + B * sum(spin)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _adjacent_pair(v: int, n: int) -> bool:
    bits = [i for i in range(n) if (v >> i) & 1]
    return len(bits) == 2 and (bits[1] - bits[0] == 1 or (bits[0] == 0 and bits[1] == n - 1))


@dataclass
class BenchmarkEntry:
    name: str
    spec: OracleSpec
    program: OracleProgram
    classes: list[ClassicalClass]
    params: dict = field(default_factory=dict)
    family: str = ""   # parity | is2power | lessthan | qadder | hamiltonx | ising | mixed
    encoding: str = ""  # phase | qubit | arith | mixed


BENCHMARK_NAMES = (
    "Parity_P",
    "Is2Power_P",
    "LessThan_P",
    "Parity_Q",
    "Is2Power_Q",
    "LessThan_Q",
    "QAdder",
    "HamiltonX",
    "Ising",
    "Mixed_Proc",
)


# classical partitions; phase versions vary y (m = 0), qubit versions vary x with y = 0

def _unary_classes(m: int, n: int, width: int, labelled: list[tuple[str, Callable[[int], bool]]]):
    phase = m == 0
    out = []
    for i, (label, pred) in enumerate(labelled, start=1):
        if phase:
            out.append(ClassicalClass.ranged(i, label, (0, 0), (0, (1 << width) - 1), lambda x, y, p=pred: p(y)))
        else:
            out.append(ClassicalClass.ranged(i, label, (0, (1 << width) - 1), (0, 0), lambda x, y, p=pred: p(x)))
    return out


def boolean_classes(family: str, m: int, n: int, k: int = 10) -> list[ClassicalClass]:
    width = n if m == 0 else m
    top = (1 << width) - 1
    if family == "parity":
        labelled = [
            ("all-zero input", lambda v: v == 0),
            ("all-one input", lambda v: v == top),
            ("input is parity", lambda v: parity(v) == 1 and v not in (0, top)),
            ("input is not parity", lambda v: parity(v) == 0 and v not in (0, top)),
        ]
    elif family == "is2power":
        labelled = [
            ("all-zero input", lambda v: v == 0),
            ("all-one input", lambda v: v == top),
            ("input is a power of 2", lambda v: is2power(v) == 1 and v not in (0, top)),
            ("input is not a power of 2", lambda v: is2power(v) == 0 and v not in (0, top)),
        ]
    elif family == "lessthan":
        labelled = [
            ("v = 0", lambda v: v == 0),
            ("0 < v < k-1", lambda v: 0 < v < k - 1),
            ("v = k-1", lambda v: v == k - 1),
            ("v = k", lambda v: v == k),
            ("v = k+1", lambda v: v == k + 1),
            ("k+1 < v < 2^n-1", lambda v: k + 1 < v < top),
            ("v = 2^n-1", lambda v: v == top),
        ]
    else:
        raise BenchmarkError(family)
    return _unary_classes(m, n, width, labelled)


def adder_classes(n: int = 5) -> list[ClassicalClass]:
    top = (1 << n) - 1
    half = top // 2
    lo, hi = (1, half), (half + 1, top)
    R = ClassicalClass.ranged
    return [
        R(1, "x=0, y=0", (0, 0), (0, 0)),
        R(2, "x=0, 1<=y<=MAX", (0, 0), (1, top)),
        R(3, "1<=x<=MAX, y=0", (1, top), (0, 0)),
        R(4, "x low, y low", lo, lo),
        R(5, "x low, y high", lo, hi),
        R(6, "x high, y low", hi, lo),
        R(7, "x high, y high", hi, hi),
    ]


def adder_example_classes(n: int = 5) -> list[ClassicalClass]:
    """Same adder partition under EC1..EC7 numbering (EC5 is x = y = 0)."""
    top = (1 << n) - 1
    half = top // 2
    lo, hi = (1, half), (half + 1, top)
    R = ClassicalClass.ranged
    return [
        R(1, "EC1", lo, lo),
        R(2, "EC2", lo, hi),
        R(3, "EC3", hi, lo),
        R(4, "EC4", hi, hi),
        R(5, "EC5", (0, 0), (0, 0)),
        R(6, "EC6", (0, 0), (1, top)),
        R(7, "EC7", (1, top), (0, 0)),
    ]


def enumeration_classes(n: int) -> list[ClassicalClass]:
    return [ClassicalClass.explicit(v, f"y={v}", [(0, v)]) for v in range(1 << n)]


def ising_classes(n: int = 7) -> list[ClassicalClass]:
    top = (1 << n) - 1

    def cls(i, label, pred):
        return ClassicalClass.ranged(i, label, (0, 0), (0, top), lambda x, y: pred(y))

    return [
        cls(1, "all '0'", lambda v: v == 0),
        cls(2, "one '1'", lambda v: _popcount(v) == 1),
        cls(3, "two adjacent '1's", lambda v: _popcount(v) == 2 and _adjacent_pair(v, n)),
        cls(4, "two separate '1's", lambda v: _popcount(v) == 2 and not _adjacent_pair(v, n)),
        cls(5, "more than two '1's", lambda v: _popcount(v) > 2),
    ]


# classical specs

def boolean_spec(name: str, family: str, encoding: str, width: int, f: Callable[[int], int]) -> OracleSpec:
    if encoding == "phase":
        return OracleSpec(0, width, lambda x, y: y, lambda x, y: f(y) * PI, name)
    return OracleSpec(width, 1, lambda x, y: y ^ f(x), lambda x, y: 0.0, name)


def _boolean_fn(family: str, k: int = 10) -> Callable[[int], int]:
    if family == "parity":
        return parity
    if family == "is2power":
        return is2power
    return lambda v: lessthan(v, k)


def adder_spec(name: str = "QAdder", n: int = 5, t: float | None = None) -> OracleSpec:
    mask = (1 << n) - 1
    G = (lambda x, y: 0.0) if t is None else (lambda x, y: y * t)
    return OracleSpec(n, n, lambda x, y: (x + y) & mask, G, name)


def hamiltonx_spec(n: int = 3, t: float = 0.2, name: str = "HamiltonX") -> OracleSpec:
    return OracleSpec(0, n, lambda x, y: y, lambda x, y: y * t, name)


def ising_spec(n: int = 7, t: float = 0.2, J: float = 1.0, B: float = 1.0, name: str = "Ising") -> OracleSpec:
    return OracleSpec(0, n, lambda x, y: y, lambda x, y: ising_energy(y, n, J, B) * t, name)


_BOOLEAN = {
    "Parity_P": ("parity", "phase", 6),
    "Is2Power_P": ("is2power", "phase", 6),
    "LessThan_P": ("lessthan", "phase", 5),
    "Parity_Q": ("parity", "qubit", 6),
    "Is2Power_Q": ("is2power", "qubit", 6),
    "LessThan_Q": ("lessthan", "qubit", 5),
}


def _spec_and_classes(name: str):
    if name in _BOOLEAN:
        family, encoding, width = _BOOLEAN[name]
        params = {"k": 10} if family == "lessthan" else {}
        spec = boolean_spec(name, family, encoding, width, _boolean_fn(family))
        return spec, boolean_classes(family, spec.m, spec.n), params, family, encoding
    if name == "QAdder":
        return adder_spec(), adder_classes(), {}, "qadder", "arith"
    if name == "Mixed_Proc":
        return adder_spec("Mixed_Proc", t=0.2), adder_classes(), {"t": 0.2}, "mixed", "mixed"
    if name == "HamiltonX":
        return hamiltonx_spec(), enumeration_classes(3), {"t": 0.2}, "hamiltonx", "phase"
    if name == "Ising":
        return ising_spec(), ising_classes(), {"t": 0.2, "J": 1.0, "B": 1.0}, "ising", "phase"
    raise BenchmarkError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARK_NAMES)}")


@lru_cache(maxsize=None)
def make_benchmark(name: str) -> BenchmarkEntry:
    spec, classes, params, family, encoding = _spec_and_classes(name)
    return BenchmarkEntry(name, spec, reference_oracle(spec), classes, params, family, encoding)


# mutants

class MutantKind(str, enum.Enum):
    ADD_RY = "AddRy"
    ADD_Z = "AddZ"
    ADD_S = "AddS"
    ADD_T = "AddT"
    ADD_RZ = "AddRz"
    ADD_CNOT = "AddCNOT"
    ADD_CZ = "AddCZ"
    FLIP_OUT = "FlipOut"
    BIG_ENDIAN = "BE"
    FLIP_ALL1 = "FlipAll1"
    LESS_THAN_EQ = "LessThanEq"
    GREATER_THAN_EQ = "GreaterThanEq"
    CHANGE_0P = "change0p"

    @property
    def is_gate(self) -> bool:
        return self.value.startswith("Add")


@dataclass(frozen=True)
class MutantDescriptor:
    base: str
    kind: MutantKind
    angle: float | None = None
    targets: tuple[int, ...] = ()

    @property
    def name(self) -> str:
        return _mutant_name(self)


RY_SUFFIXES = {
    "AddRyPiDiv3": PI / 3,
    "AddRyPiDiv2": PI / 2,
    "AddRy2PiDiv3": 2 * PI / 3,
    "AddRyPi": PI,
}
RZ_SUFFIXES = {"AddRz8": PI / 8, "AddRz16": PI / 16, "AddRz32": PI / 32}
# relative phase each phase-gate mutant adds between the qubit's 0 and 1 branches
PHASE_MUTANTS = {"AddZ": PI, "AddS": PI / 2, "AddT": PI / 4, **RZ_SUFFIXES}
GATE_SUFFIXES = (*RY_SUFFIXES, "AddCNOT", "AddCZ", "AddZ", "AddS", "AddT", *RZ_SUFFIXES)


def _mutant_name(d: MutantDescriptor) -> str:
    k = d.kind
    if k is MutantKind.ADD_RY:
        suffix = next(s for s, a in RY_SUFFIXES.items() if math.isclose(a, d.angle))
    elif k is MutantKind.ADD_RZ:
        suffix = next(s for s, a in RZ_SUFFIXES.items() if math.isclose(a, d.angle))
    elif k in (MutantKind.LESS_THAN_EQ, MutantKind.GREATER_THAN_EQ):
        return d.base.replace("LessThan", k.value)
    else:
        suffix = k.value
    return f"{d.base}_{suffix}"


def parse_mutant(name: str) -> MutantDescriptor:
    """Descriptor for a mutant name such as ``QAdder_AddRyPi`` or ``LessThanEq_Q``."""
    if name.endswith("_Q_FlipOut") and name.startswith("GreaterThanEq"):
        name = name[: -len("_FlipOut")]
    for prefix, kind in (("LessThanEq", MutantKind.LESS_THAN_EQ), ("GreaterThanEq", MutantKind.GREATER_THAN_EQ)):
        if name.startswith(prefix + "_"):
            return MutantDescriptor("LessThan" + name[len(prefix):], kind)
    base, _, suffix = name.rpartition("_")
    if not base or base not in BENCHMARK_NAMES:
        raise BenchmarkError(f"unknown program {name!r}")
    if suffix in RY_SUFFIXES:
        return MutantDescriptor(base, MutantKind.ADD_RY, RY_SUFFIXES[suffix], (0,))
    if suffix in RZ_SUFFIXES:
        return MutantDescriptor(base, MutantKind.ADD_RZ, RZ_SUFFIXES[suffix], (0,))
    try:
        kind = MutantKind(suffix)
    except ValueError:
        raise BenchmarkError(f"unknown mutant suffix {suffix!r} in {name!r}") from None
    targets = {"AddCNOT": (0, 1), "AddCZ": (0, 1)}.get(suffix, (0,) if kind.is_gate else ())
    return MutantDescriptor(base, kind, None, targets)


def mutant_gates(desc: MutantDescriptor) -> list[GateOp]:
    k, (q, *rest) = desc.kind, (desc.targets or (0,))
    if k is MutantKind.ADD_RY:
        return [Ry(q, desc.angle)]
    if k is MutantKind.ADD_RZ:
        return [Rz(q, desc.angle)]
    if k is MutantKind.ADD_Z:
        return [Z(q)]
    if k is MutantKind.ADD_S:
        return [S(q)]
    if k is MutantKind.ADD_T:
        return [T(q)]
    if k is MutantKind.ADD_CNOT:
        return [CNOT(q, rest[0] if rest else 1)]
    if k is MutantKind.ADD_CZ:
        return [CZ(q, rest[0] if rest else 1)]
    raise BenchmarkError(f"{k.value} is not a gate mutant")


def append_gates(program: OracleProgram, gates: list[GateOp], name: str) -> OracleProgram:
    n = program.num_qubits

    def transform(amps):
        return apply_gates(StateVector(n, program.transform(amps)), gates).amplitudes

    return OracleProgram(n, transform, name)


def mutant_spec(desc: MutantDescriptor) -> OracleSpec:
    """Classical functions implemented by a behavioural mutant."""
    entry = make_benchmark(desc.base)
    spec, k, name = entry.spec, desc.kind, desc.name
    family, encoding = entry.family, entry.encoding
    boolean = family in ("parity", "is2power", "lessthan")
    m, n = spec.m, spec.n

    if k is MutantKind.BIG_ENDIAN:
        def F(x, y):
            return reverse_bits(spec.F(reverse_bits(x, m), reverse_bits(y, n)), n)

        def G(x, y):
            return spec.G(reverse_bits(x, m), reverse_bits(y, n))

        return OracleSpec(m, n, F, G, name)

    if k is MutantKind.CHANGE_0P:
        if family != "qadder":
            raise BenchmarkError(f"change0p applies to QAdder, not {desc.base}")
        return OracleSpec(m, n, lambda x, y: spec.F(x, y) ^ (1 if x == 0 else 0), spec.G, name)

    if not boolean:
        raise BenchmarkError(f"{k.value} needs a Boolean benchmark, not {desc.base}")
    width = n if encoding == "phase" else m
    top = (1 << width) - 1
    f = _boolean_fn(family, entry.params.get("k", 10))
    if k is MutantKind.FLIP_OUT:
        g = lambda v: 1 - f(v)
    elif k is MutantKind.FLIP_ALL1:
        if family != "parity":
            raise BenchmarkError(f"FlipAll1 applies to Parity programs, not {desc.base}")
        g = lambda v: f(v) ^ (1 if v == top else 0)
    elif k in (MutantKind.LESS_THAN_EQ, MutantKind.GREATER_THAN_EQ):
        if family != "lessthan":
            raise BenchmarkError(f"{k.value} applies to LessThan programs, not {desc.base}")
        kk = entry.params["k"]
        g = (lambda v: int(v <= kk)) if k is MutantKind.LESS_THAN_EQ else (lambda v: int(v >= kk))
    else:
        raise BenchmarkError(f"unsupported mutant kind {k.value}")
    return boolean_spec(name, family, encoding, width, g)


def make_mutant(desc: MutantDescriptor) -> OracleProgram:
    entry = make_benchmark(desc.base)
    if desc.kind.is_gate:
        gates = mutant_gates(desc)
        if any(q >= entry.spec.num_qubits for g in gates for q in g.targets):
            raise BenchmarkError(f"{desc.name}: target outside {entry.spec.num_qubits} qubits")
        return append_gates(entry.program, gates, desc.name)
    return reference_oracle(mutant_spec(desc))


@lru_cache(maxsize=None)
def make_program(name: str) -> tuple[BenchmarkEntry, OracleProgram, MutantDescriptor | None]:
    """Resolve a benchmark or mutant name to (base entry, program, descriptor)."""
    if name in BENCHMARK_NAMES:
        entry = make_benchmark(name)
        return entry, entry.program, None
    desc = parse_mutant(name)
    return make_benchmark(desc.base), make_mutant(desc), desc


RQ3_PROGRAMS = {
    "flip-out": (
        "Parity_P_FlipOut", "Parity_Q_FlipOut", "Is2Power_P_FlipOut",
        "Is2Power_Q_FlipOut", "GreaterThanEq_P", "GreaterThanEq_Q",
    ),
    "big-endian": ("LessThan_P_BE", "LessThan_Q_BE", "QAdder_BE", "HamiltonX_BE"),
    "one-class": ("Parity_P_FlipAll1", "Parity_Q_FlipAll1", "LessThanEq_P", "LessThanEq_Q", "QAdder_change0p"),
}

RQ5_BEHAVIOURAL = (
    "Parity_Q_FlipOut", "Is2Power_Q_FlipOut", "GreaterThanEq_Q",
    "LessThan_P_BE", "LessThan_Q_BE", "QAdder_BE", "HamiltonX_BE",
    "Parity_P_FlipAll1", "Parity_Q_FlipAll1", "LessThanEq_P", "LessThanEq_Q", "QAdder_change0p",
)


def expected_fail_programs() -> list[str]:
    """Every expected-fail program of the overall evaluation, in table order."""
    names = [f"{b}_{s}" for s in GATE_SUFFIXES for b in BENCHMARK_NAMES]
    return names + list(RQ5_BEHAVIOURAL)


def rq_fixed_input(name: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """Fixed two-value input for phase-mutant runs: GHZ over every qubit, or over
    the x register only (y = 0) for the adder-based programs."""
    entry = make_benchmark(name)
    m, n = entry.spec.m, entry.spec.n
    if entry.family in ("qadder", "mixed"):
        return (0, 0), ((1 << m) - 1, 0)
    return (0, 0), ((1 << m) - 1, (1 << n) - 1)
