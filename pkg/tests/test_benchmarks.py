import math

import numpy as np
import pytest

from oracletest.benchmarks import (
    BENCHMARK_NAMES,
    GATE_SUFFIXES,
    BenchmarkError,
    MutantKind,
    expected_fail_programs,
    ising_energy,
    is2power,
    lessthan,
    make_benchmark,
    make_program,
    mutant_spec,
    parity,
    parse_mutant,
    reverse_bits,
    rq_fixed_input,
)
from oracletest.oracle import expected_output
from oracletest.simulator import basis_state, from_amplitudes, inner_product


def test_helpers_brute_force():
    for v in range(64):
        assert parity(v) == sum(int(b) for b in bin(v)[2:]) % 2
        assert is2power(v) == int(v in {1 << i for i in range(6)})
        assert lessthan(v, 10) == int(v < 10)
    assert reverse_bits(9, 5) == 0b10010


def test_ising_energy_values():
    spec = make_benchmark("Ising").spec
    assert spec.G(0, 0) == pytest.approx(2.8)
    assert ising_energy(0b1111111, 7, 1.0, 1.0) == pytest.approx(0.0)
    # one flipped spin breaks two bonds and one field term
    assert ising_energy(1, 7, 1.0, 1.0) == pytest.approx(3 + 5)


def test_table_parameters():
    p = make_benchmark("Parity_P").spec
    assert (p.m, p.n) == (0, 6) and p.F(0, 5) == 5 and p.G(0, 7) == pytest.approx(math.pi)
    mixed = make_benchmark("Mixed_Proc").spec
    assert (mixed.m, mixed.n) == (5, 5)
    assert mixed.F(30, 5) == 3 and mixed.G(1, 5) == pytest.approx(1.0)
    h = make_benchmark("HamiltonX").spec
    assert h.num_qubits == 3
    lq = make_benchmark("LessThan_Q").spec
    assert lq.F(9, 0) == 1 and lq.F(10, 0) == 0
    with pytest.raises(BenchmarkError):
        make_benchmark("Grover")


def test_mutant_names_roundtrip():
    for name in expected_fail_programs():
        assert parse_mutant(name).name == name
    assert len(expected_fail_programs()) == len(GATE_SUFFIXES) * 10 + 12 == 132
    assert len(set(expected_fail_programs())) == len(expected_fail_programs())
    assert parse_mutant("GreaterThanEq_Q_FlipOut").kind is MutantKind.GREATER_THAN_EQ


def test_incompatible_mutants_rejected():
    with pytest.raises(BenchmarkError):
        make_program("QAdder_FlipOut")
    with pytest.raises(BenchmarkError):
        make_program("HamiltonX_change0p")


def _states_for(entry):
    spec = entry.spec
    return [basis_state(spec.concat(x, y), spec.num_qubits) for x, y in spec.inputs()][:: max(1, (1 << spec.num_qubits) // 64)]


@pytest.mark.parametrize("base", BENCHMARK_NAMES)
@pytest.mark.parametrize("suffix", ["AddRyPiDiv3", "AddRyPiDiv2", "AddRy2PiDiv3", "AddRyPi"])
def test_ry_mutant_overlap(base, suffix):
    entry, mutant, desc = make_program(f"{base}_{suffix}")
    for state in _states_for(entry)[:8]:
        overlap = inner_product(entry.program.apply(state), mutant.apply(state))
        assert abs(overlap) == pytest.approx(math.cos(desc.angle / 2), abs=1e-10)


def test_change0p():
    entry, mutant, _ = make_program("QAdder_change0p")
    spec = entry.spec
    for y in range(32):
        out = mutant.apply(basis_state(spec.concat(0, y), spec.num_qubits))
        assert abs(out.amplitudes[spec.concat(0, y ^ 1)]) == pytest.approx(1)
    out = mutant.apply(basis_state(spec.concat(3, 4), spec.num_qubits))
    assert abs(out.amplitudes[spec.concat(3, 7)]) == pytest.approx(1)


def test_big_endian_worked_example():
    spec = mutant_spec(parse_mutant("LessThan_Q_BE"))
    # 9 reads as 18 once its five bits are reversed
    assert spec.F(9, 0) == 0 and spec.F(18, 0) == 1


@pytest.mark.parametrize("base", ["Parity_Q", "Is2Power_Q", "LessThan_Q"])
def test_flipout_qubit_version_differs_everywhere(base):
    name = "GreaterThanEq_Q" if base == "LessThan_Q" else f"{base}_FlipOut"
    entry = make_benchmark(base)
    spec = mutant_spec(parse_mutant(name))
    for x in range(1 << entry.spec.m):
        assert expected_output(spec, x, 0)[0] != expected_output(entry.spec, x, 0)[0]


@pytest.mark.parametrize("base", ["Parity_P", "Is2Power_P", "LessThan_P"])
def test_flipout_phase_version_is_global_phase(base):
    name = "GreaterThanEq_P" if base == "LessThan_P" else f"{base}_FlipOut"
    entry, mutant, _ = make_program(name)
    rng = np.random.default_rng(4)
    for _ in range(5):
        dim = 1 << entry.spec.num_qubits
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        state = from_amplitudes(amps, normalize=True)
        a = entry.program.apply(state).amplitudes
        b = mutant.apply(state).amplitudes
        k = np.argmax(np.abs(a))
        b = b * (a[k] / b[k])
        assert np.max(np.abs(a - b)) < 1e-10


def test_fixed_inputs():
    assert rq_fixed_input("Parity_P") == ((0, 0), (0, 63))
    assert rq_fixed_input("QAdder") == ((0, 0), (31, 0))
    assert rq_fixed_input("HamiltonX") == ((0, 0), (0, 7))
    assert rq_fixed_input("Parity_Q") == ((0, 0), (63, 1))


@pytest.mark.parametrize("suffix", GATE_SUFFIXES)
def test_gate_mutants_build_for_every_base(suffix):
    for base in BENCHMARK_NAMES:
        _, prog, desc = make_program(f"{base}_{suffix}")
        assert desc.kind.is_gate and prog.num_qubits == make_benchmark(base).spec.num_qubits
