import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracletest.benchmarks import BENCHMARK_NAMES, make_benchmark, parity
from oracletest.oracle import (
    OracleSpec,
    SpecError,
    expected_output,
    oracle_tables,
    phase_distance,
    reference_oracle,
    validate_bijectivity,
)
from oracletest.simulator import basis_state, from_amplitudes


def nonzero(state):
    idx = np.flatnonzero(np.abs(state.amplitudes) > 1e-9)
    assert len(idx) == 1
    return int(idx[0]), state.amplitudes[idx[0]]


def test_bijectivity_examples():
    assert validate_bijectivity(OracleSpec(3, 3, lambda x, y: y ^ parity(x), lambda x, y: 0.0))
    assert validate_bijectivity(OracleSpec(3, 3, lambda x, y: (x + y) % 8, lambda x, y: 0.0))
    res = validate_bijectivity(OracleSpec(1, 2, lambda x, y: 0, lambda x, y: 0.0))
    assert not res and res.witness == (0, 0, 1)


def test_reference_oracle_rejects_non_bijective():
    with pytest.raises(SpecError):
        reference_oracle(OracleSpec(1, 2, lambda x, y: 0, lambda x, y: 0.0))


def test_qadder_examples():
    spec = make_benchmark("QAdder").spec
    prog = reference_oracle(spec)
    idx, amp = nonzero(prog.apply(basis_state(spec.concat(7, 20), spec.num_qubits)))
    assert spec.split(idx) == (7, 27) and amp == pytest.approx(1)
    idx, _ = nonzero(prog.apply(basis_state(spec.concat(20, 20), spec.num_qubits)))
    assert spec.split(idx) == (20, 8)


def test_parity_phase_example():
    spec = make_benchmark("Parity_P").spec
    idx, amp = nonzero(reference_oracle(spec).apply(basis_state(0b100, 6)))
    assert idx == 0b100 and amp == pytest.approx(-1)


def test_expected_output_examples():
    mixed = make_benchmark("Mixed_Proc").spec
    idx, g = expected_output(mixed, 3, 5)
    assert idx == mixed.concat(3, 8) and g == pytest.approx(1.0)
    assert expected_output(make_benchmark("HamiltonX").spec, 0, 7)[1] == pytest.approx(1.4)
    pq = make_benchmark("Parity_Q").spec
    assert expected_output(pq, 0b110, 0) == (pq.concat(0b110, 0), 0.0)


def test_concat_split():
    spec = OracleSpec(3, 2, lambda x, y: y, lambda x, y: 0.0)
    assert spec.concat(5, 2) == 5 | (2 << 3)
    assert spec.split(spec.concat(6, 3)) == (6, 3)
    with pytest.raises(SpecError):
        spec.check_input(8, 0)


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
def test_differential_exhaustive(name):
    spec = make_benchmark(name).spec
    prog = reference_oracle(spec)
    for x, y in spec.inputs():
        idx, amp = nonzero(prog.apply(basis_state(spec.concat(x, y), spec.num_qubits)))
        want, g = expected_output(spec, x, y)
        assert idx == want
        assert phase_distance(np.angle(amp), g) < 1e-9


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_reference_oracle_is_linear(seed):
    spec = make_benchmark("Mixed_Proc").spec
    prog = reference_oracle(spec)
    rng = np.random.default_rng(seed)
    dim = 1 << spec.num_qubits
    a = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    b = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    ca, cb = 0.3 - 0.2j, -0.7 + 0.1j
    whole = ca * a + cb * b
    whole /= np.linalg.norm(whole)
    out = prog.apply(from_amplitudes(whole)).amplitudes
    sa = prog.apply(from_amplitudes(a, normalize=True)).amplitudes * np.linalg.norm(a)
    sb = prog.apply(from_amplitudes(b, normalize=True)).amplitudes * np.linalg.norm(b)
    ref = (ca * sa + cb * sb) / np.linalg.norm(ca * a + cb * b)
    assert np.allclose(out, ref, atol=1e-10)


def test_tables_are_permutations():
    for name in BENCHMARK_NAMES:
        dest, _ = oracle_tables(make_benchmark(name).spec)
        assert sorted(dest.tolist()) == list(range(len(dest)))


@given(a=st.floats(-50, 50), k=st.integers(-5, 5))
def test_phase_distance_wraps(a, k):
    assert phase_distance(a, a + 2 * math.pi * k) < 1e-9
