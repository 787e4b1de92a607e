import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracletest.simulator import Gate
from oracletest.stateprep import (
    PrepError,
    build_basis_prep,
    build_twovalue_prep,
    ghz_prep,
    inverse,
)


def twovalue_vector(s1, s2, theta, n):
    v = np.zeros(1 << n, dtype=complex)
    v[s1] = 1 / math.sqrt(2)
    v[s2] = np.exp(1j * theta) / math.sqrt(2)
    return v


@st.composite
def basis_case(draw):
    n = draw(st.integers(1, 10))
    return n, draw(st.integers(0, (1 << n) - 1))


@st.composite
def twovalue_case(draw):
    n = draw(st.integers(1, 10))
    s1 = draw(st.integers(0, (1 << n) - 1))
    s2 = draw(st.integers(0, (1 << n) - 1).filter(lambda v: v != s1))
    theta = draw(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False))
    return n, s1, s2, theta


def test_basis_example_25():
    circ = build_basis_prep(25, 5)
    assert [g.targets[0] for g in circ.gates] == [0, 3, 4]
    assert all(g.kind is Gate.X for g in circ.gates)
    assert circ.prepare().amplitudes[25] == pytest.approx(1)


def test_basis_trivial_examples():
    assert build_basis_prep(0, 4).gates == ()
    circ = build_basis_prep(7, 3)
    assert len(circ.gates) == 3 and circ.prepare().amplitudes[7] == pytest.approx(1)


def test_twovalue_fig_example():
    circ = build_twovalue_prep(44, 58, math.pi / 3, 6)
    assert np.allclose(circ.prepare().amplitudes, twovalue_vector(44, 58, math.pi / 3, 6), atol=1e-10)
    back = inverse(circ).apply(circ.prepare())
    assert abs(back.amplitudes[0]) == pytest.approx(1, abs=1e-10)


def test_twovalue_minus_and_ghz():
    minus = build_twovalue_prep(0, 1, math.pi, 1).prepare().amplitudes
    assert np.allclose(minus, [1 / math.sqrt(2), -1 / math.sqrt(2)])
    assert np.allclose(ghz_prep(4).prepare().amplitudes, twovalue_vector(0, 15, 0, 4))
    assert np.allclose(ghz_prep(6, range(3)).prepare().amplitudes, twovalue_vector(0, 7, 0, 6))


def test_errors():
    with pytest.raises(PrepError):
        build_twovalue_prep(3, 3, 0.0, 3)
    with pytest.raises(PrepError):
        build_basis_prep(8, 3)


@settings(max_examples=200, deadline=None)
@given(case=basis_case())
def test_basis_prep_exact_and_inverts(case):
    n, s = case
    circ = build_basis_prep(s, n)
    state = circ.prepare()
    assert state.amplitudes[s] == pytest.approx(1)
    assert abs(inverse(circ).apply(state).amplitudes[0]) == pytest.approx(1)


@settings(max_examples=200, deadline=None)
@given(case=twovalue_case())
def test_twovalue_prep_exact_and_inverts(case):
    n, s1, s2, theta = case
    circ = build_twovalue_prep(s1, s2, theta, n)
    state = circ.prepare()
    assert np.allclose(state.amplitudes, twovalue_vector(s1, s2, theta, n), atol=1e-10)
    back = inverse(circ).apply(state)
    assert abs(back.amplitudes[0] - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(case=twovalue_case(), dtheta=st.floats(-math.pi, math.pi, allow_nan=False))
def test_phase_error_survives_as_cos_squared(case, dtheta):
    # uncomputing with the wrong relative phase leaves |0> with probability cos^2(dtheta/2)
    n, s1, s2, theta = case
    state = build_twovalue_prep(s1, s2, theta + dtheta, n).prepare()
    back = build_twovalue_prep(s1, s2, theta, n).inverse().apply(state)
    assert abs(back.amplitudes[0]) ** 2 == pytest.approx(math.cos(dtheta / 2) ** 2, abs=1e-9)


def test_inverse_roundtrip_flag():
    circ = build_twovalue_prep(1, 6, 0.4, 3)
    assert circ.inverse().inverted and not circ.inverse().inverse().inverted
    assert circ.inverse().inverse().gates == circ.gates


def test_text_dump():
    lines = build_twovalue_prep(0, 3, 0.5, 2).to_text().splitlines()
    assert lines[0].startswith("H") and len(lines) == 3
