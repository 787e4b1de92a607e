import math

import pytest
from hypothesis import given, settings, strategies as st

from oracletest.benchmarks import BENCHMARK_NAMES, adder_example_classes, boolean_classes, make_benchmark
from oracletest.eqclass import (
    ClassError,
    ClassicalClass,
    Criterion,
    DetectionStatus,
    QuantumClass,
    build_pairing,
    derive_quantum_classes,
    sample_basis_input,
    sample_twovalue_input,
    to_dot,
)
from oracletest.simulator import make_rng

TABLE_COUNTS = {
    "Parity_P": 12, "Is2Power_P": 12, "LessThan_P": 30, "Parity_Q": 12, "Is2Power_Q": 12,
    "LessThan_Q": 30, "QAdder": 34, "HamiltonX": 36, "Ising": 19, "Mixed_Proc": 34,
}


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
def test_all_coverage_counts(name):
    assert len(derive_quantum_classes(make_benchmark(name).classes)) == TABLE_COUNTS[name]


def test_count_breakdowns():
    assert derive_quantum_classes(make_benchmark("QAdder").classes).counts() == {"Q": 7, "S_ii": 6, "S_ij": 21, "total": 34}
    assert derive_quantum_classes(make_benchmark("Parity_P").classes).counts() == {"Q": 4, "S_ii": 2, "S_ij": 6, "total": 12}
    assert derive_quantum_classes(make_benchmark("HamiltonX").classes).counts() == {"Q": 8, "S_ii": 0, "S_ij": 28, "total": 36}
    assert derive_quantum_classes(make_benchmark("Ising").classes).counts() == {"Q": 5, "S_ii": 4, "S_ij": 10, "total": 19}


def test_pairing_examples():
    rng = make_rng(0)
    assert len(build_pairing(6, "all", rng).edges) == 15
    tree = build_pairing(6, "tree", rng)
    assert len(tree.edges) == 5 and tree.is_connected()
    each = build_pairing(6, "each", rng)
    assert len(each.edges) == 3 and min(each.degree()) >= 1
    assert build_pairing(1, "tree", rng).edges == ()


@settings(max_examples=100, deadline=None)
@given(k=st.integers(2, 30), seed=st.integers(0, 2**32 - 1))
def test_pairing_invariants(k, seed):
    tree = build_pairing(k, Criterion.TREE, make_rng(seed))
    assert len(tree.edges) == k - 1 and tree.is_connected()
    assert len(set(tree.edges)) == k - 1
    each = build_pairing(k, Criterion.EACH, make_rng(seed))
    assert min(each.degree()) >= 1
    assert len(each.edges) == math.ceil(k / 2)
    assert all(i < j for i, j in each.edges + tree.edges)


def test_criterion_aliases():
    assert Criterion.parse("AllCoverage") is Criterion.ALL
    assert Criterion.parse("tree-coverage") is Criterion.TREE
    assert Criterion.parse("EachChoice") is Criterion.EACH
    with pytest.raises(ValueError):
        Criterion.parse("most")


def test_overlap_rejected():
    a = ClassicalClass.ranged(1, "a", (0, 3), (0, 0))
    b = ClassicalClass.ranged(2, "b", (3, 5), (0, 0))
    with pytest.raises(ClassError):
        derive_quantum_classes([a, b])


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
def test_partitions_cover_domain(name):
    entry = make_benchmark(name)
    owners = {}
    for c in entry.classes:
        for member in c.enumerate():
            assert member not in owners
            owners[member] = c.id
    spec = entry.spec
    if entry.encoding == "qubit":
        domain = [(x, 0) for x in range(1 << spec.m)]
    elif spec.m == 0 or name == "HamiltonX":
        domain = [(0, y) for y in range(1 << spec.n)]
    else:
        domain = list(spec.inputs())
    assert set(owners) == set(domain)


def test_adder_example_samples():
    ec = {c.id: c for c in adder_example_classes()}
    qset = derive_quantum_classes(list(ec.values()))
    q5 = next(q for q in qset.basis_classes if q.first.id == 5)
    rng = make_rng(1)
    assert all(sample_basis_input(q5, rng) == (0, 0) for _ in range(20))
    q1 = next(q for q in qset.basis_classes if q.first.id == 1)
    for _ in range(100):
        x, y = sample_basis_input(q1, rng)
        assert 1 <= x <= 15 and 1 <= y <= 15
    s66 = next(q for q in qset.same_pair_classes if q.first.id == 6)
    for _ in range(50):
        a, b = sample_twovalue_input(s66, rng)
        assert a != b and ec[6].contains(*a) and ec[6].contains(*b)
    s26 = next(q for q in qset.cross_pair_classes if q.ids == (2, 6))
    a, b = sample_twovalue_input(s26, rng)
    assert ec[2].contains(*a) and ec[6].contains(*b)


def test_all_one_parity_class():
    cls = boolean_classes("parity", 0, 6)[1]
    assert cls.sample(make_rng(0)) == (0, 63)


def test_singleton_same_pair_rejected():
    single = ClassicalClass.explicit(1, "one", [(0, 0)])
    with pytest.raises(ClassError):
        sample_twovalue_input(QuantumClass(single, single), make_rng(0))


def test_detection_status():
    assert DetectionStatus.from_counts(0, 5) is DetectionStatus.NONE
    assert DetectionStatus.from_counts(5, 5) is DetectionStatus.ALL
    assert DetectionStatus.from_counts(2, 5) is DetectionStatus.SOME
    assert DetectionStatus.ALL.color == "red" and DetectionStatus.NONE.color is None


def test_dot_output():
    qset = derive_quantum_classes(make_benchmark("LessThan_Q").classes)
    dot = to_dot(qset, {"Q3": DetectionStatus.ALL, "S2_2": DetectionStatus.SOME}, "LessThan_Q_BE")
    assert dot.startswith("graph LessThan_Q_BE {")
    assert 'c3 [label="3", color="red", style=filled, fillcolor="red"];' in dot
    assert 'c2 -- c2 [color="orange"];' in dot
    assert dot.count(" -- ") == len(qset.same_pair_classes) + len(qset.cross_pair_classes)
