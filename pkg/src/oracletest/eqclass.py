"""Quantum input classes derived from a classical partition.

Every classical class ``C_i`` yields a basis-state class ``Q_i``; every class
with at least two members yields ``S_ii`` (superpositions of two distinct
members); a pairing graph over the classes selects the cross classes
``S_ij``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

MAX_REJECTION_ATTEMPTS = 10_000
EXHAUSTIVE_MAX_QUBITS = 12

Input = tuple[int, int]


class ClassError(ValueError):
    pass


class Criterion(str, enum.Enum):
    ALL = "all"
    TREE = "tree"
    EACH = "each"

    @classmethod
    def parse(cls, value: "str | Criterion") -> "Criterion":
        if isinstance(value, Criterion):
            return value
        aliases = {"allcoverage": cls.ALL, "treecoverage": cls.TREE, "eachchoice": cls.EACH}
        key = value.strip().lower().replace("-", "").replace("_", "")
        if key in aliases:
            return aliases[key]
        return cls(key)


@dataclass(frozen=True, eq=False)
class ClassicalClass:
    """A set of classical inputs ``(x, y)``.

    Either an explicit member list, or an inclusive box ``x_range`` x
    ``y_range`` optionally filtered by ``predicate``.
    """

    id: int
    label: str
    members: tuple[Input, ...] | None = None
    x_range: tuple[int, int] | None = None
    y_range: tuple[int, int] | None = None
    predicate: Callable[[int, int], bool] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.members is None and (self.x_range is None or self.y_range is None):
            raise ClassError(f"class {self.id}: need explicit members or an x/y range")
        if self.members is not None:
            object.__setattr__(self, "members", tuple((int(x), int(y)) for x, y in self.members))
            if not self.members:
                raise ClassError(f"class {self.id} ({self.label}) is empty")

    @classmethod
    def explicit(cls, id: int, label: str, members: Iterable[Input]) -> "ClassicalClass":
        return cls(id, label, members=tuple(members))

    @classmethod
    def ranged(cls, id: int, label: str, x_range, y_range, predicate=None) -> "ClassicalClass":
        return cls(id, label, x_range=tuple(x_range), y_range=tuple(y_range), predicate=predicate)

    def contains(self, x: int, y: int) -> bool:
        if self.members is not None:
            return (x, y) in self._member_set
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        if not (x0 <= x <= x1 and y0 <= y <= y1):
            return False
        return self.predicate is None or bool(self.predicate(x, y))

    @property
    def _member_set(self) -> frozenset:
        cached = self.__dict__.get("_members_cache")
        if cached is None:
            cached = frozenset(self.enumerate())
            object.__setattr__(self, "_members_cache", cached)
        return cached

    def enumerate(self) -> Iterator[Input]:
        if self.members is not None:
            yield from self.members
            return
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        for x in range(x0, x1 + 1):
            for y in range(y0, y1 + 1):
                if self.predicate is None or self.predicate(x, y):
                    yield x, y

    @property
    def size(self) -> int:
        if self.members is not None:
            return len(set(self.members))
        if self.predicate is None:
            (x0, x1), (y0, y1) = self.x_range, self.y_range
            return max(0, x1 - x0 + 1) * max(0, y1 - y0 + 1)
        return len(self._member_set)

    @property
    def cardinality_hint(self) -> str:
        return "singleton" if self.size == 1 else "multi"

    def sample(self, rng: np.random.Generator) -> Input:
        """Uniform random member."""
        if self.members is not None:
            return self.members[int(rng.integers(len(self.members)))]
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        for _ in range(MAX_REJECTION_ATTEMPTS):
            x = int(rng.integers(x0, x1 + 1))
            y = int(rng.integers(y0, y1 + 1))
            if self.predicate is None or self.predicate(x, y):
                return x, y
        raise ClassError(f"class {self.id} ({self.label}): rejection sampling exhausted")


@dataclass(frozen=True)
class PairingGraph:
    k: int
    edges: tuple[tuple[int, int], ...]
    criterion: Criterion

    def degree(self) -> list[int]:
        deg = [0] * self.k
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_connected(self) -> bool:
        if self.k <= 1:
            return True
        adj = {v: set() for v in range(self.k)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.k


def _prufer_tree(k: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if k == 2:
        return [(0, 1)]
    seq = [int(v) for v in rng.integers(0, k, size=k - 2)]
    degree = [1] * k
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(k) if degree[u] == 1)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [u for u in range(k) if degree[u] == 1]
    edges.append((u, w))
    return edges


def build_pairing(k: int, criterion: Criterion | str, rng: np.random.Generator) -> PairingGraph:
    """Pairing graph over ``k`` classes.

    ``ALL`` is the complete graph, ``TREE`` a uniformly random labelled
    spanning tree (random Pruefer sequence), ``EACH`` a random matching on a
    shuffled vertex order plus one extra edge for the leftover vertex when
    ``k`` is odd.  ``k == 1`` gives no edges.
    """
    criterion = Criterion.parse(criterion)
    if k < 1:
        raise ClassError("pairing needs at least one class")
    if k == 1:
        return PairingGraph(1, (), criterion)
    if criterion is Criterion.ALL:
        edges = list(itertools.combinations(range(k), 2))
    elif criterion is Criterion.TREE:
        edges = _prufer_tree(k, rng)
    else:
        order = [int(v) for v in rng.permutation(k)]
        edges = [tuple(sorted(order[i : i + 2])) for i in range(0, k - 1, 2)]
        if k % 2:
            last = order[-1]
            other = order[int(rng.integers(0, k - 1))]
            edges.append((min(last, other), max(last, other)))
    return PairingGraph(k, tuple(sorted(edges)), criterion)


@dataclass(frozen=True, eq=False)
class QuantumClass:
    """``Q_i`` when ``second`` is None, ``S_ii`` when both sides coincide, else ``S_ij``."""

    first: ClassicalClass
    second: ClassicalClass | None = None

    @property
    def is_basis(self) -> bool:
        return self.second is None

    @property
    def is_same_pair(self) -> bool:
        return self.second is self.first

    @property
    def label(self) -> str:
        if self.second is None:
            return f"Q{self.first.id}"
        return f"S{self.first.id}_{self.second.id}"

    @property
    def ids(self) -> tuple[int, ...]:
        if self.second is None:
            return (self.first.id,)
        return (self.first.id, self.second.id)


@dataclass(frozen=True)
class QuantumClassSet:
    classes: tuple[ClassicalClass, ...]
    basis_classes: tuple[QuantumClass, ...]
    same_pair_classes: tuple[QuantumClass, ...]
    cross_pair_classes: tuple[QuantumClass, ...]
    pairing: PairingGraph

    def __len__(self) -> int:
        return len(self.basis_classes) + len(self.same_pair_classes) + len(self.cross_pair_classes)

    def __iter__(self) -> Iterator[QuantumClass]:
        yield from self.basis_classes
        yield from self.same_pair_classes
        yield from self.cross_pair_classes

    def counts(self) -> dict[str, int]:
        return {
            "Q": len(self.basis_classes),
            "S_ii": len(self.same_pair_classes),
            "S_ij": len(self.cross_pair_classes),
            "total": len(self),
        }


def check_disjoint(classes: Sequence[ClassicalClass]) -> None:
    owner: dict[Input, int] = {}
    for c in classes:
        for member in c.enumerate():
            if member in owner and owner[member] != c.id:
                raise ClassError(f"classes {owner[member]} and {c.id} overlap at {member}")
            owner[member] = c.id


def derive_quantum_classes(
    classes: Sequence[ClassicalClass],
    criterion: Criterion | str = Criterion.ALL,
    rng: np.random.Generator | None = None,
    check: bool = True,
) -> QuantumClassSet:
    if not classes:
        raise ClassError("no classical classes given")
    if len({c.id for c in classes}) != len(classes):
        raise ClassError("class ids must be unique")
    if check:
        check_disjoint(classes)
    rng = rng if rng is not None else np.random.default_rng(0)
    pairing = build_pairing(len(classes), criterion, rng)
    return QuantumClassSet(
        classes=tuple(classes),
        basis_classes=tuple(QuantumClass(c) for c in classes),
        same_pair_classes=tuple(QuantumClass(c, c) for c in classes if c.size >= 2),
        cross_pair_classes=tuple(QuantumClass(classes[i], classes[j]) for i, j in pairing.edges),
        pairing=pairing,
    )


def sample_basis_input(qclass: QuantumClass, rng: np.random.Generator) -> Input:
    if not qclass.is_basis:
        raise ClassError(f"{qclass.label} is not a basis-state class")
    return qclass.first.sample(rng)


def sample_twovalue_input(qclass: QuantumClass, rng: np.random.Generator) -> tuple[Input, Input]:
    """Two distinct inputs, the first from ``C_i`` and the second from ``C_j``."""
    if qclass.is_basis:
        raise ClassError(f"{qclass.label} is not a two-value class")
    first, second = qclass.first, qclass.second
    if qclass.is_same_pair:
        if first.size < 2:
            raise ClassError(f"{qclass.label}: class {first.id} has a single member")
        if first.members is not None:
            pool = sorted(set(first.members))
            i, j = rng.choice(len(pool), size=2, replace=False)
            return pool[int(i)], pool[int(j)]
        a = first.sample(rng)
        for _ in range(MAX_REJECTION_ATTEMPTS):
            b = first.sample(rng)
            if b != a:
                return a, b
        raise ClassError(f"{qclass.label}: could not draw two distinct members")
    return first.sample(rng), second.sample(rng)


class DetectionStatus(str, enum.Enum):
    ALL = "all-detected"
    SOME = "some-detected"
    NONE = "none"

    @property
    def color(self) -> str | None:
        return {"all-detected": "red", "some-detected": "orange"}.get(self.value)

    @classmethod
    def from_counts(cls, detected: int, tested: int) -> "DetectionStatus":
        if detected == 0:
            return cls.NONE
        return cls.ALL if detected == tested else cls.SOME


def to_dot(qset: QuantumClassSet, statuses: dict[str, DetectionStatus] | None = None, name: str = "pairing") -> str:
    """DOT graph: vertices are ``Q_i``, self-loops ``S_ii``, edges ``S_ij``.

    Classes whose status is all-detected are coloured red, some-detected
    orange, undetected classes carry no colour attribute.
    """
    statuses = statuses or {}

    def attrs(qc: QuantumClass, extra: str = "") -> str:
        status = statuses.get(qc.label)
        color = status.color if status is not None else None
        parts = [p for p in (extra, f'color="{color}"' if color else "") if p]
        if color and qc.is_basis:
            parts.append("style=filled")
            parts.append(f'fillcolor="{color}"')
        return f" [{', '.join(parts)}]" if parts else ""

    safe = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in name)
    lines = [f"graph {safe} {{"]
    for qc in qset.basis_classes:
        label = f'label="{qc.first.id}"'
        lines.append(f"  c{qc.first.id}{attrs(qc, label)};")
    for qc in qset.same_pair_classes:
        lines.append(f"  c{qc.first.id} -- c{qc.first.id}{attrs(qc)};")
    for qc in qset.cross_pair_classes:
        lines.append(f"  c{qc.first.id} -- c{qc.second.id}{attrs(qc)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
