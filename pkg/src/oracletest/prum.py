"""Prepare-Run-Uncompute-Measure checks and repetition-count bounds.

A single PRUM execution prepares an input, runs the program under test,
uncomputes the expected output and measures the whole register; a nonzero
outcome proves the program wrong.  Because the prepared state, the program and
the uncompute step are deterministic, every repetition ends in the same
pre-measurement state.  Repetitions are therefore sampled as independent
measurements of that state rather than by re-simulating the circuit, which
gives the same outcome distribution at a fraction of the cost.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .eqclass import (
    DetectionStatus,
    Input,
    QuantumClass,
    QuantumClassSet,
    sample_basis_input,
    sample_twovalue_input,
)
from .oracle import OracleProgram, OracleSpec, SpecError, expected_output, phase_distance
from .simulator import StateVector, make_rng, sample_outcomes
from .stateprep import build_basis_prep, build_twovalue_prep

DEFAULT_ALPHA = 0.01


class CheckMode(str, enum.Enum):
    IM = "im"  # inverse and measure
    DM = "dm"  # directly measure


class Outcome(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class RepetitionParams:
    alpha: float = DEFAULT_ALPHA
    a_sq: float | None = None
    delta_theta: float | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.a_sq is not None and not 0 <= self.a_sq < 1:
            raise ValueError(f"a_sq must lie in [0, 1), got {self.a_sq}")
        if self.delta_theta is not None and not 0 < self.delta_theta <= math.pi:
            raise ValueError(f"delta_theta must lie in (0, pi], got {self.delta_theta}")

    @property
    def n_cb(self) -> int:
        return compute_ncb(self.alpha, self.a_sq)

    @property
    def n_tv(self) -> int:
        return compute_ntv(self.alpha, self.delta_theta)


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    failing_class: str | None = None
    failing_input: tuple | None = None
    repetition_index: int | None = None
    measured_value: int | None = None
    reps_used: int = 0

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    def __bool__(self):
        return self.passed


def _min_repetitions(alpha: float, p_pass: float) -> int:
    """Smallest N >= 1 with p_pass**N <= alpha."""
    if p_pass <= 0:
        return 1
    n = max(1, math.ceil(math.log(alpha) / math.log(p_pass)))
    # guard against the real ratio landing a hair above an integer
    while n > 1 and p_pass ** (n - 1) <= alpha:
        n -= 1
    while p_pass**n > alpha:
        n += 1
    return n


def compute_ncb(alpha: float, a_sq: float) -> int:
    """Repetitions for a basis-state check to detect an output whose expected
    component has squared amplitude ``a_sq`` with misjudgment at most ``alpha``."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0 <= a_sq < 1:
        raise ValueError(f"a_sq must lie in [0, 1), got {a_sq}: nothing to distinguish")
    return _min_repetitions(alpha, a_sq)


def compute_ntv(alpha: float, delta_theta: float) -> int:
    """Repetitions for a two-value check to resolve a phase error ``delta_theta``."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0 < delta_theta <= math.pi:
        raise ValueError(f"delta_theta must lie in (0, pi], got {delta_theta}")
    return _min_repetitions(alpha, math.cos(delta_theta / 2) ** 2)


def min_delta_theta(spec: OracleSpec, inputs: Sequence[Input] | None = None) -> float | None:
    """Smallest nonzero circular distance between two values of ``G``.

    Scans every input when ``inputs`` is None.  Returns None when ``G`` takes a
    single value (no phase variation to resolve).
    """
    if inputs is None:
        if spec.num_qubits > 12:
            raise SpecError("exhaustive phase scan limited to m + n <= 12")
        inputs = list(spec.inputs())
    values = np.mod([float(spec.G(x, y)) for x, y in inputs], 2 * math.pi)
    values = np.unique(np.round(values, 12))
    # 0 and 2*pi are the same point
    values = np.unique(np.where(np.isclose(values, 2 * math.pi, atol=1e-12), 0.0, values))
    if values.size < 2:
        return None
    gaps = np.diff(np.append(values, values[0] + 2 * math.pi))
    return float(min(gaps.min(), math.pi))


def basis_final_state(program: OracleProgram, spec: OracleSpec, x: int, y: int, mode: CheckMode) -> tuple[StateVector, int]:
    """Pre-measurement state of a basis check and the outcome a correct program gives."""
    target, _ = expected_output(spec, x, y)
    state = build_basis_prep(spec.concat(x, y), spec.num_qubits).prepare()
    state = program.apply(state)
    if CheckMode(mode) is CheckMode.DM:
        return state, target
    return build_basis_prep(target, spec.num_qubits).apply(state), 0


def twovalue_final_state(program: OracleProgram, spec: OracleSpec, in1: Input, in2: Input) -> StateVector:
    """Pre-measurement state of a two-value check; a correct program leaves ``|0...0>``."""
    s1, s2 = spec.concat(*in1), spec.concat(*in2)
    if s1 == s2:
        raise SpecError(f"two-value check needs distinct inputs, got {in1} twice")
    out1, g1 = expected_output(spec, *in1)
    out2, g2 = expected_output(spec, *in2)
    if out1 == out2:
        raise SpecError(f"{spec.name}: inputs {in1} and {in2} map to the same output {out1}")
    state = build_twovalue_prep(s1, s2, 0.0, spec.num_qubits).prepare()
    state = program.apply(state)
    return build_twovalue_prep(out1, out2, g2 - g1, spec.num_qubits).inverse().apply(state)


def _judge(state: StateVector, target: int, reps: int, rng: np.random.Generator, inp) -> Verdict:
    if reps < 1:
        raise ValueError(f"repetition count must be >= 1, got {reps}")
    outcomes = sample_outcomes(state, rng, reps)
    bad = np.flatnonzero(outcomes != target)
    if bad.size == 0:
        return Verdict(Outcome.PASS, reps_used=reps)
    first = int(bad[0])
    return Verdict(
        Outcome.FAIL,
        failing_input=inp,
        repetition_index=first,
        measured_value=int(outcomes[first]),
        reps_used=first + 1,
    )


def prum_basis(program, spec, x, y, n_cb, mode=CheckMode.IM, rng=None) -> Verdict:
    """Basis-state check of ``|x>|y>`` repeated ``n_cb`` times; stops at the first mismatch."""
    state, target = basis_final_state(program, spec, x, y, mode)
    return _judge(state, target, n_cb, rng if rng is not None else np.random.default_rng(), (x, y))


def prum_twovalue(program, spec, in1, in2, n_tv, rng=None) -> Verdict:
    """Two-value check of ``(|in1> + |in2>)/sqrt(2)`` repeated ``n_tv`` times."""
    state = twovalue_final_state(program, spec, in1, in2)
    return _judge(state, 0, n_tv, rng if rng is not None else np.random.default_rng(), (tuple(in1), tuple(in2)))


@dataclass
class ClassTally:
    detected: int = 0
    tested: int = 0

    @property
    def status(self) -> DetectionStatus:
        return DetectionStatus.from_counts(self.detected, self.tested)


@dataclass
class CampaignResult:
    verdict: Verdict
    tallies: dict[str, ClassTally] = field(default_factory=dict)
    reps_used: int = 0
    inputs_tested: int = 0
    elapsed_ms: float = 0.0

    @property
    def detection_map(self) -> dict[str, DetectionStatus]:
        """Status of every class in which at least one input failed."""
        return {k: t.status for k, t in self.tallies.items() if t.detected}

    def status(self, label: str) -> DetectionStatus:
        return self.tallies[label].status

    def merge(self, other: "CampaignResult") -> "CampaignResult":
        tallies = {k: ClassTally(t.detected, t.tested) for k, t in self.tallies.items()}
        for k, t in other.tallies.items():
            mine = tallies.setdefault(k, ClassTally())
            mine.detected += t.detected
            mine.tested += t.tested
        verdict = self.verdict if not self.verdict.passed else other.verdict
        return CampaignResult(
            verdict,
            tallies,
            self.reps_used + other.reps_used,
            self.inputs_tested + other.inputs_tested,
            self.elapsed_ms + other.elapsed_ms,
        )


def run_campaign(
    program: OracleProgram,
    spec: OracleSpec,
    quantum_classes: QuantumClassSet,
    n_cb: int,
    n_tv: int,
    samples_per_class: int = 10,
    seed: int | tuple[int, ...] = 0,
    fail_fast: bool = True,
    mode: CheckMode = CheckMode.IM,
    round_index: int = 0,
    classes: Sequence[QuantumClass] | None = None,
) -> CampaignResult:
    """Sample inputs from every quantum class and check each one.

    Inputs are visited class by class (``Q_i``, then ``S_ii``, then ``S_ij``).
    Input number ``k`` draws its sample from stream ``(seed, round, 0, k)``
    and its measurements from ``(seed, round, 1, k)``, so results do not depend
    on how rounds are scheduled.  ``seed`` may be a tuple of integers.  With
    ``fail_fast`` the campaign stops at the first failing input.
    """
    keys = tuple(seed) if isinstance(seed, tuple) else (seed,)
    if program.num_qubits != spec.num_qubits:
        raise SpecError(f"program has {program.num_qubits} qubits, spec expects {spec.num_qubits}")
    start = time.perf_counter()
    targets = list(quantum_classes) if classes is None else list(classes)
    tallies = {qc.label: ClassTally() for qc in targets}
    verdict = Verdict(Outcome.PASS)
    reps = 0
    k = 0
    for qc in targets:
        tally = tallies[qc.label]
        for _ in range(samples_per_class):
            pick = make_rng(*keys, round_index, 0, k)
            meas = make_rng(*keys, round_index, 1, k)
            k += 1
            if qc.is_basis:
                x, y = sample_basis_input(qc, pick)
                v = prum_basis(program, spec, x, y, n_cb, mode, meas)
            else:
                in1, in2 = sample_twovalue_input(qc, pick)
                v = prum_twovalue(program, spec, in1, in2, n_tv, meas)
            reps += v.reps_used
            tally.tested += 1
            if not v.passed:
                tally.detected += 1
                if verdict.passed:
                    verdict = replace(v, failing_class=qc.label)
                if fail_fast:
                    break
        if fail_fast and not verdict.passed:
            break
    verdict = replace(verdict, reps_used=reps)
    elapsed = (time.perf_counter() - start) * 1e3
    return CampaignResult(verdict, tallies, reps, k, elapsed)


def phases_agree(a: float, b: float, tol: float = 1e-9) -> bool:
    return phase_distance(a, b) <= tol
