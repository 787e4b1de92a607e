"""Campaign rounds, result records and the evaluation experiments (RQ1-RQ5)."""
from __future__ import annotations

import csv
import importlib
import json
import math
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from joblib import Parallel, delayed

from .benchmarks import (
    BENCHMARK_NAMES,
    PHASE_MUTANTS,
    RQ3_PROGRAMS,
    RY_SUFFIXES,
    BenchmarkEntry,
    expected_fail_programs,
    make_program,
    rq_fixed_input,
)
from .eqclass import ClassicalClass, Criterion, derive_quantum_classes, sample_basis_input, sample_twovalue_input, to_dot
from .oracle import OracleProgram, OracleSpec, reference_oracle
from .prum import (
    DEFAULT_ALPHA,
    CampaignResult,
    CheckMode,
    compute_ncb,
    compute_ntv,
    min_delta_theta,
    prum_basis,
    prum_twovalue,
    run_campaign,
)
from .simulator import make_rng

RQ4_LADDER = (1, 7, 30, 119, 477, 1910)
RESULT_FIELDS = ("program", "round", "verdict", "failing_class", "failing_input", "reps_used", "elapsed_ms")


class ConfigError(ValueError):
    pass


# target resolution

@dataclass
class Target:
    name: str
    spec: OracleSpec
    classes: list[ClassicalClass]
    program: OracleProgram


def resolve_target(name: str) -> Target:
    """Benchmark/mutant name, or ``package.module:attr`` naming a BenchmarkEntry
    or a callable returning one (or a ``(spec, classes[, program])`` tuple)."""
    if ":" in name:
        module, _, attr = name.partition(":")
        try:
            obj = getattr(importlib.import_module(module), attr)
        except (ImportError, AttributeError) as exc:
            raise ConfigError(f"cannot load external target {name!r}: {exc}") from exc
        if callable(obj) and not isinstance(obj, BenchmarkEntry):
            obj = obj()
        if isinstance(obj, BenchmarkEntry):
            return Target(obj.name, obj.spec, obj.classes, obj.program)
        spec, classes, *rest = obj
        program = rest[0] if rest else reference_oracle(spec)
        return Target(spec.name, spec, list(classes), program)
    try:
        entry, program, _ = make_program(name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0]) if exc.args else str(exc)) from exc
    return Target(name, entry.spec, entry.classes, program)


# configuration

def _parse_auto(value, kind: str):
    """``int`` or ``"auto(<number>)"`` / ``"auto(min-scan)"``; returns int or (kind, arg)."""
    if isinstance(value, bool):
        raise ConfigError(f"{kind}: expected an integer or auto(...), got {value!r}")
    if isinstance(value, int):
        if value < 1:
            raise ConfigError(f"{kind} must be >= 1, got {value}")
        return value
    text = str(value).strip()
    if text.isdigit():
        return _parse_auto(int(text), kind)
    if text.startswith("auto(") and text.endswith(")"):
        arg = text[5:-1].strip()
        if arg == "min-scan":
            if kind != "n_tv":
                raise ConfigError("auto(min-scan) only applies to n_tv")
            return ("auto", "min-scan")
        try:
            return ("auto", float(arg))
        except ValueError:
            pass
    raise ConfigError(f"{kind}: expected an integer or auto(...), got {value!r}")


@dataclass
class CampaignConfig:
    target: str = "QAdder"
    criterion: str = "all"
    alpha: float = DEFAULT_ALPHA
    n_cb: int | str = 1
    n_tv: int | str = 100
    samples_per_class: int = 10
    seed: int = 0
    check_mode: str = "im"
    fail_fast: bool = True
    rounds: int = 1
    jobs: int = 1
    # used when auto(min-scan) finds G constant
    n_tv_fallback: int = 100

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "CampaignConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def validate(self) -> None:
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        try:
            Criterion.parse(self.criterion)
            CheckMode(str(self.check_mode).lower())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        _parse_auto(self.n_cb, "n_cb")
        _parse_auto(self.n_tv, "n_tv")
        for key in ("samples_per_class", "rounds", "jobs", "n_tv_fallback"):
            if int(getattr(self, key)) < 1:
                raise ConfigError(f"{key} must be >= 1")

    def repetitions(self, spec: OracleSpec) -> tuple[int, int]:
        """Concrete (n_cb, n_tv) after resolving auto modes."""
        n_cb = _parse_auto(self.n_cb, "n_cb")
        if isinstance(n_cb, tuple):
            n_cb = compute_ncb(self.alpha, n_cb[1])
        n_tv = _parse_auto(self.n_tv, "n_tv")
        if isinstance(n_tv, tuple):
            if n_tv[1] == "min-scan":
                dtheta = min_delta_theta(spec)
                n_tv = self.n_tv_fallback if dtheta is None else compute_ntv(self.alpha, dtheta)
            else:
                n_tv = compute_ntv(self.alpha, n_tv[1])
        return n_cb, n_tv


# result records

@dataclass
class ResultRecord:
    program: str
    round: int
    verdict: str
    failing_class: str = ""
    failing_input: str = ""
    reps_used: int = 0
    elapsed_ms: float = 0.0

    @classmethod
    def from_campaign(cls, program: str, round_index: int, result: CampaignResult) -> "ResultRecord":
        v = result.verdict
        return cls(
            program,
            round_index,
            v.outcome.value,
            v.failing_class or "",
            json.dumps(_listify(v.failing_input)) if v.failing_input is not None else "",
            result.reps_used,
            round(result.elapsed_ms, 3),
        )


def _listify(obj):
    if isinstance(obj, (tuple, list)):
        return [_listify(o) for o in obj]
    return obj


def write_results_csv(records: Iterable[ResultRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow(asdict(rec))


def read_results_csv(path: str | Path) -> list[ResultRecord]:
    with open(path, newline="") as fh:
        return [
            ResultRecord(
                row["program"],
                int(row["round"]),
                row["verdict"],
                row["failing_class"],
                row["failing_input"],
                int(row["reps_used"]),
                float(row["elapsed_ms"]),
            )
            for row in csv.DictReader(fh)
        ]


def write_rows_csv(rows: Sequence[dict], path: str | Path) -> None:
    if not rows:
        Path(path).write_text("")
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


# campaigns

def _round(target: Target, cfg: CampaignConfig, n_cb: int, n_tv: int, r: int, key: tuple) -> CampaignResult:
    qset = derive_quantum_classes(target.classes, cfg.criterion, make_rng(*key, r, 2), check=False)
    return run_campaign(
        target.program, target.spec, qset, n_cb, n_tv,
        samples_per_class=cfg.samples_per_class,
        seed=key,
        fail_fast=cfg.fail_fast,
        mode=CheckMode(str(cfg.check_mode).lower()),
        round_index=r,
    )


def _rounds_for(name: str, cfg: CampaignConfig, key: tuple) -> list[CampaignResult]:
    target = resolve_target(name)
    n_cb, n_tv = cfg.repetitions(target.spec)
    return [_round(target, cfg, n_cb, n_tv, r, key) for r in range(cfg.rounds)]


def run_rounds(cfg: CampaignConfig, target: Target | None = None) -> tuple[list[ResultRecord], CampaignResult]:
    """Run ``cfg.rounds`` independent campaigns on the configured target."""
    cfg.validate()
    target = target or resolve_target(cfg.target)
    # disjointness is checked once; rounds reuse the validated partition
    derive_quantum_classes(target.classes, cfg.criterion)
    n_cb, n_tv = cfg.repetitions(target.spec)
    key = (cfg.seed,)
    if cfg.jobs > 1 and cfg.rounds > 1:
        results = Parallel(n_jobs=cfg.jobs)(
            delayed(_round)(target, cfg, n_cb, n_tv, r, key) for r in range(cfg.rounds)
        )
    else:
        results = [_round(target, cfg, n_cb, n_tv, r, key) for r in range(cfg.rounds)]
    records = [ResultRecord.from_campaign(target.name, r, res) for r, res in enumerate(results)]
    merged = results[0]
    for res in results[1:]:
        merged = merged.merge(res)
    return records, merged


def plan(target: Target, criterion: str = "all", seed: int = 0) -> dict:
    """Quantum class inventory with one sampled representative per class."""
    qset = derive_quantum_classes(target.classes, criterion, make_rng(seed, 0, 2))
    classes = []
    for k, qc in enumerate(qset):
        rng = make_rng(seed, 0, 0, k)
        if qc.is_basis:
            rep = list(sample_basis_input(qc, rng))
            kind = "Q"
        else:
            rep = [list(p) for p in sample_twovalue_input(qc, rng)]
            kind = "S_ii" if qc.is_same_pair else "S_ij"
        classes.append({"label": qc.label, "kind": kind, "classes": list(qc.ids), "representative": rep})
    return {
        "target": target.name,
        "qubits": {"m": target.spec.m, "n": target.spec.n},
        "criterion": Criterion.parse(criterion).value,
        "counts": qset.counts(),
        "classical_classes": [
            {"id": c.id, "label": c.label, "size": c.size, "cardinality": c.cardinality_hint} for c in target.classes
        ],
        "pairing_edges": [[target.classes[i].id, target.classes[j].id] for i, j in qset.pairing.edges],
        "classes": classes,
    }


def _parallel(jobs: int, tasks):
    tasks = list(tasks)
    if jobs > 1 and len(tasks) > 1:
        return Parallel(n_jobs=jobs)(delayed(fn)(*args) for fn, args in tasks)
    return [fn(*args) for fn, args in tasks]


# RQ1: pass proportion of basis checks against N_cb for the Ry mutants

def _rq1_cell(program: str, suffix: str, n_cb: int, samples: int, seed: int, index: int) -> dict:
    name = f"{program}_{suffix}"
    entry, mutant, _ = make_program(name)
    qset = derive_quantum_classes(entry.classes, check=False)
    res = run_campaign(
        mutant, entry.spec, qset, n_cb, 1,
        samples_per_class=samples, seed=(seed, 1, index), fail_fast=False,
        round_index=n_cb, classes=qset.basis_classes,
    )
    tested = sum(t.tested for t in res.tallies.values())
    passed = tested - sum(t.detected for t in res.tallies.values())
    a_sq = math.cos(RY_SUFFIXES[suffix] / 2) ** 2
    return {
        "program": program,
        "mutant": suffix,
        "n_cb": n_cb,
        "passed": passed,
        "tested": tested,
        "proportion": passed / tested,
        "theory": a_sq**n_cb,
    }


def rq1(programs: Sequence[str] = BENCHMARK_NAMES, n_range=range(1, 11), samples_per_class: int = 100,
        seed: int = 0, jobs: int = 1) -> list[dict]:
    tasks = []
    for i, p in enumerate(programs):
        for j, suffix in enumerate(RY_SUFFIXES):
            for n in n_range:
                tasks.append((_rq1_cell, (p, suffix, n, samples_per_class, seed, i * 16 + j)))
    return _parallel(jobs, tasks)


# RQ2: time ratio of inverse-and-measure over directly-measure

def _rq2_cell(name: str, samples: int, seed: int) -> dict:
    entry, program, _ = make_program(name)
    qset = derive_quantum_classes(entry.classes, check=False)
    inputs = [sample_basis_input(qc, make_rng(seed, 3, k, s)) for k, qc in enumerate(qset.basis_classes)
              for s in range(samples)]
    times = {}
    for mode in (CheckMode.IM, CheckMode.DM):
        rng = make_rng(seed, 4)
        start = time.perf_counter()
        for x, y in inputs:
            prum_basis(program, entry.spec, x, y, 1, mode, rng)
        times[mode] = time.perf_counter() - start
    return {
        "program": name,
        "inputs": len(inputs),
        "t_im_ms": round(times[CheckMode.IM] * 1e3, 3),
        "t_dm_ms": round(times[CheckMode.DM] * 1e3, 3),
        "ratio": times[CheckMode.IM] / times[CheckMode.DM],
    }


def rq2(programs: Sequence[str] = BENCHMARK_NAMES, samples_per_class: int = 500, seed: int = 0, jobs: int = 1) -> list[dict]:
    names = [n for p in programs for n in (p, *(f"{p}_{s}" for s in RY_SUFFIXES))]
    return _parallel(jobs, [(_rq2_cell, (n, samples_per_class, seed)) for n in names])


# RQ3: per-class detection maps

def rq3_program(name: str, rounds: int = 100, n_cb: int = 1, n_tv: int = 100, samples_per_class: int = 1,
                seed: int = 0, criterion: str = "all") -> tuple[CampaignResult, str]:
    cfg = CampaignConfig(target=name, criterion=criterion, n_cb=n_cb, n_tv=n_tv,
                         samples_per_class=samples_per_class, seed=seed, fail_fast=False, rounds=rounds)
    target = resolve_target(name)
    _, merged = run_rounds(cfg, target)
    qset = derive_quantum_classes(target.classes, criterion, make_rng(seed, 0, 2), check=False)
    statuses = {label: t.status for label, t in merged.tallies.items()}
    return merged, to_dot(qset, statuses, name)


def _rq3_cell(name, rounds, n_cb, n_tv, samples, seed):
    merged, dot = rq3_program(name, rounds, n_cb, n_tv, samples, seed)
    rows = [
        {"program": name, "class": label, "detected": t.detected, "tested": t.tested, "status": t.status.value}
        for label, t in merged.tallies.items()
    ]
    return name, rows, dot


def rq3(programs: Sequence[str] | None = None, rounds: int = 100, n_cb: int = 1, n_tv: int = 100,
        samples_per_class: int = 1, seed: int = 0, jobs: int = 1) -> tuple[list[dict], dict[str, str]]:
    programs = programs or [p for group in RQ3_PROGRAMS.values() for p in group]
    out = _parallel(jobs, [(_rq3_cell, (p, rounds, n_cb, n_tv, samples_per_class, seed)) for p in programs])
    rows = [r for _, rs, _ in out for r in rs]
    return rows, {name: dot for name, _, dot in out}


# RQ4: pass proportion of a fixed two-value input against N_tv for the phase mutants

def _rq4_cell(program: str, suffix: str, ladder: Sequence[int], runs: int, seed: int, index: int) -> list[dict]:
    entry, mutant, _ = make_program(f"{program}_{suffix}")
    in1, in2 = rq_fixed_input(program)
    dtheta = PHASE_MUTANTS[suffix]
    rows = []
    for n_tv in ladder:
        passed = sum(
            prum_twovalue(mutant, entry.spec, in1, in2, n_tv, make_rng(seed, 5, index, n_tv, r)).passed
            for r in range(runs)
        )
        rows.append({
            "program": program,
            "mutant": suffix,
            "delta_theta": dtheta,
            "n_tv": n_tv,
            "required_n_tv": compute_ntv(DEFAULT_ALPHA, dtheta),
            "passed": passed,
            "runs": runs,
            "proportion": passed / runs,
            "theory": math.cos(dtheta / 2) ** (2 * n_tv),
        })
    return rows


def rq4(programs: Sequence[str] = BENCHMARK_NAMES, ladder: Sequence[int] = RQ4_LADDER, runs: int = 100,
        seed: int = 0, jobs: int = 1) -> list[dict]:
    tasks = [
        (_rq4_cell, (p, s, tuple(ladder), runs, seed, i * 16 + j))
        for i, p in enumerate(programs)
        for j, s in enumerate(PHASE_MUTANTS)
    ]
    return [row for rows in _parallel(jobs, tasks) for row in rows]


# RQ5: verdict counts over repeated rounds for every program

def _rq5_cell(name: str, expected: str, cfg: CampaignConfig, index: int) -> dict:
    results = _rounds_for(name, cfg, (cfg.seed, 6, index))
    entry, _, _ = make_program(name)
    passes = sum(r.verdict.passed for r in results)
    return {
        "program": name,
        "expected": expected,
        "qubits": f"{entry.spec.m}+{entry.spec.n}",
        "eq_classes": len(derive_quantum_classes(entry.classes, cfg.criterion, check=False)),
        "pass_rounds": passes,
        "rounds": len(results),
        "avg_ms": round(sum(r.elapsed_ms for r in results) / len(results), 3),
    }


def rq5(programs: Sequence[str] | None = None, rounds: int = 100, n_cb: int = 1, n_tv: int = 100,
        samples_per_class: int = 10, seed: int = 0, jobs: int = 1, criterion: str = "all") -> list[dict]:
    if programs is None:
        programs = list(BENCHMARK_NAMES) + expected_fail_programs()
    cfg = CampaignConfig(criterion=criterion, n_cb=n_cb, n_tv=n_tv, samples_per_class=samples_per_class,
                         seed=seed, fail_fast=True, rounds=rounds)
    tasks = [
        (_rq5_cell, (p, "PASS" if p in BENCHMARK_NAMES else "FAIL", cfg, i))
        for i, p in enumerate(programs)
    ]
    return _parallel(jobs, tasks)
