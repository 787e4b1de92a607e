"""Command line entry point.

Exit codes: 0 when every campaign passes, 1 when any fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import experiments as ex
from .benchmarks import BENCHMARK_NAMES, expected_fail_programs
from .oracle import SpecError
from .eqclass import ClassError

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _campaign_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("target", nargs="?", help="benchmark or mutant name, or module:attr")
    p.add_argument("--config", help="JSON file with campaign settings")
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--ncb", help="integer or auto(a_sq)")
    p.add_argument("--ntv", help="integer, auto(delta_theta) or auto(min-scan)")
    p.add_argument("--pairing", choices=["all", "tree", "each"])
    p.add_argument("--mode", choices=["im", "dm"])
    p.add_argument("--rounds", type=int)
    p.add_argument("--samples-per-class", type=int)
    p.add_argument("--fail-fast", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", help="output file or directory")


def _rq_args(p: argparse.ArgumentParser, rounds: int | None = None) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--programs", nargs="*", help="restrict to these programs")
    if rounds is not None:
        p.add_argument("--rounds", type=int, default=rounds)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oracletest", description="Equivalence-class testing of quantum oracles")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    ls = sub.add_parser("list", help="list benchmarks and mutants")
    ls.add_argument("--mutants", action="store_true", help="include the expected-fail mutants")
    _campaign_args(sub.add_parser("plan", help="print the quantum class inventory as JSON"))
    _campaign_args(sub.add_parser("test", help="run test campaigns and write results.csv"))
    rq1 = sub.add_parser("rq1", help="basis-check pass proportion against N_cb")
    _rq_args(rq1)
    rq1.add_argument("--samples-per-class", type=int, default=100)
    rq2 = sub.add_parser("rq2", help="inverse-and-measure vs direct-measure timing")
    _rq_args(rq2)
    rq2.add_argument("--samples-per-class", type=int, default=500)
    _rq_args(sub.add_parser("rq3", help="per-class detection maps (CSV + DOT)"), rounds=100)
    rq4 = sub.add_parser("rq4", help="two-value pass proportion against N_tv")
    _rq_args(rq4)
    rq4.add_argument("--runs", type=int, default=100)
    rq5 = sub.add_parser("rq5", help="verdicts over repeated rounds")
    _rq_args(rq5, rounds=100)
    rq5.add_argument("--samples-per-class", type=int, default=10)
    return parser


def config_from_args(args: argparse.Namespace) -> ex.CampaignConfig:
    cfg = ex.CampaignConfig.load(args.config) if args.config else ex.CampaignConfig()
    overrides = {
        "target": args.target,
        "seed": args.seed,
        "alpha": args.alpha,
        "n_cb": args.ncb,
        "n_tv": args.ntv,
        "criterion": args.pairing,
        "check_mode": args.mode,
        "rounds": args.rounds,
        "samples_per_class": args.samples_per_class,
        "fail_fast": args.fail_fast,
        "jobs": args.jobs,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    cfg.validate()
    return cfg


def _cmd_list(args) -> int:
    names = list(BENCHMARK_NAMES) + (expected_fail_programs() if args.mutants else [])
    print("\n".join(names))
    return EXIT_PASS


def _cmd_plan(args) -> int:
    cfg = config_from_args(args)
    text = json.dumps(ex.plan(ex.resolve_target(cfg.target), cfg.criterion, cfg.seed), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_PASS


def _cmd_test(args) -> int:
    cfg = config_from_args(args)
    records, merged = ex.run_rounds(cfg)
    out = Path(args.out or "results.csv")
    if out.is_dir():
        out = out / "results.csv"
    ex.write_results_csv(records, out)
    failed = [r for r in records if r.verdict != "PASS"]
    for r in records:
        extra = f" class={r.failing_class} input={r.failing_input}" if r.verdict != "PASS" else ""
        print(f"{r.program} round {r.round}: {r.verdict}{extra}")
    if merged.detection_map:
        print("detected: " + ", ".join(f"{k}={v.value}" for k, v in merged.detection_map.items()))
    return EXIT_FAIL if failed else EXIT_PASS


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_rq(args) -> int:
    out = _outdir(args)
    kw = {"seed": args.seed, "jobs": args.jobs}
    if args.programs:
        kw["programs"] = args.programs
    if args.command == "rq1":
        rows = ex.rq1(samples_per_class=args.samples_per_class, **kw)
    elif args.command == "rq2":
        rows = ex.rq2(samples_per_class=args.samples_per_class, **kw)
    elif args.command == "rq3":
        rows, dots = ex.rq3(rounds=args.rounds, **kw)
        for name, dot in dots.items():
            (out / f"{name}.dot").write_text(dot)
    elif args.command == "rq4":
        rows = ex.rq4(runs=args.runs, **kw)
    else:
        rows = ex.rq5(rounds=args.rounds, samples_per_class=args.samples_per_class, **kw)
    path = out / f"{args.command}.csv"
    ex.write_rows_csv(rows, path)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_PASS


COMMANDS = {"list": _cmd_list, "plan": _cmd_plan, "test": _cmd_test}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS.get(args.command, _cmd_rq)(args)
    except (ex.ConfigError, SpecError, ClassError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
