"""Command-line entry point.

Usage:
    lab <kind> --config <file.json> [--out PATH] [--format csv|json]
        [--mesh N_R,N_THETA] [--modes N] [--beta B] [--seed S]

Flags override the config file.  A config file may also hold a JSON array of
scenario objects; those run in parallel worker processes, capped by the
LAB_THREADS environment variable.  Exit codes: 0 all pass flags true,
1 a pass flag is false, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .errors import LabError, ParseError, ValidationError
from .scenarios import KINDS, emit_report, parse_scenario, run_scenario


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lab",
        description="Run a verification scenario and emit a machine-readable report.",
    )
    parser.add_argument("kind", choices=KINDS, help="scenario kind")
    parser.add_argument("--config", required=True, help="JSON scenario file")
    parser.add_argument("--out", default=None, help="output file (or directory for scenario lists)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--mesh", default=None, metavar="N_R,N_THETA")
    parser.add_argument("--modes", type=int, default=None)
    parser.add_argument("--beta", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    return parser


def _apply_overrides(scenario, args):
    updates = {}
    if args.mesh is not None:
        parts = args.mesh.split(",")
        if len(parts) != 2:
            raise ParseError("--mesh expects N_R,N_THETA")
        try:
            updates["mesh"] = (int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise ParseError(f"bad --mesh value {args.mesh!r}") from exc
        if updates["mesh"][0] < 1 or updates["mesh"][1] < 3:
            raise ValidationError("mesh needs n_r >= 1 and n_theta >= 3")
    if args.modes is not None:
        if args.modes < 2:
            raise ValidationError("modes must be at least 2")
        updates["modes"] = args.modes
    if args.beta is not None:
        if args.beta <= 1.0:
            raise ValidationError("beta must exceed 1")
        updates["beta"] = args.beta
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.format is not None:
        updates["format"] = args.format
    if args.out is not None:
        updates["out"] = args.out
    return replace(scenario, **updates) if updates else scenario


def _worker(item):
    index, scenario, out_path = item
    report = run_scenario(scenario)
    if out_path is not None:
        emit_report(report, scenario.format, out_path)
    return index, report.passed, report.summary


def _run_list(objects, args):
    scenarios = [parse_scenario(obj, kind=args.kind) for obj in objects]
    scenarios = [_apply_overrides(s, args) for s in scenarios]
    out_dir = args.out
    jobs = []
    for i, s in enumerate(scenarios):
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(out_dir, f"scenario_{i:03d}.{s.format}")
        else:
            path = s.out
        jobs.append((i, s, path))
    cap = os.environ.get("LAB_THREADS")
    workers = min(len(jobs), int(cap)) if cap else min(len(jobs), os.cpu_count() or 1)
    workers = max(workers, 1)
    results = []
    if workers == 1:
        results = [_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, jobs))
    ok = True
    for index, passed, summary in sorted(results):
        status = "pass" if passed else "FAIL"
        print(f"scenario {index}: {status} (max_rel_diff={summary.get('max_rel_diff', 0.0):.3g})")
        ok = ok and passed
    return 0 if ok else 1


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                decoded = json.load(f)
        except OSError as exc:
            raise ParseError(f"cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.config}:{exc.lineno}: {exc.msg}") from exc
        if isinstance(decoded, list):
            return _run_list(decoded, args)
        scenario = _apply_overrides(parse_scenario(decoded, kind=args.kind), args)
        report = run_scenario(scenario)
        out = scenario.out
        if out is not None:
            emit_report(report, scenario.format, out)
        summary = report.summary
        status = "pass" if report.passed else "FAIL"
        print(
            f"{scenario.kind}: {status} "
            f"(max_rel_diff={summary.get('max_rel_diff', 0.0):.3g}, "
            f"min_margin={summary.get('min_margin', 0.0):.3g})"
        )
        return 0 if report.passed else 1
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LabError as exc:
        print(f"error [{args.kind}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
