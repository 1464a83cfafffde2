"""Command-line driver: ``tighthilb run`` and ``tighthilb check``."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .analyzer import (
    FAIL,
    INCONCLUSIVE,
    SCHEMA,
    AnalysisConfig,
    AnalysisReport,
    analyze,
)
from .dsl import JACOBIAN, Analyze, Environment, build, evaluate, parse
from .errors import ParameterError, TightHilbError
from .ideals import PresentedRing
from .tight import BUDGET_EXHAUSTED, DEFAULT_E_MAX, DEFAULT_WINDOW, TestElement, jacobian_test_element

EXIT_OK, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3


@dataclass
class JobConfig:
    """Settings for one ``analyze`` command after merging script and CLI options."""

    N: Optional[int] = None
    e_max: int = DEFAULT_E_MAX
    stability_window: int = DEFAULT_WINDOW
    test_element: Optional[str] = None
    out: Optional[str] = None
    csv: Optional[str] = None

    def __post_init__(self):
        if self.e_max < 2:
            raise ParameterError(f"e_max = {self.e_max} must be at least 2")
        if self.stability_window < 1:
            raise ParameterError("stability window must be at least 1")


def default_test_element(R: PresentedRing) -> TestElement:
    """c = 1 on a polynomial ring, a Jacobian minor on a hypersurface."""
    if not R.J.polys:
        return TestElement(R.ambient.one(), "regular ring")
    if len(R.J.polys) == 1:
        return jacobian_test_element(R)
    raise ParameterError("no default test element for this ring; pass --test-element")


def _job_config(job: Analyze, overrides: argparse.Namespace) -> JobConfig:
    def pick(cli, script, default):
        return cli if cli is not None else (script if script is not None else default)

    return JobConfig(
        N=pick(overrides.depth, job.depth, None),
        e_max=pick(overrides.emax, job.emax, DEFAULT_E_MAX),
        stability_window=pick(overrides.window, job.window, DEFAULT_WINDOW),
        out=pick(overrides.out, job.out, None),
        csv=pick(overrides.csv, job.csv, None),
    )


def _test_element(env: Environment, job: Analyze) -> TestElement:
    R = env.ring_of(job.ideal)
    if job.test_element is None:
        return default_test_element(R)
    if job.test_element == JACOBIAN:
        return jacobian_test_element(R)
    return TestElement(evaluate(job.test_element, R.ambient), "user-supplied")


def run_job(env: Environment, job: Analyze, config: JobConfig) -> Tuple[AnalysisReport, dict]:
    Q = env.ideals[job.ideal]
    te = _test_element(env, job)
    config.test_element = str(te.c)
    R = Q.ring
    report = analyze(
        Q,
        te,
        AnalysisConfig(N=config.N, e_max=config.e_max, window=config.stability_window),
        env.assumptions.get(job.ideal, {}),
        env.ass_primes.get(R.name),
        env.maps[job.extension] if job.extension else None,
    )
    record = {"name": job.ideal, "config": asdict(config), **report.to_record()}
    return report, record


def exit_code(reports: Sequence[AnalysisReport]) -> int:
    """2 if any check failed, else 3 if anything was inconclusive or truncated, else 0."""
    if any(v.status == FAIL for r in reports for v in r.all_verdicts()):
        return EXIT_FAIL
    for r in reports:
        truncated = BUDGET_EXHAUSTED in r.tight.statuses.values() or r.tight.withheld_reason
        if truncated or r.f_rationality == INCONCLUSIVE:
            return EXIT_INCONCLUSIVE
    return EXIT_OK


def _write_csv(report: AnalysisReport, path: str, tag: str = ""):
    p = Path(path)
    if tag:
        p = p.with_name(f"{p.stem}_{tag}{p.suffix}")
    p.write_text(report.tight.to_csv())
    p.with_name(f"{p.stem}_ordinary{p.suffix}").write_text(report.ordinary.to_csv())


def _emit_error(exc: BaseException, script: Optional[str] = None):
    if isinstance(exc, TightHilbError):
        rec = exc.to_record()
    else:
        rec = {"error": "IO_ERROR" if isinstance(exc, OSError) else "INTERNAL_ERROR",
               "message": str(exc)}
    if script:
        rec["script"] = script
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)


def cmd_check(args) -> int:
    try:
        script = parse(Path(args.script).read_text(encoding="utf-8"))
    except (TightHilbError, OSError) as exc:
        _emit_error(exc, args.script)
        return EXIT_ERROR
    print(f"{args.script}: ok, {len(script.statements)} statements")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        env = build(parse(Path(args.script).read_text(encoding="utf-8")))
        if not env.jobs:
            raise ParameterError("script contains no analyze command")
        reports: List[AnalysisReport] = []
        records = []
        for job in env.jobs:
            config = _job_config(job, args)
            report, record = run_job(env, job, config)
            reports.append(report)
            records.append(record)
            if config.csv:
                _write_csv(report, config.csv, job.ideal if len(env.jobs) > 1 else "")
            if job.out and not args.out:
                _write_report(_document(args, [record], exit_code([report])), job.out)
        code = exit_code(reports)
        doc = _document(args, records, code)
        if args.out:
            _write_report(doc, args.out)
        if args.out or any(job.out for job in env.jobs):
            for r in reports:
                print(r.text_table())
        else:
            print(json.dumps(doc, indent=2))
        return code
    except (TightHilbError, OSError) as exc:
        _emit_error(exc, args.script)
        return EXIT_ERROR


def _document(args, records, code: int) -> dict:
    stamp = None
    if not args.no_timestamp:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return {
        "schema": SCHEMA,
        "tool": {"name": "tighthilb", "version": __version__},
        "generated_at": stamp,
        "script": args.script,
        "exit_code": code,
        "analyses": records,
    }


def _write_report(doc: dict, path: str):
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tighthilb",
        description="Hilbert and tight Hilbert coefficients of parameter ideals over F_p.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a script and write a JSON report")
    run.add_argument("script")
    run.add_argument("--depth", type=int, help="table depth N (default d + 6)")
    run.add_argument("--emax", type=int, help=f"largest Frobenius exponent (default {DEFAULT_E_MAX})")
    run.add_argument("--window", type=int, help=f"stability window (default {DEFAULT_WINDOW})")
    run.add_argument("--out", help="JSON report path (default: stdout)")
    run.add_argument("--csv", help="CSV path for the tight table; ordinary table goes beside it")
    run.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from the report")
    run.set_defaults(func=cmd_run)
    check = sub.add_parser("check", help="parse and resolve a script without computing")
    check.add_argument("script")
    check.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
