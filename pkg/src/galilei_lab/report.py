"""Run selected suites on a worker pool and write the JSON report plus CSV sidecars."""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

from .config import RunConfig
from .suites import CheckResult, SuiteOutput, resolve_suites, run_suite

SCHEMA_VERSION = 1
THREADS_ENV = "GALILEI_LAB_THREADS"


def _version() -> str:
    from . import __version__
    return __version__


@dataclass
class RunReport:
    config: RunConfig
    suites: List[str]
    outputs: List[SuiteOutput] = field(default_factory=list)

    @property
    def checks(self) -> List[CheckResult]:
        return [c for out in self.outputs for c in out.checks]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        checks = [c.as_dict() for c in self.checks]
        return {
            "schema_version": SCHEMA_VERSION,
            "version": _version(),
            "seed": self.config.seed,
            "config": self.config.echo(),
            "suites": self.suites,
            "summary": {
                "checks": len(checks),
                "passed": sum(c["passed"] for c in checks),
                "failed": sum(not c["passed"] for c in checks),
                "all_passed": self.passed,
            },
            "checks": checks,
        }


def thread_count(n_jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        return n
    return max(1, min(n_jobs, os.cpu_count() or 1))


def run_suites(config: RunConfig) -> RunReport:
    """Execute the selected suites in parallel; results come back in catalogue order."""
    specs = resolve_suites(config.suites)
    with ThreadPoolExecutor(max_workers=thread_count(len(specs))) as pool:
        futures = [pool.submit(run_suite, s, config) for s in specs]
        outputs = [f.result() for f in futures]
    return RunReport(config, [s.name for s in specs], outputs)


def report_json(report: RunReport) -> str:
    return json.dumps(report.as_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit_report(report: RunReport, path, csv_dir=None) -> list:
    """Write the JSON report and every sidecar; returns the written paths."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report_json(report))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    written = [path]
    side = Path(csv_dir) if csv_dir else path.parent
    for out in report.outputs:
        for name, (header, rows) in sorted(out.sidecars.items()):
            side.mkdir(parents=True, exist_ok=True)
            target = side / name
            with open(target, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
            written.append(target)
    return written


def summary_lines(report: RunReport) -> list:
    lines = []
    for out, name in zip(report.outputs, report.suites):
        ok = sum(c.passed for c in out.checks)
        lines.append(f"[{'PASS' if ok == len(out.checks) else 'FAIL'}] {name}: {ok}/{len(out.checks)} "
                     f"({out.runtime:.2f}s)")
        for c in out.checks:
            if not c.passed:
                lines.append(f"    FAIL {c.name}: measured {c.measured!r} {c.comparison} {c.tolerance!r} "
                             f"[{c.anchor}]")
    n = len(report.checks)
    lines.append(f"{n - len(report.failures)}/{n} checks passed")
    return lines
