"""Machine-readable check reports and their JSON/CSV serialization.

Every verification emits a Report: check id, a citation-free statement of
the claim being tested ("plumbing" for pure infrastructure checks), the
parameters, measured residuals, the tolerance, and a status.  Reports are
deterministic for a fixed configuration and seed; the only volatile field
is wall_time_s.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1

Status = str  # "pass" | "fail" | "not_applicable" | "skipped (budget)"


@dataclass
class Report:
    check: str
    claim: str
    params: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    tolerance: float | dict | None = None
    status: Status = "pass"
    detail: str = ""
    wall_time_s: float = 0.0
    spectra: dict = field(default_factory=dict)  # name -> 1d eigenvalue array

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def counts_for_exit(self) -> bool:
        """Negative controls and skipped/not-applicable checks never dirty the exit code."""
        if self.params.get("negative_control"):
            return False
        return self.status in ("pass", "fail")


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def report_to_dict(report: Report) -> dict:
    return {
        "check": report.check,
        "claim": report.claim,
        "params": _jsonable(report.params),
        "residuals": _jsonable(report.residuals),
        "tolerance": _jsonable(report.tolerance),
        "status": report.status,
        "detail": report.detail,
        "wall_time_s": report.wall_time_s,
        "spectra": {k: _jsonable(np.asarray(v)) for k, v in report.spectra.items()},
    }


def run_payload(scenario_name: str, seed: int, reports: list[Report]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario_name,
        "seed": seed,
        "reports": [report_to_dict(r) for r in reports],
    }


def emit_json(payload: dict, out_dir: str | Path, scenario_name: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{scenario_name}_reports.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def emit_csv(payload: dict, out_dir: str | Path, scenario_name: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{scenario_name}_reports.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "status", "claim", "max_residual", "tolerance", "wall_time_s"])
        for rec in payload["reports"]:
            residuals = rec["residuals"] or {}
            worst = max(residuals.values()) if residuals else ""
            tol = rec["tolerance"]
            writer.writerow([rec["check"], rec["status"], rec["claim"], worst, tol, rec["wall_time_s"]])
    return path


def emit_spectra_payload(payload: dict, out_dir: str | Path, scenario_name: str) -> list[Path]:
    """One CSV per exported spectrum plus its counting function."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for report in payload["reports"]:
        for name, eigenvalues in (report.get("spectra") or {}).items():
            eigenvalues = np.sort(np.asarray(eigenvalues, dtype=float))
            spath = out_dir / f"{scenario_name}_{name}_spectrum.csv"
            with spath.open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["index", "eigenvalue"])
                for i, ev in enumerate(eigenvalues):
                    writer.writerow([i, repr(float(ev))])
            written.append(spath)
            cpath = out_dir / f"{scenario_name}_{name}_counting.csv"
            with cpath.open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["lambda", "count"])
                for ev in np.unique(eigenvalues):
                    count = int(np.searchsorted(eigenvalues, ev, side="right"))
                    writer.writerow([repr(float(ev)), count])
            written.append(cpath)
    return written
