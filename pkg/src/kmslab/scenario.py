"""Scenario execution: build state once, run the declared checks, collect reports.

Determinism contract: a scenario with a fixed seed produces identical
numerical report content on every run (only wall times vary).  Each check
draws from its own RNG stream keyed by (seed, declaration index), so the
result is independent of scheduling even when checks run in parallel.

A scenario-level wall-clock budget degrades gracefully: checks that would
start after the budget is exhausted are reported as "skipped (budget)".
"""

from __future__ import annotations

import importlib.resources
import json
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import ValidationError

from .checks import REGISTRY, build_state, run_check
from .errors import ConfigError
from .reporting import Report
from .schemas import ScenarioConfig

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_VALIDATION_ERROR = 3
EXIT_CONDITIONING = 4


def parse_scenario(raw: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def run_scenario(cfg: ScenarioConfig, seed: int | None = None, jobs: int = 1) -> list[Report]:
    """Execute the declared checks; reports come back in declaration order."""
    if seed is not None:
        cfg = cfg.model_copy(update={"seed": seed})
    entries = cfg.check_entries()
    for entry in entries:
        if entry.id not in REGISTRY:
            raise ConfigError(f"unknown check id {entry.id!r}")
    state = build_state(cfg)
    started = time.perf_counter()

    def execute(index_entry):
        index, entry = index_entry
        if cfg.budget_seconds is not None and time.perf_counter() - started > cfg.budget_seconds:
            cdef = REGISTRY[entry.id]
            return Report(check=entry.id, claim=cdef.claim, params=dict(entry.params),
                          status="skipped (budget)", detail="scenario budget exhausted")
        rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(index,)))
        tol = cfg.tolerances.get(entry.id)
        report = run_check(entry.id, state, dict(entry.params), tol, rng)
        if entry.negative_control:
            report.params["negative_control"] = True
        return report

    indexed = list(enumerate(entries))
    if jobs > 1 and len(indexed) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(execute, indexed))
    else:
        reports = [execute(pair) for pair in indexed]
    return reports


def exit_code_for(reports: list[Report]) -> int:
    failed = any(r.counts_for_exit and not r.passed for r in reports)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def bundled_scenario_names() -> list[str]:
    root = importlib.resources.files("kmslab") / "data"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_scenario(name: str) -> ScenarioConfig:
    path = importlib.resources.files("kmslab") / "data" / f"{name}.json"
    return parse_scenario(json.loads(path.read_text()))
