"""Command-line client for the verification service.

The CLI is a thin client over the HTTP API: by default it mounts the
FastAPI app in-process (no network), and `--server` points it at a live
instance instead.  Exit codes: 0 all checks pass, 1 check failure,
2 config parse error, 3 validation error, 4 numerical conditioning abort.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .scenario import EXIT_CONDITIONING, EXIT_PARSE_ERROR, EXIT_VALIDATION_ERROR
from .reporting import emit_csv, emit_json, emit_spectra_payload


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # In-process mount of the ASGI app; same HTTP surface, no network.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        from starlette.testclient import TestClient

    from .service import app  # imported lazily; keeps --help cheap

    return TestClient(app)


@click.group()
def main():
    """Scenario-driven verification runner for modular energy forms and semigroups."""


@main.command()
@click.argument("config", type=click.Path(path_type=Path))
@click.option("--out", "out_dir", type=click.Path(path_type=Path), envvar="KMSLAB_OUT",
              default=".", show_default=True, help="Output directory (env KMSLAB_OUT).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="Report file format; spectra always go to CSV.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel check workers.")
@click.option("--server", default=None, help="Base URL of a running service; default in-process.")
def run(config: Path, out_dir: Path, fmt: str, seed: int | None, jobs: int, server: str | None):
    """Run the scenario in CONFIG and write machine-readable reports."""
    try:
        raw = json.loads(config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"config parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)

    body = {"scenario": raw, "jobs": jobs}
    if seed is not None:
        body["seed"] = seed
    with _client(server) as client:
        response = client.post("/scenarios/run", json=body)
    if response.status_code == 422:
        click.echo(f"validation error: {response.json().get('detail')}", err=True)
        sys.exit(EXIT_VALIDATION_ERROR)
    response.raise_for_status()
    payload = response.json()

    name = payload["scenario"]
    if payload["status"] == "conditioning_abort":
        click.echo("aborted: numerical conditioning failure", err=True)
        sys.exit(EXIT_CONDITIONING)

    doc = {
        "schema_version": payload["schema_version"],
        "scenario": name,
        "seed": payload["seed"],
        "reports": payload["reports"],
    }
    try:
        if fmt == "json":
            path = emit_json(doc, out_dir, name)
        else:
            path = emit_csv(doc, out_dir, name)
        spectra_paths = emit_spectra_payload(doc, out_dir, name)
    except OSError as exc:
        click.echo(f"cannot write reports: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)

    for rec in payload["reports"]:
        residuals = rec["residuals"] or {}
        worst = max(residuals.values()) if residuals else None
        summary = f" worst_residual={worst:.3e}" if isinstance(worst, float) else ""
        click.echo(f"[{rec['status']}] {rec['check']}{summary}")
    click.echo(f"wrote {path}")
    for sp in spectra_paths:
        click.echo(f"wrote {sp}")
    sys.exit(payload["exit_code"])


@main.command("list-checks")
@click.option("--server", default=None, help="Base URL of a running service; default in-process.")
def list_checks(server: str | None):
    """List all known check identifiers."""
    with _client(server) as client:
        response = client.get("/checks")
    response.raise_for_status()
    for info in response.json():
        click.echo(f"{info['id']}: {info['description']}")


@main.command()
@click.argument("check_id")
@click.option("--server", default=None, help="Base URL of a running service; default in-process.")
def describe(check_id: str, server: str | None):
    """Print the claim a check certifies and its accepted parameters."""
    with _client(server) as client:
        response = client.get(f"/checks/{check_id}")
    if response.status_code == 404:
        click.echo(f"unknown check id {check_id!r}", err=True)
        sys.exit(EXIT_VALIDATION_ERROR)
    response.raise_for_status()
    info = response.json()
    click.echo(f"id:     {info['id']}")
    click.echo(f"claim:  {info['claim']}")
    click.echo(f"about:  {info['description']}")
    if info["params"]:
        click.echo(f"params: {', '.join(info['params'])}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int):
    """Serve the verification API over HTTP."""
    import uvicorn

    uvicorn.run("kmslab.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
