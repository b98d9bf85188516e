"""Command line client for the experiment service.

Each subcommand posts a JSON config to the matching endpoint and writes the
returned report plus CSV files under --out. By default the service runs
in-process; --server points at a remote instance instead.

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 config rejected,
3 numerical failure or transport error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class _LocalClient:
    """Starlette test client around a fresh in-process app."""

    def __init__(self):
        import warnings

        with warnings.catch_warnings():
            # starlette 1.3 nags about its httpx backend; harmless here
            warnings.filterwarnings("ignore", message=r".*httpx2.*")
            from fastapi.testclient import TestClient

        from .service import create_app

        self._client = TestClient(create_app(), raise_server_exceptions=False)

    def post(self, path: str, payload: dict):
        return self._client.post(path, json=payload)


class _RemoteClient:
    def __init__(self, base_url: str):
        import httpx

        self._client = httpx.Client(base_url=base_url, timeout=600.0)

    def post(self, path: str, payload: dict):
        return self._client.post(path, json=payload)


def _load_config(config_path: str, kind: str, seed: int | None) -> dict:
    try:
        raw = Path(config_path).read_text()
        cfg = json.loads(raw)
    except OSError as exc:
        click.echo(f"error: cannot read config: {exc}", err=True)
        raise SystemExit(EXIT_CONFIG) from exc
    except json.JSONDecodeError as exc:
        click.echo(f"error: config is not valid JSON: {exc}", err=True)
        raise SystemExit(EXIT_CONFIG) from exc
    if not isinstance(cfg, dict):
        click.echo("error: config must be a JSON object", err=True)
        raise SystemExit(EXIT_CONFIG)
    file_kind = cfg.pop("kind", None)
    if file_kind is not None and file_kind != kind:
        click.echo(
            f"error: config declares kind {file_kind!r} but was passed to {kind!r}",
            err=True,
        )
        raise SystemExit(EXIT_CONFIG)
    if seed is not None:
        cfg["seed"] = seed
    return cfg


def _write_outputs(out_dir: str, payload: dict) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(payload["files"]):
        (out / name).write_text(payload["files"][name], newline="")
    report_text = json.dumps(payload["report"], indent=2, sort_keys=True)
    (out / "report.json").write_text(report_text + "\n")
    return out


def _execute(kind: str, config_path: str, out_dir: str, seed: int | None, server: str | None) -> None:
    cfg = _load_config(config_path, kind, seed)
    client = _RemoteClient(server) if server else _LocalClient()
    try:
        resp = client.post(f"/experiments/{kind}", cfg)
    except Exception as exc:
        click.echo(f"error: request failed: {exc}", err=True)
        raise SystemExit(EXIT_NUMERICAL) from exc

    if resp.status_code == 200:
        payload = resp.json()
        out = _write_outputs(out_dir, payload)
        report = payload["report"]
        for a in report["assertions"]:
            mark = "PASS" if a["passed"] else "FAIL"
            obs = "" if a["observed"] is None else f" observed={a['observed']}"
            tolerance = "" if a["tolerance"] is None else f" tol={a['tolerance']}"
            click.echo(f"{mark} {a['name']}{obs}{tolerance}")
        click.echo(f"status: {report['status']}; outputs in {out}")
        raise SystemExit(
            EXIT_PASS if report["status"] == "pass" else EXIT_ASSERTION
        )

    body: dict = {}
    try:
        body = resp.json()
    except ValueError:
        pass
    detail = body.get("detail", body or resp.text)
    if resp.status_code in (400, 422):
        click.echo(f"error: config rejected: {detail}", err=True)
        raise SystemExit(EXIT_CONFIG)
    click.echo(f"error: computation failed: {detail}", err=True)
    raise SystemExit(EXIT_NUMERICAL)


def _experiment_command(kind: str, help_text: str):
    @click.command(name=kind, help=help_text)
    @click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(exists=False, dir_okay=False),
        help="Path to the JSON config for this experiment.",
    )
    @click.option(
        "--out",
        "out_dir",
        required=True,
        type=click.Path(file_okay=False),
        help="Directory for report.json and CSV outputs (created if missing).",
    )
    @click.option("--seed", type=int, default=None, help="Override the config seed.")
    @click.option(
        "--server",
        default=None,
        help="Base URL of a running service; defaults to in-process execution.",
    )
    def cmd(config_path: str, out_dir: str, seed: int | None, server: str | None):
        _execute(kind, config_path, out_dir, seed, server)

    return cmd


@click.group()
@click.version_option(package_name="pickmult")
def main():
    """Multiplier-norm experiments over the unit ball kernel."""


main.add_command(
    _experiment_command(
        "pick-norm",
        "Smallest multiplier norm interpolating values at ball nodes.",
    )
)
main.add_command(
    _experiment_command(
        "holomap-check",
        "Containment, transversality and injectivity checks for a disk map.",
    )
)
main.add_command(
    _experiment_command(
        "operator-r",
        "Boundary quadrature matrix: spectrum, oracle match, kernel modes.",
    )
)
main.add_command(
    _experiment_command(
        "extension-probe",
        "Restricted multiplier norms along nested samples of an embedded disk.",
    )
)
main.add_command(
    _experiment_command(
        "disjoint-union",
        "Randomized check of the union bound for separated node groups.",
    )
)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
