"""Command-line client.

Each subcommand builds the same request model the HTTP endpoint accepts and
either calls the handler in-process (default) or POSTs it to a running
service (``--server``).  Exit codes: 0 success, 1 rejected input, 2
unexpected failure.
"""

from __future__ import annotations

import sys

import click
import httpx

from .errors import RfqubitError
from .service import handlers
from .service.models import (
    FbsDemoRequest,
    FidelitySweepRequest,
    HwpRotateRequest,
    LossBudgetRequest,
    NetlistRunRequest,
)

_ENDPOINTS = {
    FbsDemoRequest: ("/fbs-demo", handlers.fbs_demo),
    HwpRotateRequest: ("/hwp-rotate", handlers.hwp_rotate),
    FidelitySweepRequest: ("/fidelity-sweep", handlers.sweep),
    LossBudgetRequest: ("/loss-budget", handlers.loss_budget),
    NetlistRunRequest: ("/netlist/run", handlers.netlist_run),
}


def _client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=60.0)


def _error_message(resp: httpx.Response) -> str:
    """Pull the human-readable message out of a structured error body."""
    try:
        body = resp.json()
    except ValueError:
        return resp.text
    if isinstance(body, dict) and isinstance(body.get("message"), str):
        return body["message"]
    return resp.text


def _dispatch(ctx: click.Context, request, output: str | None):
    server = ctx.obj
    path, handler = _ENDPOINTS[type(request)]
    try:
        if server is None:
            content, _ = handler(request)
        else:
            with _client(server) as client:
                resp = client.post(path, json=request.model_dump(mode="json"))
            if resp.status_code in (400, 422):
                click.echo(f"error: {_error_message(resp)}", err=True)
                sys.exit(1)
            resp.raise_for_status()
            content = resp.text
    except RfqubitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except (httpx.HTTPError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if output:
        with open(output, "w") as fh:
            fh.write(content)
    else:
        click.echo(content, nl=False)


def _floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated floats, got {text!r}")


output_option = click.option("-o", "--output", type=click.Path(), default=None,
                             help="Write to a file instead of stdout.")


@click.group()
@click.option("--server", envvar="RFQUBIT_SERVER", default=None, metavar="URL",
              help="POST to a running service instead of computing in-process.")
@click.pass_context
def main(ctx, server):
    """Frequency-bin qubit component simulator."""
    ctx.obj = server


@main.command("fbs-demo")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--ratio", type=float, default=100.0, show_default=True,
              help="omega^2/sigma for gauss inputs.")
@click.option("--kind", type=click.Choice(["mono", "gauss"]), default="gauss",
              show_default=True)
@output_option
@click.pass_context
def fbs_demo(ctx, omega, ratio, kind, output):
    """Spectra of both basis states after the frequency beamsplitter (CSV)."""
    _dispatch(ctx, FbsDemoRequest(omega=omega, ratio=ratio, kind=kind), output)


@main.command("hwp-rotate")
@click.option("--theta", type=float, required=True, help="Single-pass AOM angle (rad).")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--mu", default="1+0j", show_default=True, help="Lower-sideband coefficient.")
@click.option("--nu", default="0+0j", show_default=True, help="Upper-sideband coefficient.")
@output_option
@click.pass_context
def hwp_rotate(ctx, theta, omega, mu, nu, output):
    """Rotate a monochromatic qubit; JSON with the extracted 2x2 block."""
    _dispatch(ctx, HwpRotateRequest(theta=theta, omega=omega, mu=mu, nu=nu), output)


@main.command("fidelity-sweep")
@click.option("--ratios", default="10,100,1000", show_default=True,
              help="Comma-separated omega^2/sigma values.")
@click.option("--thetas", default="0.39269908,0.78539816,1.17809725", show_default=True,
              help="Comma-separated AOM angles (rad).")
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--input-index", type=click.IntRange(0, 1), default=0, show_default=True)
@output_option
@click.pass_context
def fidelity_sweep(ctx, ratios, thetas, omega, input_index, output):
    """Out-beam fidelity table over (ratio, theta) (CSV)."""
    req = FidelitySweepRequest(
        ratios=_floats(ratios), thetas=_floats(thetas), omega=omega,
        input_index=input_index,
    )
    _dispatch(ctx, req, output)


@main.command("loss-budget")
@click.option("--eta-aom", type=float, default=0.95, show_default=True)
@click.option("--eta-mm", type=float, default=0.95, show_default=True)
@output_option
@click.pass_context
def loss_budget(ctx, eta_aom, eta_mm, output):
    """Effective device transmission eta_T = eta_aom^2 * eta_mm^2 (JSON)."""
    _dispatch(ctx, LossBudgetRequest(eta_aom=eta_aom, eta_mm=eta_mm), output)


@main.group()
def netlist():
    """Netlist operations."""


@netlist.command("run")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@output_option
@click.pass_context
def netlist_run(ctx, path, fmt, output):
    """Parse and execute a netlist file; emit the result spectra."""
    with open(path) as fh:
        text = fh.read()
    _dispatch(ctx, NetlistRunRequest(text=text, format=fmt), output)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
