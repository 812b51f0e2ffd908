"""Command-line interface for zenerwave.

Runs are described by JSON run specs; flags only select the spec, the output
directory, strict validation and verbosity.

Commands:
- run: Execute the command named in the spec.
- check: Validate material parameters and write report.json.
- modulus: Sweep Ê(ω) and M(iω), and certify zero-freeness of P̃.
- kernel: Sample the solution kernel K(x, t).
- simulate: Compute the displacement field for a boundary signal.
- oracle: Cross-check the constitutive law in the time domain.

Exit codes: 0 success, 1 usage or run-spec errors, 2 inadmissible
parameters, 3 numerical failures.
"""

from __future__ import annotations

import logging
import math
import sys
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
import numpy as np

from . import __version__
from .config import RunSpec, load_config, load_run_spec, resolve_threads
from .errors import ConvergenceError, EvaluationError, ParameterError, SpecError
from .inversion import GaussianProbe, kernel_grid, stress_history, strain_stress_columns
from .modulus import frequency_response, log_grid, winding_number
from .oracle import SampledPath, constitutive_residual
from .output import Manifest, write_csv, write_json, write_plot_data
from .params import MaterialParams, ValidationReport, validate
from .quadrature import QuadratureConfig
from .simulate import simulate_field


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INADMISSIBLE = 2
EXIT_NUMERIC = 3

ORACLE_THRESHOLDS = {"elastic": 0.0, "real_order": 1e-2, "full_system": 5e-2}


class ExitCodeGroup(click.Group):
    """Group that reports usage errors with exit code 1 instead of click's 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        if standalone_mode:
            sys.exit(rv if isinstance(rv, int) else EXIT_OK)
        return rv


@dataclass
class RunContext:
    """Everything a command needs, resolved from the spec, config and flags."""

    spec: RunSpec
    settings: dict[str, Any]
    cfg: QuadratureConfig
    output_dir: Path
    strict: bool
    threads: int
    manifest: Manifest

    @property
    def params(self) -> MaterialParams:
        return self.spec.params


def _fail(title: str, detail: str, code: int) -> None:
    click.echo(click.style(title, fg="red", bold=True), err=True)
    click.echo(click.style(f"  Error: {detail}", fg="white"), err=True)
    raise SystemExit(code) from None


def _prepare(
    spec_path: Path, out: Path | None, strict: bool, command: str | None = None
) -> RunContext:
    try:
        spec = load_run_spec(spec_path, command=command)
        settings = load_config(Path.cwd())
        cfg = spec.quadrature_config(settings)
        threads = resolve_threads()
    except SpecError as exc:
        where = f"{exc.path}:{exc.line}:{exc.column}" if exc.line is not None else str(exc.path)
        click.echo(click.style("Invalid run spec:", fg="red", bold=True), err=True)
        click.echo(click.style(f"  File: {where}", fg="yellow"), err=True)
        click.echo(click.style(f"  Error: {exc.message}", fg="white"), err=True)
        raise SystemExit(EXIT_USAGE) from None
    except ParameterError as exc:
        _fail("Invalid configuration:", exc.message, EXIT_USAGE)

    output_dir = out or spec.output_dir or Path(settings["output_dir"])
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail("Cannot create output directory:", f"{output_dir}: {exc.strerror}", EXIT_USAGE)
    return RunContext(
        spec=spec,
        settings=settings,
        cfg=cfg,
        output_dir=output_dir,
        strict=strict,
        threads=threads,
        manifest=Manifest(output_dir),
    )


def _gate(ctx: RunContext) -> ValidationReport:
    """Validate parameters, write report.json and stop with exit 2 if inadmissible."""
    report = validate(ctx.params, strict=ctx.strict)
    payload = {"params": ctx.params.to_mapping(), "report": report.to_mapping()}
    ctx.manifest.add(write_json(ctx.output_dir / "report.json", payload))
    if not report.verdict.is_admissible:
        _finish(ctx, report)
        click.echo(click.style("Inadmissible parameters:", fg="red", bold=True), err=True)
        click.echo(click.style(f"  Failed: {', '.join(report.failures)}", fg="yellow"), err=True)
        click.echo(f"  td1 residual: {report.td1_residual:.6g}", err=True)
        raise SystemExit(EXIT_INADMISSIBLE)
    return report


def _finish(ctx: RunContext, report: ValidationReport | None = None, **extra: Any) -> None:
    fields: dict[str, Any] = {
        "version": __version__,
        "command": ctx.spec.command,
        "seed": ctx.spec.seed,
        "params": ctx.params.to_mapping(),
        "quadrature": ctx.cfg.to_mapping(),
        "threads": ctx.threads,
    }
    if report is not None:
        fields["verdict"] = report.verdict.value
    fields.update(extra)
    ctx.manifest.write(**fields)


# --- command bodies ---


def _run_check(ctx: RunContext) -> None:
    report = _gate(ctx)
    _finish(ctx, report)
    click.echo(f"Verdict: {report.verdict.value}")


def _run_modulus(ctx: RunContext) -> None:
    report = _gate(ctx)
    sweep = ctx.spec.section("modulus", ctx.settings["modulus"])
    omegas = log_grid(float(sweep["omega_min"]), float(sweep["omega_max"]), int(sweep["points"]))
    response = frequency_response(omegas, ctx.params)
    header = ("omega", "re_E", "im_E", "re_M", "im_M")
    ctx.manifest.add(write_csv(ctx.output_dir / "modulus.csv", header, response.rows()))
    if ctx.settings.get("plot_data", True):
        blocks = [("omega re_E im_E re_M im_M", response.rows())]
        ctx.manifest.add(write_plot_data(ctx.output_dir / "modulus.dat", blocks))

    contour = ctx.spec.section("winding", ctx.settings["winding"])
    certificate = winding_number(
        ctx.params,
        epsilon=float(contour["epsilon"]),
        R=float(contour["radius"]),
        n_samples=int(contour["samples"]),
    )
    ctx.manifest.add(write_json(ctx.output_dir / "winding.json", certificate.to_mapping()))
    _finish(ctx, report, winding=certificate.winding)
    click.echo(
        f"Swept {omegas.size} frequencies; min loss {float(np.min(response.loss)):.3e}; "
        f"winding {certificate.winding} ({'valid' if certificate.valid else 'INVALID'})"
    )


def _probe(ctx: RunContext) -> GaussianProbe | None:
    block = ctx.spec.sections.get("probe")
    if not block:
        return None
    if "width" not in block:
        raise ParameterError("probe needs a 'width'")
    centre = block.get("centre")
    return GaussianProbe(float(block["width"]), None if centre is None else float(centre))


def _impulse_payload(xs, impulses) -> list[dict[str, Any]]:
    return [
        {"x": float(x), "impulses": [{"delay": i.delay, "weight": i.weight} for i in train]}
        for x, train in zip(xs, impulses, strict=True)
        if train
    ]


def _run_kernel(ctx: RunContext) -> None:
    report = _gate(ctx)
    grid = kernel_grid(
        ctx.spec.grid("xs"),
        ctx.spec.grid("ts"),
        ctx.params,
        ctx.cfg,
        threads=ctx.threads,
        probe=_probe(ctx),
    )
    ctx.manifest.add(write_csv(ctx.output_dir / "kernel.csv", ("x", "t", "K"), grid.rows()))
    if ctx.settings.get("plot_data", True):
        blocks = [
            (f"x = {x:.17g}", zip(grid.ts, grid.values[i], strict=True))
            for i, x in enumerate(grid.xs)
        ]
        ctx.manifest.add(write_plot_data(ctx.output_dir / "kernel.dat", blocks))
    impulses = _impulse_payload(grid.xs, grid.impulses)
    if impulses:
        ctx.manifest.add(write_json(ctx.output_dir / "impulses.json", {"impulses": impulses}))
    _finish(
        ctx,
        report,
        analytic=grid.analytic,
        delta_weight=grid.delta_weight,
        upper_limits=list(grid.upper_limits),
    )
    click.echo(f"Kernel sampled on {grid.xs.size} x {grid.ts.size} grid into {ctx.output_dir}")


def _run_simulate(ctx: RunContext) -> None:
    report = _gate(ctx)
    signal = ctx.spec.signal()
    field = simulate_field(
        signal,
        ctx.spec.grid("xs"),
        ctx.spec.grid("ts"),
        ctx.params,
        ctx.cfg,
        threads=ctx.threads,
    )
    ctx.manifest.add(write_csv(ctx.output_dir / "field.csv", ("x", "t", "u"), field.rows()))
    if ctx.settings.get("plot_data", True):
        blocks = [
            (f"x = {x:.17g}", zip(field.ts, field.u[i], strict=True))
            for i, x in enumerate(field.xs)
        ]
        ctx.manifest.add(write_plot_data(ctx.output_dir / "field.dat", blocks))
    for k, t in enumerate((ctx.spec.sections.get("grid") or {}).get("snapshots", [])):
        rows = zip(field.xs, field.snapshot(float(t)), strict=True)
        path = ctx.output_dir / f"snapshot_{k:03d}.csv"
        ctx.manifest.add(write_csv(path, ("x", "u"), rows))
    impulses = _impulse_payload(field.xs, field.impulses)
    if impulses:
        ctx.manifest.add(write_json(ctx.output_dir / "impulses.json", {"impulses": impulses}))
    _finish(ctx, report, signal=signal.to_mapping())
    click.echo(f"Field computed on {field.xs.size} x {field.ts.size} grid into {ctx.output_dir}")


def _oracle_residuals(
    params: MaterialParams, cfg: QuadratureConfig, block: dict[str, Any]
) -> dict[str, float]:
    """Residuals of the three time-domain checks, keyed like ORACLE_THRESHOLDS."""
    dt = float(block["dt"])
    n = int(round(float(block["duration"]) / dt)) + 1
    x = float(block["x"])
    strain = SampledPath.from_function(lambda t: 1.0 - np.exp(-t), dt, n)

    alpha, beta = params.alpha, params.beta
    elastic = MaterialParams(params.a1, params.a1, params.b1, params.b1, alpha, beta)
    real_order = MaterialParams(params.a1, params.a2, 0.0, 0.0, alpha, beta)
    stress = stress_history(strain, real_order, cfg)
    residuals = {
        "elastic": constitutive_residual(strain, strain, elastic),
        "real_order": constitutive_residual(stress, strain, real_order),
    }

    rod = params.with_rod_length(math.inf)
    ts = dt * np.arange(1, n)
    eps, sigma = strain_stress_columns(x, ts, rod, cfg)
    residuals["full_system"] = constitutive_residual(
        SampledPath(dt, np.concatenate(([0.0], sigma))),
        SampledPath(dt, np.concatenate(([0.0], eps))),
        rod,
    )
    return residuals


def _run_oracle(ctx: RunContext) -> None:
    report = _gate(ctx)
    block = ctx.spec.section("oracle", ctx.settings["oracle"])
    residuals = _oracle_residuals(ctx.params, ctx.cfg, block)
    checks = {
        name: {
            "residual": value,
            "threshold": ORACLE_THRESHOLDS[name],
            "passed": value <= ORACLE_THRESHOLDS[name],
        }
        for name, value in residuals.items()
    }
    ctx.manifest.add(write_json(ctx.output_dir / "oracle.json", {"oracle": block, "checks": checks}))
    passed = all(check["passed"] for check in checks.values())
    _finish(ctx, report, oracle_passed=passed)
    for name, check in checks.items():
        status = click.style("ok", fg="green") if check["passed"] else click.style("FAIL", fg="red")
        click.echo(f"{name:12s} residual {check['residual']:.3e}  [{status}]")
    if not passed:
        raise SystemExit(EXIT_NUMERIC)


COMMAND_BODIES: dict[str, Callable[[RunContext], None]] = {
    "check": _run_check,
    "modulus": _run_modulus,
    "kernel": _run_kernel,
    "simulate": _run_simulate,
    "oracle": _run_oracle,
}


def _execute(
    command: str | None, spec_path: Path, out: Path | None, strict: bool, quiet: bool
) -> None:
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx = _prepare(spec_path, out, strict, command)
    try:
        COMMAND_BODIES[ctx.spec.command](ctx)
    except (EvaluationError, ConvergenceError) as exc:
        _fail("Numerical failure:", str(exc), EXIT_NUMERIC)
    except ParameterError as exc:
        _fail("Invalid run spec:", exc.message, EXIT_USAGE)
    except OSError as exc:
        _fail("Cannot write output:", f"{exc.filename}: {exc.strerror}", EXIT_USAGE)


def run_options(func):
    func = click.option("--quiet", is_flag=True, help="Only log warnings and errors")(func)
    func = click.option("--strict", is_flag=True, help="Require strict restriction margins")(func)
    func = click.option(
        "--out",
        type=click.Path(file_okay=False, path_type=Path),
        help="Output directory (overrides the spec and zenerwave.yaml)",
    )(func)
    func = click.option(
        "--spec",
        "spec_path",
        required=True,
        type=click.Path(dir_okay=False, path_type=Path),
        help="JSON run specification",
    )(func)
    return func


@click.group(cls=ExitCodeGroup)
@click.version_option(version=__version__, prog_name="zenerwave")
def cli():
    """Wave propagation in complex-order fractional Zener rods."""


@cli.command()
@run_options
def run(spec_path: Path, out: Path | None, strict: bool, quiet: bool):
    """Run the command named in the spec."""
    _execute(None, spec_path, out, strict, quiet)


def _subcommand(name: str, help_text: str) -> None:
    @run_options
    def command(spec_path: Path, out: Path | None, strict: bool, quiet: bool):
        _execute(name, spec_path, out, strict, quiet)

    command.__doc__ = help_text
    cli.command(name=name)(command)


_subcommand("check", "Validate material parameters.")
_subcommand("modulus", "Sweep the complex modulus and certify P̃ has no zeros.")
_subcommand("kernel", "Sample the solution kernel K(x, t).")
_subcommand("simulate", "Compute the displacement field for a boundary signal.")
_subcommand("oracle", "Cross-check the constitutive law in the time domain.")


def main():
    """Entry point for the CLI application."""
    cli()
