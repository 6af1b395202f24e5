"""
Command line interface for hbinterp.

Each subcommand runs one task and writes a single report (JSON by
default) to --out or standard output. Exit codes: 0 on success, 2 on
input or validation errors, 3 on numerical failures.
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from hbinterp.core.config import HbConfig, OutputFormat, create_default_config
from hbinterp.core.errors import HbError
from hbinterp.core.runner import JobConfig, JobRunner
from hbinterp.core.task_registry import get_global_registry


# Messages and logs go to stderr; stdout carries reports only
console = Console(stderr=True)

DEFAULT_CONFIG = "hbinterp.yml"
INPUT_FILE = click.Path(exists=True, dir_okay=False)


def setup_logging(verbose: bool = False, level: str = "INFO") -> None:
    """Configure logs with Rich."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_time=False, show_path=False)],
        force=True,
    )


def _load_config(path: Optional[str]) -> HbConfig:
    if path:
        return HbConfig.load_from_file(path)
    default = Path.cwd() / DEFAULT_CONFIG
    return HbConfig.load_from_file(default) if default.exists() else create_default_config()


@click.group(invoke_without_command=True)
@click.option("--verbose", "-v", is_flag=True, help="Detailed output")
@click.option("--version", is_flag=True, help="Show version")
@click.option("--config", "-c", "config_path", type=INPUT_FILE, help=f"Configuration file (default: {DEFAULT_CONFIG})")
@click.pass_context
def main(ctx: click.Context, verbose: bool, version: bool, config_path: Optional[str]) -> None:
    """
    hbinterp - interpolating sequences in de Branges-Rovnyak spaces

    Pythagorean mates, H(b) decompositions, local Dirichlet energies,
    Carleson and boundary sum conditions, Nevanlinna-Pick solutions and
    Steinhaus random sequence experiments.
    """
    if version:
        from hbinterp import __version__

        click.echo(f"hbinterp version {__version__}")
        return

    try:
        config = _load_config(config_path)
    except (ValidationError, ValueError, OSError) as e:
        console.print(f"❌ Invalid configuration: {e}")
        sys.exit(2)
    setup_logging(verbose, config.log_level)
    ctx.obj = {"config": config}

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


def output_options(f: Callable[..., Any]) -> Callable[..., Any]:
    """--out and --format shared by every report-producing subcommand."""
    f = click.option(
        "--format",
        "-f",
        "output_format",
        type=click.Choice([fmt.value for fmt in OutputFormat]),
        help="Report format (default from the configuration)",
    )(f)
    f = click.option("--out", "-o", type=click.Path(dir_okay=False), help="Output file (default: stdout)")(f)
    return f


def run_task(subcommand: str) -> Callable[[Callable[..., Dict[str, Any]]], Callable[..., None]]:
    """
    Turns a function returning the task parameters into a subcommand body
    that runs the task, writes the report and maps errors to exit codes.
    """

    def decorator(collect: Callable[..., Dict[str, Any]]) -> Callable[..., None]:
        @functools.wraps(collect)
        @click.pass_context
        def wrapper(ctx: click.Context, out: Optional[str], output_format: Optional[str], **kwargs: Any) -> None:
            config: HbConfig = ctx.obj["config"]
            params = collect(**kwargs)
            job = JobConfig(
                subcommand=subcommand,
                params=params,
                out=Path(out) if out else None,
                format=OutputFormat(output_format) if output_format else config.output.format,
            )
            try:
                _, content = JobRunner(config, get_global_registry()).execute(job)
            except HbError as e:
                console.print(f"❌ {type(e).__name__}: {e}")
                sys.exit(e.exit_code)
            except (FileNotFoundError, ValueError, KeyError) as e:
                console.print(f"❌ Invalid input: {e}")
                sys.exit(2)

            if job.out is None:
                click.echo(content, nl=False)
            else:
                console.print(f"✅ {subcommand} report written to {job.out}")

        return wrapper

    return decorator


grid_option = click.option("--grid-size", type=click.IntRange(min=16), help="Boundary grid size")
tol_option = click.option("--tol", type=click.FloatRange(min=0, min_open=True), help="Tolerance override")
order_option = click.option("--M", "M", type=click.IntRange(min=1), default=1, show_default=True, help="Maximal boundary multiplicity")
family_option = click.option("--family", required=True, help="Family, e.g. power:c=1,beta=1 or geometric:q=0.5")


@main.command()
@click.option("--b", "b", type=INPUT_FILE, required=True, help="JSON file with b = num/den")
@grid_option
@tol_option
@output_options
@run_task("mate")
def mate(**params: Any) -> Dict[str, Any]:
    """Pythagorean mate of a rational b"""
    return params


@main.command("pair-from-mate")
@click.option("--a", "a", type=INPUT_FILE, help="JSON file with an outer mate a = num/den")
@click.option(
    "--zero",
    "zeros",
    type=(float, float, int),
    multiple=True,
    help="Boundary zero RE IM MULTIPLICITY (repeatable)",
)
@grid_option
@tol_option
@output_options
@run_task("pair-from-mate")
def pair_from_mate(zeros: Tuple[Tuple[float, float, int], ...], **params: Any) -> Dict[str, Any]:
    """Pair (a, b) from a mate or from boundary zeros"""
    return {**params, "zeros": [list(z) for z in zeros] or None}


@main.command("verify-pair")
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@grid_option
@tol_option
@output_options
@run_task("verify-pair")
def verify_pair(**params: Any) -> Dict[str, Any]:
    """Check the invariants of a pair"""
    return params


@main.command()
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@click.option("--radial", type=click.IntRange(min=2), help="Radial samples")
@click.option("--angular", type=click.IntRange(min=4), help="Angular samples")
@output_options
@run_task("corona")
def corona(**params: Any) -> Dict[str, Any]:
    """Lower bound of |a|^2 + |b|^2 on the disk"""
    return params


@main.command()
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@click.option("--seq", type=INPUT_FILE, required=True, help="Sequence JSON file")
@output_options
@run_task("decide")
def decide(**params: Any) -> Dict[str, Any]:
    """Decide whether a sequence is interpolating for H(b)"""
    return params


@main.command()
@click.option("--seq", type=INPUT_FILE, required=True, help="Sequence JSON file")
@output_options
@run_task("carleson")
def carleson(**params: Any) -> Dict[str, Any]:
    """Carleson constant of a finite sequence"""
    return params


@main.command()
@click.option("--f", "f", type=INPUT_FILE, required=True, help="Function JSON file")
@click.option("--zeta", required=True, help="Boundary point, e.g. 1 or 0,1")
@click.option("--order", type=click.IntRange(min=1), required=True, help="Order N")
@click.option("--method", type=click.Choice(["coefficients", "quadrature"]), default="coefficients", show_default=True)
@tol_option
@output_options
@run_task("dnorm")
def dnorm(**params: Any) -> Dict[str, Any]:
    """Local Dirichlet energy D_zeta^N(f)"""
    return params


@main.command()
@click.option("--seq", type=INPUT_FILE, required=True, help="Zeros of the Blaschke product")
@click.option("--zeta", required=True, help="Boundary point")
@click.option("--derivs", type=click.IntRange(min=0), default=1, show_default=True, help="Highest derivative")
@output_options
@run_task("blaschke")
def blaschke(**params: Any) -> Dict[str, Any]:
    """Boundary derivatives of a finite Blaschke product"""
    return params


@main.command()
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@click.option("--seq", type=INPUT_FILE, required=True, help="Sequence JSON file")
@click.option("--cap", type=click.IntRange(min=1), help="Largest Gram matrix")
@output_options
@run_task("gram")
def gram(**params: Any) -> Dict[str, Any]:
    """Gram matrix eigenvalue trends"""
    return params


@main.command()
@click.option("--symbol", type=INPUT_FILE, required=True, help="Polynomial symbol a")
@click.option("--f", "f", type=INPUT_FILE, required=True, help="Function JSON file")
@click.option("--start", type=click.IntRange(min=1), help="First truncation")
@click.option("--doublings", type=click.IntRange(min=0), help="Number of doublings")
@click.option("--budget", type=click.FloatRange(min=0, min_open=True), help="Preimage norm budget")
@output_options
@run_task("membership")
def membership(**params: Any) -> Dict[str, Any]:
    """Residual curve of f in the range of T_conj(a)"""
    return params


@main.command("np-solve")
@click.option("--nodes", type=INPUT_FILE, required=True, help="JSON with 'nodes' and 'targets'")
@grid_option
@tol_option
@output_options
@run_task("np-solve")
def np_solve(**params: Any) -> Dict[str, Any]:
    """Minimal-norm Nevanlinna-Pick interpolation"""
    return params


@main.command()
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@click.option("--seq", type=INPUT_FILE, required=True, help="Sequence JSON file")
@click.option("--values", type=INPUT_FILE, required=True, help="Target values JSON file")
@grid_option
@output_options
@run_task("construct")
def construct(**params: Any) -> Dict[str, Any]:
    """Multiplier interpolating values on a finite sequence"""
    return params


@main.command("add-point")
@click.option("--pair", type=INPUT_FILE, required=True, help="Pair JSON file")
@click.option("--F", "F", type=INPUT_FILE, required=True, help="Current interpolant (num/den)")
@click.option("--seq", type=INPUT_FILE, required=True, help="Points already interpolated")
@click.option("--point", required=True, help="New point")
@click.option("--value", required=True, help="Value at the new point")
@output_options
@run_task("add-point")
def add_point(**params: Any) -> Dict[str, Any]:
    """Add one interpolation point to a multiplier"""
    return params


@main.command()
@family_option
@order_option
@click.option("--trials", type=click.IntRange(min=1), help="Number of trials")
@click.option("--truncate", type=click.IntRange(min=1), help="Largest truncation")
@click.option("--seed", type=click.IntRange(min=0), help="Master seed")
@click.option("--threshold", type=click.FloatRange(min=0, min_open=True), help="Exceedance threshold")
@click.option("--threads", type=click.IntRange(min=1), help="Worker threads (default: HB_THREADS)")
@output_options
@run_task("simulate")
def simulate(**params: Any) -> Dict[str, Any]:
    """0-1 law experiment for Steinhaus sequences"""
    return params


@main.command("three-series")
@family_option
@order_option
@click.option("--count", type=click.IntRange(min=1), help="Number of terms")
@output_options
@run_task("three-series")
def three_series(**params: Any) -> Dict[str, Any]:
    """Three-series diagnostics"""
    return params


@main.command()
@family_option
@order_option
@click.option("--count", type=click.IntRange(min=1), help="Number of terms")
@output_options
@run_task("dyadic")
def dyadic(**params: Any) -> Dict[str, Any]:
    """Dyadic counts of a radii family"""
    return params


@main.command()
@click.option("--r", "r", type=click.FloatRange(min=0, max=1, max_open=True), required=True, help="Radius")
@order_option
@click.option("--draws", type=click.IntRange(min=1), help="Monte-Carlo draws")
@click.option("--seed", type=click.IntRange(min=0), help="Seed")
@output_options
@run_task("exceedance")
def exceedance(**params: Any) -> Dict[str, Any]:
    """Exact and empirical P(X > 1)"""
    return params


@main.command()
@click.option("--category", help="Only tasks of this category")
def tasks(category: Optional[str]) -> None:
    """List the available tasks"""
    registry = get_global_registry()
    listed = registry.list_tasks_by_category(category) if category else registry.list_tasks()

    table = Table(title="hbinterp tasks")
    table.add_column("Name", style="magenta")
    table.add_column("Category", style="blue")
    table.add_column("Description", style="cyan")
    for task in listed:
        table.add_row(task.name, task.category.value, task.description)
    Console().print(table)

    if not listed:
        console.print("⚠️  No task found")


@main.group()
def config() -> None:
    """Configuration management"""
    pass


@config.command("init")
@click.option("--path", "-p", type=click.Path(dir_okay=False), default=DEFAULT_CONFIG, show_default=True)
@click.option("--force", is_flag=True, help="Overwrite an existing file")
def config_init(path: str, force: bool) -> None:
    """Write a default configuration file"""
    target = Path(path)
    if target.exists() and not force:
        console.print(f"❌ Configuration already exists: {target}")
        console.print("Use --force to overwrite.")
        sys.exit(2)
    create_default_config().save_to_file(target)
    console.print(f"✅ Configuration written to {target}")


@config.command("show")
@click.pass_context
def config_show(ctx: click.Context) -> None:
    """Show the active configuration"""
    active: HbConfig = ctx.obj["config"]
    table = Table(title="hbinterp configuration")
    table.add_column("Section", style="cyan")
    table.add_column("Key", style="yellow")
    table.add_column("Value", style="green")
    for section, values in active.model_dump(mode="json").items():
        if isinstance(values, dict):
            for key, value in values.items():
                table.add_row(section, key, str(value))
        else:
            table.add_row(section, "", str(values))
    Console().print(table)


@config.command("validate")
@click.argument("path", type=INPUT_FILE, default=DEFAULT_CONFIG, required=False)
def config_validate(path: str) -> None:
    """Validate a configuration file"""
    try:
        HbConfig.load_from_file(path)
    except ValidationError as e:
        console.print("❌ Invalid configuration:")
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"])
            console.print(f"  • {location}: {error['msg']}")
        sys.exit(2)
    except (ValueError, OSError) as e:
        console.print(f"❌ Invalid configuration: {e}")
        sys.exit(2)
    console.print("✅ Valid configuration")


if __name__ == "__main__":
    main()
