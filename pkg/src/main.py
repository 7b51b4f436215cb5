import functools
import sys

import click
from loguru import logger

from core.constants import ArithmeticMode, OutputFormat, SEndpoint
from core.exceptions import IndependenceBoundsException
from core.logger import setup_logger
from core.settings import settings
from schemas.marginals_schemas import MarginalProfile
from schemas.table_schemas import TableSpec
from services.bounds_service import BoundsService
from services.marginals_service import MarginalsService
from services.measure_service import MeasureFamilyService
from services.oracle_service import OracleService
from services.table_service import TableService
from utils.arithmetic import to_number
from views.renderers import (
    render_bounds,
    render_interval,
    render_measure,
    render_table,
    render_verification,
)

marginals_service = MarginalsService()
measure_service = MeasureFamilyService(marginals_service)
bounds_service = BoundsService(measure_service)
oracle_service = OracleService(measure_service, bounds_service)
table_service = TableService(bounds_service)


def handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except IndependenceBoundsException as error:
            logger.error(f"{type(error).__name__}: {error}")
            click.echo(f"Error: {error}", err=True)
            sys.exit(2)
        except (click.ClickException, click.exceptions.Exit):
            raise
        except Exception as error:
            logger.opt(exception=error).critical("Unexpected failure")
            click.echo(f"Internal error: {error}", err=True)
            sys.exit(1)

    return wrapper


def profile_options(command):
    command = click.option(
        "--marginals",
        help="Comma separated marginal probabilities, e.g. 0.1,0.2,1/3.",
    )(command)
    command = click.option(
        "--input",
        "input_path",
        type=click.Path(dir_okay=False),
        help="CSV (one value per line) or JSON {\"marginals\": [...]} file.",
    )(command)
    command = click.option(
        "--rational",
        is_flag=True,
        help="Exact fraction arithmetic instead of float64.",
    )(command)
    return command


def output_options(command):
    command = click.option(
        "--format",
        "output",
        type=click.Choice([item.value for item in OutputFormat]),
        default=OutputFormat.TEXT.value,
        show_default=True,
    )(command)
    command = click.option(
        "--precision",
        type=click.IntRange(min=1),
        default=None,
        help="Significant digits of rendered numbers.",
    )(command)
    return command


def read_profile(
    marginals: str | None,
    input_path: str | None,
    rational: bool,
    required: bool = True,
) -> MarginalProfile | None:
    mode = ArithmeticMode.RATIONAL if rational else ArithmeticMode.FLOATING
    if marginals is not None and input_path is not None:
        raise click.UsageError("use either --marginals or --input, not both")
    if input_path is not None:
        return marginals_service.load_profile(input_path, mode=mode)
    if marginals is not None:
        values = [value.strip() for value in marginals.split(",")]
        return marginals_service.from_raw(
            [value for value in values if value], mode
        )
    if required:
        raise click.UsageError("one of --marginals or --input is required")
    return None


@click.group()
@click.option(
    "--log-level",
    default=None,
    help=f"Logger level (default {settings.app_log_level}).",
)
def cli(log_level: str | None):
    """Sharp bounds for (n-1)-wise independent events."""
    setup_logger(log_level)


@cli.command()
@profile_options
@output_options
@click.option("--k", type=int, help="Threshold: at least k events occur.")
@click.option("--all-k", is_flag=True, help="Report every k = 1..n.")
@handle_errors
def bound(marginals, input_path, rational, output, precision, k, all_k):
    """Sharp lower and upper bounds on P(at least k events)."""
    if (k is None) == (not all_k):
        raise click.UsageError("give exactly one of --k or --all-k")
    profile = read_profile(marginals, input_path, rational)
    if all_k:
        reports = bounds_service.all_sharp_bounds(profile)
    else:
        reports = [bounds_service.sharp_bounds(profile, k)]
    interval = measure_service.s_interval(profile)
    logger.info(f"Computed {len(reports)} bound(s) for n={profile.n}")
    click.echo(
        render_bounds(
            reports,
            interval,
            OutputFormat(output),
            precision,
            single=not all_k,
        ),
        nl=False,
    )


@cli.command()
@profile_options
@output_options
@handle_errors
def interval(marginals, input_path, rational, output, precision):
    """Feasible interval of the family parameter s."""
    profile = read_profile(marginals, input_path, rational)
    click.echo(
        render_interval(
            measure_service.s_interval(profile),
            OutputFormat(output),
            precision,
        ),
        nl=False,
    )


@cli.command()
@profile_options
@output_options
@click.option("--s", "s_value", type=float, help="Family parameter s.")
@click.option(
    "--s-endpoint",
    type=click.Choice([item.value for item in SEndpoint]),
    help="Use an interval endpoint (or 0) as s.",
)
@handle_errors
def measure(
    marginals, input_path, rational, output, precision, s_value, s_endpoint
):
    """All 2^n atom probabilities of one family member."""
    if (s_value is None) == (s_endpoint is None):
        raise click.UsageError("give exactly one of --s or --s-endpoint")
    profile = read_profile(marginals, input_path, rational)
    if s_endpoint is not None:
        interval = measure_service.s_interval(profile)
        s_value = {
            SEndpoint.MIN: interval.s_min,
            SEndpoint.MAX: interval.s_max,
            SEndpoint.ZERO: to_number(0, profile.mode),
        }[SEndpoint(s_endpoint)]
    atomic = measure_service.build_measure(profile, s_value)
    click.echo(
        render_measure(
            atomic,
            measure_service.measure_to_json(atomic, profile),
            OutputFormat(output),
            precision,
        ),
        nl=False,
    )


@cli.command()
@click.option("--preset", help="paper-table-1 or paper-table-2.")
@click.option("--n", "n_events", type=int, help="Events per profile.")
@click.option("--levels", help="Comma separated uniform marginals.")
@click.option("--k-range", help="Inclusive k range such as 1:4.")
@output_options
@handle_errors
def table(preset, n_events, levels, k_range, output, precision):
    """Reference tables for uniform marginals, evaluated exactly."""
    custom = (n_events, levels, k_range)
    if preset is not None:
        if any(option is not None for option in custom):
            raise click.UsageError("--preset excludes --n/--levels/--k-range")
        spec = table_service.preset_spec(preset)
    else:
        if n_events is None or levels is None:
            raise click.UsageError(
                "give --preset, or --n and --levels for a custom table"
            )
        spec = TableSpec(
            n=n_events,
            marginal_levels=tuple(
                marginals_service.from_raw(
                    [level.strip() for level in levels.split(",")],
                    ArithmeticMode.RATIONAL,
                ).original_values
            ),
            k_range=parse_k_range(k_range, n_events),
        )
    report = table_service.build(spec, precision)
    click.echo(render_table(report, OutputFormat(output)), nl=False)


def parse_k_range(text: str | None, n_events: int) -> tuple[int, int]:
    if text is None:
        return (1, n_events)
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError as error:
        raise click.BadParameter(
            f"expected LOW:HIGH, got {text!r}", param_hint="--k-range"
        ) from error
    if low > high:
        raise click.BadParameter(
            f"empty range {text!r}", param_hint="--k-range"
        )
    return (low, high)


@cli.command()
@profile_options
@output_options
@click.option("--grid", type=click.IntRange(min=2), help="Scan grid points.")
@click.option(
    "--samples",
    type=click.IntRange(min=2),
    help="Measures checked per profile.",
)
@click.option("--seed", type=int, help="Seed for random profiles.")
@click.option("--count", type=click.IntRange(min=1), help="Random profiles.")
@click.option("--max-n", type=click.IntRange(min=2), help="Largest n drawn.")
@handle_errors
def verify(
    marginals,
    input_path,
    rational,
    output,
    precision,
    grid,
    samples,
    seed,
    count,
    max_n,
):
    """Brute-force check of the family, the bounds and their sharpness."""
    profile = read_profile(marginals, input_path, rational, required=False)
    if profile is not None:
        profiles = [profile]
    else:
        seed = settings.app_seed if seed is None else seed
        profiles = oracle_service.random_profiles(
            count,
            max_n,
            seed,
            ArithmeticMode.RATIONAL if rational else ArithmeticMode.FLOATING,
        )
    runs = [
        oracle_service.run_verification(item, grid, samples, seed)
        for item in profiles
    ]
    failed = sum(not run.passed for run in runs)
    if failed:
        logger.warning(f"{failed} of {len(runs)} profiles failed")
    click.echo(
        render_verification(runs, OutputFormat(output), precision), nl=False
    )


if __name__ == "__main__":
    cli()
