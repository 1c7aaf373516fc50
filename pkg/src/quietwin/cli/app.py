from pathlib import Path
from typing import Annotated

import typer

from quietwin.cli.analytics import analytics_app
from quietwin.cli.quiet import quiet_app
from quietwin.cli.simulate import simulate_app
from quietwin.models.app_state import AppState
from quietwin.utils.setup_logs import setup_logs

app = typer.Typer(
    no_args_is_help=True,
    help="quietwin: Wi-Fi channel access inside LTE-U quiet periods.",
    epilog=(
        "Examples:\n"
        "  quietwin --config configs/access_by_stations.json access-prob\n"
        "  quietwin quiet-period --mode tdd --tdd-config 0 --mute 2 --mute 3 --mute 4\n"
        "  quietwin --config configs/validate.json validate --seed 7"
    ),
)

app.add_typer(analytics_app, name=None)
app.add_typer(quiet_app, name=None)
app.add_typer(simulate_app, name=None)


@app.callback()
def setup_app(
    ctx: typer.Context,
    *,
    config_path: Annotated[
        Path | None,
        typer.Option(
            "--config",
            "-c",
            help="Scenario file (JSON or YAML). Built-in defaults when unset.",
            envvar="QUIETWIN_CONFIG",
            show_envvar=True,
        ),
    ] = None,
    config_overrides: Annotated[
        list[str],
        typer.Option(
            "--with",
            help="Override scenario fields ('key=value'). Can be specified multiple times. Example: --with sweep.n_stations='[2,4]' --with data_profile=ofdm-54",
        ),
    ] = [],
    workers: Annotated[
        int,
        typer.Option(
            "--workers",
            "-j",
            min=1,
            help="Worker processes for sweep points and replications.",
            envvar="QUIETWIN_WORKERS",
            show_envvar=True,
        ),
    ] = 1,
    verbose: int = typer.Option(
        0,
        "--verbose",
        "-v",
        count=True,
        min=0,
        max=3,
        help="Increase verbosity (-v warnings, -vv info, -vvv debug)",
    ),
):
    setup_logs(verbose_level=verbose)
    ctx.obj = AppState(
        config_path=config_path,
        config_overrides=config_overrides,
        workers=workers,
    )
