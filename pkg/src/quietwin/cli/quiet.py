from typing import Annotated, cast

import pandas as pd
import typer

from quietwin.cli.output import (
    FormatOption,
    OutOption,
    OutputFormat,
    SeedOption,
    note_unused_seed,
    report_errors,
    write_frame,
)
from quietwin.models.app_state import AppState
from quietwin.models.lte_quiet import fdd_max_quiet, tdd_max_quiet

quiet_app = typer.Typer(help="LTE-U quiet periods.")


@quiet_app.command("quiet-period")
def quiet_period_command(
    ctx: typer.Context,
    *,
    mode: Annotated[
        str | None,
        typer.Option("--mode", help="fdd or tdd; overrides lte.mode."),
    ] = None,
    tdd_config: Annotated[
        int | None,
        typer.Option("--tdd-config", help="TD-LTE UL/DL configuration (0..6)."),
    ] = None,
    mute: Annotated[
        list[int] | None,
        typer.Option("--mute", help="Muted UL subframe index; repeat for several."),
    ] = None,
    pdcch_symbols: Annotated[
        int | None,
        typer.Option("--pdcch-symbols", help="PDCCH symbols at the start of a subframe."),
    ] = None,
    seed: SeedOption = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
):
    """Longest quiet period LTE can offer without breaking its mandatory transmissions."""
    app_state = cast(AppState, ctx.obj)
    note_unused_seed(seed, "quiet-period")

    with report_errors():
        lte = app_state.scenario_file.lte
        updates: dict[str, object] = {}
        if mode is not None:
            if mode not in {"fdd", "tdd"}:
                raise ValueError(f"--mode must be fdd or tdd, got {mode!r}")
            updates["mode"] = mode
        if tdd_config is not None:
            updates["tdd_config"] = tdd_config
        if mute:
            updates["mute"] = mute
        if pdcch_symbols is not None:
            updates["pdcch_symbols"] = pdcch_symbols
        scenario_file = app_state.scenario_file.model_validate(
            {
                **app_state.scenario_file.model_dump(),
                "lte": {**lte.model_dump(), **updates},
            }
        )

        resolved = scenario_file.lte.mode
        if resolved == "fdd":
            max_quiet = fdd_max_quiet(scenario_file.frame_config())
        else:
            max_quiet = tdd_max_quiet(scenario_file.tdd_config())

        frame = pd.DataFrame([(resolved, max_quiet * 1e6)], columns=["mode", "max_quiet_us"])
        write_frame(frame, out, fmt)
