import logging
from typing import cast

import numpy as np
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
from quietwin.models.backoff_analytics.access_model import (
    BackoffAccessModel,
    mean_backoff_delay,
)
from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

analytics_app = typer.Typer(help="Analytic backoff delay model.")

ACCESS_COLUMNS = ["N", "payload_bytes", "L_us", "pr_access"]
MEAN_COLUMNS = ["N", "payload_bytes", "mean_delay_us"]


def _access_rows(job: tuple[Scenario, np.ndarray, bool, bool]) -> list[tuple]:
    scenario, lengths, normalize, initial_difs = job
    model = BackoffAccessModel.build(
        scenario, normalize_on_success=normalize, count_initial_difs=initial_difs
    )
    probs = model.cdf(lengths)
    return [
        (scenario.n_stations, scenario.payload_bytes, length * 1e6, float(p))
        for length, p in zip(lengths, probs, strict=True)
    ]


def _mean_row(job: tuple[Scenario, bool]) -> tuple:
    scenario, initial_difs = job
    model = BackoffAccessModel.build(scenario, count_initial_difs=initial_difs)
    return (scenario.n_stations, scenario.payload_bytes, mean_backoff_delay(model) * 1e6)


@analytics_app.command("access-prob")
def access_prob_command(
    ctx: typer.Context,
    *,
    seed: SeedOption = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
):
    """Pr{d < L} for every (N, payload, L) of the sweep."""
    app_state = cast(AppState, ctx.obj)
    note_unused_seed(seed, "access-prob")

    with report_errors():
        scenario_file = app_state.scenario_file
        lengths = scenario_file.lengths()
        jobs = [
            (
                scenario,
                lengths,
                scenario_file.normalize_on_success,
                scenario_file.count_initial_difs,
            )
            for scenario in scenario_file.scenarios()
        ]
        logger.info("Evaluating %d sweep point(s) at %d length(s)", len(jobs), len(lengths))
        rows = [
            row
            for point in ordered_map(_access_rows, jobs, workers=app_state.workers)
            for row in point
        ]
        frame = pd.DataFrame(rows, columns=ACCESS_COLUMNS).sort_values(
            ["N", "payload_bytes", "L_us"], kind="stable"
        )
        write_frame(frame, out, fmt)


@analytics_app.command("mean-delay")
def mean_delay_command(
    ctx: typer.Context,
    *,
    seed: SeedOption = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
):
    """Mean backoff delay E{d} for every (N, payload) of the sweep."""
    app_state = cast(AppState, ctx.obj)
    note_unused_seed(seed, "mean-delay")

    with report_errors():
        scenario_file = app_state.scenario_file
        if not scenario_file.normalize_on_success:
            raise ValueError("mean-delay needs normalize_on_success = true")
        jobs = [
            (scenario, scenario_file.count_initial_difs)
            for scenario in scenario_file.scenarios()
        ]
        logger.info("Integrating mean delay for %d sweep point(s)", len(jobs))
        rows = ordered_map(_mean_row, jobs, workers=app_state.workers)
        frame = pd.DataFrame(rows, columns=MEAN_COLUMNS).sort_values(
            ["N", "payload_bytes"], kind="stable"
        )
        write_frame(frame, out, fmt)
