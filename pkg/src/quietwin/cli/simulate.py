from typing import cast

import pandas as pd
import typer
from pydantic import BaseModel, TypeAdapter

from quietwin.cli.output import (
    FormatOption,
    OutOption,
    OutputFormat,
    SeedOption,
    report_errors,
    write_frame,
    write_json,
)
from quietwin.console import console
from quietwin.models.app_state import AppState
from quietwin.models.backoff_analytics.access_model import BackoffAccessModel
from quietwin.models.dcf_simulator.sim_report import SimSummary
from quietwin.models.dcf_simulator.simulator import gated_run, run
from quietwin.models.dcf_simulator.validation import (
    ValidationResults,
    ks_distance,
    validate_point,
)

simulate_app = typer.Typer(help="Monte Carlo DCF simulation.")


class SimulationPoint(BaseModel):
    n_stations: int
    payload_bytes: int
    result: SimSummary


@simulate_app.command("simulate")
def simulate_command(
    ctx: typer.Context,
    *,
    seed: SeedOption = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.CSV,
):
    """Tagged-station delays (CSV) or per-point summaries (JSON)."""
    app_state = cast(AppState, ctx.obj)

    with report_errors():
        scenario_file = app_state.scenario_file
        frames: list[pd.DataFrame] = []
        points: list[SimulationPoint] = []

        for scenario in scenario_file.scenarios():
            cfg = scenario_file.sim_config(scenario, seed)
            simulate = gated_run if cfg.gating is not None else run
            report = simulate(cfg, workers=app_state.workers)
            console.print(report.render_summary())

            if fmt is OutputFormat.CSV:
                frame = report.to_frame()
                frame.insert(0, "payload_bytes", scenario.payload_bytes)
                frame.insert(0, "N", scenario.n_stations)
                frames.append(frame)
            else:
                model = BackoffAccessModel.build(
                    scenario, count_initial_difs=scenario_file.count_initial_difs
                )
                points.append(
                    SimulationPoint(
                        n_stations=scenario.n_stations,
                        payload_bytes=scenario.payload_bytes,
                        result=report.summary(ks_distance(report, model)),
                    )
                )

        if fmt is OutputFormat.CSV:
            write_frame(pd.concat(frames, ignore_index=True), out, fmt)
        else:
            payload = TypeAdapter(list[SimulationPoint]).dump_json(points, indent=2)
            write_json(payload.decode(), out)


@simulate_app.command("validate")
def validate_command(
    ctx: typer.Context,
    *,
    seed: SeedOption = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.JSON,
):
    """Compare the analytic delay distribution against ungated simulation, per sweep point.

    JSON writes the summary with its overall verdict; CSV writes one row per point.
    """
    app_state = cast(AppState, ctx.obj)

    with report_errors():
        scenario_file = app_state.scenario_file
        thresholds = scenario_file.simulation.thresholds
        results = ValidationResults()

        for scenario in scenario_file.scenarios():
            cfg = scenario_file.sim_config(scenario, seed).model_copy(update={"gating": None})
            report = run(cfg, workers=app_state.workers)
            model = BackoffAccessModel.build(
                scenario, count_initial_difs=scenario_file.count_initial_difs
            )
            results.append(validate_point(report, model, thresholds))

        console.print(results.render_results())
        console.print(results.render_summary())
        if fmt is OutputFormat.CSV:
            write_frame(results.to_frame(), out, fmt)
        else:
            resolved_seed = scenario_file.simulation.seed if seed is None else seed
            write_json(results.summary(resolved_seed).model_dump_json(indent=2), out)
