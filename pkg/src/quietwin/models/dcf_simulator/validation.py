import logging
import math
from enum import Enum

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from rich.console import RenderableType
from rich.panel import Panel
from rich.table import Table
from scipy.stats import ks_1samp

from quietwin.models.backoff_analytics.access_model import (
    BackoffAccessModel,
    mean_backoff_delay,
)
from quietwin.models.dcf_simulator.sim_report import SimReport

logger = logging.getLogger(__name__)

CHECKED_COLLISIONS = 4
VALIDATION_COLUMNS = [
    "N",
    "payload_bytes",
    "n_packets",
    "ks_distance",
    "analytic_mean_us",
    "sim_mean_us",
    "rel_err",
    "status",
]


class ValidationStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    INSUFFICIENT = "insufficient samples"

    __STYLES__ = {
        PASS: "green",
        FAIL: "red",
        INSUFFICIENT: "yellow",
    }


class ValidationThresholds(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    ks_max: float = Field(default=0.05, gt=0, le=1, title="Max KS Distance")
    rel_err_max: float = Field(default=0.05, gt=0, title="Max Relative Mean Error")
    min_samples: int = Field(
        default=1000, ge=1, description="Below this many deliveries no verdict is given"
    )


class ValidationPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_stations: int
    payload_bytes: int
    n_packets: int
    ks_distance: float
    analytic_mean_us: float
    sim_mean_us: float
    rel_err: float
    # (observed - expected) / binomial standard error for i = 0..3 collisions.
    collision_z: list[float]
    status: ValidationStatus


def collision_z_scores(report: SimReport, model: BackoffAccessModel) -> list[float]:
    """Empirical collision frequencies against P_c^i P_s, conditioned on delivery."""
    n = report.n_packets
    hist = report.collision_histogram
    expected = model.collision_dist.probs / model.collision_dist.success_mass
    scores = []
    for i in range(min(CHECKED_COLLISIONS, len(expected))):
        p = float(expected[i])
        se = math.sqrt(p * (1.0 - p) / n)
        scores.append((hist[i] / n - p) / se if se > 0 else 0.0)
    return scores


def ks_distance(report: SimReport, model: BackoffAccessModel) -> float:
    grid, cdf = model.cdf_grid()
    result = ks_1samp(report.delays, lambda x: np.interp(x, grid, cdf))
    return float(result.statistic)


def validate_point(
    report: SimReport,
    model: BackoffAccessModel,
    thresholds: ValidationThresholds | None = None,
) -> ValidationPoint:
    thresholds = thresholds or ValidationThresholds()
    scenario = model.scenario

    analytic_mean = mean_backoff_delay(model)
    sim_mean = report.mean_delay
    ks = ks_distance(report, model)
    rel_err = abs(analytic_mean - sim_mean) / sim_mean

    if report.n_packets < thresholds.min_samples:
        status = ValidationStatus.INSUFFICIENT
    elif ks <= thresholds.ks_max and rel_err <= thresholds.rel_err_max:
        status = ValidationStatus.PASS
    else:
        status = ValidationStatus.FAIL

    logger.info(
        "N=%d payload=%dB: KS %.4f, rel_err %.4f -> %s",
        scenario.n_stations,
        scenario.payload_bytes,
        ks,
        rel_err,
        status.value,
    )
    return ValidationPoint(
        n_stations=scenario.n_stations,
        payload_bytes=scenario.payload_bytes,
        n_packets=report.n_packets,
        ks_distance=ks,
        analytic_mean_us=analytic_mean * 1e6,
        sim_mean_us=sim_mean * 1e6,
        rel_err=rel_err,
        collision_z=collision_z_scores(report, model),
        status=status,
    )


class ValidationSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    overall: ValidationStatus
    seed: int
    points: list[ValidationPoint]


class ValidationResults(list[ValidationPoint]):
    def get_status_counts(self) -> dict[ValidationStatus, int]:
        counts: dict[ValidationStatus, int] = {status: 0 for status in ValidationStatus}

        for point in self:
            counts[point.status] += 1

        return counts

    @property
    def overall(self) -> ValidationStatus:
        counts = self.get_status_counts()
        if counts[ValidationStatus.FAIL]:
            return ValidationStatus.FAIL
        if counts[ValidationStatus.INSUFFICIENT] or not self:
            return ValidationStatus.INSUFFICIENT
        return ValidationStatus.PASS

    def summary(self, seed: int) -> ValidationSummary:
        return ValidationSummary(overall=self.overall, seed=seed, points=list(self))

    def to_frame(self) -> pd.DataFrame:
        """One row per point; collision z-scores are left to the JSON summary."""
        return pd.DataFrame(
            [
                (
                    point.n_stations,
                    point.payload_bytes,
                    point.n_packets,
                    point.ks_distance,
                    point.analytic_mean_us,
                    point.sim_mean_us,
                    point.rel_err,
                    point.status.value,
                )
                for point in self
            ],
            columns=VALIDATION_COLUMNS,
        )

    def render_summary(self) -> RenderableType:
        counts = self.get_status_counts()
        style = ValidationStatus.__STYLES__.get(self.overall.value, "white")

        return Panel(
            f"[bold]Points:[/bold] {len(self)}\n"
            f"[green]Pass:[/green] {counts[ValidationStatus.PASS]}\n"
            f"[red]Fail:[/red] {counts[ValidationStatus.FAIL]}\n"
            f"[yellow]Insufficient:[/yellow] {counts[ValidationStatus.INSUFFICIENT]}\n"
            f"[bold]Overall:[/bold] [{style}]{self.overall.value}[/{style}]",
            title="Validation Summary",
            expand=False,
        )

    def render_results(self) -> RenderableType:
        table = Table(title="Analytic vs Simulation")

        table.add_column("Status", style="bold")
        table.add_column("N", justify="right")
        table.add_column("Payload (B)", justify="right")
        table.add_column("KS", justify="right")
        table.add_column("Analytic (us)", justify="right")
        table.add_column("Sim (us)", justify="right")
        table.add_column("Rel. err", justify="right")
        table.add_column("Collision z (i=0..3)")

        for point in self:
            style = ValidationStatus.__STYLES__.get(point.status.value, "white")
            table.add_row(
                f"[{style}]{point.status.value}[/{style}]",
                str(point.n_stations),
                str(point.payload_bytes),
                f"{point.ks_distance:.4f}",
                f"{point.analytic_mean_us:.1f}",
                f"{point.sim_mean_us:.1f}",
                f"{point.rel_err:.4f}",
                " ".join(f"{z:+.2f}" for z in point.collision_z),
            )

        return table
