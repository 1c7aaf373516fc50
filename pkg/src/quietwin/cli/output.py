import logging
from collections.abc import Iterator
from contextlib import contextmanager
from enum import StrEnum
from pathlib import Path
from typing import Annotated

import pandas as pd
import typer
import yaml
from omegaconf.errors import OmegaConfBaseException
from pydantic import BaseModel, ValidationError
from rich.markup import escape
from rich.panel import Panel

from quietwin.console import console
from quietwin.constants import CSV_DECIMALS
from quietwin.models.backoff_analytics.tau import TauConvergenceError

logger = logging.getLogger(__name__)


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


OutOption = Annotated[
    Path | None,
    typer.Option("--out", "-o", help="Output file; '-' or unset writes to stdout."),
]
FormatOption = Annotated[
    OutputFormat,
    typer.Option("--format", "-f", help="Output format."),
]
SeedOption = Annotated[
    int | None,
    typer.Option("--seed", min=0, max=2**64 - 1, help="Override simulation.seed."),
]


class ErrorDetail(BaseModel):
    loc: str
    msg: str


class ErrorReport(BaseModel):
    error: str
    message: str
    details: list[ErrorDetail] = []


def _error_report(exc: Exception) -> ErrorReport:
    if isinstance(exc, ValidationError):
        return ErrorReport(
            error="validation_error",
            message=f"{exc.error_count()} invalid field(s) in {exc.title}",
            details=[
                ErrorDetail(loc=".".join(str(part) for part in err["loc"]), msg=err["msg"])
                for err in exc.errors()
            ],
        )
    if isinstance(exc, OmegaConfBaseException | yaml.YAMLError):
        return ErrorReport(error="config_error", message=str(exc))
    if isinstance(exc, TauConvergenceError):
        return ErrorReport(error="convergence_error", message=str(exc))
    if isinstance(exc, OSError):
        return ErrorReport(error="io_error", message=str(exc))
    return ErrorReport(error="value_error", message=str(exc))


@contextmanager
def report_errors() -> Iterator[None]:
    """Turn domain and config errors into a stderr panel, a JSON line and exit code 1."""
    try:
        yield
    except (
        ValueError,
        OSError,
        TauConvergenceError,
        OmegaConfBaseException,
        yaml.YAMLError,
    ) as exc:
        report = _error_report(exc)
        logger.debug("Command failed", exc_info=exc)
        body = escape(report.message) + "".join(
            f"\n  [bold]{escape(d.loc)}[/bold]: {escape(d.msg)}" for d in report.details
        )
        console.print(Panel(body, title=f"[red]{report.error}[/red]", expand=False))
        typer.echo(report.model_dump_json(), err=True)
        raise typer.Exit(1) from exc


def note_unused_seed(seed: int | None, command: str) -> None:
    if seed is not None:
        logger.debug("%s is deterministic; --seed %d has no effect", command, seed)


def _write_text(text: str, out: Path | None) -> None:
    if out is None or str(out) == "-":
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("Wrote %s", out)


def write_frame(frame: pd.DataFrame, out: Path | None, fmt: OutputFormat) -> None:
    frame = frame.round(CSV_DECIMALS)
    if fmt is OutputFormat.CSV:
        text = frame.to_csv(index=False, lineterminator="\n")
    else:
        text = frame.to_json(orient="records", indent=2) + "\n"
    _write_text(text, out)


def write_json(payload: str, out: Path | None) -> None:
    _write_text(payload + "\n", out)
