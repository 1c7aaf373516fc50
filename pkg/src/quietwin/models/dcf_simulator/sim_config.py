from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.lte_quiet import DutyCycleSchedule


class MeasureAlignment(StrEnum):
    FREE_RUNNING = "free_running"
    QUIET_START_ALIGNED = "quiet_start_aligned"


class SimConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    scenario: Scenario
    n_packets: int = Field(ge=1, description="Tagged-station deliveries to record")
    seed: int = Field(default=0, ge=0, lt=2**64)
    gating: DutyCycleSchedule | None = None
    measure_alignment: MeasureAlignment = MeasureAlignment.QUIET_START_ALIGNED
    replications: int = Field(default=1, ge=1)
    warmup_packets: int = Field(
        default=100, ge=0, description="Deliveries discarded before recording starts"
    )

    @model_validator(mode="after")
    def _check_gating(self) -> Self:
        if (
            self.gating is not None
            and self.measure_alignment is MeasureAlignment.FREE_RUNNING
            and self.gating.quiet_subframes == 0
        ):
            raise ValueError("free-running gating needs at least one quiet subframe")
        return self

    @property
    def gates_channel(self) -> bool:
        """LTE-on intervals freeze the simulated channel."""
        return (
            self.gating is not None
            and self.measure_alignment is MeasureAlignment.FREE_RUNNING
            and not self.gating.always_quiet
        )

    def packets_per_replication(self) -> list[int]:
        share, extra = divmod(self.n_packets, self.replications)
        return [share + (1 if k < extra else 0) for k in range(self.replications)]
