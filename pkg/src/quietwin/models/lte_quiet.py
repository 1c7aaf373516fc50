"""LTE-U quiet periods from downlink frame structure (FDD SDL) and TD-LTE muting."""

import logging
import math
from collections.abc import Sequence
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

SUBFRAME = 1e-3
SUBFRAMES_PER_FRAME = 10
SLOTS_PER_SUBFRAME = 2

# 3GPP TS 36.211 Table 4.2-2, uplink-downlink configurations.
TDD_PATTERNS: dict[int, str] = {
    0: "DSUUUDSUUU",
    1: "DSUUDDSUUD",
    2: "DSUDDDSUDD",
    3: "DSUUUDDDDD",
    4: "DSUUDDDDDD",
    5: "DSUDDDDDDD",
    6: "DSUUUDSUUD",
}


def longest_circular_run(flags: Sequence[bool]) -> int:
    """Longest run of True in a periodic sequence."""
    if all(flags):
        return len(flags)
    best = run = 0
    # Two passes cover runs that wrap around the end.
    for flag in [*flags, *flags]:
        run = run + 1 if flag else 0
        best = max(best, run)
    return min(best, len(flags))


class LteFrameConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    cyclic_prefix: Literal["normal"] = "normal"
    symbols_per_slot: int = 7
    slot_duration: float = Field(default=0.5e-3, gt=0)
    pdcch_symbols: int = Field(default=1, ge=1, le=3)
    crs_symbol_positions: frozenset[int] = Field(
        default=frozenset({0, 4}),
        description="CRS symbol indices within a slot (antenna port 0)",
    )

    @model_validator(mode="after")
    def _check_geometry(self) -> Self:
        if self.cyclic_prefix == "normal" and self.symbols_per_slot != 7:
            raise ValueError("normal cyclic prefix has 7 symbols per slot")
        outside = {s for s in self.crs_symbol_positions if not 0 <= s < self.symbols_per_slot}
        if outside:
            raise ValueError(f"CRS positions outside the slot: {sorted(outside)}")
        return self

    @property
    def symbol_duration(self) -> float:
        return self.slot_duration / self.symbols_per_slot

    def busy_symbols(self) -> list[bool]:
        """Mandatory-transmission flags over the symbols of one subframe."""
        n_symbols = SLOTS_PER_SUBFRAME * self.symbols_per_slot
        return [
            symbol < self.pdcch_symbols
            or symbol % self.symbols_per_slot in self.crs_symbol_positions
            for symbol in range(n_symbols)
        ]


def fdd_max_quiet(cfg: LteFrameConfig) -> float:
    """Longest downlink gap between PDCCH and CRS symbols, in seconds."""
    free = [not busy for busy in cfg.busy_symbols()]
    run = longest_circular_run(free)
    logger.debug("FDD longest free run: %d symbols", run)
    return run * cfg.symbol_duration


class TddConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    config_index: int = Field(ge=0, le=6, title="UL/DL Configuration")
    muted_subframes: frozenset[int] = Field(default_factory=frozenset)

    @field_validator("muted_subframes")
    @classmethod
    def _check_range(cls, value: frozenset[int]) -> frozenset[int]:
        outside = sorted(s for s in value if not 0 <= s < SUBFRAMES_PER_FRAME)
        if outside:
            raise ValueError(f"subframe indices must be in 0..9, got {outside}")
        return value

    @model_validator(mode="after")
    def _check_muting(self) -> Self:
        not_uplink = sorted(s for s in self.muted_subframes if self.pattern[s] != "U")
        if not_uplink:
            raise ValueError(
                f"only UL subframes can be muted; configuration {self.config_index} "
                f"has {[self.pattern[s] for s in not_uplink]} at {not_uplink}"
            )
        return self

    @property
    def pattern(self) -> str:
        return TDD_PATTERNS[self.config_index]

    @classmethod
    def mute_all_uplink(cls, config_index: int) -> "TddConfig":
        if config_index not in TDD_PATTERNS:
            raise ValueError(f"config_index must be in 0..6, got {config_index}")
        pattern = TDD_PATTERNS[config_index]
        return cls(
            config_index=config_index,
            muted_subframes=frozenset(i for i, kind in enumerate(pattern) if kind == "U"),
        )


def tdd_max_quiet(cfg: TddConfig) -> float:
    muted = [i in cfg.muted_subframes for i in range(SUBFRAMES_PER_FRAME)]
    return longest_circular_run(muted) * SUBFRAME


class DutyCycleSchedule(BaseModel):
    """LTE busy for (period - quiet) subframes, then quiet for `quiet` subframes, repeating."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    quiet_subframes: int = Field(ge=0)
    period_subframes: int = Field(ge=1)
    subframe: float = Field(default=SUBFRAME, gt=0)

    @model_validator(mode="after")
    def _check_quiet(self) -> Self:
        if self.quiet_subframes > self.period_subframes:
            raise ValueError(
                f"quiet subframes ({self.quiet_subframes}) exceed the period "
                f"({self.period_subframes})"
            )
        return self

    @property
    def period(self) -> float:
        return self.period_subframes * self.subframe

    @property
    def quiet_interval(self) -> float:
        return self.quiet_subframes * self.subframe

    @property
    def busy_interval(self) -> float:
        return self.period - self.quiet_interval

    @property
    def quiet_fraction(self) -> float:
        return self.quiet_subframes / self.period_subframes

    @property
    def always_quiet(self) -> bool:
        return self.quiet_subframes == self.period_subframes

    def quiet_window(self, t: float) -> tuple[float, float]:
        """Quiet interval [start, end) containing t, or the next one if t is in a busy part."""
        if not self.quiet_subframes:
            raise ValueError("schedule has no quiet interval")
        # Times within float noise of a period boundary belong to the next period.
        cycle_start = math.floor(t / self.period + 1e-9) * self.period
        start = cycle_start + self.busy_interval
        end = cycle_start + self.period
        if t >= end:
            start, end = start + self.period, end + self.period
        return start, end


def duty_cycle_schedule(quiet_len: int, period: int) -> DutyCycleSchedule:
    """Mute X subframes out of every Y."""
    if quiet_len > period:
        raise ValueError(f"quiet length X={quiet_len} exceeds period Y={period}")
    return DutyCycleSchedule(quiet_subframes=quiet_len, period_subframes=period)
