import logging
from pathlib import Path
from typing import Any, Literal, Self, cast

import numpy as np
from omegaconf import OmegaConf
from pydantic import BaseModel, ConfigDict, Field, model_validator

from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.dcf_simulator.sim_config import MeasureAlignment, SimConfig
from quietwin.models.dcf_simulator.validation import ValidationThresholds
from quietwin.models.dcf_timing import (
    FIGURE_CALIBRATION,
    US,
    DcfParameters,
    PhyProfile,
    default_profiles,
)
from quietwin.models.lte_quiet import (
    DutyCycleSchedule,
    LteFrameConfig,
    TddConfig,
    duty_cycle_schedule,
)

logger = logging.getLogger(__name__)


class TimingBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    slot_us: float = Field(default=9.0, gt=0)
    sifs_us: float = Field(default=16.0, gt=0)
    difs_us: float = Field(default=34.0, gt=0)
    eifs_us: float | None = Field(
        default=None, gt=0, description="Derived from SIFS, ACK airtime and DIFS when unset"
    )
    cw_min: int = Field(default=16, ge=2)
    cw_max: int = Field(default=1024, ge=2)
    retry_limit: int = Field(default=7, ge=0)
    ack_bytes: int = Field(default=14, ge=0)
    mac_overhead_bytes: int = Field(default=36, ge=0)


class ProfileBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    data_rate_mbps: float = Field(gt=0)
    control_rate_mbps: float = Field(gt=0)
    preamble_us: float = Field(ge=0)
    symbol_us: float = Field(gt=0)

    def to_profile(self) -> PhyProfile:
        return PhyProfile(
            name=self.name,
            data_rate=self.data_rate_mbps * 1e6,
            control_rate=self.control_rate_mbps * 1e6,
            preamble_header_time=self.preamble_us * US,
            symbol_time=self.symbol_us * US,
        )


class LengthRange(BaseModel):
    """Inclusive grid start_us, start_us + step_us, ..., stop_us."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    start_us: float = Field(default=0.0, ge=0)
    stop_us: float = Field(gt=0)
    step_us: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_bounds(self) -> Self:
        if self.stop_us <= self.start_us:
            raise ValueError(
                f"stop_us ({self.stop_us}) must be greater than start_us ({self.start_us})"
            )
        return self

    def values(self) -> list[float]:
        n = int(np.floor((self.stop_us - self.start_us) / self.step_us + 1e-9))
        return [self.start_us + k * self.step_us for k in range(n + 1)]


class SweepBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_stations: list[int] = Field(default_factory=lambda: [2], min_length=1)
    payload_bytes: list[int] = Field(default_factory=lambda: [1500], min_length=1)
    l_grid_us: list[float] | LengthRange = Field(
        default_factory=lambda: LengthRange(start_us=0.0, stop_us=3000.0, step_us=100.0),
        title="Quiet Period Lengths (us)",
    )

    @model_validator(mode="after")
    def _check_lists(self) -> Self:
        if any(n < 1 for n in self.n_stations):
            raise ValueError(f"n_stations entries must be >= 1, got {self.n_stations}")
        if any(p <= 0 for p in self.payload_bytes):
            raise ValueError(f"payload_bytes entries must be > 0, got {self.payload_bytes}")
        lengths = self.lengths_us()
        if not lengths:
            raise ValueError("l_grid_us must not be empty")
        if lengths[0] < 0:
            raise ValueError("l_grid_us entries must be >= 0")
        if any(b <= a for a, b in zip(lengths, lengths[1:], strict=False)):
            raise ValueError("l_grid_us must be strictly increasing")
        return self

    def lengths_us(self) -> list[float]:
        if isinstance(self.l_grid_us, LengthRange):
            return self.l_grid_us.values()
        return list(self.l_grid_us)


class GatingBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    quiet_subframes: int = Field(ge=0, title="Quiet Length X (subframes)")
    period_subframes: int = Field(ge=1, title="Period Y (subframes)")

    def schedule(self) -> DutyCycleSchedule:
        return duty_cycle_schedule(self.quiet_subframes, self.period_subframes)


class SimulationBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_packets: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    replications: int = Field(default=1, ge=1)
    warmup_packets: int = Field(default=100, ge=0)
    gating: GatingBlock | None = None
    alignment: MeasureAlignment = MeasureAlignment.QUIET_START_ALIGNED
    thresholds: ValidationThresholds = Field(default_factory=ValidationThresholds)


class LteBlock(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: Literal["fdd", "tdd"] = "fdd"
    pdcch_symbols: int = Field(default=1, ge=1, le=3)
    crs_symbol_positions: list[int] = Field(default_factory=lambda: [0, 4])
    tdd_config: int = Field(default=0, title="UL/DL Configuration")
    mute: list[int] | None = Field(
        default=None, description="Muted UL subframes; all UL subframes when unset"
    )


class ScenarioFile(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    timing: TimingBlock = Field(default_factory=TimingBlock)
    profiles: list[ProfileBlock] = Field(
        default_factory=list, description="Extra PHY profiles, added to the shipped set"
    )
    data_profile: str = Field(default=FIGURE_CALIBRATION, title="Data PHY Profile")
    sweep: SweepBlock = Field(default_factory=SweepBlock)
    simulation: SimulationBlock = Field(default_factory=SimulationBlock)
    lte: LteBlock = Field(default_factory=LteBlock)
    normalize_on_success: bool = True
    count_initial_difs: bool = False

    @model_validator(mode="after")
    def _check_references(self) -> Self:
        known = self.available_profiles()
        if self.data_profile not in known:
            raise ValueError(
                f"unknown data_profile {self.data_profile!r}; known: {sorted(known)}"
            )
        self.dcf_parameters()
        return self

    def available_profiles(self) -> dict[str, PhyProfile]:
        profiles = default_profiles()
        profiles.update({block.name: block.to_profile() for block in self.profiles})
        return profiles

    def dcf_parameters(self) -> DcfParameters:
        timing = self.timing
        return DcfParameters(
            slot_time=timing.slot_us * US,
            sifs=timing.sifs_us * US,
            difs=timing.difs_us * US,
            eifs=None if timing.eifs_us is None else timing.eifs_us * US,
            cw_min=timing.cw_min,
            cw_max=timing.cw_max,
            retry_limit=timing.retry_limit,
            ack_bytes=timing.ack_bytes,
            mac_overhead_bytes=timing.mac_overhead_bytes,
            phy=self.available_profiles()[self.data_profile],
        )

    def scenarios(self) -> list[Scenario]:
        """Sweep points ordered by (N, payload)."""
        params = self.dcf_parameters()
        return [
            Scenario(n_stations=n, payload_bytes=payload, params=params)
            for n in sorted(set(self.sweep.n_stations))
            for payload in sorted(set(self.sweep.payload_bytes))
        ]

    def lengths(self) -> np.ndarray:
        return np.asarray(self.sweep.lengths_us()) * US

    def sim_config(self, scenario: Scenario, seed: int | None = None) -> SimConfig:
        sim = self.simulation
        return SimConfig(
            scenario=scenario,
            n_packets=sim.n_packets,
            seed=sim.seed if seed is None else seed,
            gating=None if sim.gating is None else sim.gating.schedule(),
            measure_alignment=sim.alignment,
            replications=sim.replications,
            warmup_packets=sim.warmup_packets,
        )

    def frame_config(self) -> LteFrameConfig:
        return LteFrameConfig(
            pdcch_symbols=self.lte.pdcch_symbols,
            crs_symbol_positions=frozenset(self.lte.crs_symbol_positions),
        )

    def tdd_config(self) -> TddConfig:
        if self.lte.mute is None:
            return TddConfig.mute_all_uplink(self.lte.tdd_config)
        return TddConfig(
            config_index=self.lte.tdd_config, muted_subframes=frozenset(self.lte.mute)
        )

    @classmethod
    def load_raw(cls, path: Path | None, overrides: list[str]) -> dict[str, Any]:
        return cast(
            dict[str, Any],
            OmegaConf.to_container(
                OmegaConf.merge(
                    OmegaConf.load(path) if path is not None else OmegaConf.create(),
                    OmegaConf.from_dotlist(overrides),
                )
            ),
        )

    @classmethod
    def load(cls, path: Path | None, overrides: list[str]) -> "ScenarioFile":
        if path is not None and not path.is_file():
            raise FileNotFoundError(f"scenario file not found: {path}")
        scenario_file = cls.model_validate(cls.load_raw(path, overrides))
        logger.debug("Loaded scenario file %s with %d override(s)", path, len(overrides))
        return scenario_file
