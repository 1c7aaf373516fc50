import logging
import math
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)

US = 1e-6
MBPS = 1e6


class PhyProfile(BaseModel):
    """Rate profile of a PHY: airtime of a frame depends only on these values."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(title="Profile Name")
    data_rate: float = Field(gt=0, description="Data rate in bits per second")
    control_rate: float = Field(
        gt=0, description="Rate used for control frames (ACK) in bits per second"
    )
    preamble_header_time: float = Field(
        ge=0, description="PLCP preamble and header duration in seconds"
    )
    symbol_time: float = Field(
        gt=0, description="Airtime granularity (OFDM symbol) in seconds"
    )

    def with_rate(self, rate: float) -> "PhyProfile":
        """Same framing at another rate, used for ACK/control airtimes."""
        return self.model_copy(update={"data_rate": rate})


def _profile(
    name: str,
    data_mbps: float,
    control_mbps: float,
    preamble_us: float,
    symbol_us: float,
) -> PhyProfile:
    return PhyProfile(
        name=name,
        data_rate=data_mbps * MBPS,
        control_rate=control_mbps * MBPS,
        preamble_header_time=preamble_us * US,
        symbol_time=symbol_us * US,
    )


FIGURE_CALIBRATION = "figure-calibration"

_HT20_RATES = (6.5, 13.0, 19.5, 26.0, 39.0, 52.0, 58.5, 65.0)


def default_profiles() -> dict[str, PhyProfile]:
    profiles = [
        *(
            _profile(f"ht20-mcs{mcs}", rate, 6.0 if mcs < 3 else 24.0, 36.0, 4.0)
            for mcs, rate in enumerate(_HT20_RATES)
        ),
        _profile("ofdm-6", 6.0, 6.0, 20.0, 4.0),
        _profile("ofdm-24", 24.0, 24.0, 20.0, 4.0),
        _profile("ofdm-54", 54.0, 24.0, 20.0, 4.0),
        _profile("ht40-mcs7-sgi", 150.0, 24.0, 36.0, 3.6),
        _profile("ht40-mcs15-sgi", 300.0, 24.0, 40.0, 3.6),
        # Long-preamble, low-rate profile placing T_s(1500 B) just under 3 ms.
        _profile(FIGURE_CALIBRATION, 5.5, 1.0, 286.0, 1.0),
    ]
    return {profile.name: profile for profile in profiles}


def frame_airtime(payload_bytes: int, phy: PhyProfile, overhead_bytes: int = 0) -> float:
    """Airtime of a frame in seconds, payload bits rounded up to whole symbols."""
    if payload_bytes < 0:
        raise ValueError(f"payload_bytes must be >= 0, got {payload_bytes}")
    if overhead_bytes < 0:
        raise ValueError(f"overhead_bytes must be >= 0, got {overhead_bytes}")

    bits = (payload_bytes + overhead_bytes) * 8
    bits_per_symbol = phy.data_rate * phy.symbol_time
    # round() absorbs float noise such as 112 / 0.9999999999999999
    n_symbols = math.ceil(round(bits / bits_per_symbol, 9))
    return phy.preamble_header_time + n_symbols * phy.symbol_time


class DcfParameters(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    slot_time: float = Field(default=9 * US, gt=0, title="Slot Time (s)")
    sifs: float = Field(default=16 * US, gt=0, title="SIFS (s)")
    difs: float = Field(default=34 * US, gt=0, title="DIFS (s)")
    eifs: float | None = Field(
        default=None,
        gt=0,
        title="EIFS (s)",
        description="Defaults to SIFS + ACK airtime at the control rate + DIFS",
    )
    cw_min: int = Field(default=16, ge=2, title="CW_min (window size)")
    cw_max: int = Field(default=1024, ge=2, title="CW_max (window size)")
    retry_limit: int = Field(default=7, ge=0, title="Retry Limit R")
    ack_bytes: int = Field(default=14, ge=0)
    mac_overhead_bytes: int = Field(default=36, ge=0)
    phy: PhyProfile = Field(
        default_factory=lambda: default_profiles()[FIGURE_CALIBRATION]
    )

    @model_validator(mode="after")
    def _check_windows(self) -> Self:
        if self.cw_max < self.cw_min:
            raise ValueError(
                f"cw_max ({self.cw_max}) must be >= cw_min ({self.cw_min})"
            )
        ratio = self.cw_max // self.cw_min
        if self.cw_max % self.cw_min or ratio & (ratio - 1):
            raise ValueError(
                f"cw_max / cw_min must be a power of two, got {self.cw_max}/{self.cw_min}"
            )
        return self

    @model_validator(mode="after")
    def _derive_eifs(self) -> Self:
        if self.eifs is None:
            eifs = self.sifs + self.ack_airtime + self.difs
            # frozen model: bypass __setattr__ once during validation
            object.__setattr__(self, "eifs", eifs)
            logger.debug("Derived EIFS = %.1f us", eifs / US)
        if self.eifs < self.difs:
            raise ValueError(f"eifs ({self.eifs}) must be >= difs ({self.difs})")
        return self

    @property
    def ack_airtime(self) -> float:
        return frame_airtime(self.ack_bytes, self.phy.with_rate(self.phy.control_rate))

    def with_phy(self, phy: PhyProfile) -> "DcfParameters":
        data = self.model_dump(exclude={"phy"})
        if "eifs" in self.model_fields_set:
            return DcfParameters(**data, phy=phy)
        return DcfParameters(**{**data, "eifs": None}, phy=phy)


class ExchangeDurations(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_data: float
    t_ack: float
    t_success: float
    t_collision: float


def exchange_durations(params: DcfParameters, payload_bytes: int) -> ExchangeDurations:
    """T_s and T_c of one basic-access exchange (no RTS/CTS)."""
    if payload_bytes <= 0:
        raise ValueError(f"payload_bytes must be > 0, got {payload_bytes}")

    t_data = frame_airtime(payload_bytes, params.phy, params.mac_overhead_bytes)
    t_ack = params.ack_airtime
    return ExchangeDurations(
        t_data=t_data,
        t_ack=t_ack,
        t_success=t_data + params.sifs + t_ack + params.difs,
        t_collision=t_data + params.eifs,
    )


def airtime_band(
    payload_bytes: int,
    profiles: dict[str, PhyProfile],
    overhead_bytes: int = 0,
) -> tuple[float, float]:
    airtimes = [
        frame_airtime(payload_bytes, profile, overhead_bytes)
        for profile in profiles.values()
    ]
    return min(airtimes), max(airtimes)
