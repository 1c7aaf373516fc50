from pydantic import BaseModel, ConfigDict, Field

from quietwin.models.dcf_timing import DcfParameters, ExchangeDurations, exchange_durations


class Scenario(BaseModel):
    """N saturated stations sending payload_bytes frames with the given DCF parameters."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n_stations: int = Field(ge=1, title="Number of Stations N")
    payload_bytes: int = Field(gt=0, title="Payload Size (bytes)")
    params: DcfParameters = Field(default_factory=DcfParameters)

    @property
    def exchanges(self) -> ExchangeDurations:
        return exchange_durations(self.params, self.payload_bytes)
