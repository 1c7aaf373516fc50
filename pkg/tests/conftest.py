from pathlib import Path

import pytest
from typer.testing import CliRunner

from quietwin.models.backoff_analytics.access_model import BackoffAccessModel
from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.dcf_timing import US, DcfParameters, default_profiles

CONFIGS_DIR = Path(__file__).resolve().parents[1] / "configs"

# Figure calibration: T_s = T_c = 2969 us at 1500 B, T_s = 1514 us at 500 B.
T_SUCCESS_1500 = 2969 * US
T_SUCCESS_500 = 1514 * US
SLOT = 9 * US


@pytest.fixture
def params() -> DcfParameters:
    return DcfParameters()


@pytest.fixture
def ofdm6_params() -> DcfParameters:
    return DcfParameters(ack_bytes=16, phy=default_profiles()["ofdm-6"])


@pytest.fixture
def make_scenario(params):
    def _make(n_stations: int, payload_bytes: int = 1500) -> Scenario:
        return Scenario(n_stations=n_stations, payload_bytes=payload_bytes, params=params)

    return _make


@pytest.fixture
def make_model(make_scenario):
    def _make(n_stations: int, payload_bytes: int = 1500, **kwargs) -> BackoffAccessModel:
        return BackoffAccessModel.build(make_scenario(n_stations, payload_bytes), **kwargs)

    return _make


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS_DIR


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
