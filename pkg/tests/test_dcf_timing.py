import pytest
from pydantic import ValidationError

from quietwin.models.dcf_timing import (
    FIGURE_CALIBRATION,
    US,
    DcfParameters,
    PhyProfile,
    airtime_band,
    default_profiles,
    exchange_durations,
    frame_airtime,
)
from tests.conftest import T_SUCCESS_500, T_SUCCESS_1500


def test_frame_airtime_rounds_up_to_whole_symbols():
    ofdm6 = default_profiles()["ofdm-6"]
    # 170 B = 1360 bits over 24 bits per symbol -> 57 symbols
    assert frame_airtime(134, ofdm6, overhead_bytes=36) == pytest.approx(248 * US)
    assert frame_airtime(3, ofdm6) == pytest.approx(24 * US)
    assert frame_airtime(0, ofdm6) == pytest.approx(20 * US)


def test_frame_airtime_ofdm54_full_frame():
    # 1536 B = 12288 bits over 216 bits per symbol -> 57 symbols
    ofdm54 = default_profiles()["ofdm-54"]
    assert frame_airtime(1500, ofdm54, overhead_bytes=36) == pytest.approx(248 * US)


@pytest.mark.parametrize(
    ("payload", "overhead"),
    [(-1, 0), (10, -1)],
)
def test_frame_airtime_rejects_negative_sizes(payload, overhead):
    with pytest.raises(ValueError, match="must be >= 0"):
        frame_airtime(payload, default_profiles()["ofdm-6"], overhead)


def test_exchange_durations_ofdm6(ofdm6_params):
    durations = exchange_durations(ofdm6_params, 134)

    assert durations.t_data == pytest.approx(248 * US)
    assert durations.t_ack == pytest.approx(44 * US)
    assert durations.t_success == pytest.approx(342 * US)
    # EIFS = SIFS + ACK + DIFS = 94 us
    assert ofdm6_params.eifs == pytest.approx(94 * US)
    assert durations.t_collision == pytest.approx(342 * US)


def test_figure_calibration_exchanges(params):
    assert params.phy.name == FIGURE_CALIBRATION
    assert exchange_durations(params, 1500).t_success == pytest.approx(T_SUCCESS_1500)
    assert exchange_durations(params, 500).t_success == pytest.approx(T_SUCCESS_500)


def test_exchange_durations_rejects_empty_payload(params):
    with pytest.raises(ValueError, match="payload_bytes"):
        exchange_durations(params, 0)


def test_explicit_eifs_is_kept(params):
    custom = DcfParameters(eifs=100 * US)
    assert custom.eifs == pytest.approx(100 * US)
    assert exchange_durations(custom, 1500).t_collision == pytest.approx(
        exchange_durations(params, 1500).t_data + 100 * US
    )


def test_with_phy_rederives_eifs(params):
    ofdm54 = default_profiles()["ofdm-54"]
    switched = params.with_phy(ofdm54)

    assert switched.phy == ofdm54
    assert switched.eifs == pytest.approx(switched.sifs + switched.ack_airtime + switched.difs)
    assert switched.eifs != pytest.approx(params.eifs)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"cw_min": 16, "cw_max": 48},
        {"cw_min": 32, "cw_max": 16},
        {"eifs": 10 * US},
        {"slot_time": 0},
    ],
)
def test_dcf_parameters_invariants(kwargs):
    with pytest.raises(ValidationError):
        DcfParameters(**kwargs)


def test_phy_profile_requires_positive_rates():
    with pytest.raises(ValidationError):
        PhyProfile(
            name="broken",
            data_rate=0,
            control_rate=1e6,
            preamble_header_time=0,
            symbol_time=4 * US,
        )


def test_airtime_band_covers_shipped_profiles():
    low, high = airtime_band(1518, default_profiles())

    assert low <= 120 * US
    assert high >= 1.6e-3


def test_airtime_band_without_calibration_profile():
    profiles = {
        name: profile
        for name, profile in default_profiles().items()
        if name != FIGURE_CALIBRATION
    }
    low, high = airtime_band(1518, profiles)

    assert low <= 120 * US
    assert high >= 1.6e-3
