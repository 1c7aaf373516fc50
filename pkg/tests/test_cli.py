import json

import pandas as pd
import pytest

from quietwin.cli.app import app


def _invoke(runner, args, **kwargs):
    return runner.invoke(app, args, catch_exceptions=False, **kwargs)


def test_quiet_period_fdd_default(runner, tmp_path):
    out = tmp_path / "quiet.csv"
    result = _invoke(runner, ["quiet-period", "--out", str(out)])

    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8") == "mode,max_quiet_us\nfdd,214.285714\n"


def test_quiet_period_tdd_flags(runner, tmp_path):
    out = tmp_path / "quiet.csv"
    result = _invoke(
        runner,
        [
            "quiet-period",
            "--mode",
            "tdd",
            "--tdd-config",
            "0",
            "--mute",
            "2",
            "--mute",
            "3",
            "--mute",
            "4",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8") == "mode,max_quiet_us\ntdd,3000.0\n"


def test_quiet_period_from_config_env(runner, tmp_path, configs_dir):
    out = tmp_path / "quiet.json"
    result = _invoke(
        runner,
        ["quiet-period", "--format", "json", "--out", str(out)],
        env={"QUIETWIN_CONFIG": str(configs_dir / "quiet_tdd.json")},
    )

    assert result.exit_code == 0
    assert json.loads(out.read_text(encoding="utf-8")) == [
        {"mode": "tdd", "max_quiet_us": 3000.0}
    ]


def test_quiet_period_unknown_tdd_config(runner):
    result = _invoke(runner, ["quiet-period", "--mode", "tdd", "--tdd-config", "7"])

    assert result.exit_code == 1
    assert '"error":"value_error"' in result.output
    assert "config_index" in result.output


def test_quiet_period_rejects_downlink_muting(runner):
    result = _invoke(runner, ["quiet-period", "--mode", "tdd", "--mute", "0"])

    assert result.exit_code == 1
    assert '"error":"validation_error"' in result.output


def test_access_prob_single_station(runner, tmp_path):
    out = tmp_path / "access.csv"
    result = _invoke(
        runner,
        [
            "--with",
            "sweep.n_stations=[1]",
            "--with",
            "sweep.l_grid_us=[0,3036.5]",
            "access-prob",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8").splitlines()[0] == "N,payload_bytes,L_us,pr_access"
    frame = pd.read_csv(out)
    assert frame["N"].tolist() == [1, 1]
    assert frame["L_us"].tolist() == [0.0, 3036.5]
    assert frame["pr_access"].tolist() == pytest.approx([0.0, 0.5])


def test_access_prob_rows_sorted(runner, tmp_path):
    out = tmp_path / "access.csv"
    result = _invoke(
        runner,
        [
            "--with",
            "sweep.n_stations=[4,2]",
            "--with",
            "sweep.payload_bytes=[1500,500]",
            "--with",
            "sweep.l_grid_us=[1000,3000]",
            "access-prob",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    frame = pd.read_csv(out)
    keys = list(zip(frame["N"], frame["payload_bytes"], frame["L_us"], strict=True))
    assert keys == sorted(keys)
    assert len(keys) == 8


def test_mean_delay_single_station(runner, tmp_path):
    out = tmp_path / "mean.json"
    result = _invoke(
        runner,
        ["--with", "sweep.n_stations=[1]", "mean-delay", "--format", "json", "--out", str(out)],
    )

    assert result.exit_code == 0
    (row,) = json.loads(out.read_text(encoding="utf-8"))
    assert row["N"] == 1
    assert row["payload_bytes"] == 1500
    assert row["mean_delay_us"] == pytest.approx(7.5 * 9 + 2969, abs=1e-9)


def test_mean_delay_needs_normalized_model(runner):
    result = _invoke(runner, ["--with", "normalize_on_success=false", "mean-delay"])

    assert result.exit_code == 1
    assert "normalize_on_success" in result.output


def test_simulate_csv(runner, tmp_path):
    out = tmp_path / "delays.csv"
    result = _invoke(
        runner,
        [
            "--with",
            "sweep.n_stations=[1]",
            "--with",
            "simulation.n_packets=50",
            "simulate",
            "--seed",
            "3",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["N", "payload_bytes", "delay_us"]
    assert len(frame) == 50
    assert (frame["delay_us"] >= 2969 - 1e-6).all()


def test_simulate_json_summary(runner, tmp_path):
    out = tmp_path / "summary.json"
    result = _invoke(
        runner,
        [
            "--with",
            "simulation.n_packets=200",
            "simulate",
            "--seed",
            "5",
            "--format",
            "json",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    (point,) = json.loads(out.read_text(encoding="utf-8"))
    assert point["n_stations"] == 2
    summary = point["result"]
    assert summary["seed"] == 5
    assert summary["n_packets"] == 200
    assert sum(summary["collision_hist"]) == 200
    assert 0.0 < summary["ks_vs_analytic"] < 1.0


def test_validate_insufficient_samples_is_deterministic(runner, tmp_path):
    args = ["--with", "simulation.n_packets=10", "validate", "--seed", "8"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"

    assert _invoke(runner, [*args, "--out", str(first)]).exit_code == 0
    assert _invoke(runner, [*args, "--out", str(second)]).exit_code == 0

    assert first.read_bytes() == second.read_bytes()
    summary = json.loads(first.read_text(encoding="utf-8"))
    assert summary["overall"] == "insufficient samples"
    assert summary["seed"] == 8
    assert summary["points"][0]["status"] == "insufficient samples"


def test_validate_csv_rows(runner, tmp_path):
    out = tmp_path / "validate.csv"
    result = _invoke(
        runner,
        [
            "--with",
            "simulation.n_packets=10",
            "--with",
            "sweep.n_stations=[2,4]",
            "validate",
            "--seed",
            "8",
            "--format",
            "csv",
            "--out",
            str(out),
        ],
    )

    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == [
        "N",
        "payload_bytes",
        "n_packets",
        "ks_distance",
        "analytic_mean_us",
        "sim_mean_us",
        "rel_err",
        "status",
    ]
    assert list(frame["N"]) == [2, 4]
    assert set(frame["status"]) == {"insufficient samples"}


@pytest.mark.parametrize("command", ["access-prob", "mean-delay", "quiet-period"])
def test_seed_does_not_change_deterministic_output(runner, tmp_path, command):
    base = ["--with", "sweep.l_grid_us=[1000,3000]", command]
    plain, seeded = tmp_path / "plain.csv", tmp_path / "seeded.csv"

    assert _invoke(runner, [*base, "--out", str(plain)]).exit_code == 0
    assert _invoke(runner, [*base, "--seed", "99", "--out", str(seeded)]).exit_code == 0

    assert plain.read_bytes() == seeded.read_bytes()


def test_missing_config_file(runner, tmp_path):
    result = _invoke(runner, ["--config", str(tmp_path / "nope.json"), "access-prob"])

    assert result.exit_code == 1
    assert '"error":"io_error"' in result.output


def test_invalid_override_reports_field(runner):
    result = _invoke(runner, ["--with", "sweep.l_grid_us=[3,2]", "access-prob"])

    assert result.exit_code == 1
    assert '"error":"validation_error"' in result.output
    assert '"loc":"sweep"' in result.output
