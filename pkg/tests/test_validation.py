import json

import pytest

from quietwin.models.dcf_simulator.sim_config import SimConfig
from quietwin.models.dcf_simulator.simulator import run
from quietwin.models.dcf_simulator.validation import (
    ValidationResults,
    ValidationStatus,
    ValidationThresholds,
    collision_z_scores,
    ks_distance,
    validate_point,
)


@pytest.fixture
def small_run(make_scenario):
    return run(SimConfig(scenario=make_scenario(4), n_packets=2000, seed=77))


def test_ks_distance_is_a_distance(small_run, make_model):
    ks = ks_distance(small_run, make_model(4))
    assert 0.0 < ks < 1.0


def test_collision_z_scores_for_first_four_counts(small_run, make_model):
    scores = collision_z_scores(small_run, make_model(4))
    assert len(scores) == 4
    assert all(abs(z) < 10 for z in scores)


def test_few_samples_give_no_verdict(make_scenario, make_model):
    report = run(SimConfig(scenario=make_scenario(2), n_packets=10, seed=1))
    point = validate_point(report, make_model(2))

    assert point.status is ValidationStatus.INSUFFICIENT
    assert point.n_packets == 10


def test_thresholds_decide_status(small_run, make_model):
    model = make_model(4)
    loose = ValidationThresholds(ks_max=1.0, rel_err_max=10.0, min_samples=100)
    strict = ValidationThresholds(ks_max=1e-9, rel_err_max=1e-9, min_samples=100)

    assert validate_point(small_run, model, loose).status is ValidationStatus.PASS
    assert validate_point(small_run, model, strict).status is ValidationStatus.FAIL


def test_point_reports_means_in_microseconds(small_run, make_model):
    point = validate_point(small_run, make_model(4))

    assert point.sim_mean_us == pytest.approx(small_run.mean_delay * 1e6)
    assert point.rel_err == pytest.approx(
        abs(point.analytic_mean_us - point.sim_mean_us) / point.sim_mean_us
    )


def _point(status: ValidationStatus, small_run, make_model):
    thresholds = {
        ValidationStatus.PASS: ValidationThresholds(ks_max=1.0, rel_err_max=10.0, min_samples=1),
        ValidationStatus.FAIL: ValidationThresholds(ks_max=1e-9, rel_err_max=1e-9, min_samples=1),
        ValidationStatus.INSUFFICIENT: ValidationThresholds(min_samples=10**9),
    }[status]
    return validate_point(small_run, make_model(4), thresholds)


@pytest.mark.parametrize(
    ("statuses", "overall"),
    [
        ([ValidationStatus.PASS, ValidationStatus.PASS], ValidationStatus.PASS),
        ([ValidationStatus.PASS, ValidationStatus.INSUFFICIENT], ValidationStatus.INSUFFICIENT),
        ([ValidationStatus.INSUFFICIENT, ValidationStatus.FAIL], ValidationStatus.FAIL),
        ([], ValidationStatus.INSUFFICIENT),
    ],
)
def test_overall_status(small_run, make_model, statuses, overall):
    results = ValidationResults(_point(s, small_run, make_model) for s in statuses)

    assert results.overall is overall
    summary = json.loads(results.summary(seed=77).model_dump_json())
    assert summary["overall"] == overall.value
    assert summary["seed"] == 77
    assert len(summary["points"]) == len(statuses)


def test_status_counts(small_run, make_model):
    results = ValidationResults(
        [
            _point(ValidationStatus.PASS, small_run, make_model),
            _point(ValidationStatus.FAIL, small_run, make_model),
            _point(ValidationStatus.FAIL, small_run, make_model),
        ]
    )

    assert results.get_status_counts() == {
        ValidationStatus.PASS: 1,
        ValidationStatus.FAIL: 2,
        ValidationStatus.INSUFFICIENT: 0,
    }
