import logging

import pytest

from quietwin.models.backoff_analytics import tau as tau_module
from quietwin.models.backoff_analytics.collisions import collision_distribution
from quietwin.models.backoff_analytics.tau import (
    TauConvergenceError,
    collision_probability,
    solve_tau,
    transmission_probability,
)


def test_single_station_closed_form():
    assert solve_tau(1, 16, 1024) == pytest.approx(2 / 17, abs=1e-10)


def test_two_station_fixed_point_value():
    # root of tau * (17 + 16 tau * sum_{k<6} (2 tau)^k) = 2
    assert solve_tau(2, 16, 1024) == pytest.approx(0.10462063, abs=1e-8)


@pytest.mark.parametrize("n_stations", range(2, 51))
def test_fixed_point_residual(n_stations):
    tau = solve_tau(n_stations, 16, 1024)
    p = collision_probability(tau, n_stations)

    assert 0 < tau < 1
    assert abs(tau - transmission_probability(p, 16, 6)) < 1e-10


def test_tau_decreases_with_stations():
    taus = [solve_tau(n, 16, 1024) for n in (1, 2, 4, 8, 16)]
    assert taus == sorted(taus, reverse=True)


def test_transmission_probability_regular_at_half():
    # (1 - (2p)^m) / (1 - 2p) -> m at p = 1/2
    assert transmission_probability(0.5, 16, 6) == pytest.approx(2 / 65)


def test_no_stations_rejected():
    with pytest.raises(ValueError, match="n_stations"):
        solve_tau(0, 16, 1024)


def test_falls_back_to_bisection(monkeypatch, caplog):
    expected = solve_tau(10, 16, 1024)
    monkeypatch.setattr(tau_module, "MAX_ITERATIONS", 1)

    with caplog.at_level(logging.WARNING, logger="quietwin"):
        tau = solve_tau(10, 16, 1024)

    assert tau == pytest.approx(expected, abs=1e-9)
    assert "falling back to bisection" in caplog.text


def test_convergence_error_when_bisection_fails(monkeypatch):
    monkeypatch.setattr(tau_module, "MAX_ITERATIONS", 1)
    monkeypatch.setattr(tau_module, "brentq", lambda *args, **kwargs: 0.5)

    with pytest.raises(TauConvergenceError, match="N=10"):
        solve_tau(10, 16, 1024)


@pytest.mark.parametrize("n_stations", [1, 2, 4, 8, 16, 50])
def test_collision_mass_and_discard_sum_to_one(make_scenario, n_stations):
    dist = collision_distribution(make_scenario(n_stations))

    assert dist.probs.sum() + dist.discard_mass == pytest.approx(1.0, abs=1e-12)
    assert dist.retry_limit == 7
    assert dist.success_mass == pytest.approx(dist.probs.sum(), abs=1e-12)


def test_collision_distribution_geometric(make_scenario):
    dist = collision_distribution(make_scenario(4))

    assert dist.probs[0] == pytest.approx(dist.p_success)
    assert dist.probs[3] == pytest.approx(dist.p_collision**3 * dist.p_success)
    assert dist.discard_mass == pytest.approx(dist.p_collision**8)


def test_single_station_never_collides(make_scenario):
    dist = collision_distribution(make_scenario(1))

    assert dist.p_collision == 0
    assert dist.probs[0] == 1
    assert dist.discard_mass == 0
