from dataclasses import dataclass

from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.backoff_analytics.tau import solve_tau
from quietwin.models.dcf_timing import ExchangeDurations


@dataclass(frozen=True)
class SlotTimeMoments:
    """Moments of the time between two backoff decrements of the tagged station.

    A slot time is empty (slot_time), carries one competitor's successful
    exchange (T_s) or a collision among competitors (T_c).
    """

    mean: float
    variance: float
    p_empty: float
    p_other_success: float
    p_other_collision: float


def slot_time_moments(
    scenario: Scenario, exchanges: ExchangeDurations
) -> SlotTimeMoments:
    params = scenario.params
    others = scenario.n_stations - 1
    tau = solve_tau(scenario.n_stations, params.cw_min, params.cw_max)

    p_empty = (1.0 - tau) ** others
    p_other_success = others * tau * (1.0 - tau) ** (others - 1) if others else 0.0
    p_other_collision = max(0.0, 1.0 - p_empty - p_other_success)

    outcomes = (
        (p_empty, params.slot_time),
        (p_other_success, exchanges.t_success),
        (p_other_collision, exchanges.t_collision),
    )
    mean = sum(p * x for p, x in outcomes)
    variance = sum(p * (x - mean) ** 2 for p, x in outcomes)
    return SlotTimeMoments(
        mean=mean,
        variance=variance,
        p_empty=p_empty,
        p_other_success=p_other_success,
        p_other_collision=p_other_collision,
    )
