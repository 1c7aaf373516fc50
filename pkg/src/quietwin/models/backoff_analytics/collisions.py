from dataclasses import dataclass

import numpy as np

from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.backoff_analytics.tau import collision_probability, solve_tau


@dataclass(frozen=True, eq=False)
class CollisionDistribution:
    """Pr{i collisions before success}, i = 0..R, plus the discarded mass."""

    probs: np.ndarray
    tau: float
    p_success: float
    p_collision: float
    discard_mass: float

    @property
    def retry_limit(self) -> int:
        return len(self.probs) - 1

    @property
    def success_mass(self) -> float:
        return 1.0 - self.discard_mass


def collision_distribution(scenario: Scenario) -> CollisionDistribution:
    params = scenario.params
    tau = solve_tau(scenario.n_stations, params.cw_min, params.cw_max)
    p_collision = collision_probability(tau, scenario.n_stations)
    p_success = 1.0 - p_collision

    stages = np.arange(params.retry_limit + 1)
    return CollisionDistribution(
        probs=p_collision**stages * p_success,
        tau=tau,
        p_success=p_success,
        p_collision=p_collision,
        discard_mass=p_collision ** (params.retry_limit + 1),
    )
