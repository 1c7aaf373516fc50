import logging
import math
from dataclasses import dataclass, field
from typing import Self

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import erf

from quietwin.models.backoff_analytics.collisions import (
    CollisionDistribution,
    collision_distribution,
)
from quietwin.models.backoff_analytics.scenario import Scenario
from quietwin.models.backoff_analytics.slot_counts import (
    SlotCountPmf,
    max_slots,
    slots_given_collisions,
)
from quietwin.models.backoff_analytics.slot_time import (
    SlotTimeMoments,
    slot_time_moments,
)
from quietwin.models.dcf_timing import DcfParameters, ExchangeDurations

logger = logging.getLogger(__name__)

INTEGRATION_STEP = 5e-6
TAIL_SIGMAS = 8.0
# Components are accumulated on grid[::stride] with at least this many points per sigma,
# then linearly interpolated back onto the integration grid.
POINTS_PER_SIGMA = 16
LEVEL_STRIDES = (1, 8, 64, 512, 4096)
_CHUNK = 256


@dataclass(frozen=True)
class ConditionalGaussian:
    """Delay given i own collisions and j slot times: N(mean, std^2)."""

    mean: float
    std: float


def conditional_gaussian(
    i: int,
    j: int,
    moments: SlotTimeMoments,
    exchanges: ExchangeDurations,
    params: DcfParameters,
    offset: float = 0.0,
) -> ConditionalGaussian:
    if not 0 <= i <= params.retry_limit:
        raise ValueError(f"i must be in 0..{params.retry_limit}, got {i}")
    if not 0 <= j <= (support := max_slots(i, params)):
        raise ValueError(f"j must be in 0..{support}, got {j}")
    return ConditionalGaussian(
        mean=j * moments.mean + i * exchanges.t_collision + exchanges.t_success + offset,
        std=math.sqrt(j * moments.variance),
    )


def conditional_access_prob(length: float, g: ConditionalGaussian) -> float:
    """Pr{d < L | i, j} as the Gaussian CDF; a zero-variance delay is a step at its mean."""
    if length < 0:
        raise ValueError(f"quiet period length must be >= 0, got {length}")
    if length == 0:
        return 0.0
    if g.std == 0:
        return float(length >= g.mean)
    return 0.5 + 0.5 * math.erf((length - g.mean) / (math.sqrt(2.0) * g.std))


def _normal_cdf(x: np.ndarray, means: np.ndarray, stds: np.ndarray) -> np.ndarray:
    smooth = stds > 0
    z = np.divide(
        x - means,
        math.sqrt(2.0) * stds,
        out=np.zeros(np.broadcast_shapes(x.shape, means.shape)),
        where=smooth,
    )
    return np.where(smooth, 0.5 + 0.5 * erf(z), x >= means)


def _accumulate(
    grid: np.ndarray, means: np.ndarray, stds: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Sum of weighted component CDFs on grid, evaluated only inside +-8 sigma windows."""
    saturated = np.zeros(len(grid) + 1)
    steps = stds == 0
    np.add.at(saturated, np.searchsorted(grid, means[steps], side="left"), weights[steps])

    smooth = np.flatnonzero(~steps)
    lo = np.searchsorted(grid, means[smooth] - TAIL_SIGMAS * stds[smooth], side="left")
    hi = np.searchsorted(grid, means[smooth] + TAIL_SIGMAS * stds[smooth], side="right")
    np.add.at(saturated, hi, weights[smooth])

    acc = np.cumsum(saturated)[:-1]
    for k, start, stop in zip(smooth, lo, hi, strict=True):
        window = grid[start:stop]
        acc[start:stop] += weights[k] * (
            0.5 + 0.5 * erf((window - means[k]) / (math.sqrt(2.0) * stds[k]))
        )
    return acc


@dataclass(frozen=True, eq=False)
class BackoffAccessModel:
    scenario: Scenario
    collision_dist: CollisionDistribution
    slot_pmfs: tuple[SlotCountPmf, ...]
    moments: SlotTimeMoments
    exchanges: ExchangeDurations
    normalize_on_success: bool = True
    count_initial_difs: bool = False

    # One entry per (i, j) pair, i-major.
    collisions: np.ndarray = field(init=False, repr=False)
    slots: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    means: np.ndarray = field(init=False, repr=False)
    stds: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        collisions = np.concatenate(
            [np.full(len(pmf.probs), pmf.collisions) for pmf in self.slot_pmfs]
        )
        slots = np.concatenate([np.arange(len(pmf.probs)) for pmf in self.slot_pmfs])
        weights = np.concatenate(
            [self.collision_dist.probs[pmf.collisions] * pmf.probs for pmf in self.slot_pmfs]
        )
        offset = self.scenario.params.difs if self.count_initial_difs else 0.0

        object.__setattr__(self, "collisions", collisions)
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self,
            "means",
            slots * self.moments.mean
            + collisions * self.exchanges.t_collision
            + self.exchanges.t_success
            + offset,
        )
        object.__setattr__(self, "stds", np.sqrt(slots * self.moments.variance))

    @classmethod
    def build(
        cls,
        scenario: Scenario,
        *,
        normalize_on_success: bool = True,
        count_initial_difs: bool = False,
    ) -> Self:
        exchanges = scenario.exchanges
        model = cls(
            scenario=scenario,
            collision_dist=collision_distribution(scenario),
            slot_pmfs=tuple(
                slots_given_collisions(i, scenario.params)
                for i in range(scenario.params.retry_limit + 1)
            ),
            moments=slot_time_moments(scenario, exchanges),
            exchanges=exchanges,
            normalize_on_success=normalize_on_success,
            count_initial_difs=count_initial_difs,
        )
        logger.debug(
            "Built model N=%d payload=%dB: tau=%.6f, T_s=%.1fus, %d components",
            scenario.n_stations,
            scenario.payload_bytes,
            model.collision_dist.tau,
            exchanges.t_success * 1e6,
            len(model.weights),
        )
        return model

    @property
    def normalizer(self) -> float:
        return self.collision_dist.success_mass if self.normalize_on_success else 1.0

    def conditional(self, i: int, j: int) -> ConditionalGaussian:
        offset = self.scenario.params.difs if self.count_initial_difs else 0.0
        return conditional_gaussian(
            i, j, self.moments, self.exchanges, self.scenario.params, offset
        )

    def cdf(self, lengths: float | np.ndarray) -> np.ndarray:
        """Pr{d < L} evaluated exactly over every (i, j) component."""
        lengths = np.asarray(lengths, dtype=float)
        if np.any(lengths < 0):
            raise ValueError("quiet period length must be >= 0")

        flat = lengths.ravel()
        out = np.empty_like(flat)
        for start in range(0, flat.size, _CHUNK):
            block = flat[start : start + _CHUNK, None]
            out[start : start + _CHUNK] = (
                _normal_cdf(block, self.means, self.stds) @ self.weights
            )
        # Delays are positive: nothing completes within a zero-length quiet period.
        out[flat == 0.0] = 0.0
        return (out / self.normalizer).reshape(lengths.shape)

    def l_max(self) -> float:
        return float(np.max(self.means) + TAIL_SIGMAS * np.max(self.stds))

    def integration_grid(self, step: float = INTEGRATION_STEP) -> np.ndarray:
        """Uniform grid 0, step, ..., >= l_max(), a whole number of coarsest strides long."""
        if step <= 0:
            raise ValueError(f"step must be > 0, got {step}")
        coarsest = LEVEL_STRIDES[-1]
        n_steps = math.ceil(self.l_max() / (step * coarsest)) * coarsest
        return np.arange(n_steps + 1) * step

    def component_cdf_sum(self, grid: np.ndarray, members: np.ndarray) -> np.ndarray:
        """Unnormalized sum of the weighted CDFs of the selected components on grid."""
        step = grid[1] - grid[0]
        thresholds = np.asarray(LEVEL_STRIDES) * step * POINTS_PER_SIGMA
        levels = np.maximum(
            np.searchsorted(thresholds, self.stds[members], side="right") - 1, 0
        )

        acc = np.zeros_like(grid)
        for level, stride in enumerate(LEVEL_STRIDES):
            chosen = members[levels == level]
            if not chosen.size:
                continue
            coarse = grid[::stride]
            part = _accumulate(
                coarse, self.means[chosen], self.stds[chosen], self.weights[chosen]
            )
            acc += part if stride == 1 else np.interp(grid, coarse, part)
        acc[0] = 0.0
        return acc

    def cdf_grid(self, step: float = INTEGRATION_STEP) -> tuple[np.ndarray, np.ndarray]:
        """CDF on the uniform grid 0, step, ..., >= l_max()."""
        grid = self.integration_grid(step)
        cdf = self.component_cdf_sum(grid, np.arange(len(self.weights)))

        logger.debug("CDF grid: %d points up to %.3f ms", len(grid), grid[-1] * 1e3)
        return grid, cdf / self.normalizer


def access_probability(length: float, model: BackoffAccessModel) -> float:
    """Pr{d < L}: probability the exchange completes inside a quiet period of length L."""
    return float(model.cdf(length))


def mean_backoff_delay(
    model: BackoffAccessModel, step: float = INTEGRATION_STEP
) -> float:
    """E{d} = integral of (1 - Pr{d < L}) dL.

    Zero-variance components are steps at their means and contribute weight * mean
    exactly; the Gaussian ones go through the trapezoidal rule up to l_max().
    """
    if not model.normalize_on_success:
        raise ValueError(
            "mean_backoff_delay needs a model normalized on success; "
            "the unnormalized CDF never reaches 1"
        )
    grid = model.integration_grid(step)
    steps = model.stds == 0
    smooth = np.flatnonzero(~steps)

    exact = float(np.dot(model.weights[steps], model.means[steps]))
    integrated = 0.0
    if smooth.size:
        survival = model.weights[smooth].sum() - model.component_cdf_sum(grid, smooth)
        integrated = float(trapezoid(survival, grid))
    return (exact + integrated) / model.normalizer


def weighted_mean_delay(model: BackoffAccessModel) -> float:
    """Closed-form sum of m_ij Pr{i, j} / (1 - P_c^{R+1})."""
    return float(np.dot(model.means, model.weights) / model.collision_dist.success_mass)
