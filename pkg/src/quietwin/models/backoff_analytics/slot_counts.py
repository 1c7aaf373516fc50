from dataclasses import dataclass
from functools import cache

import numpy as np

from quietwin.models.dcf_timing import DcfParameters


def contention_window(k: int, params: DcfParameters) -> int:
    """CW_k = min(2^k CW_min, CW_max)."""
    if k < 0:
        raise ValueError(f"retry stage must be >= 0, got {k}")
    return min(params.cw_min << k, params.cw_max)


def max_slots(i: int, params: DcfParameters) -> int:
    """W_i = sum_{k=0..i} (CW_k - 1), the largest slot count after i collisions."""
    return sum(contention_window(k, params) - 1 for k in range(i + 1))


@dataclass(frozen=True, eq=False)
class SlotCountPmf:
    """Pr{j slot times | i collisions}, j = 0..W_i."""

    collisions: int
    probs: np.ndarray

    @property
    def support_max(self) -> int:
        return len(self.probs) - 1

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))


@cache
def _uniform_sum_pmf(windows: tuple[int, ...]) -> np.ndarray:
    pmf = np.ones(1)
    for window in windows:
        pmf = np.convolve(pmf, np.full(window, 1.0 / window))
    pmf.setflags(write=False)
    return pmf


def slots_given_collisions(i: int, params: DcfParameters) -> SlotCountPmf:
    """PMF of sum_{k=0..i} unif{0, CW_k - 1} by exact iterated convolution."""
    if not 0 <= i <= params.retry_limit:
        raise ValueError(
            f"collision count must be in 0..{params.retry_limit}, got {i}"
        )
    windows = tuple(contention_window(k, params) for k in range(i + 1))
    return SlotCountPmf(collisions=i, probs=_uniform_sum_pmf(windows))
