import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict
from rich.console import RenderableType
from rich.panel import Panel

RNG_ALGORITHM = "PCG64"


@dataclass(frozen=True, eq=False)
class SimReport:
    """Tagged-station statistics of one (possibly merged) simulation run."""

    delays: np.ndarray
    collisions: np.ndarray
    slots: np.ndarray
    discarded: int
    retry_limit: int
    # Tagged backoff slot times by kind: (count, duration) for empty, success, collision.
    slot_time_counts: tuple[int, int, int]
    slot_time_values: tuple[float, float, float]
    seed: int
    replications: int = 1
    access_successes: int | None = None
    rng: str = RNG_ALGORITHM

    @property
    def n_packets(self) -> int:
        return len(self.delays)

    @property
    def mean_delay(self) -> float:
        return float(np.mean(self.delays))

    @property
    def collision_histogram(self) -> list[int]:
        return np.bincount(self.collisions, minlength=self.retry_limit + 1).tolist()

    @property
    def slot_time_mean(self) -> float:
        counts = np.asarray(self.slot_time_counts, dtype=float)
        if not counts.sum():
            return math.nan
        return float(np.dot(counts, self.slot_time_values) / counts.sum())

    @property
    def slot_time_variance(self) -> float:
        counts = np.asarray(self.slot_time_counts, dtype=float)
        if not counts.sum():
            return math.nan
        values = np.asarray(self.slot_time_values)
        mean = self.slot_time_mean
        return float(np.dot(counts, (values - mean) ** 2) / counts.sum())

    @property
    def access_success_fraction(self) -> float | None:
        if self.access_successes is None:
            return None
        return self.access_successes / self.n_packets

    def fraction_below(self, length: float) -> float:
        """Empirical Pr{d < L}."""
        return float(np.mean(self.delays < length))

    @classmethod
    def merge(cls, reports: list["SimReport"], *, seed: int) -> "SimReport":
        first = reports[0]
        successes = [r.access_successes for r in reports]
        return cls(
            delays=np.concatenate([r.delays for r in reports]),
            collisions=np.concatenate([r.collisions for r in reports]),
            slots=np.concatenate([r.slots for r in reports]),
            discarded=sum(r.discarded for r in reports),
            retry_limit=first.retry_limit,
            slot_time_counts=tuple(
                int(sum(c)) for c in zip(*(r.slot_time_counts for r in reports), strict=True)
            ),
            slot_time_values=first.slot_time_values,
            seed=seed,
            replications=sum(r.replications for r in reports),
            access_successes=None if None in successes else sum(successes),
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"delay_us": self.delays * 1e6})

    def summary(self, ks_vs_analytic: float | None = None) -> "SimSummary":
        return SimSummary(
            mean_us=self.mean_delay * 1e6,
            ks_vs_analytic=ks_vs_analytic,
            collision_hist=self.collision_histogram,
            discarded=self.discarded,
            slot_time_mean_us=self.slot_time_mean * 1e6,
            slot_time_var_us2=self.slot_time_variance * 1e12,
            access_success_fraction=self.access_success_fraction,
            seed=self.seed,
            n_packets=self.n_packets,
            replications=self.replications,
            rng=self.rng,
        )

    def render_summary(self) -> RenderableType:
        hist = ", ".join(f"{i}:{n}" for i, n in enumerate(self.collision_histogram))
        lines = [
            f"[bold]Packets:[/bold] {self.n_packets} ({self.discarded} discarded)",
            f"[bold]Mean delay:[/bold] {self.mean_delay * 1e3:.3f} ms",
            f"[bold]Slot time:[/bold] mean {self.slot_time_mean * 1e6:.1f} us",
            f"[bold]Collisions:[/bold] {hist}",
            f"[dim]seed {self.seed}, {self.rng}, {self.replications} replication(s)[/dim]",
        ]
        if self.access_success_fraction is not None:
            lines.insert(2, f"[green]Access success:[/green] {self.access_success_fraction:.4f}")
        return Panel("\n".join(lines), title="Simulation Summary", expand=False)


class SimSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_us: float
    ks_vs_analytic: float | None
    collision_hist: list[int]
    discarded: int
    slot_time_mean_us: float
    slot_time_var_us2: float
    access_success_fraction: float | None
    seed: int
    n_packets: int
    replications: int
    rng: str
