"""Slot-synchronous Monte Carlo simulation of N saturated DCF stations.

Station 0 is the tagged station. Every virtual slot, empty or busy, decrements the
counter of every station that is not transmitting in it; a station transmits when its
counter reaches 0. Runs of empty slots are skipped in one step.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from quietwin.models.backoff_analytics.slot_counts import contention_window
from quietwin.models.dcf_simulator.sim_config import MeasureAlignment, SimConfig
from quietwin.models.dcf_simulator.sim_report import SimReport

logger = logging.getLogger(__name__)

TAGGED = 0
_DRAW_BATCH = 4096
# Slack when counting whole slots left in a quiet interval.
_SLOT_EPS = 1e-9


class _BackoffDraws:
    """Uniform backoff draws on {0, .., W - 1} from buffered generator output."""

    def __init__(self, rng: np.random.Generator) -> None:
        self._rng = rng
        self._buffer = rng.random(_DRAW_BATCH)
        self._pos = 0

    def draw(self, window: int) -> int:
        if self._pos == _DRAW_BATCH:
            self._buffer = self._rng.random(_DRAW_BATCH)
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        return int(u * window)


def _simulate(cfg: SimConfig, n_packets: int, seed_seq: np.random.SeedSequence) -> SimReport:
    scenario = cfg.scenario
    params = scenario.params
    exchanges = scenario.exchanges
    slot, t_success, t_collision = params.slot_time, exchanges.t_success, exchanges.t_collision
    retry_limit = params.retry_limit
    windows = [contention_window(k, params) for k in range(retry_limit + 1)]
    gating = cfg.gating if cfg.gates_channel else None

    draws = _BackoffDraws(np.random.Generator(np.random.PCG64(seed_seq)))
    n = scenario.n_stations
    stages = [0] * n
    counters = [draws.draw(windows[0]) for _ in range(n)]

    delays: list[float] = []
    collisions: list[int] = []
    slots: list[int] = []
    slot_counts = [0, 0, 0]
    discarded = 0
    access_hits = 0
    seen = 0

    t = 0.0
    packet_start = 0.0
    packet_slots = counters[TAGGED]
    quiet_start, quiet_end = 0.0, math.inf

    while len(delays) < n_packets:
        recording = seen >= cfg.warmup_packets
        if gating is not None:
            quiet_start, quiet_end = gating.quiet_window(t)
            # LTE on: the channel is busy and every counter is frozen.
            t = max(t, quiet_start)

        idle = min(counters)
        if idle:
            if gating is not None:
                idle = min(idle, int((quiet_end - t) / slot + _SLOT_EPS))
                if not idle:
                    t = quiet_end
                    continue
            counters = [c - idle for c in counters]
            t += idle * slot
            if recording:
                slot_counts[0] += idle
            continue

        transmitters = [k for k, c in enumerate(counters) if c == 0]
        success = len(transmitters) == 1
        tx_start = t
        t += t_success if success else t_collision
        counters = [c - 1 if c else c for c in counters]
        if recording and TAGGED not in transmitters:
            slot_counts[1 if success else 2] += 1

        for k in transmitters:
            stage = stages[k]
            if success:
                stages[k] = 0
            elif stage + 1 > retry_limit:
                stages[k] = 0
            else:
                stages[k] = stage + 1

            if k == TAGGED:
                if success:
                    if recording:
                        delays.append(t - packet_start)
                        collisions.append(stage)
                        slots.append(packet_slots)
                        if gating is not None and quiet_start <= tx_start and t <= quiet_end:
                            access_hits += 1
                    seen += 1
                elif stages[k] == 0 and recording:
                    discarded += 1
                if stages[k] == 0:
                    packet_start = t
                    packet_slots = 0

            counters[k] = draws.draw(windows[stages[k]])
            if k == TAGGED:
                packet_slots += counters[k]

    delay_arr = np.asarray(delays)
    if cfg.gating is None:
        access_successes = None
    elif cfg.measure_alignment is MeasureAlignment.QUIET_START_ALIGNED:
        access_successes = int(np.count_nonzero(delay_arr < cfg.gating.quiet_interval))
    elif gating is None:
        # X = Y leaves the channel ungated: every exchange sits inside the quiet time.
        access_successes = len(delays)
    else:
        access_successes = access_hits

    return SimReport(
        delays=delay_arr,
        collisions=np.asarray(collisions, dtype=np.int64),
        slots=np.asarray(slots, dtype=np.int64),
        discarded=discarded,
        retry_limit=retry_limit,
        slot_time_counts=(slot_counts[0], slot_counts[1], slot_counts[2]),
        slot_time_values=(slot, t_success, t_collision),
        seed=cfg.seed,
        access_successes=access_successes,
    )


def _simulate_replication(job: tuple[SimConfig, int, np.random.SeedSequence]) -> SimReport:
    return _simulate(*job)


def run(cfg: SimConfig, workers: int = 1) -> SimReport:
    """Simulate until cfg.n_packets tagged deliveries are recorded across all replications."""
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)
    jobs = [
        (cfg, n_packets, seed)
        for n_packets, seed in zip(cfg.packets_per_replication(), seeds, strict=True)
        if n_packets
    ]
    logger.info(
        "Simulating N=%d payload=%dB: %d packets in %d replication(s)",
        cfg.scenario.n_stations,
        cfg.scenario.payload_bytes,
        cfg.n_packets,
        len(jobs),
    )

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(_simulate_replication, jobs))
    else:
        reports = [_simulate_replication(job) for job in jobs]

    if len(reports) == 1:
        return reports[0]
    return SimReport.merge(reports, seed=cfg.seed)


def gated_run(cfg: SimConfig, workers: int = 1) -> SimReport:
    if cfg.gating is None:
        raise ValueError("gated_run needs a gating schedule")
    return run(cfg, workers=workers)
