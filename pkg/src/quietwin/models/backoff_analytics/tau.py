import logging

from scipy.optimize import brentq

logger = logging.getLogger(__name__)

DAMPING = 0.5
TAU_START = 0.1
MAX_ITERATIONS = 10_000
RESIDUAL_TOL = 1e-10


class TauConvergenceError(RuntimeError):
    pass


def collision_probability(tau: float, n_stations: int) -> float:
    return 1.0 - (1.0 - tau) ** (n_stations - 1)


def transmission_probability(p: float, cw_min: int, stages: int) -> float:
    """Bianchi's tau(p) with (1 - (2p)^m) / (1 - 2p) expanded, so p = 1/2 is regular."""
    geometric = sum((2.0 * p) ** k for k in range(stages))
    return 2.0 / (cw_min + 1 + p * cw_min * geometric)


def _residual(tau: float, n_stations: int, cw_min: int, stages: int) -> float:
    p = collision_probability(tau, n_stations)
    return tau - transmission_probability(p, cw_min, stages)


def solve_tau(n_stations: int, cw_min: int, cw_max: int) -> float:
    """Per-slot transmission probability of a saturated station."""
    if n_stations < 1:
        raise ValueError(f"n_stations must be >= 1, got {n_stations}")
    stages = (cw_max // cw_min).bit_length() - 1

    if n_stations == 1:
        return transmission_probability(0.0, cw_min, stages)

    tau = TAU_START
    for iteration in range(1, MAX_ITERATIONS + 1):
        target = transmission_probability(
            collision_probability(tau, n_stations), cw_min, stages
        )
        next_tau = (1.0 - DAMPING) * tau + DAMPING * target
        if abs(next_tau - tau) < RESIDUAL_TOL * 1e-3:
            tau = next_tau
            break
        tau = next_tau
    else:
        iteration = MAX_ITERATIONS

    residual = abs(_residual(tau, n_stations, cw_min, stages))
    if residual < RESIDUAL_TOL:
        logger.debug(
            "tau(N=%d) = %.12f after %d iterations", n_stations, tau, iteration
        )
        return tau

    logger.warning(
        "Damped iteration stalled for N=%d (residual %.3e), falling back to bisection",
        n_stations,
        residual,
    )
    tau = brentq(
        _residual, 1e-12, 1.0, args=(n_stations, cw_min, stages), xtol=1e-15
    )
    residual = abs(_residual(tau, n_stations, cw_min, stages))
    if residual >= RESIDUAL_TOL:
        raise TauConvergenceError(
            f"No fixed point for N={n_stations}, cw_min={cw_min}, cw_max={cw_max} "
            f"(residual {residual:.3e})"
        )
    return tau
