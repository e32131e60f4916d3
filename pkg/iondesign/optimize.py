"""
Numerical minimizers used to confirm the closed-form operating points.
"""
import logging
from typing import (
    Callable,
    NamedTuple,
    Tuple,
)

from numpy import (
    argmin,
    exp,
    log,
    logspace,
    pi,
)
from scipy.optimize import (
    brentq,
    minimize_scalar,
)

from iondesign.cqed import (
    adiabatic_leak,
    photon_decay_loss,
)
from iondesign.utilities import (
    require_positive,
    require_probability,
)

__all__ = [
    "AdiabaticOptimum",
    "CzNumericOptimum",
    "adiabatic_optimum_numeric",
    "cz_optimum_numeric",
    "minimize_log_grid",
]

logger = logging.getLogger(__name__)


def minimize_log_grid(
    objective: Callable,
    lower: float,
    upper: float,
    points: int = 200,
    xatol: float = 1e-12,
) -> Tuple[float, float]:
    """
    Minimize a positive-argument function: evaluate it on a logarithmic
    grid of `points` values in [`lower`, `upper`], then refine with a
    bounded scalar search in the log-offset from the best grid point.

    Args:
        objective (callable):
            Vectorized function of the argument.
        lower (float):
            Smallest argument of the grid.
        upper (float):
            Largest argument of the grid.
        points (int):
            Grid size.
        xatol (float):
            Absolute tolerance on the log-offset.

    Returns:
        tuple[float, float]:
            Argument and value at the minimum.
    """
    grid = logspace(log(lower) / log(10), log(upper) / log(10), points)
    best = grid[argmin(objective(grid))]
    step = log(upper / lower) / (points - 1)

    refined = minimize_scalar(
        lambda offset: objective(best * exp(offset)),
        bounds=(-step, step),
        method="bounded",
        options={"xatol": xatol},
    )
    argument = best * exp(refined.x)
    return float(argument), float(objective(argument))


class CzNumericOptimum(NamedTuple):
    ratio: float
    p_min: float


def cz_optimum_numeric(kappa, gamma, sideband_g) -> CzNumericOptimum:
    """Minimize scattering plus heating over the ratio Omega / Delta."""
    require_positive(kappa=kappa, gamma=gamma, sideband_g=sideband_g)

    def total(ratio):
        return (
            pi * gamma * ratio / sideband_g
            + 4 * pi * kappa / (ratio * sideband_g)
        )

    ratio, p_min = minimize_log_grid(total, lower=1e-10, upper=1e4)
    return CzNumericOptimum(ratio=ratio, p_min=p_min)


class AdiabaticOptimum(NamedTuple):
    ramp_time: float
    omega: float
    rate: float
    p_nonadiabatic: float
    p_photon_decay: float


def adiabatic_optimum_numeric(p, g, kappa) -> AdiabaticOptimum:
    r"""
    Shortest ramp time whose best drive strength reaches failure `p`.

    For every ramp time the drive is chosen to minimize
    :math:`4 / (T \Omega)^2 + \Omega^2 \kappa T / 2 g^2`; the ramp time is
    then found by root finding on :math:`\log T`.
    """
    require_probability("p", p)
    require_positive(g=g, kappa=kappa)

    def best_drive(ramp_time):
        def total(t_omega):
            return (
                4 / t_omega ** 2
                + t_omega ** 2 * kappa / (2 * g ** 2 * ramp_time)
            )

        t_omega, value = minimize_log_grid(total, lower=1e-3, upper=1e6)
        return t_omega / ramp_time, value

    def excess(log_time):
        return best_drive(exp(log_time))[1] - p

    guess = log(9 * kappa / (p ** 2 * g ** 2))
    log_time = brentq(excess, guess - log(1e3), guess + log(1e3))
    ramp_time = float(exp(log_time))
    omega, _ = best_drive(ramp_time)
    logger.debug(f"Adiabatic optimum: T = {ramp_time:.6g} s")
    return AdiabaticOptimum(
        ramp_time=ramp_time,
        omega=omega,
        rate=1 / ramp_time,
        p_nonadiabatic=float(adiabatic_leak(ramp_time, omega)),
        p_photon_decay=float(photon_decay_loss(omega, g, kappa, ramp_time)),
    )
