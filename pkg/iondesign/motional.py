r"""
Error budgets, optimal operating points and gate rates of gates that couple
ions through a shared vibrational mode.

A Raman drive of single-photon Rabi frequency :math:`\Omega`, detuned by
:math:`\Delta` from the strong transition, drives a sideband with coupling
:math:`g = \eta \Omega`. The gate consists of two :math:`\pi` pulses on that
sideband and lasts :math:`T = 2 \pi / \Omega_{\rm eff}`, where
:math:`\Omega_{\rm eff} = \Omega g / 2 \Delta`.
"""
import logging
from typing import (
    NamedTuple,
    Optional,
    Tuple,
)

from numpy import (
    all as np_all,
    any as np_any,
    pi,
    sqrt,
)

from iondesign.constants import TWO_PI
from iondesign.exceptions import DomainError
from iondesign.utilities import (
    require_non_negative,
    require_positive,
    require_probability,
)

__all__ = [
    "BREAKDOWN_PROBABILITY",
    "CzOptimum",
    "HeatingCheck",
    "LightShiftGate",
    "MotionalErrorBudget",
    "MsOperatingPoint",
    "RamanDrive",
    "breathing_mode",
    "cz_budget",
    "cz_optimum",
    "cz_rate_at_p",
    "heating_check",
    "heating_prob",
    "lightshift_gate",
    "ms_scaled_optimum",
    "ms_tradeoff",
    "offres_leak",
    "per_ion_time",
    "rate_at_p_advisories",
    "scatter_prob",
]

logger = logging.getLogger(__name__)

# Perturbative error terms above this value mean the model has broken down.
BREAKDOWN_PROBABILITY = 0.5

# Factor used to read "much larger than" in regime advisories.
_MARGIN = 10.0


class RamanDrive:
    """
    Two-photon Raman drive of a motional sideband.

    Args:
        omega (float):
            Single-photon Rabi frequency :math:`\\Omega`, rad/s.
        detuning (float):
            Detuning :math:`\\Delta` from the strong transition, rad/s.
        eta (float):
            Lamb-Dicke parameter of the driven mode.
        gamma (float, optional):
            Linewidth of the strong transition; when given, a warning is
            logged unless :math:`\\Delta > 10 \\Gamma`.
    """

    def __init__(
        self,
        omega: float,
        detuning: float,
        eta: float,
        gamma: Optional[float] = None,
    ):
        require_positive(omega=omega, detuning=detuning, eta=eta)
        self._omega = float(omega)
        self._detuning = float(detuning)
        self._eta = float(eta)

        self._advisories: Tuple[str, ...] = ()
        if gamma is not None and not detuning > _MARGIN * gamma:
            self._advisories = (
                f"detuning {detuning:.3g} rad/s is not much larger than the "
                f"linewidth {gamma:.3g} rad/s",
            )
            logger.warning(self._advisories[0])

    @property
    def omega(self) -> float:
        return self._omega

    @property
    def detuning(self) -> float:
        return self._detuning

    @property
    def eta(self) -> float:
        return self._eta

    @property
    def sideband_g(self) -> float:
        return self._eta * self._omega

    @property
    def omega_eff(self) -> float:
        return self._omega * self.sideband_g / (2 * self._detuning)

    @property
    def omega_eff_carrier(self) -> float:
        return self._omega ** 2 / (2 * self._detuning)

    @property
    def gate_time(self) -> float:
        return TWO_PI / self.omega_eff

    @property
    def advisories(self) -> Tuple[str, ...]:
        return self._advisories

    def __repr__(self) -> str:
        return (
            f"RamanDrive(omega={self._omega:.6g}, "
            f"detuning={self._detuning:.6g}, eta={self._eta:.4g})"
        )


class MotionalErrorBudget(NamedTuple):
    """
    Failure probabilities of one motional gate.

    `valid` is cleared when any term exceeds
    :data:`BREAKDOWN_PROBABILITY`; the values are then reported, never
    clamped.
    """
    p_scatter: float
    p_heating: float
    p_offres: float
    p_total: float
    gate_time: float
    valid: bool = True
    advisories: Tuple[str, ...] = ()

    @classmethod
    def from_terms(
        cls,
        p_scatter: float,
        p_heating: float,
        p_offres: float,
        gate_time: float,
        advisories: Tuple[str, ...] = (),
    ) -> "MotionalErrorBudget":
        terms = (p_scatter, p_heating, p_offres)
        valid = all(term <= BREAKDOWN_PROBABILITY for term in terms)
        if not valid:
            advisories = advisories + (
                "model breakdown: an error term exceeds "
                f"{BREAKDOWN_PROBABILITY}",
            )
            logger.warning(advisories[-1])
        return cls(
            p_scatter=float(p_scatter),
            p_heating=float(p_heating),
            p_offres=float(p_offres),
            p_total=float(sum(terms)),
            gate_time=float(gate_time),
            valid=valid,
            advisories=advisories,
        )


def scatter_prob(gamma, omega, detuning, sideband_g):
    r"""
    Probability that a photon is scattered from the strong transition
    during the gate,

    .. math::
        p_1 = \frac{\pi \Gamma \Omega}{\Delta g}.

    The formula assumes :math:`\Omega \gg g`; a warning is logged when
    :math:`g > \Omega / 3`.
    """
    require_positive(
        gamma=gamma,
        omega=omega,
        detuning=detuning,
        sideband_g=sideband_g,
    )
    if np_any(sideband_g > omega / 3):
        logger.warning(
            "sideband coupling is not small compared to the Rabi frequency; "
            "the scattering estimate assumes g << Omega"
        )
    return pi * gamma * omega / (detuning * sideband_g)


def heating_prob(kappa, omega, detuning, sideband_g):
    r"""
    Probability of a heating event during the gate,
    :math:`p_2 = \kappa T = 4 \pi \kappa \Delta / (\Omega g)`.

    Args:
        kappa (float or ndarray):
            Heating rate of the vibrational mode, 1/s. Zero is allowed.
    """
    require_non_negative(kappa=kappa)
    require_positive(omega=omega, detuning=detuning, sideband_g=sideband_g)
    return 4 * pi * kappa * detuning / (omega * sideband_g)


def offres_leak(omega_eff_carrier, omega_z):
    r"""
    Population leaked through off-resonant excitation of the carrier,
    :math:`p_3 = (\Omega_{\rm eff,0} / \omega_z)^2`.
    """
    require_non_negative(omega_eff_carrier=omega_eff_carrier)
    require_positive(omega_z=omega_z)
    ratio = omega_eff_carrier / omega_z
    if np_any(ratio >= 1):
        logger.warning(
            "carrier Rabi frequency exceeds the trap frequency; "
            "the leakage estimate no longer applies"
        )
    return ratio ** 2


class CzOptimum(NamedTuple):
    ratio: float
    p_min: float
    rate: float
    valid: bool


def cz_optimum(kappa, gamma, sideband_g) -> CzOptimum:
    r"""
    Operating point minimizing :math:`p_1 + p_2` over :math:`\Omega/\Delta`.

    With :math:`x = \Omega / \Delta` the two terms are
    :math:`\pi \Gamma x / g` and :math:`4 \pi \kappa / (x g)`, so

    .. math::
        x^* = 2 \sqrt{\kappa / \Gamma}, \qquad
        p_{\min} = \frac{4 \pi \sqrt{\kappa \Gamma}}{g}, \qquad
        \frac{1}{T} = \frac{g^2}{\Gamma} \frac{p_{\min}}{8 \pi^2}.

    Returns:
        CzOptimum:
            Optimal ratio, minimum failure probability, gate rate and a
            validity flag (cleared above :data:`BREAKDOWN_PROBABILITY`).
    """
    require_positive(kappa=kappa, gamma=gamma, sideband_g=sideband_g)
    ratio = 2 * sqrt(kappa / gamma)
    p_min = 4 * pi * sqrt(kappa * gamma) / sideband_g
    rate = sideband_g ** 2 / gamma * p_min / (8 * pi ** 2)
    valid = bool(np_all(p_min <= BREAKDOWN_PROBABILITY))
    if not valid:
        logger.warning(
            "model breakdown: minimum failure probability exceeds "
            f"{BREAKDOWN_PROBABILITY}"
        )
    return CzOptimum(ratio=ratio, p_min=p_min, rate=rate, valid=valid)


def cz_budget(
    drive: RamanDrive,
    gamma: float,
    kappa: float,
    omega_z: float,
) -> MotionalErrorBudget:
    """Full error budget of the two-pulse gate for a concrete drive."""
    return MotionalErrorBudget.from_terms(
        p_scatter=scatter_prob(
            gamma=gamma,
            omega=drive.omega,
            detuning=drive.detuning,
            sideband_g=drive.sideband_g,
        ),
        p_heating=heating_prob(
            kappa=kappa,
            omega=drive.omega,
            detuning=drive.detuning,
            sideband_g=drive.sideband_g,
        ),
        p_offres=offres_leak(drive.omega_eff_carrier, omega_z),
        gate_time=drive.gate_time,
        advisories=drive.advisories,
    )


def cz_rate_at_p(p, eta, omega_z):
    r"""
    Gate rate attainable at failure probability `p` when off-resonant
    carrier leakage is the limit: setting :math:`p_3 = p` gives

    .. math::
        \frac{1}{T} = \frac{\sqrt{p}\, \eta\, \omega_z}{2 \pi}.
    """
    require_probability("p", p)
    require_positive(eta=eta, omega_z=omega_z)
    return sqrt(p) * eta * omega_z / TWO_PI


def rate_at_p_advisories(
    p: float,
    eta: float,
    omega_z: float,
    kappa: Optional[float] = None,
    gamma: Optional[float] = None,
    detuning: Optional[float] = None,
) -> Tuple[str, ...]:
    r"""
    Check the conditions under which :func:`cz_rate_at_p` holds:
    :math:`\kappa \ll p / T` and :math:`\Delta \gg \pi \Gamma / (\eta p)`.
    Only the conditions whose inputs are supplied are checked.
    """
    gate_time = 1 / cz_rate_at_p(p, eta, omega_z)
    advisories = []
    if kappa is not None and not kappa * _MARGIN < p / gate_time:
        advisories.append(
            f"heating rate {kappa:.3g} /s is not small compared to "
            f"p/T = {p / gate_time:.3g} /s"
        )
    if gamma is not None and detuning is not None:
        minimum = pi * gamma / (eta * p)
        if not detuning > _MARGIN * minimum:
            advisories.append(
                f"detuning {detuning:.3g} rad/s is not large compared to "
                f"pi Gamma / (eta p) = {minimum:.3g} rad/s"
            )
    for advisory in advisories:
        logger.warning(advisory)
    return tuple(advisories)


def breathing_mode(eta, omega_z):
    r"""
    Lamb-Dicke parameter and frequency of the breathing mode of a string,
    :math:`\omega_b = \sqrt{3}\, \omega_z` and
    :math:`\eta_b = 3^{-1/4} \eta`.
    """
    require_positive(eta=eta, omega_z=omega_z)
    return eta * 3 ** -0.25, sqrt(3.0) * omega_z


class LightShiftGate(NamedTuple):
    rate: float
    p_est: float


def lightshift_gate(eta, omega_z) -> LightShiftGate:
    r"""
    Fast gate driven by a state-dependent light shift: the rate is
    :math:`\eta \omega_z / 2 \pi` and the failure probability is roughly
    :math:`\eta^2 / 2`.
    """
    require_non_negative(eta=eta)
    require_positive(omega_z=omega_z)
    if not eta < 1:
        logger.warning(f"Lamb-Dicke parameter {eta:.3g} is not below 1")
    return LightShiftGate(rate=eta * omega_z / TWO_PI, p_est=eta ** 2 / 2)


def per_ion_time(rate, n_ions: int, scaling_exponent: float = 1.0):
    r"""
    Gate time per ion, :math:`1 / (r N^a)`.

    The gate rate of an N-ion string falls roughly as :math:`N^{0.93}`;
    the default exponent :math:`a = 1` approximates this as linear.
    """
    if n_ions < 1:
        raise DomainError(f"n_ions must be at least 1, got {n_ions}")
    require_positive(rate=rate)
    return 1 / (rate * n_ions ** scaling_exponent)


def ms_tradeoff(
    budget: MotionalErrorBudget,
    m_factor: float,
) -> MotionalErrorBudget:
    """
    Budget of a gate slowed down by `m_factor`: the heating term falls by
    that factor and the gate time grows by it. Scattering and off-resonant
    terms are unchanged.
    """
    if m_factor < 1:
        raise DomainError(f"m_factor must be at least 1, got {m_factor}")
    return MotionalErrorBudget.from_terms(
        p_scatter=budget.p_scatter,
        p_heating=budget.p_heating / m_factor,
        p_offres=budget.p_offres,
        gate_time=budget.gate_time * m_factor,
        advisories=tuple(
            advisory for advisory in budget.advisories
            if not advisory.startswith("model breakdown")
        ),
    )


class MsOperatingPoint(NamedTuple):
    p: float
    rate: float


def ms_scaled_optimum(p, rate, m_factor) -> MsOperatingPoint:
    r"""
    Re-optimized operating point after trading speed for fidelity:
    the failure probability falls as :math:`1/\sqrt{M}` while the rate falls
    as :math:`1/M`, so that the rate scales as :math:`p^2`.
    """
    if m_factor < 1:
        raise DomainError(f"m_factor must be at least 1, got {m_factor}")
    require_positive(p=p, rate=rate)
    return MsOperatingPoint(p=p / sqrt(m_factor), rate=rate / m_factor)


class HeatingCheck(NamedTuple):
    ratio: float
    limit: float
    passed: bool


def heating_check(kappa, omega_z, limit: float = 1e-6) -> HeatingCheck:
    r"""Compare the heating rate with :math:`\kappa / \omega_z < 10^{-6}`."""
    require_non_negative(kappa=kappa)
    require_positive(omega_z=omega_z, limit=limit)
    ratio = kappa / omega_z
    passed = bool(ratio < limit)
    if not passed:
        logger.warning(
            f"heating ratio kappa/omega_z = {ratio:.3g} exceeds {limit:.3g}"
        )
    return HeatingCheck(ratio=float(ratio), limit=limit, passed=passed)
