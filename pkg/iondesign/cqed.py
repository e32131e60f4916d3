r"""
Gates mediated by a cavity photon: adiabatic passage through a dark state
and single-photon Rabi flopping, plus the cavity figures of merit they
depend on.

Three states take part in the passage: :math:`|b,a,0\rangle`,
:math:`|a,b,0\rangle` and :math:`|b,b,1\rangle`, where the last carries one
photon in the cavity. Two lasers of Rabi frequencies :math:`\Omega_1` and
:math:`\Omega_2` couple the two atoms to the cavity with strength
:math:`g`.
"""
import logging
from typing import (
    NamedTuple,
    Tuple,
)

from numpy import (
    any as np_any,
    array,
    complex128,
    pi,
    sqrt,
)
from scipy.integrate import quad

from iondesign.core import CavityConfig
from iondesign.exceptions import DomainError
from iondesign.motional import BREAKDOWN_PROBABILITY
from iondesign.utilities import (
    require_non_negative,
    require_positive,
    require_probability,
)

__all__ = [
    "AdiabaticPulsePlan",
    "AdiabaticRate",
    "CqedErrorBudget",
    "DarkStateDecomposition",
    "PHOTON_DECAY_COEFFICIENT",
    "RabiFlopGate",
    "SILICA_REFRACTIVE_INDEX",
    "adiabatic_budget",
    "adiabatic_leak",
    "adiabatic_plan",
    "adiabatic_rate",
    "bright_state",
    "dark_state",
    "finesse_p",
    "microsphere_config",
    "photon_decay_loss",
    "photon_decay_loss_exact",
    "rabi_flop_gate",
    "sphere_radius_for_ions",
]

logger = logging.getLogger(__name__)

# Integral of u^2 (1 - u)^2 / (u^2 + (1 - u)^2) over the linear ramp.
PHOTON_DECAY_COEFFICIENT = pi / 8 - 1 / 3

SILICA_REFRACTIVE_INDEX = 1.45

# Drives above g / 3 no longer satisfy Omega << g.
_WEAK_DRIVE_FRACTION = 1 / 3
# The rate formula needs (g / kappa) / (3 / p)^(3/2) well below one.
_WINDOW_LIMIT = 0.1


class DarkStateDecomposition(NamedTuple):
    r"""
    Real amplitudes on :math:`|b,a,0\rangle`, :math:`|a,b,0\rangle` and
    :math:`|b,b,1\rangle`.
    """
    amp_ba0: float
    amp_ab0: float
    amp_bb1: float

    @property
    def norm(self) -> float:
        return float(sqrt(self.amp_ba0 ** 2 + self.amp_ab0 ** 2
                          + self.amp_bb1 ** 2))

    def vector(self):
        r"""
        State vector in the basis :math:`|a,b,0\rangle, |e,b,0\rangle,
        |b,b,1\rangle, |b,e,0\rangle, |b,a,0\rangle` used by
        :func:`iondesign.oracle.check_adiabatic_passage`.
        """
        return array(
            [self.amp_ab0, 0, self.amp_bb1, 0, self.amp_ba0],
            dtype=complex128,
        )


def _normalized(amp_ba0, amp_ab0, amp_bb1) -> DarkStateDecomposition:
    norm = sqrt(amp_ba0 ** 2 + amp_ab0 ** 2 + amp_bb1 ** 2)
    if norm == 0:
        raise DomainError("drive amplitudes are all zero")
    return DarkStateDecomposition(
        amp_ba0=float(amp_ba0 / norm),
        amp_ab0=float(amp_ab0 / norm),
        amp_bb1=float(amp_bb1 / norm),
    )


def dark_state(omega1, omega2, g) -> DarkStateDecomposition:
    r"""
    The dark state of the two lasers and the cavity,

    .. math::
        |D\rangle \propto \Omega_1 g\, |b,a,0\rangle
        + \Omega_2 g\, |a,b,0\rangle - \Omega_1 \Omega_2\, |b,b,1\rangle.

    It has no amplitude on either excited state and is therefore immune
    to spontaneous emission.

    Raises:
        DomainError:
            When every amplitude vanishes.
    """
    require_non_negative(omega1=omega1, omega2=omega2, g=g)
    return _normalized(
        amp_ba0=omega1 * g,
        amp_ab0=omega2 * g,
        amp_bb1=-omega1 * omega2,
    )


def bright_state(omega1, omega2, g) -> DarkStateDecomposition:
    r"""
    Combination :math:`\Omega_2 g\, |b,a,0\rangle - \Omega_1 g\,
    |a,b,0\rangle` of the two ground states orthogonal to the dark state,
    in the same amplitude layout as :func:`dark_state`.
    """
    require_non_negative(omega1=omega1, omega2=omega2, g=g)
    return _normalized(
        amp_ba0=omega2 * g,
        amp_ab0=-omega1 * g,
        amp_bb1=0.0,
    )


def adiabatic_leak(ramp_time, omega_max):
    r"""
    Probability of a non-adiabatic transition out of the dark state over a
    linear ramp, :math:`p_1 = 4 / (T \Omega)^2`.
    """
    require_positive(ramp_time=ramp_time, omega_max=omega_max)
    return 4 / (ramp_time * omega_max) ** 2


def photon_decay_loss(omega_max, g, kappa, ramp_time):
    r"""
    Loss through cavity decay while the photon state is populated,
    :math:`p_2 = \Omega^2 \kappa T / (2 g^2)`.

    This is the quoted upper estimate; :func:`photon_decay_loss_exact`
    integrates the dark-state photon population over the ramp.
    """
    require_non_negative(kappa=kappa)
    require_positive(omega_max=omega_max, g=g, ramp_time=ramp_time)
    if np_any(omega_max >= g):
        logger.warning("drive is not below the cavity coupling g")
    return omega_max ** 2 * kappa * ramp_time / (2 * g ** 2)


def photon_decay_loss_exact(omega_max, g, kappa, ramp_time):
    r"""
    Cavity decay loss :math:`\kappa \int_0^T P_{bb1}(t)\, dt` for a
    system that follows the dark state exactly along the ramp
    :math:`\Omega_2 = \Omega t / T`, :math:`\Omega_1 = \Omega - \Omega_2`.

    For :math:`\Omega \ll g` this tends to
    :math:`(\pi / 8 - 1 / 3)\, \Omega^2 \kappa T / g^2`.
    """
    require_non_negative(kappa=kappa)
    require_positive(omega_max=omega_max, g=g, ramp_time=ramp_time)

    def photon_population(u: float) -> float:
        omega1 = omega_max * (1 - u)
        omega2 = omega_max * u
        product = (omega1 * omega2) ** 2
        return product / (g ** 2 * (omega1 ** 2 + omega2 ** 2) + product)

    integral, _ = quad(photon_population, 0, 1, epsabs=0.0, epsrel=1e-10)
    return kappa * ramp_time * integral


class CqedErrorBudget(NamedTuple):
    p_nonadiabatic: float
    p_photon_decay: float
    p_total: float
    gate_time: float
    valid: bool = True
    advisories: Tuple[str, ...] = ()


def adiabatic_budget(
    omega_max: float,
    g: float,
    kappa: float,
    ramp_time: float,
) -> CqedErrorBudget:
    """Error budget of one adiabatic passage with a linear ramp."""
    p_nonadiabatic = float(adiabatic_leak(ramp_time, omega_max))
    p_photon_decay = float(photon_decay_loss(omega_max, g, kappa, ramp_time))

    advisories = []
    if omega_max > _WEAK_DRIVE_FRACTION * g:
        advisories.append(
            "drive is not weak compared to g; the dark state carries a "
            "large photon component"
        )
    valid = max(p_nonadiabatic, p_photon_decay) <= BREAKDOWN_PROBABILITY
    if not valid:
        advisories.append(
            f"model breakdown: an error term exceeds {BREAKDOWN_PROBABILITY}"
        )
    for advisory in advisories:
        logger.warning(advisory)

    return CqedErrorBudget(
        p_nonadiabatic=p_nonadiabatic,
        p_photon_decay=p_photon_decay,
        p_total=p_nonadiabatic + p_photon_decay,
        gate_time=float(ramp_time),
        valid=valid,
        advisories=tuple(advisories),
    )


class AdiabaticRate(NamedTuple):
    """
    Gate rate at failure probability `p` with the conservative coefficient
    (`rate`, `omega_required`) and at the exact optimum
    (`rate_exact`, `omega_exact`).
    """
    rate: float
    omega_required: float
    rate_exact: float
    omega_exact: float
    window: float
    within_window: bool


def adiabatic_rate(p, g, kappa) -> AdiabaticRate:
    r"""
    Fastest adiabatic passage with failure probability `p`.

    Balancing :math:`p_1 = 4 / (T \Omega)^2` against
    :math:`p_2 = \Omega^2 \kappa T / (2 g^2)` at fixed total
    :math:`p = p_1 + p_2` gives the exact optimum
    :math:`p_1 = p_2 = p / 2`, so

    .. math::
        \frac{1}{T} = \frac{p^2 g^2}{8 \kappa}, \qquad
        \Omega = \frac{g^2}{\kappa} \left(\frac{p}{2}\right)^{3/2}.

    The customary conservative form uses :math:`p / 3` in place of
    :math:`p / 2` for the laser intensity and the coefficient :math:`1/9`
    for the rate; both are returned. The result is meaningful only when
    :math:`g / \kappa \ll (3 / p)^{3/2}`, reported as `window`.

    Raises:
        DomainError:
            For `p` outside (0, 0.5).
    """
    require_probability("p", p, upper=BREAKDOWN_PROBABILITY)
    require_positive(g=g, kappa=kappa)

    window = (g / kappa) / (3 / p) ** 1.5
    within_window = window < _WINDOW_LIMIT
    if not within_window:
        logger.warning(
            f"g/kappa = {g / kappa:.3g} is not small compared to "
            f"(3/p)^(3/2) = {(3 / p) ** 1.5:.3g}"
        )
    return AdiabaticRate(
        rate=p ** 2 * g ** 2 / (9 * kappa),
        omega_required=g ** 2 * (p / 3) ** 1.5 / kappa,
        rate_exact=p ** 2 * g ** 2 / (8 * kappa),
        omega_exact=g ** 2 * (p / 2) ** 1.5 / kappa,
        window=window,
        within_window=within_window,
    )


class AdiabaticPulsePlan(NamedTuple):
    omega_max: float
    ramp_time: float
    g: float
    kappa: float
    weak_drive: bool
    window: float
    advisories: Tuple[str, ...] = ()


def adiabatic_plan(p, g, kappa, exact: bool = False) -> AdiabaticPulsePlan:
    """
    Pulse parameters reaching failure probability `p`, using the
    conservative coefficient unless `exact` is set.
    """
    rate = adiabatic_rate(p, g, kappa)
    omega_max = rate.omega_exact if exact else rate.omega_required
    ramp_time = 1 / (rate.rate_exact if exact else rate.rate)

    advisories = []
    weak_drive = omega_max <= _WEAK_DRIVE_FRACTION * g
    if not weak_drive:
        advisories.append(
            f"required drive {omega_max:.3g} rad/s exceeds g/3"
        )
        logger.warning(advisories[-1])
    if not rate.within_window:
        advisories.append(
            f"outside the validity window: (g/kappa)/(3/p)^(3/2) = "
            f"{rate.window:.3g}"
        )
    return AdiabaticPulsePlan(
        omega_max=float(omega_max),
        ramp_time=float(ramp_time),
        g=float(g),
        kappa=float(kappa),
        weak_drive=weak_drive,
        window=float(rate.window),
        advisories=tuple(advisories),
    )


class RabiFlopGate(NamedTuple):
    p: float
    rate: float
    valid: bool


def rabi_flop_gate(kappa, gamma, g) -> RabiFlopGate:
    r"""
    Gate built from single-photon Rabi flopping between atom and cavity.
    Treating the cavity photon as a lossy excited state with decay
    :math:`\kappa / 2` gives

    .. math::
        p = \frac{2 \pi \sqrt{2 \kappa \Gamma}}{g}, \qquad
        \frac{1}{T} = \frac{g^2}{\Gamma} \frac{p}{8 \pi^2}.

    `valid` is cleared when :math:`p > 1`.
    """
    require_positive(kappa=kappa, gamma=gamma, g=g)
    p = 2 * pi * sqrt(2 * kappa * gamma) / g
    rate = g ** 2 / gamma * p / (8 * pi ** 2)
    valid = bool(p <= 1)
    if not valid:
        logger.warning(f"model breakdown: Rabi-flop failure {p:.3g} above 1")
    return RabiFlopGate(p=float(p), rate=float(rate), valid=valid)


def finesse_p(waist, wavelength, finesse):
    r"""
    Rabi-flop failure probability of a Fabry-Perot cavity written in terms
    of its geometry only,

    .. math::
        p = \frac{4 \pi^2 w}{\lambda} (3 F)^{-1/2}.

    It does not depend on the dipole element or on the cavity length.
    """
    require_positive(waist=waist, wavelength=wavelength, finesse=finesse)
    return 4 * pi ** 2 * waist / wavelength / sqrt(3 * finesse)


def microsphere_config(radius: float, reference: CavityConfig) -> CavityConfig:
    """
    Rescale a whispering-gallery cavity to a sphere of another radius;
    :math:`g` and :math:`\\kappa` both scale as the inverse radius.
    """
    require_positive(radius=radius)
    if reference.kind != CavityConfig.MICROSPHERE:
        raise DomainError("reference cavity must be a microsphere")
    reference_radius = reference.reference_radius
    if reference_radius is None:
        reference_radius = reference.sphere_radius

    # g and kappa of the reference are those of its own sphere
    scale = reference.sphere_radius / radius
    quality_factor = reference.quality_factor
    if quality_factor is not None:
        quality_factor = quality_factor / scale
    return CavityConfig(
        kind=CavityConfig.MICROSPHERE,
        g=reference.g * scale,
        kappa=reference.kappa * scale,
        sphere_radius=radius,
        quality_factor=quality_factor,
        reference_radius=reference_radius,
    )


def sphere_radius_for_ions(
    n_ions: int,
    wavelength: float,
    spacing_multiple: float = 5.0,
    refractive_index: float = SILICA_REFRACTIVE_INDEX,
) -> float:
    """
    Radius of a sphere whose equator holds `n_ions` atoms spaced by
    `spacing_multiple` wavelengths, measured inside the dielectric.
    """
    if n_ions < 1:
        raise DomainError(f"n_ions must be at least 1, got {n_ions}")
    require_positive(
        wavelength=wavelength,
        spacing_multiple=spacing_multiple,
        refractive_index=refractive_index,
    )
    circumference = n_ions * spacing_multiple * wavelength / refractive_index
    return circumference / (2 * pi)
