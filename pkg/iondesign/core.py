r"""
Species and cavity geometry derivations shared by all estimators.

Every rate and frequency is angular (rad/s); lengths are in metres.
"""
import logging
from typing import (
    Any,
    Dict,
    NamedTuple,
    Optional,
)

from numpy import (
    log,
    log2,
    pi,
    sqrt,
)

from iondesign.constants import (
    C,
    COULOMB_CONSTANT,
    EPS0,
    HBAR,
    TWO_PI,
)
from iondesign.exceptions import DomainError
from iondesign.utilities import (
    relative_difference,
    require_non_negative,
    require_positive,
    require_probability,
)

__all__ = [
    "CavityConfig",
    "DEFAULT_GEOMETRY_FACTOR",
    "EntanglementRecord",
    "IonSpecies",
    "SPACING_COEFFICIENT",
    "SPACING_EXPONENT",
    "TrapConfig",
    "addressing_waist",
    "axial_freq_for_spacing",
    "cat_state_qubits",
    "cavity_kappa",
    "dipole_from_gamma",
    "entanglement_record",
    "gamma_from_dipole",
    "g_squared_over_gamma",
    "gaussian_waist",
    "lamb_dicke",
    "minimum_spacing",
    "single_photon_g",
    "transition_omega",
]

logger = logging.getLogger(__name__)

# Minimum spacing of an N-ion harmonic string, s_min = 2.018 l N^-0.559.
SPACING_COEFFICIENT = 2.018
SPACING_EXPONENT = 0.559

# Two Raman beams crossing at 90 degrees.
DEFAULT_GEOMETRY_FACTOR = sqrt(2.0)

_CONSISTENCY_TOLERANCE = 1e-9


def transition_omega(wavelength):
    r"""Angular frequency :math:`2 \pi c / \lambda` of a transition."""
    require_positive(wavelength=wavelength)
    return TWO_PI * C / wavelength


def gamma_from_dipole(dipole, omega):
    r"""
    Spontaneous decay rate of a dipole transition,

    .. math::
        \Gamma = \frac{\omega^3 d^2}{3 \pi \epsilon_0 \hbar c^3}.

    Args:
        dipole (float or ndarray):
            Dipole matrix element :math:`d`, C m.
        omega (float or ndarray):
            Transition angular frequency, rad/s.

    Returns:
        float or ndarray:
            :math:`\Gamma`, rad/s (full width).
    """
    require_positive(dipole=dipole, omega=omega)
    return omega ** 3 * dipole ** 2 / (3 * pi * EPS0 * HBAR * C ** 3)


def dipole_from_gamma(gamma, omega):
    """Inverse of :func:`gamma_from_dipole`."""
    require_positive(gamma=gamma, omega=omega)
    return sqrt(3 * pi * EPS0 * HBAR * C ** 3 * gamma / omega ** 3)


def single_photon_g(dipole, omega, mode_volume):
    r"""
    Atom-cavity coupling for the field of a single photon,

    .. math::
        g = d \sqrt{\frac{2 \omega}{\epsilon_0 \hbar V}}.

    Args:
        dipole (float or ndarray):
            Dipole matrix element, C m.
        omega (float or ndarray):
            Photon angular frequency, rad/s.
        mode_volume (float or ndarray):
            Mode volume :math:`V`, m^3.

    Returns:
        float or ndarray:
            :math:`g`, rad/s.
    """
    require_positive(dipole=dipole, omega=omega, mode_volume=mode_volume)
    return dipole * sqrt(2 * omega / (EPS0 * HBAR * mode_volume))


def g_squared_over_gamma(wavelength, mode_volume):
    r""":math:`g^2 / \Gamma = 3 c \lambda^2 / (2 \pi V)`, independent of d."""
    require_positive(wavelength=wavelength, mode_volume=mode_volume)
    return 3 * C * wavelength ** 2 / (2 * pi * mode_volume)


def cavity_kappa(finesse, length):
    r"""Cavity field decay rate :math:`\kappa = c \pi / (F L)`, rad/s."""
    require_positive(finesse=finesse, length=length)
    return C * pi / (finesse * length)


def gaussian_waist(wavelength, length, mirror_curvature):
    r"""
    Waist of the fundamental Gaussian mode of a symmetric two-mirror
    resonator,

    .. math::
        w_0^2 = \frac{\lambda}{2 \pi} \sqrt{L (2 R - L)}.

    The resonator is stable for mirror parameter
    :math:`g_m = 1 - L/R` with :math:`0 \le g_m^2 < 1`, i.e.
    :math:`0 < L < 2R`.

    Raises:
        DomainError:
            For the concentric limit :math:`L \ge 2R` or non-positive input.
    """
    require_positive(
        wavelength=wavelength,
        length=length,
        mirror_curvature=mirror_curvature,
    )
    mirror_parameter = 1 - length / mirror_curvature
    if not mirror_parameter ** 2 < 1:
        raise DomainError(
            f"unstable resonator: length {length} m must be below "
            f"2 x mirror curvature ({2 * mirror_curvature} m)"
        )
    return sqrt(
        wavelength / TWO_PI
        * sqrt(length * (2 * mirror_curvature - length))
    )


def lamb_dicke(trap: "TrapConfig"):
    r"""
    Lamb-Dicke parameter of the centre-of-mass mode of an N-ion string,

    .. math::
        \eta = k_g \frac{2 \pi}{\lambda}
        \sqrt{\frac{\hbar}{2 N m \omega_z}},

    where :math:`k_g` is the geometry factor of the driving beams.
    """
    species = trap.species
    return (
        trap.geometry_factor
        * TWO_PI / species.wavelength
        * sqrt(HBAR / (2 * trap.n_ions * species.mass * trap.omega_z))
    )


def minimum_spacing(species: "IonSpecies", n_ions: int, omega_z):
    r"""
    Smallest distance between neighbours in a harmonic string of `n_ions`,

    .. math::
        s_{\min} = 2.018\, \ell\, N^{-0.559}, \qquad
        \ell^3 = \frac{e^2}{4 \pi \epsilon_0 m \omega_z^2}.
    """
    if n_ions < 2:
        raise DomainError(f"a string needs at least 2 ions, got {n_ions}")
    require_positive(omega_z=omega_z)
    cube = COULOMB_CONSTANT / (species.mass * omega_z ** 2)
    length_scale = cube ** (1 / 3)
    return SPACING_COEFFICIENT * length_scale * n_ions ** -SPACING_EXPONENT


def axial_freq_for_spacing(
    species: "IonSpecies",
    n_ions: int,
    spacing_multiple: float,
):
    r"""
    Largest axial frequency for which the closest ions of an N-ion string
    stay at least :math:`c_s \lambda` apart.

    Inverts :func:`minimum_spacing`; since
    :math:`s_{\min} \propto \omega_z^{-2/3}`, doubling :math:`c_s`
    lowers the frequency by :math:`2^{3/2}`.

    Returns:
        float:
            :math:`\omega_z`, rad/s.
    """
    if n_ions < 2:
        raise DomainError(f"a string needs at least 2 ions, got {n_ions}")
    require_positive(spacing_multiple=spacing_multiple)
    spacing = spacing_multiple * species.wavelength
    length_scale = spacing * n_ions ** SPACING_EXPONENT / SPACING_COEFFICIENT
    return sqrt(COULOMB_CONSTANT / (species.mass * length_scale ** 3))


def addressing_waist(spacing, crosstalk):
    r"""
    Waist of an addressing beam whose intensity on the neighbouring ion,
    a distance `spacing` away, is the fraction `crosstalk` of the peak:
    :math:`e^{-2 s^2 / w^2} = x`, so

    .. math::
        w = s \sqrt{\frac{2}{\ln(1/x)}}.

    At :math:`x = 10^{-4}` this is :math:`s / (\ln 100)^{1/2}`, about
    :math:`2.3 \lambda` for :math:`s = 5 \lambda`.

    Note:
        `crosstalk` is an intensity fraction, so the waist carries the
        factor :math:`\sqrt{2}` of a Gaussian intensity profile. Reading
        the closed form as :math:`w = s / \sqrt{\ln(1/x)}` instead would
        give :math:`w = s` at :math:`x = e^{-1}`; here that crosstalk
        gives :math:`w = \sqrt{2}\, s`.
    """
    require_positive(spacing=spacing)
    require_probability("crosstalk", crosstalk)
    return spacing * sqrt(2 / log(1 / crosstalk))


def cat_state_qubits(alpha):
    r"""
    Size, in qubits, of the cat state made of a coherent motional state of
    amplitude :math:`\alpha` entangled with one internal qubit,
    :math:`\log_2(|\alpha|^2 + 1 + |\alpha|) + 1`.
    """
    require_non_negative(alpha=alpha)
    return log2(alpha ** 2 + 1 + alpha) + 1


class EntanglementRecord(NamedTuple):
    """Recorded entangling performance; a datum, not a simulation."""
    efficiency: float
    rate: float
    cat_alpha: float
    cat_qubits: float


def entanglement_record(
    efficiency: float,
    rate: float,
    cat_alpha: float = 0.0,
) -> EntanglementRecord:
    require_probability("efficiency", efficiency, inclusive=True)
    require_non_negative(rate=rate)
    return EntanglementRecord(
        efficiency=efficiency,
        rate=rate,
        cat_alpha=cat_alpha,
        cat_qubits=float(cat_state_qubits(cat_alpha)),
    )


class IonSpecies:
    """
    Atom-side parameters of a strong dipole transition.

    Either `gamma` or `dipole` may be omitted; the missing one follows
    from :func:`gamma_from_dipole`. When both are given they must agree.

    Args:
        name (str):
            Label, e.g. ``"Ca+"``.
        mass (float):
            Mass, kg.
        wavelength (float):
            Wavelength of the strong transition, m.
        gamma (float, optional):
            Natural linewidth :math:`\\Gamma` (full width), rad/s.
        dipole (float, optional):
            Dipole matrix element :math:`d`, C m.
        hyperfine_splitting (float, optional):
            Ground-state hyperfine splitting, rad/s.
    """

    def __init__(
        self,
        name: str,
        mass: float,
        wavelength: float,
        gamma: Optional[float] = None,
        dipole: Optional[float] = None,
        hyperfine_splitting: Optional[float] = None,
    ):
        require_positive(mass=mass, wavelength=wavelength)
        if gamma is None and dipole is None:
            raise DomainError(f"{name}: either gamma or dipole is required")

        self._name = name
        self._mass = float(mass)
        self._wavelength = float(wavelength)
        self._omega = float(transition_omega(wavelength))

        if gamma is None:
            gamma = gamma_from_dipole(dipole, self._omega)
        require_positive(gamma=gamma)
        self._gamma = float(gamma)

        derived_dipole = float(dipole_from_gamma(self._gamma, self._omega))
        if dipole is not None:
            mismatch = relative_difference(dipole, derived_dipole)
            if mismatch > _CONSISTENCY_TOLERANCE:
                raise DomainError(
                    f"{name}: dipole {dipole} C m disagrees with linewidth "
                    f"(expects {derived_dipole} C m)"
                )
        self._dipole = derived_dipole if dipole is None else float(dipole)

        if hyperfine_splitting is not None:
            require_positive(hyperfine_splitting=hyperfine_splitting)
        self._hyperfine_splitting = hyperfine_splitting

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "IonSpecies":
        """
        Build a species from an SI record, as produced by
        :func:`iondesign.units.section_to_si` on a species data file.
        """
        return cls(
            name=record.get("name", "unnamed"),
            mass=record["mass"],
            wavelength=record["wavelength"],
            gamma=record.get("linewidth"),
            dipole=record.get("dipole"),
            hyperfine_splitting=record.get("hyperfine_splitting"),
        )

    @property
    def name(self) -> str:
        return self._name

    @property
    def mass(self) -> float:
        return self._mass

    @property
    def wavelength(self) -> float:
        return self._wavelength

    @property
    def omega(self) -> float:
        return self._omega

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def dipole(self) -> float:
        return self._dipole

    @property
    def hyperfine_splitting(self) -> Optional[float]:
        return self._hyperfine_splitting

    def __repr__(self) -> str:
        return (
            f"IonSpecies(name={self._name!r}, mass={self._mass:.6g}, "
            f"wavelength={self._wavelength:.6g}, gamma={self._gamma:.6g})"
        )


class CavityConfig:
    """
    Geometry and rates of the photon mode coupling the atoms.

    Use :meth:`fabry_perot` or :meth:`microsphere` rather than the
    constructor; they derive :math:`g`, :math:`\\kappa` and the mode
    geometry from the physical description.
    """

    FABRY_PEROT = "fabry_perot"
    MICROSPHERE = "microsphere"

    def __init__(
        self,
        kind: str,
        g: float,
        kappa: float,
        length: Optional[float] = None,
        finesse: Optional[float] = None,
        mirror_curvature: Optional[float] = None,
        sphere_radius: Optional[float] = None,
        quality_factor: Optional[float] = None,
        waist: Optional[float] = None,
        mode_volume: Optional[float] = None,
        reference_radius: Optional[float] = None,
    ):
        if kind not in (CavityConfig.FABRY_PEROT, CavityConfig.MICROSPHERE):
            raise DomainError(f"unknown cavity kind {kind!r}")
        require_positive(g=g, kappa=kappa)

        self._kind = kind
        self._g = float(g)
        self._kappa = float(kappa)
        self._length = length
        self._finesse = finesse
        self._mirror_curvature = mirror_curvature
        self._sphere_radius = sphere_radius
        self._quality_factor = quality_factor
        self._waist = waist
        self._mode_volume = mode_volume
        self._reference_radius = reference_radius

    @classmethod
    def fabry_perot(
        cls,
        species: IonSpecies,
        length: float,
        finesse: float,
        mirror_curvature: Optional[float] = None,
        waist: Optional[float] = None,
    ) -> "CavityConfig":
        """
        Two-mirror cavity with mode volume :math:`V = L w_0^2`.

        Args:
            species (IonSpecies):
                Atoms coupled to the mode.
            length (float):
                Mirror separation :math:`L`, m.
            finesse (float):
                Finesse :math:`F`.
            mirror_curvature (float, optional):
                Mirror radius of curvature :math:`R`, m; used to derive the
                waist when `waist` is not given.
            waist (float, optional):
                Mode waist (or average mode diameter), m.
        """
        if waist is None:
            if mirror_curvature is None:
                raise DomainError(
                    "a Fabry-Perot cavity needs mirror_curvature or waist"
                )
            waist = gaussian_waist(
                wavelength=species.wavelength,
                length=length,
                mirror_curvature=mirror_curvature,
            )
        require_positive(length=length, finesse=finesse, waist=waist)

        mode_volume = length * waist ** 2
        kappa = cavity_kappa(finesse=finesse, length=length)
        return cls(
            kind=cls.FABRY_PEROT,
            g=float(single_photon_g(
                species.dipole,
                species.omega,
                mode_volume,
            )),
            kappa=float(kappa),
            length=length,
            finesse=finesse,
            mirror_curvature=mirror_curvature,
            quality_factor=species.omega / kappa,
            waist=float(waist),
            mode_volume=float(mode_volume),
        )

    @classmethod
    def microsphere(
        cls,
        species: IonSpecies,
        radius: float,
        g_over_gamma: float,
        g_over_kappa: Optional[float] = None,
        quality_factor: Optional[float] = None,
        reference_radius: Optional[float] = None,
    ) -> "CavityConfig":
        """
        Whispering-gallery mode of a silica sphere, specified by coupling
        ratios rather than computed from first principles.

        The ratios hold for a sphere of `reference_radius` (default
        `radius`); :math:`g` and :math:`\\kappa` both scale as the inverse
        radius. :math:`\\kappa` comes from `g_over_kappa` when given,
        otherwise from :math:`Q = \\omega / \\kappa`.
        """
        require_positive(radius=radius, g_over_gamma=g_over_gamma)
        if reference_radius is None:
            reference_radius = radius
        require_positive(reference_radius=reference_radius)
        scale = reference_radius / radius

        g = g_over_gamma * species.gamma
        if g_over_kappa is not None:
            require_positive(g_over_kappa=g_over_kappa)
            kappa = g / g_over_kappa
        elif quality_factor is not None:
            require_positive(quality_factor=quality_factor)
            kappa = species.omega / quality_factor
        else:
            raise DomainError(
                "a microsphere needs g_over_kappa or quality_factor"
            )

        return cls(
            kind=cls.MICROSPHERE,
            g=g * scale,
            kappa=kappa * scale,
            sphere_radius=radius,
            quality_factor=species.omega / (kappa * scale),
            reference_radius=reference_radius,
        )

    @classmethod
    def from_record(
        cls,
        species: IonSpecies,
        record: Dict[str, Any],
    ) -> "CavityConfig":
        """Build a cavity from an SI config section."""
        kind = record.get("kind", cls.FABRY_PEROT)
        if kind == cls.FABRY_PEROT:
            return cls.fabry_perot(
                species=species,
                length=record["length"],
                finesse=record["finesse"],
                mirror_curvature=record.get("mirror_curvature"),
                waist=record.get("waist"),
            )
        if kind == cls.MICROSPHERE:
            return cls.microsphere(
                species=species,
                radius=record["radius"],
                g_over_gamma=record["g_over_gamma"],
                g_over_kappa=record.get("g_over_kappa"),
                quality_factor=record.get("quality_factor"),
                reference_radius=record.get("reference_radius"),
            )
        raise DomainError(f"unknown cavity kind {kind!r}")

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def g(self) -> float:
        return self._g

    @property
    def kappa(self) -> float:
        return self._kappa

    @property
    def length(self) -> Optional[float]:
        return self._length

    @property
    def finesse(self) -> Optional[float]:
        return self._finesse

    @property
    def mirror_curvature(self) -> Optional[float]:
        return self._mirror_curvature

    @property
    def sphere_radius(self) -> Optional[float]:
        return self._sphere_radius

    @property
    def quality_factor(self) -> Optional[float]:
        return self._quality_factor

    @property
    def waist(self) -> Optional[float]:
        return self._waist

    @property
    def mode_volume(self) -> Optional[float]:
        return self._mode_volume

    @property
    def reference_radius(self) -> Optional[float]:
        return self._reference_radius

    def __repr__(self) -> str:
        return (
            f"CavityConfig(kind={self._kind!r}, g={self._g:.6g}, "
            f"kappa={self._kappa:.6g})"
        )


class TrapConfig:
    """
    Linear string of `n_ions` identical ions in a harmonic trap.

    Args:
        species (IonSpecies):
            Ion species.
        n_ions (int):
            Number of ions :math:`N`.
        omega_z (float):
            Axial centre-of-mass frequency, rad/s.
        spacing_multiple (float):
            :math:`c_s` in the spacing rule :math:`s = c_s \\lambda`.
        geometry_factor (float):
            Effective-wavevector multiplier of the driving beams.
    """

    def __init__(
        self,
        species: IonSpecies,
        n_ions: int,
        omega_z: float,
        spacing_multiple: float = 5.0,
        geometry_factor: float = DEFAULT_GEOMETRY_FACTOR,
    ):
        if int(n_ions) != n_ions or n_ions < 1:
            raise DomainError(
                f"n_ions must be a positive integer, got {n_ions}"
            )
        require_positive(
            omega_z=omega_z,
            spacing_multiple=spacing_multiple,
            geometry_factor=geometry_factor,
        )
        self._species = species
        self._n_ions = int(n_ions)
        self._omega_z = float(omega_z)
        self._spacing_multiple = float(spacing_multiple)
        self._geometry_factor = float(geometry_factor)

        self._eta = float(lamb_dicke(self))
        if not 0 < self._eta < 1:
            logger.warning(
                f"Lamb-Dicke parameter {self._eta:.3g} is outside (0, 1); "
                "the sideband formulas do not apply."
            )

    @classmethod
    def for_spacing(
        cls,
        species: IonSpecies,
        n_ions: int,
        spacing_multiple: float = 5.0,
        geometry_factor: float = DEFAULT_GEOMETRY_FACTOR,
    ) -> "TrapConfig":
        """Trap with the largest axial frequency the spacing rule allows."""
        omega_z = axial_freq_for_spacing(
            species=species,
            n_ions=n_ions,
            spacing_multiple=spacing_multiple,
        )
        return cls(
            species=species,
            n_ions=n_ions,
            omega_z=float(omega_z),
            spacing_multiple=spacing_multiple,
            geometry_factor=geometry_factor,
        )

    @classmethod
    def from_record(
        cls,
        species: IonSpecies,
        record: Dict[str, Any],
    ) -> "TrapConfig":
        """
        Build a trap from an SI config section; the axial frequency is
        derived from the spacing rule unless ``axial_frequency`` is set.
        """
        options = {
            "spacing_multiple": record.get("spacing_multiple", 5.0),
            "geometry_factor": record.get(
                "geometry_factor",
                DEFAULT_GEOMETRY_FACTOR,
            ),
        }
        if record.get("axial_frequency") is not None:
            return cls(
                species=species,
                n_ions=record["n_ions"],
                omega_z=record["axial_frequency"],
                **options,
            )
        return cls.for_spacing(
            species=species,
            n_ions=record["n_ions"],
            **options,
        )

    @property
    def species(self) -> IonSpecies:
        return self._species

    @property
    def n_ions(self) -> int:
        return self._n_ions

    @property
    def omega_z(self) -> float:
        return self._omega_z

    @property
    def spacing_multiple(self) -> float:
        return self._spacing_multiple

    @property
    def geometry_factor(self) -> float:
        return self._geometry_factor

    @property
    def spacing(self) -> float:
        return self._spacing_multiple * self._species.wavelength

    @property
    def eta(self) -> float:
        return self._eta

    def __repr__(self) -> str:
        return (
            f"TrapConfig(species={self._species.name!r}, "
            f"n_ions={self._n_ions}, omega_z={self._omega_z:.6g}, "
            f"eta={self._eta:.4g})"
        )
