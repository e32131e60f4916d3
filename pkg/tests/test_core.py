from math import (
    e as EULER,
    log,
    sqrt,
)

from numpy.random import default_rng
from pytest import (
    approx,
    mark,
    raises,
)

from iondesign.constants import (
    BOHR_RADIUS,
    C,
    E,
    HBAR,
    TWO_PI,
)
from iondesign.core import (
    CavityConfig,
    IonSpecies,
    TrapConfig,
    addressing_waist,
    axial_freq_for_spacing,
    cat_state_qubits,
    cavity_kappa,
    dipole_from_gamma,
    entanglement_record,
    gamma_from_dipole,
    g_squared_over_gamma,
    gaussian_waist,
    lamb_dicke,
    minimum_spacing,
    single_photon_g,
    transition_omega,
)
from iondesign.exceptions import DomainError
from iondesign.registry import load_species

CS = load_species("cs")
BA = load_species("ba")
BE = load_species("be")
CA = load_species("ca")


def test_transition_omega():
    assert transition_omega(852e-9) == approx(TWO_PI * C / 852e-9)


def test_gamma_from_dipole_caesium_wavelength():
    gamma = gamma_from_dipole(E * BOHR_RADIUS, transition_omega(852e-9))
    assert gamma == approx(3.28e6, rel=1e-2)


def test_dipole_gamma_round_trip():
    rng = default_rng(7)
    for _ in range(20):
        omega = transition_omega(rng.uniform(200e-9, 1000e-9))
        gamma = TWO_PI * rng.uniform(1e6, 50e6)
        dipole = dipole_from_gamma(gamma, omega)
        assert gamma_from_dipole(dipole, omega) == approx(gamma, rel=1e-9)


def test_g_squared_over_gamma_does_not_depend_on_dipole():
    """
    The ratio g^2 / Gamma is a property of the wavelength and the mode
    volume only.
    """
    omega = CS.omega
    mode_volume = 1.8e-14
    for dipole in (1e-30, 3e-29, 2e-28):
        ratio = (
            single_photon_g(dipole, omega, mode_volume) ** 2
            / gamma_from_dipole(dipole, omega)
        )
        assert ratio == approx(
            g_squared_over_gamma(CS.wavelength, mode_volume),
            rel=1e-9,
        )


@mark.parametrize(
    "wavelength, length, curvature, waist",
    [
        (852e-9, 44.6e-6, 0.1, 20.12e-6),
        (493e-9, 100e-6, 0.02, 12.52e-6),
    ],
)
def test_gaussian_waist(wavelength, length, curvature, waist):
    assert gaussian_waist(wavelength, length, curvature) == approx(
        waist,
        rel=2e-3,
    )


@mark.parametrize("length", [0.2, 0.3])
def test_gaussian_waist_unstable_resonator(length):
    with raises(DomainError):
        gaussian_waist(852e-9, length, 0.1)


def test_caesium_fabry_perot_cavity():
    cavity = CavityConfig.fabry_perot(
        CS,
        length=44.6e-6,
        finesse=4.2e5,
        mirror_curvature=0.1,
    )
    assert cavity.kind == CavityConfig.FABRY_PEROT
    assert cavity.waist == approx(20e-6, rel=0.05)
    assert cavity.kappa / TWO_PI == approx(8e6, rel=0.01)
    assert cavity.g / TWO_PI == approx(70e6, rel=0.02)
    assert cavity.quality_factor == approx(CS.omega / cavity.kappa)


def test_barium_fabry_perot_cavity():
    cavity = CavityConfig.fabry_perot(
        BA,
        length=100e-6,
        finesse=4.2e5,
        mirror_curvature=0.02,
    )
    assert cavity.waist == approx(12.5e-6, rel=0.01)
    assert cavity.kappa / TWO_PI == approx(3.569e6, rel=1e-3)
    assert cavity.g / TWO_PI == approx(62.3e6, rel=0.01)


def test_fabry_perot_needs_waist_or_curvature():
    with raises(DomainError):
        CavityConfig.fabry_perot(CS, length=44.6e-6, finesse=4.2e5)


def test_microsphere_scaling_to_a_larger_sphere():
    reference = CavityConfig.microsphere(
        CS,
        radius=50e-6,
        g_over_gamma=6,
        g_over_kappa=174,
    )
    larger = CavityConfig.microsphere(
        CS,
        radius=63e-6,
        g_over_gamma=6,
        g_over_kappa=174,
        reference_radius=50e-6,
    )
    assert reference.g == approx(6 * CS.gamma)
    assert larger.g / CS.gamma == approx(4.8, rel=0.02)
    assert larger.g / larger.kappa == approx(174)
    assert larger.quality_factor == approx(
        reference.quality_factor * 63 / 50,
    )


def test_microsphere_from_quality_factor():
    cavity = CavityConfig.microsphere(
        CS,
        radius=50e-6,
        g_over_gamma=6,
        quality_factor=1e8,
    )
    assert cavity.kappa == approx(CS.omega / 1e8)


@mark.parametrize(
    "species, frequency, eta",
    [
        (BE, 459.1e3, 0.08386),
        (CA, 152.6e3, 0.05445),
    ],
)
def test_ion_string_at_five_wavelengths(species, frequency, eta):
    trap = TrapConfig.for_spacing(species, n_ions=140, spacing_multiple=5)
    assert trap.omega_z / TWO_PI == approx(frequency, rel=2e-3)
    assert trap.eta == approx(eta, rel=2e-3)
    assert trap.spacing == approx(5 * species.wavelength)


def test_spacing_closure_inverts():
    for n_ions in (2, 10, 140, 1000):
        omega_z = axial_freq_for_spacing(CA, n_ions, spacing_multiple=5)
        assert minimum_spacing(CA, n_ions, omega_z) == approx(
            5 * CA.wavelength,
            rel=1e-9,
        )


def test_doubling_spacing_lowers_frequency():
    ratio = (
        axial_freq_for_spacing(BE, 50, spacing_multiple=5)
        / axial_freq_for_spacing(BE, 50, spacing_multiple=10)
    )
    assert ratio == approx(2 ** 1.5)


def test_single_ion_has_no_spacing():
    with raises(DomainError):
        axial_freq_for_spacing(BE, 1, spacing_multiple=5)


def test_trap_rejects_fractional_ion_count():
    with raises(DomainError):
        TrapConfig(BE, n_ions=2.5, omega_z=1e6)


def test_lamb_dicke_falls_with_ion_count():
    """The centre-of-mass mode carries the mass of the whole string."""
    single = TrapConfig(CA, n_ions=1, omega_z=TWO_PI * 1e6)
    string = TrapConfig(CA, n_ions=100, omega_z=TWO_PI * 1e6)
    assert string.eta == approx(single.eta / 10)


def test_addressing_waist():
    wavelength = 397e-9
    waist = addressing_waist(5 * wavelength, 1e-4)
    assert waist / wavelength == approx(2.3, abs=0.05)
    assert waist == approx(5 * wavelength / sqrt(log(100)))
    assert addressing_waist(1e-6, 1 / EULER) == approx(sqrt(2) * 1e-6)


@mark.parametrize("crosstalk", [0.0, 1.0, 1.5])
def test_addressing_waist_rejects_crosstalk(crosstalk):
    with raises(DomainError):
        addressing_waist(1e-6, crosstalk)


def test_cat_state_qubits():
    assert cat_state_qubits(2.97) == approx(4.7, abs=0.05)
    assert cat_state_qubits(0.0) == approx(1.0)


def test_entanglement_record():
    record = entanglement_record(efficiency=0.5, rate=100, cat_alpha=2.97)
    assert record.cat_qubits == approx(4.677, abs=1e-3)
    with raises(DomainError):
        entanglement_record(efficiency=1.5, rate=100)


def test_species_dipole_and_linewidth_must_agree():
    gamma = TWO_PI * 5.3e6
    dipole = dipole_from_gamma(gamma, transition_omega(852e-9))
    species = IonSpecies("Cs", mass=2.2e-25, wavelength=852e-9,
                         dipole=dipole)
    assert species.gamma == approx(gamma, rel=1e-9)
    with raises(DomainError):
        IonSpecies("Cs", mass=2.2e-25, wavelength=852e-9, gamma=gamma,
                   dipole=1.1 * dipole)
    with raises(DomainError):
        IonSpecies("Cs", mass=2.2e-25, wavelength=852e-9)


def test_cavity_kappa():
    kappa = cavity_kappa(finesse=4.2e5, length=44.6e-6)
    assert kappa / TWO_PI == approx(8.0e6, rel=1e-3)
    assert cavity_kappa(4.2e5, 89.2e-6) == approx(kappa / 2)
    with raises(DomainError):
        cavity_kappa(0.0, 44.6e-6)


def test_lamb_dicke():
    omega_z = TWO_PI * 1e6
    trap = TrapConfig(BE, n_ions=4, omega_z=omega_z, geometry_factor=1.0)
    expected = TWO_PI / BE.wavelength * sqrt(
        HBAR / (2 * 4 * BE.mass * omega_z)
    )
    assert lamb_dicke(trap) == approx(expected, rel=1e-12)
    assert trap.eta == approx(expected, rel=1e-12)
