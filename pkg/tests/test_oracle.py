from numpy import (
    conj,
    isnan,
    linspace,
    pi,
)
from pytest import (
    approx,
    mark,
)

from iondesign.oracle import (
    adiabatic_hamiltonian,
    carrier_hamiltonian,
    check_adiabatic_passage,
    check_carrier_leakage,
    check_raman_scattering,
    raman_hamiltonian,
)

OMEGA_Z = 2 * pi * 1e6


def test_hamiltonians_are_hermitian():
    for hamiltonian in (
        carrier_hamiltonian(1.0, 0.2, 5.0),
        adiabatic_hamiltonian(0.3, 0.7, 4.0),
        raman_hamiltonian(1.0, 100.0, 2.0, 0.1),
    ):
        assert hamiltonian == approx(conj(hamiltonian.T))


def test_adiabatic_hamiltonian_stack():
    stacked = adiabatic_hamiltonian([0.0, 1.0], [1.0, 0.0], 3.0)
    assert stacked.shape == (2, 5, 5)
    assert stacked[1, 0, 1] == 1.0
    assert stacked[0, 3, 4] == 1.0
    assert stacked[0, 1, 2] == stacked[1, 2, 3] == 3.0


def test_carrier_leakage():
    carrier = 0.05 * OMEGA_Z
    result = check_carrier_leakage(0.1 * carrier, carrier, OMEGA_Z)
    assert result.p3_analytic == approx(0.05 ** 2)
    assert result.within_tolerance
    assert result.advisories == ()
    assert len(result.times) == len(result.leaked_population)
    assert result.leaked_population.max() < 4 * result.p3_analytic


def test_carrier_leakage_without_carrier():
    result = check_carrier_leakage(0.01 * OMEGA_Z, 0.0, OMEGA_Z)
    assert result.p3_numeric == approx(0.0, abs=1e-10)
    assert result.within_tolerance
    assert isnan(result.ratio)


def test_strong_carrier_is_advised():
    result = check_carrier_leakage(0.05 * OMEGA_Z, 0.5 * OMEGA_Z, OMEGA_Z)
    assert len(result.advisories) == 1


@mark.parametrize("carrier_ratio", linspace(0.02, 0.1, 5))
def test_carrier_leakage_ratio_is_stable(carrier_ratio):
    carrier = carrier_ratio * OMEGA_Z
    result = check_carrier_leakage(0.1 * carrier, carrier, OMEGA_Z)
    assert 0.5 <= result.ratio <= 2
    assert result.within_tolerance


def test_adiabatic_passage():
    omega = 2 * pi * 1e6
    g = 10 * omega
    result = check_adiabatic_passage(
        omega=omega,
        g=g,
        kappa=0.01 * g,
        gamma=0.0,
        ramp_time=50 / omega,
        samples=4,
    )
    assert result.advisories == ()
    assert result.p1_analytic == approx(4 / 50 ** 2)
    assert 1 / 3 <= result.nonadiabatic_ratio <= 3
    assert result.decay_ratio == approx(1.0, abs=0.3)
    assert result.within_tolerance


@mark.parametrize("coupling", [10, 1000])
def test_lossless_adiabatic_passage(coupling):
    omega = 2 * pi * 1e6
    result = check_adiabatic_passage(
        omega=omega,
        g=coupling * omega,
        kappa=0.0,
        gamma=0.0,
        ramp_time=50 / omega,
        samples=2,
        tolerance=1e-4,
    )
    assert result.advisories == ()
    assert 1 / 3 <= result.nonadiabatic_ratio <= 3
    assert result.decay_loss_numeric is None
    assert result.within_tolerance


def test_adiabatic_passage_regime_advisories():
    omega = 2 * pi * 1e6
    result = check_adiabatic_passage(
        omega=omega,
        g=2 * omega,
        kappa=0.0,
        gamma=0.0,
        ramp_time=5 / omega,
        samples=2,
    )
    assert len(result.advisories) == 2
    assert result.decay_loss_numeric is None
    assert result.decay_ratio is None


def test_raman_scattering():
    detuning = 2 * pi * 1e9
    omega = 0.05 * detuning
    result = check_raman_scattering(
        omega=omega,
        detuning=detuning,
        gamma=detuning / 100,
        sideband_g=0.1 * omega,
    )
    assert result.p1_analytic == approx(pi * 0.01 / 0.1)
    assert result.advisories == ()
    assert result.within_tolerance


def test_raman_without_spontaneous_emission():
    detuning = 2 * pi * 1e9
    omega = 0.05 * detuning
    result = check_raman_scattering(omega, detuning, 0.0, 0.1 * omega)
    assert result.p1_analytic == 0
    assert result.within_tolerance


def test_raman_close_to_resonance_is_advised():
    detuning = 2 * pi * 1e9
    omega = 0.05 * detuning
    result = check_raman_scattering(omega, detuning, detuning / 5,
                                    0.1 * omega)
    assert "detuning is below 10 linewidths" in result.advisories
