from numpy import (
    pi,
    sqrt,
)
from numpy.random import default_rng
from pytest import (
    approx,
    mark,
    raises,
)

from iondesign.constants import TWO_PI
from iondesign.exceptions import DomainError
from iondesign.motional import (
    BREAKDOWN_PROBABILITY,
    MotionalErrorBudget,
    RamanDrive,
    breathing_mode,
    cz_budget,
    cz_optimum,
    cz_rate_at_p,
    heating_check,
    heating_prob,
    lightshift_gate,
    ms_scaled_optimum,
    ms_tradeoff,
    offres_leak,
    per_ion_time,
    rate_at_p_advisories,
    scatter_prob,
)
from iondesign.optimize import cz_optimum_numeric

GAMMA = TWO_PI * 20e6
KAPPA = 100.0
SIDEBAND_G = TWO_PI * 5e6


def test_scatter_and_heating_terms():
    omega, detuning = TWO_PI * 50e6, TWO_PI * 5e9
    ratio = omega / detuning
    assert scatter_prob(GAMMA, omega, detuning, SIDEBAND_G) == approx(
        pi * GAMMA * ratio / SIDEBAND_G
    )
    assert heating_prob(KAPPA, omega, detuning, SIDEBAND_G) == approx(
        4 * pi * KAPPA / (ratio * SIDEBAND_G)
    )
    assert heating_prob(0.0, omega, detuning, SIDEBAND_G) == 0


def test_heating_is_rate_times_gate_time():
    drive = RamanDrive(omega=TWO_PI * 50e6, detuning=TWO_PI * 5e9, eta=0.1)
    p_heating = heating_prob(KAPPA, drive.omega, drive.detuning,
                             drive.sideband_g)
    assert p_heating == approx(KAPPA * drive.gate_time)


def test_cz_optimum_balances_terms():
    optimum = cz_optimum(KAPPA, GAMMA, SIDEBAND_G)
    detuning = 1.0 / optimum.ratio
    p_scatter = scatter_prob(GAMMA, 1.0, detuning, SIDEBAND_G)
    p_heating = heating_prob(KAPPA, 1.0, detuning, SIDEBAND_G)
    assert p_scatter == approx(p_heating, rel=1e-12)
    assert p_scatter + p_heating == approx(optimum.p_min, rel=1e-12)
    assert optimum.p_min == approx(4 * pi * sqrt(KAPPA * GAMMA) / SIDEBAND_G)
    assert optimum.valid


def test_cz_optimum_rate_is_inverse_gate_time():
    optimum = cz_optimum(KAPPA, GAMMA, SIDEBAND_G)
    omega = TWO_PI * 50e6
    drive = RamanDrive(omega, omega / optimum.ratio, eta=SIDEBAND_G / omega)
    assert optimum.rate == approx(1 / drive.gate_time)


def test_cz_optimum_matches_numerical_minimum():
    rng = default_rng(2024)
    for _ in range(1000):
        kappa = 10 ** rng.uniform(-1, 4)
        gamma = 10 ** rng.uniform(6, 9)
        sideband_g = 10 ** rng.uniform(5, 8)
        closed = cz_optimum(kappa, gamma, sideband_g)
        numeric = cz_optimum_numeric(kappa, gamma, sideband_g)
        assert numeric.ratio == approx(closed.ratio, rel=1e-6)
        assert numeric.p_min == approx(closed.p_min, rel=1e-6)


def test_cz_optimum_breakdown():
    optimum = cz_optimum(kappa=1e6, gamma=GAMMA, sideband_g=SIDEBAND_G)
    assert optimum.p_min > BREAKDOWN_PROBABILITY
    assert not optimum.valid


def test_budget_reports_breakdown_without_clamping():
    budget = MotionalErrorBudget.from_terms(
        p_scatter=0.7,
        p_heating=0.1,
        p_offres=0.0,
        gate_time=1e-6,
    )
    assert not budget.valid
    assert budget.p_total == approx(0.8)
    assert budget.advisories[-1].startswith("model breakdown")


def test_cz_budget_collects_three_terms():
    drive = RamanDrive(omega=TWO_PI * 50e6, detuning=TWO_PI * 5e9, eta=0.1,
                       gamma=GAMMA)
    omega_z = TWO_PI * 1e6
    budget = cz_budget(drive, GAMMA, KAPPA, omega_z)
    assert budget.p_offres == approx(
        (drive.omega_eff_carrier / omega_z) ** 2
    )
    assert budget.p_total == approx(
        budget.p_scatter + budget.p_heating + budget.p_offres
    )
    assert budget.gate_time == approx(TWO_PI / drive.omega_eff)
    assert budget.valid
    assert budget.advisories == ()


def test_raman_drive_advises_small_detuning():
    drive = RamanDrive(omega=1e6, detuning=5 * GAMMA, eta=0.1, gamma=GAMMA)
    assert len(drive.advisories) == 1


@mark.parametrize(
    "omega_eff_carrier, omega_z, target",
    [
        (0.0, 1e6, 0.0),
        (1e5, 1e6, 1e-2),
        (5e4, 1e6, 2.5e-3),
    ],
)
def test_offres_leak(omega_eff_carrier, omega_z, target):
    assert offres_leak(omega_eff_carrier, omega_z) == approx(target)


def test_rate_at_p_follows_from_carrier_leakage():
    """
    Driving as fast as the carrier leakage allows, p3 = p, gives the gate
    rate sqrt(p) eta omega_z / 2 pi.
    """
    rng = default_rng(3)
    for _ in range(100):
        p = rng.uniform(1e-4, 0.5)
        eta = rng.uniform(0.01, 0.3)
        omega_z = TWO_PI * rng.uniform(1e5, 1e7)
        omega_eff_carrier = sqrt(p) * omega_z
        omega_eff = eta * omega_eff_carrier
        assert offres_leak(omega_eff_carrier, omega_z) == approx(p)
        assert cz_rate_at_p(p, eta, omega_z) == approx(
            omega_eff / TWO_PI,
            rel=1e-9,
        )


def test_rate_at_p_scaling():
    assert cz_rate_at_p(1 - 1e-12, 1.0, TWO_PI * 1e3) == approx(1e3)
    assert cz_rate_at_p(0.01, 0.1, 1e6) == approx(
        2 * cz_rate_at_p(0.0025, 0.1, 1e6)
    )
    with raises(DomainError):
        cz_rate_at_p(1.5, 0.1, 1e6)


def test_breathing_mode_per_ion_time():
    """Calcium string of 140 ions driven on its breathing mode."""
    eta, omega_z = breathing_mode(0.056, TWO_PI * 141e3)
    assert omega_z == approx(sqrt(3) * TWO_PI * 141e3)
    assert eta == approx(0.056 / 3 ** 0.25)
    time = per_ion_time(cz_rate_at_p(0.01, eta, omega_z), 140)
    assert 5e-6 <= time <= 20e-6


def test_rate_at_p_advisories():
    eta, omega_z = 0.05, TWO_PI * 150e3
    assert rate_at_p_advisories(0.01, eta, omega_z, kappa=0.1) == ()
    assert len(rate_at_p_advisories(0.01, eta, omega_z, kappa=1e4)) == 1
    advisories = rate_at_p_advisories(
        0.01,
        eta,
        omega_z,
        gamma=GAMMA,
        detuning=GAMMA,
    )
    assert len(advisories) == 1


@mark.parametrize(
    "eta, frequency, rate, p_est",
    [
        (0.088, 418e3, 37e3, 0.004),
        (0.056, 141e3, 8e3, 0.0016),
    ],
)
def test_lightshift_gate(eta, frequency, rate, p_est):
    gate = lightshift_gate(eta, TWO_PI * frequency)
    assert gate.rate == approx(rate, rel=0.02)
    assert gate.p_est == approx(p_est, rel=0.05)


def test_lightshift_gate_without_coupling():
    assert lightshift_gate(0.0, 1e6).rate == 0


@mark.parametrize(
    "rate, n_ions, target",
    [
        (37e3, 140, 0.2e-6),
        (8e3, 140, 0.9e-6),
    ],
)
def test_per_ion_time(rate, n_ions, target):
    assert per_ion_time(rate, n_ions) == approx(target, rel=0.1)


def test_per_ion_time_exponent():
    assert per_ion_time(1e3, 1) == approx(1e-3)
    assert per_ion_time(1e3, 100, scaling_exponent=0.93) == approx(
        1e-3 / 100 ** 0.93
    )
    with raises(DomainError):
        per_ion_time(1e3, 0)


def test_ms_tradeoff():
    budget = MotionalErrorBudget.from_terms(
        p_scatter=1e-3,
        p_heating=4e-3,
        p_offres=1e-4,
        gate_time=1e-5,
    )
    assert ms_tradeoff(budget, 1) == budget
    slowed = ms_tradeoff(budget, 4)
    assert slowed.p_heating == approx(1e-3)
    assert slowed.p_scatter == budget.p_scatter
    assert slowed.p_offres == budget.p_offres
    assert slowed.gate_time == approx(4e-5)
    with raises(DomainError):
        ms_tradeoff(budget, 0.5)


def test_ms_scaled_optimum_rate_scales_as_p_squared():
    base = ms_scaled_optimum(0.01, 1e4, 1)
    halved = ms_scaled_optimum(0.01, 1e4, 4)
    assert halved.p == approx(base.p / 2)
    assert halved.rate / base.rate == approx((halved.p / base.p) ** 2)


def test_heating_check():
    assert heating_check(0.1, TWO_PI * 1e6).passed
    check = heating_check(100.0, TWO_PI * 1e6)
    assert not check.passed
    assert check.ratio == approx(100 / (TWO_PI * 1e6))
