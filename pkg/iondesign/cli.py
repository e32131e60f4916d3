"""
Command line: ``iondesign {species,cavity,gate,machine,sweep,oracle}``.

Exit codes are 0 on success, 1 for usage and configuration errors, 2 when
a result falls outside the regime of its model and 3 when an oracle check
misses its tolerance.
"""
import logging
import sys
from argparse import (
    ArgumentParser,
    Namespace,
)
from functools import partial
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Optional,
)

from pandas import DataFrame

from iondesign import __version__
from iondesign.architecture import (
    MachineConfig,
    estimate_machine,
)
from iondesign.constants import (
    BOHR_RADIUS,
    E,
    TWO_PI,
)
from iondesign.core import (
    CavityConfig,
    addressing_waist,
)
from iondesign.cqed import (
    adiabatic_budget,
    adiabatic_plan,
    adiabatic_rate,
    finesse_p,
    rabi_flop_gate,
    sphere_radius_for_ions,
)
from iondesign.exceptions import (
    ConfigError,
    DomainError,
    IntegrationError,
    UsageError,
)
from iondesign.motional import (
    BREAKDOWN_PROBABILITY,
    RamanDrive,
    breathing_mode,
    cz_budget,
    cz_optimum,
    cz_rate_at_p,
    heating_check,
    lightshift_gate,
    ms_scaled_optimum,
    ms_tradeoff,
    per_ion_time,
    rate_at_p_advisories,
)
from iondesign.oracle import (
    check_adiabatic_passage,
    check_carrier_leakage,
    check_raman_scattering,
)
from iondesign.registry import (
    build_cavity,
    build_species,
    build_trap,
    load_config,
    load_species,
    species_names,
)
from iondesign.report import Report
from iondesign.sweep import (
    SweepSpec,
    run_sweep,
)
from iondesign.units import (
    parse_quantity,
    section_to_si,
)

__all__ = [
    "EXIT_CHECK_FAILED",
    "EXIT_INVALID",
    "EXIT_OK",
    "EXIT_USAGE",
    "cavity_report",
    "gate_report",
    "machine_report",
    "main",
    "species_report",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3

GATE_METHODS = ("cz", "lightshift", "ms", "adiabatic", "rabi_flop")
GATE_SOURCES = ("quoted", "lightshift", "adiabatic", "rabi_flop")

_GATE_FIELDS = frozenset({
    "p",
    "n_ions",
    "scaling_exponent",
    "breathing_mode",
    "crosstalk",
    "heating_rate",
    "rabi_frequency",
    "detuning",
    "m_factor",
    "exact",
})
_MISSING = object()


def _gate_section(config: Dict[str, Any]) -> Dict[str, Any]:
    gate = section_to_si(config.get("gate", {}))
    for field in gate:
        if field not in _GATE_FIELDS:
            raise ConfigError(
                f"unknown gate field {field!r}",
                field=f"gate.{field}",
            )
    return gate


def _value(section: Dict[str, Any], name: str, field: str, default=_MISSING):
    value = section.get(field)
    if value is None:
        if default is _MISSING:
            raise UsageError(
                f"missing parameter {field!r}",
                field=f"{name}.{field}",
            )
        return default
    return value


def _hz(omega: float) -> float:
    return omega / TWO_PI


def species_report(config: Dict[str, Any], name: Optional[str] = None):
    """One species, or the whole registry when neither is given."""
    if name is None and config.get("species") is None:
        report = Report("Species registry")
        for registered in species_names():
            species = load_species(registered)
            report.section(f"{registered}: {species.name}")
            _species_rows(report, species, prefix=f"{registered}_")
        return report

    species = load_species(name) if name else build_species(config["species"])
    report = Report(f"Species {species.name}", config=config or None)
    _species_rows(report, species)
    return report


def _species_rows(report: Report, species, prefix: str = "") -> None:
    report.add(f"{prefix}mass_kg", "mass", species.mass, "kg")
    report.add(f"{prefix}wavelength_m", "wavelength", species.wavelength, "m")
    report.add(
        f"{prefix}linewidth_hz",
        "linewidth Gamma/2pi",
        _hz(species.gamma),
        "Hz",
    )
    report.add(
        f"{prefix}dipole_ea0",
        "dipole element / e a0",
        species.dipole / (E * BOHR_RADIUS),
    )
    if species.hyperfine_splitting is not None:
        report.add(
            f"{prefix}hyperfine_splitting_hz",
            "hyperfine splitting",
            _hz(species.hyperfine_splitting),
            "Hz",
        )


def cavity_report(config: Dict[str, Any]) -> Report:
    cavity = build_cavity(config)
    species = build_species(config["species"])
    report = Report(f"Cavity ({cavity.kind}, {species.name})", config=config)

    report.section("Geometry")
    if cavity.kind == CavityConfig.FABRY_PEROT:
        report.add("length_m", "length", cavity.length, "m")
        report.add("finesse", "finesse", cavity.finesse)
        report.add("waist_m", "waist", cavity.waist, "m")
        report.add("mode_volume_m3", "mode volume", cavity.mode_volume, "m3")
    else:
        report.add("radius_m", "sphere radius", cavity.sphere_radius, "m")
        report.add(
            "reference_radius_m",
            "ratios quoted at radius",
            cavity.reference_radius,
            "m",
        )
        gate = _gate_section(config)
        if gate.get("n_ions") is not None:
            report.add(
                "radius_for_ions_m",
                f"radius holding {int(gate['n_ions'])} atoms",
                sphere_radius_for_ions(
                    int(gate["n_ions"]),
                    species.wavelength,
                ),
                "m",
            )

    report.section("Coupling")
    report.add("g_hz", "g/2pi", _hz(cavity.g), "Hz")
    report.add("kappa_hz", "kappa/2pi", _hz(cavity.kappa), "Hz")
    report.add("gamma_hz", "Gamma/2pi", _hz(species.gamma), "Hz")
    report.add("g_over_gamma", "g/Gamma", cavity.g / species.gamma)
    report.add("g_over_kappa", "g/kappa", cavity.g / cavity.kappa)
    report.add("quality_factor", "quality factor", cavity.quality_factor)
    return report


def gate_report(config: Dict[str, Any], method: str) -> Report:
    """Error budget and operating point of one gate `method`."""
    if method not in GATE_METHODS:
        raise UsageError(f"unknown gate method {method!r}", field="method")
    gate = _gate_section(config)
    report = Report(f"Gate {method}", config=config)
    if method in ("adiabatic", "rabi_flop"):
        _cavity_gate(report, config, gate, method)
    elif method == "lightshift":
        _lightshift_gate(report, config, gate)
    else:
        _motional_gate(report, config, gate, method)
    return report


def _motional_gate(report, config, gate, method) -> None:
    trap = build_trap(config)
    gamma = trap.species.gamma
    kappa = _value(gate, "gate", "heating_rate")
    omega = _value(gate, "gate", "rabi_frequency")

    eta, omega_z = trap.eta, trap.omega_z
    report.section("Mode")
    if gate.get("breathing_mode"):
        eta, omega_z = breathing_mode(eta, omega_z)
        report.add("mode", "driven mode", "breathing")
    else:
        report.add("mode", "driven mode", "centre of mass")
    report.add("eta", "Lamb-Dicke parameter", float(eta))
    report.add("axial_frequency_hz", "mode frequency", _hz(omega_z), "Hz")

    optimum = cz_optimum(kappa, gamma, eta * omega)
    drive = RamanDrive(omega, omega / optimum.ratio, eta, gamma=gamma)
    report.section("Optimum drive")
    report.add("omega_over_detuning", "Omega/Delta", float(optimum.ratio))
    report.add("detuning_hz", "detuning", _hz(drive.detuning), "Hz")
    report.add("p_min", "minimum failure", float(optimum.p_min))
    report.add("rate_per_s", "gate rate", float(optimum.rate), "Hz")
    report.advise(*drive.advisories)
    if not optimum.valid:
        report.invalidate(
            f"model breakdown: minimum failure {float(optimum.p_min):.3g} "
            f"exceeds {BREAKDOWN_PROBABILITY}"
        )

    budget = cz_budget(drive, gamma, kappa, omega_z)
    if method == "ms":
        m_factor = _value(gate, "gate", "m_factor", 4.0)
        budget = ms_tradeoff(budget, m_factor)
        scaled = ms_scaled_optimum(float(optimum.p_min), optimum.rate,
                                   m_factor)
        report.section(f"Slowed by M = {m_factor:g}")
        report.add("m_factor", "M", float(m_factor))
        report.add("ms_p", "re-optimized failure", scaled.p)
        report.add("ms_rate_per_s", "re-optimized rate", scaled.rate, "Hz")
    _budget_rows(report, budget)

    p = gate.get("p")
    if p is not None:
        rate = float(cz_rate_at_p(p, eta, omega_z))
        report.section(f"At failure p = {p:g}")
        report.add("rate_at_p_per_s", "gate rate", rate, "Hz")
        report.add(
            "per_ion_time_s",
            f"time per ion (N = {trap.n_ions})",
            float(per_ion_time(
                rate,
                trap.n_ions,
                _value(gate, "gate", "scaling_exponent", 1.0),
            )),
            time=True,
        )
        report.advise(*rate_at_p_advisories(
            p,
            eta,
            omega_z,
            kappa=kappa,
            gamma=gamma,
            detuning=gate.get("detuning", drive.detuning),
        ))
    _heating_rows(report, kappa, omega_z)


def _budget_rows(report: Report, budget) -> None:
    report.section("Error budget")
    report.add("p_scatter", "spontaneous emission p1", budget.p_scatter)
    report.add("p_heating", "heating p2", budget.p_heating)
    report.add("p_offres", "carrier leakage p3", budget.p_offres)
    report.add("p_total", "total", budget.p_total)
    report.add("gate_time_s", "gate time", budget.gate_time, time=True)
    report.advise(*budget.advisories)
    if not budget.valid:
        report.invalidate(
            f"model breakdown: an error term exceeds {BREAKDOWN_PROBABILITY}"
        )


def _heating_rows(report: Report, kappa, omega_z) -> None:
    check = heating_check(kappa, omega_z)
    report.add("heating_ratio", "kappa/omega_z", check.ratio)
    if not check.passed:
        report.advise(
            f"heating ratio {check.ratio:.3g} exceeds {check.limit:.3g}"
        )


def _lightshift_gate(report, config, gate) -> None:
    trap = build_trap(config)
    result = lightshift_gate(trap.eta, trap.omega_z)
    report.section("String")
    report.add("n_ions", "ions", trap.n_ions)
    report.add("spacing_m", "spacing", trap.spacing, "m")
    report.add("axial_frequency_hz", "axial frequency", _hz(trap.omega_z),
               "Hz")
    report.add("eta", "Lamb-Dicke parameter", trap.eta)

    report.section("Light-shift gate")
    report.add("rate_per_s", "gate rate", float(result.rate), "Hz")
    report.add("p_est", "failure estimate", float(result.p_est))
    report.add(
        "per_ion_time_s",
        f"time per ion (N = {trap.n_ions})",
        float(per_ion_time(
            result.rate,
            trap.n_ions,
            _value(gate, "gate", "scaling_exponent", 1.0),
        )),
        time=True,
    )
    if result.p_est > BREAKDOWN_PROBABILITY:
        report.invalidate(
            f"model breakdown: failure estimate {result.p_est:.3g} exceeds "
            f"{BREAKDOWN_PROBABILITY}"
        )
    if not 0 < trap.eta < 1:
        report.advise(f"Lamb-Dicke parameter {trap.eta:.3g} not in (0, 1)")

    crosstalk = gate.get("crosstalk")
    if crosstalk is not None:
        waist = float(addressing_waist(trap.spacing, crosstalk))
        report.add("addressing_waist_m", "addressing waist", waist, "m")
        report.add(
            "addressing_waist_wavelengths",
            "addressing waist / wavelength",
            waist / trap.species.wavelength,
        )
    if gate.get("heating_rate") is not None:
        _heating_rows(report, gate["heating_rate"], trap.omega_z)


def _cavity_gate(report, config, gate, method) -> None:
    cavity = build_cavity(config)
    species = build_species(config["species"])
    report.section("Cavity")
    report.add("g_hz", "g/2pi", _hz(cavity.g), "Hz")
    report.add("kappa_hz", "kappa/2pi", _hz(cavity.kappa), "Hz")
    report.add("gamma_hz", "Gamma/2pi", _hz(species.gamma), "Hz")
    n_ions = int(_value(gate, "gate", "n_ions", 1))
    exponent = _value(gate, "gate", "scaling_exponent", 1.0)

    if method == "rabi_flop":
        result = rabi_flop_gate(cavity.kappa, species.gamma, cavity.g)
        report.section("Rabi-flop gate")
        report.add("p", "failure", result.p)
        report.add("rate_per_s", "gate rate", result.rate, "Hz")
        if cavity.kind == CavityConfig.FABRY_PEROT:
            report.add(
                "finesse_p",
                "failure from waist and finesse",
                float(finesse_p(cavity.waist, species.wavelength,
                                cavity.finesse)),
            )
        if not result.valid:
            report.invalidate(
                f"model breakdown: Rabi-flop failure {result.p:.3g} above 1"
            )
        rate = result.rate
    else:
        p = _value(gate, "gate", "p")
        exact = bool(gate.get("exact", False))
        rates = adiabatic_rate(p, cavity.g, cavity.kappa)
        plan = adiabatic_plan(p, cavity.g, cavity.kappa, exact=exact)
        budget = adiabatic_budget(plan.omega_max, cavity.g, cavity.kappa,
                                  plan.ramp_time)
        report.section(f"Adiabatic passage at p = {p:g}")
        report.add("rate_per_s", "gate rate (1/9)", rates.rate, "Hz")
        report.add("rate_exact_per_s", "gate rate (exact, 1/8)",
                   rates.rate_exact, "Hz")
        report.add("omega_max_hz", "peak drive Omega/2pi",
                   _hz(plan.omega_max), "Hz")
        report.add("ramp_time_s", "ramp time", plan.ramp_time, time=True)
        report.add("window", "(g/kappa)/(3/p)^1.5", plan.window)
        report.section("Error budget")
        report.add("p_nonadiabatic", "non-adiabatic p1",
                   budget.p_nonadiabatic)
        report.add("p_photon_decay", "photon decay p2", budget.p_photon_decay)
        report.add("p_total", "total", budget.p_total)
        report.advise(*plan.advisories)
        report.advise(*budget.advisories)
        if not budget.valid:
            report.invalidate(
                "model breakdown: an error term exceeds "
                f"{BREAKDOWN_PROBABILITY}"
            )
        rate = rates.rate_exact if exact else rates.rate

    report.add(
        "per_ion_time_s",
        f"time per ion (N = {n_ions})",
        float(per_ion_time(rate, n_ions, exponent)),
        time=True,
    )


def _base_gate(config, machine: Dict[str, Any], settings: MachineConfig):
    """Rate and failure of the physical gate feeding the machine."""
    source = machine.get("gate_source", "quoted")
    if source not in GATE_SOURCES:
        raise ConfigError(
            f"unknown gate source {source!r}",
            field="machine.gate_source",
        )
    if source == "quoted":
        if machine.get("base_gate_time") is not None:
            return {"": (1 / machine["base_gate_time"], settings.base_gate_p)}
        rate = _value(machine, "machine", "base_gate_rate")
        return {"": (rate, settings.base_gate_p)}
    if source == "lightshift":
        trap = build_trap(config)
        result = lightshift_gate(trap.eta, trap.omega_z)
        return {"": (float(result.rate), float(result.p_est))}

    cavity = build_cavity(config)
    if source == "rabi_flop":
        species = build_species(config["species"])
        result = rabi_flop_gate(cavity.kappa, species.gamma, cavity.g)
        return {"": (result.rate, result.p)}
    p = _value(_gate_section(config), "gate", "p")
    rates = adiabatic_rate(p, cavity.g, cavity.kappa)
    return {"": (rates.rate, p), "exact_": (rates.rate_exact, p)}


def machine_report(config: Dict[str, Any]) -> Report:
    """Layout, correction cadence and runtime of the fault-tolerant machine."""
    machine = section_to_si(config.get("machine", {}))
    settings = MachineConfig.from_record(machine)
    sources = _base_gate(config, machine, settings)
    report = Report("Fault-tolerant machine", config=config)

    estimates = {
        prefix: estimate_machine(settings, base_rate=rate, base_p=p)
        for prefix, (rate, p) in sources.items()
    }
    estimate = estimates[""]
    layout = estimate.layout

    report.section("Layout")
    report.add("data_blocks", "data blocks", layout.data_blocks)
    report.add("ancilla_blocks", "ancilla blocks", layout.ancilla_blocks)
    report.add("block_traps", "data and ancilla traps", layout.block_traps)
    report.add("switch_traps", "switch traps", layout.switch_traps)
    report.add("total_traps", "total traps", layout.total_traps)
    report.add("ions_per_trap", "ions per trap", settings.ions_per_trap)
    if layout.stated_total_traps is not None:
        report.add("stated_total_traps", "stated total traps",
                   layout.stated_total_traps)

    for prefix, current in estimates.items():
        title = "Timing" if not prefix else "Timing, exact adiabatic rate"
        report.section(title)
        report.add(f"{prefix}physical_gate_time_s", "physical gate time",
                   current.physical_gate_time, time=True)
        report.add(f"{prefix}corrected_gate_time_s", "corrected gate time",
                   current.corrected_gate_time, time=True)
        report.add(f"{prefix}correction_time_s", "correction cycle",
                   current.correction_time, time=True)
        report.add(f"{prefix}total_runtime_s", "total runtime",
                   current.total_runtime, time=True)
        report.add(f"{prefix}runtime_weeks", "total runtime, weeks",
                   current.runtime_weeks)

    report.section("Noise")
    report.add("corrected_gate_p", "corrected gate failure",
               estimate.corrected_gate_p)
    report.add("gate_margin", "gate threshold margin",
               estimate.noise.gate_margin)
    report.add("memory_margin", "memory threshold margin",
               estimate.noise.memory_margin)
    report.add("noise_passed", "below thresholds", estimate.noise.passed)
    report.advise(*estimate.advisories)
    if not estimate.noise.gate_passed:
        report.advise(
            f"corrected gate failure {estimate.corrected_gate_p:.3g} is "
            f"above the threshold {settings.target_gate_p:.3g}"
        )
    return report


def _oracle_report(arguments: Namespace):
    """Run one oracle check; returns the report and its CSV frame."""
    check = arguments.check
    if check == "carrier":
        omega_z, _ = parse_quantity(arguments.axial_frequency)
        carrier = arguments.ratio * omega_z
        result = check_carrier_leakage(
            omega_eff=arguments.eta * carrier,
            omega_eff_carrier=carrier,
            omega_z=omega_z,
        )
        report = Report("Oracle: carrier leakage", config=_echo(arguments))
        report.add("p3_numeric", "numeric", result.p3_numeric)
        report.add("p3_analytic", "(Omega_eff0/omega_z)^2", result.p3_analytic)
        report.add("ratio", "ratio", result.ratio)
        frame = DataFrame({
            "time_s": result.times,
            "leaked_population": result.leaked_population,
        })
    elif check == "adiabatic":
        omega, _ = parse_quantity(arguments.omega)
        g = arguments.g_over_omega * omega
        result = check_adiabatic_passage(
            omega=omega,
            g=g,
            kappa=arguments.kappa_over_g * g,
            gamma=arguments.gamma_over_g * g,
            ramp_time=arguments.t_omega / omega,
            samples=arguments.samples,
        )
        report = Report("Oracle: adiabatic passage", config=_echo(arguments))
        report.add("infidelity_numeric", "numeric non-adiabatic error",
                   result.infidelity_numeric)
        report.add("p1_analytic", "4/(T Omega)^2", result.p1_analytic)
        report.add("nonadiabatic_ratio", "ratio", result.nonadiabatic_ratio)
        report.add("decay_loss_numeric", "numeric decay loss",
                   result.decay_loss_numeric)
        report.add("p2_exact", "integrated photon decay", result.p2_exact)
        report.add("p2_analytic", "Omega^2 kappa T/(2 g^2)",
                   result.p2_analytic)
        report.add("decay_ratio", "ratio to integrated", result.decay_ratio)
        report.add("quoted_decay_ratio", "ratio to quoted",
                   result.quoted_decay_ratio)
        frame = report.to_frame()
    else:
        detuning, _ = parse_quantity(arguments.detuning)
        omega = arguments.omega_over_detuning * detuning
        result = check_raman_scattering(
            omega=omega,
            detuning=detuning,
            gamma=detuning / arguments.detuning_over_gamma,
            sideband_g=arguments.eta * omega,
        )
        report = Report("Oracle: Raman scattering", config=_echo(arguments))
        report.add("p1_numeric", "numeric", result.p1_numeric)
        report.add("p1_analytic", "pi Gamma Omega/(Delta g)",
                   result.p1_analytic)
        report.add("ratio", "ratio", result.ratio)
        frame = report.to_frame()

    report.add("within_tolerance", "within tolerance", result.within_tolerance)
    report.advise(*result.advisories)
    return report, frame, result


def _echo(arguments: Namespace) -> Dict[str, Any]:
    skipped = ("handler", "verbose", "csv", "preset", "config", "set")
    return {
        key: value for key, value in vars(arguments).items()
        if key not in skipped
    }


def _configured(arguments: Namespace) -> Dict[str, Any]:
    return load_config(
        presets=arguments.preset or (),
        files=arguments.config or (),
        overrides=arguments.set or (),
    )


def _emit(report: Report, arguments: Namespace) -> int:
    print(report.render())
    if arguments.csv:
        report.write_csv(arguments.csv)
    return EXIT_OK if report.valid else EXIT_INVALID


def _run_species(arguments: Namespace) -> int:
    return _emit(
        species_report(_configured(arguments), arguments.name),
        arguments,
    )


def _run_cavity(arguments: Namespace) -> int:
    return _emit(cavity_report(_configured(arguments)), arguments)


def _run_gate(arguments: Namespace) -> int:
    return _emit(
        gate_report(_configured(arguments), arguments.method),
        arguments,
    )


def _run_machine(arguments: Namespace) -> int:
    return _emit(machine_report(_configured(arguments)), arguments)


def _sweep_command(arguments: Namespace) -> Callable[[Dict], Report]:
    if arguments.target == "gate":
        if arguments.method is None:
            raise UsageError("a gate sweep needs --method", field="method")
        return partial(gate_report, method=arguments.method)
    if arguments.target == "cavity":
        return cavity_report
    return machine_report


def _run_sweep(arguments: Namespace) -> int:
    spec = SweepSpec(
        parameter=arguments.parameter,
        scale=arguments.scale,
        start=arguments.start,
        stop=arguments.stop,
        points=arguments.points,
    )
    frame = run_sweep(
        command=_sweep_command(arguments),
        config=_configured(arguments),
        spec=spec,
        processes_number=arguments.processes,
    )
    if arguments.csv:
        frame.to_csv(arguments.csv, index=False)
        logger.info(f"Wrote {arguments.csv}")
    else:
        print(frame.to_csv(index=False), end="")
    return EXIT_OK


def _run_oracle(arguments: Namespace) -> int:
    report, frame, result = _oracle_report(arguments)
    print(report.render())
    if arguments.csv:
        frame.to_csv(arguments.csv, index=False)
        logger.info(f"Wrote {arguments.csv}")
    if result.advisories:
        return EXIT_INVALID
    return EXIT_OK if result.within_tolerance else EXIT_CHECK_FAILED


class _Parser(ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _common_options() -> ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--preset",
        action="append",
        help="shipped preset to start from; may be repeated",
    )
    common.add_argument(
        "--config",
        action="append",
        help="JSON config file merged over the presets; may be repeated",
    )
    common.add_argument(
        "--set",
        action="append",
        metavar="PATH=VALUE",
        help="override a field, e.g. cavity.finesse=1e5 or "
             "species.linewidth=5.3MHz",
    )
    common.add_argument("--csv", metavar="FILE", help="write CSV to FILE")
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debugging output",
    )
    return common


def build_parser() -> ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="iondesign",
        description="Design-space estimates for ion-trap and cavity-QED "
                    "quantum computers.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    species = commands.add_parser("species", parents=[common],
                                  help="list or show species")
    species.add_argument("name", nargs="?")
    species.set_defaults(handler=_run_species)

    cavity = commands.add_parser("cavity", parents=[common],
                                 help="derived cavity figures")
    cavity.set_defaults(handler=_run_cavity)

    gate = commands.add_parser("gate", parents=[common],
                               help="gate error budget")
    gate.add_argument("method", choices=GATE_METHODS)
    gate.set_defaults(handler=_run_gate)

    machine = commands.add_parser("machine", parents=[common],
                                  help="fault-tolerant machine estimate")
    machine.set_defaults(handler=_run_machine)

    sweep = commands.add_parser("sweep", parents=[common],
                                help="sweep one parameter, CSV output")
    sweep.add_argument("parameter", help="dotted path, e.g. cavity.finesse")
    sweep.add_argument("--scale", choices=("linear", "log"),
                       default="linear")
    sweep.add_argument("--start", type=float, required=True)
    sweep.add_argument("--stop", type=float, required=True)
    sweep.add_argument("--points", type=int, default=11)
    sweep.add_argument("--target", choices=("gate", "cavity", "machine"),
                       default="gate")
    sweep.add_argument("--method", choices=GATE_METHODS)
    sweep.add_argument("--processes", type=int, default=1)
    sweep.set_defaults(handler=_run_sweep)

    oracle = commands.add_parser("oracle", help="numerical cross-checks")
    checks = oracle.add_subparsers(dest="check")
    checks.required = True

    carrier = checks.add_parser("carrier", parents=[common])
    carrier.add_argument("--ratio", type=float, default=0.05,
                         help="Omega_eff0 / omega_z")
    carrier.add_argument("--eta", type=float, default=0.1)
    carrier.add_argument("--axial-frequency", default="1MHz")
    carrier.set_defaults(handler=_run_oracle)

    adiabatic = checks.add_parser("adiabatic", parents=[common])
    adiabatic.add_argument("--t-omega", type=float, default=50.0)
    adiabatic.add_argument("--g-over-omega", type=float, default=10.0)
    adiabatic.add_argument("--kappa-over-g", type=float, default=0.01)
    adiabatic.add_argument("--gamma-over-g", type=float, default=0.0)
    adiabatic.add_argument("--omega", default="1MHz")
    adiabatic.add_argument("--samples", type=int, default=8)
    adiabatic.set_defaults(handler=_run_oracle)

    raman = checks.add_parser("raman", parents=[common])
    raman.add_argument("--detuning", default="1GHz")
    raman.add_argument("--detuning-over-gamma", type=float, default=100.0)
    raman.add_argument("--omega-over-detuning", type=float, default=0.05)
    raman.add_argument("--eta", type=float, default=0.1)
    raman.set_defaults(handler=_run_oracle)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        arguments = build_parser().parse_args(argv)
    except UsageError as error:
        print(f"iondesign: error: {error}", file=sys.stderr)
        return EXIT_USAGE

    levels = (logging.WARNING, logging.INFO, logging.DEBUG)
    logging.basicConfig(
        level=levels[min(arguments.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return arguments.handler(arguments)
    except (ConfigError, DomainError) as error:
        print(f"iondesign: error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as error:
        print(f"iondesign: integration failed: {error}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
