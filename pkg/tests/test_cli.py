from pandas import read_csv
from pytest import (
    approx,
    mark,
)

from iondesign.cli import (
    EXIT_CHECK_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_USAGE,
    gate_report,
    machine_report,
    main,
    species_report,
)
from iondesign.registry import (
    load_preset,
    set_path,
)


def test_species_registry(capsys):
    assert main(["species"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "Species registry" in output
    for name in ("ba", "be", "ca", "cs"):
        assert f"{name}: " in output


def test_species_report_columns():
    scalars = species_report({}, "cs").scalars()
    assert scalars["wavelength_m"] == approx(852e-9)
    assert scalars["linewidth_hz"] == approx(5.3e6)
    assert "cs_mass_kg" in species_report({}).scalars()


def test_rabi_flop_csv(tmp_path):
    path = tmp_path / "rabi.csv"
    arguments = ["gate", "rabi_flop", "--preset", "cs-fp-cavity",
                 "--csv", str(path)]
    assert main(arguments) == EXIT_OK
    frame = read_csv(path)
    assert frame["p"][0] == approx(0.8, abs=0.1)
    assert frame["g_hz"][0] == approx(70e6, rel=0.02)
    assert not frame["invalid"][0]


def test_lightshift_rate():
    scalars = gate_report(load_preset("ca-140"), "lightshift").scalars()
    assert scalars["rate_per_s"] == approx(8311, rel=1e-2)
    assert scalars["per_ion_time_s"] == approx(0.859e-6, rel=1e-2)


def test_adiabatic_gate_reports_both_rates():
    scalars = gate_report(load_preset("ba-fp-cavity"), "adiabatic").scalars()
    assert scalars["rate_exact_per_s"] == approx(9 / 8 * scalars["rate_per_s"])
    assert scalars["per_ion_time_s"] == approx(65.8e-9, rel=1e-2)


@mark.parametrize(
    "preset, weeks",
    [
        ("machine-iontrap", 8.27),
        ("machine-microsphere", 2.31),
    ],
)
def test_machine_runtime(preset, weeks):
    report = machine_report(load_preset(preset))
    scalars = report.scalars()
    assert scalars["runtime_weeks"] == approx(weeks, rel=5e-3)
    assert scalars["total_traps"] == 226
    assert scalars["stated_total_traps"] == 200
    assert report.valid


def test_machine_exit_code(capsys):
    assert main(["machine", "--preset", "machine-iontrap"]) == EXIT_OK
    assert "derived 226, stated 200" in capsys.readouterr().out


def test_override_with_units(capsys):
    arguments = ["cavity", "--preset", "cs-fp-cavity",
                 "--set", "cavity.length=30um"]
    assert main(arguments) == EXIT_OK
    assert '"length_um": 30' in capsys.readouterr().out


def test_model_breakdown_exit_code():
    arguments = ["gate", "cz", "--preset", "be-140",
                 "--set", "gate.heating_rate=1e9"]
    assert main(arguments) == EXIT_INVALID


@mark.parametrize(
    "arguments",
    [
        ["gate"],
        ["gate", "teleport", "--preset", "be-140"],
        ["cavity", "--preset", "no-such-preset"],
        ["cavity"],
        ["gate", "cz", "--preset", "be-140", "--set", "gate.bogus=1"],
        ["sweep", "cavity.finesse", "--start", "1e4", "--stop", "1e5",
         "--preset", "cs-fp-cavity"],
        ["sweep", "cavity.mirrors", "--start", "1", "--stop", "2",
         "--target", "cavity", "--preset", "cs-fp-cavity"],
    ],
)
def test_usage_errors(arguments):
    assert main(arguments) == EXIT_USAGE


def test_sweep_to_stdout(capsys):
    arguments = ["sweep", "cavity.finesse", "--scale", "log",
                 "--start", "1e4", "--stop", "1e6", "--points", "3",
                 "--target", "gate", "--method", "rabi_flop",
                 "--preset", "cs-fp-cavity"]
    assert main(arguments) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("cavity.finesse,")
    assert len(lines) == 4


def test_oracle_carrier_time_series(tmp_path):
    path = tmp_path / "carrier.csv"
    assert main(["oracle", "carrier", "--csv", str(path)]) == EXIT_OK
    frame = read_csv(path)
    assert list(frame.columns) == ["time_s", "leaked_population"]
    assert frame["time_s"][0] == 0


def test_oracle_raman_advisory():
    arguments = ["oracle", "raman", "--detuning-over-gamma", "5"]
    assert main(arguments) == EXIT_INVALID


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CHECK_FAILED}) == 4


def test_machine_without_toffoli_gates():
    config = set_path(load_preset("machine-iontrap"),
                      "machine.toffoli_count", "0")
    report = machine_report(config)
    assert report.scalars()["total_runtime_s"] == 0
    assert "data blocks" in report.render()


def test_cavity_csv_columns(tmp_path):
    path = tmp_path / "cavity.csv"
    arguments = ["cavity", "--preset", "cs-fp-cavity", "--csv", str(path)]
    assert main(arguments) == EXIT_OK
    assert list(read_csv(path).columns) == [
        "length_m",
        "finesse",
        "waist_m",
        "mode_volume_m3",
        "g_hz",
        "kappa_hz",
        "gamma_hz",
        "g_over_gamma",
        "g_over_kappa",
        "quality_factor",
        "invalid",
    ]


@mark.parametrize(
    "override",
    [
        "cavity.finesse=abc",
        "cavity.length=30 parsecs",
        "gate.p=abc",
        "species.mass=1",
    ],
)
def test_malformed_override_is_a_usage_error(override, capsys):
    arguments = ["gate", "rabi_flop", "--preset", "cs-fp-cavity",
                 "--set", override]
    assert main(arguments) == EXIT_USAGE
    assert "iondesign: error" in capsys.readouterr().err


def test_override_units_ignore_case(capsys):
    arguments = ["cavity", "--preset", "cs-fp-cavity",
                 "--set", "cavity.length=0.03 MM"]
    assert main(arguments) == EXIT_OK
    assert '"length_um": 30' in capsys.readouterr().out
