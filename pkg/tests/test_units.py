from pytest import (
    approx,
    mark,
    raises,
)

from iondesign.constants import TWO_PI
from iondesign.exceptions import ConfigError
from iondesign.units import (
    convert_override,
    format_quantity,
    format_time,
    from_si,
    parse_quantity,
    section_to_si,
    split_key,
    to_si,
)


@mark.parametrize(
    "key, target",
    [
        ("length_um", ("length", "um")),
        ("rate_per_ms", ("rate", "per_ms")),
        ("heating_rate_per_s", ("heating_rate", "per_s")),
        ("linewidth_mhz", ("linewidth", "mhz")),
        ("mass_amu", ("mass", "amu")),
        ("finesse", ("finesse", None)),
        ("memory_noise_per_step", ("memory_noise_per_step", None)),
    ],
)
def test_split_key(key, target):
    assert target == split_key(key)


def test_frequency_suffix_is_ordinary_frequency():
    base, value = to_si("linewidth_mhz", 5.3)
    assert base == "linewidth"
    assert value == approx(TWO_PI * 5.3e6)
    assert from_si(value, "mhz") == approx(5.3)


def test_rate_suffix_has_no_two_pi():
    assert to_si("heating_rate_per_ms", 2.0) == ("heating_rate", approx(2e3))


def test_section_to_si_keeps_text_and_flags():
    section = section_to_si({
        "kind": "fabry_perot",
        "length_um": 44.6,
        "breathing_mode": True,
        "finesse": 4.2e5,
    })
    assert section == {
        "kind": "fabry_perot",
        "length": approx(44.6e-6),
        "breathing_mode": True,
        "finesse": 4.2e5,
    }


@mark.parametrize(
    "text, value, dimension",
    [
        ("5.3MHz", TWO_PI * 5.3e6, "rad/s"),
        ("44.6 um", 44.6e-6, "m"),
        ("10cm", 0.1, "m"),
        ("35us", 35e-6, "s"),
        ("0.5 ms", 0.5e-3, "s"),
        ("4.2e5", 4.2e5, None),
        ("-3", -3.0, None),
        ("5.3mhz", TWO_PI * 5.3e6, "rad/s"),
        ("30 UM", 30e-6, "m"),
        ("2 NS", 2e-9, "s"),
        ("1Ms", 1e6, "s"),
    ],
)
def test_parse_quantity(text, value, dimension):
    parsed, parsed_dimension = parse_quantity(text)
    assert parsed == approx(value)
    assert parsed_dimension == dimension


@mark.parametrize("text", ["fast", "5 parsecs", "1..2MHz", ""])
def test_parse_quantity_rejects(text):
    with raises(ConfigError):
        parse_quantity(text)


@mark.parametrize(
    "key, text, target",
    [
        ("length_um", "44.6", 44.6),
        ("length_um", "0.1mm", 100.0),
        ("linewidth_mhz", "5.3MHz", 5.3),
        ("axial_frequency_khz", "1MHz", 1000.0),
        ("finesse", "1e5", 1e5),
    ],
)
def test_convert_override(key, text, target):
    assert convert_override(key, text) == approx(target)


def test_convert_override_non_numeric():
    assert convert_override("breathing_mode", "False") is False
    assert convert_override("breathing_mode", "true", True) is True
    assert convert_override("kind", " microsphere", "fabry_perot") == (
        "microsphere"
    )


@mark.parametrize(
    "key, text, stored",
    [
        ("finesse", "abc", 420000),
        ("kind", "microsphere", None),
        ("p", "true", 0.01),
        ("breathing_mode", "1", False),
        ("length_um", "30 parsecs", 44.6),
    ],
)
def test_convert_override_rejects_text(key, text, stored):
    with raises(ConfigError) as error:
        convert_override(key, text, stored)
    assert error.value.field == key


@mark.parametrize(
    "key, text",
    [
        ("length_um", "5MHz"),
        ("finesse", "3um"),
    ],
)
def test_convert_override_dimension_mismatch(key, text):
    with raises(ConfigError) as error:
        convert_override(key, text)
    assert error.value.field == key


@mark.parametrize(
    "value, unit, target",
    [
        (8.3e3, "Hz", "8.30 kHz"),
        (2.0124e-5, "m", "20.1 µm"),
        (0.825, "", "0.825"),
        (0, "Hz", "0 Hz"),
        (70.1e6, "Hz", "70.1 MHz"),
    ],
)
def test_format_quantity(value, unit, target):
    assert target == format_quantity(value, unit)


def test_format_time_keeps_seconds():
    assert "625 ms (0.625 s)" == format_time(0.625)
    assert "n/a" == format_time(None)
