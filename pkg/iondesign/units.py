r"""
Unit handling at the boundary of the package.

Internally every quantity is SI and every frequency is angular (rad/s).
Data files and the command line use unit-suffixed keys such as
``wavelength_nm`` or ``linewidth_mhz``; frequency suffixes always denote
an ordinary frequency :math:`\nu = \omega / 2\pi`, while ``_per_s`` style
suffixes denote plain rates.
"""
import re
from math import (
    floor,
    log10,
)
from typing import (
    Any,
    Dict,
    Optional,
    Tuple,
)

from iondesign.constants import (
    AMU,
    BOHR_RADIUS,
    E,
    TWO_PI,
)
from iondesign.exceptions import ConfigError

__all__ = [
    "UNIT_SUFFIXES",
    "convert_override",
    "format_quantity",
    "format_time",
    "from_si",
    "parse_quantity",
    "section_to_si",
    "split_key",
    "to_si",
]

# suffix -> (factor to SI, dimension)
UNIT_SUFFIXES: Dict[str, Tuple[float, str]] = {
    "nm": (1e-9, "m"),
    "um": (1e-6, "m"),
    "mm": (1e-3, "m"),
    "cm": (1e-2, "m"),
    "m": (1.0, "m"),
    "hz": (TWO_PI, "rad/s"),
    "khz": (TWO_PI * 1e3, "rad/s"),
    "mhz": (TWO_PI * 1e6, "rad/s"),
    "ghz": (TWO_PI * 1e9, "rad/s"),
    "per_s": (1.0, "1/s"),
    "per_ms": (1e3, "1/s"),
    "per_us": (1e6, "1/s"),
    "s": (1.0, "s"),
    "ms": (1e-3, "s"),
    "us": (1e-6, "s"),
    "ns": (1e-9, "s"),
    "amu": (AMU, "kg"),
    "kg": (1.0, "kg"),
    "ea0": (E * BOHR_RADIUS, "C m"),
}

_PREFIXES = {
    "G": 1e9,
    "M": 1e6,
    "k": 1e3,
    "": 1.0,
    "c": 1e-2,
    "m": 1e-3,
    "u": 1e-6,
    "µ": 1e-6,
    "μ": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
}

# unit symbol in a value string -> (factor to SI, dimension)
_SYMBOLS = {
    "Hz": (TWO_PI, "rad/s"),
    "m": (1.0, "m"),
    "s": (1.0, "s"),
    "g": (1e-3, "kg"),
}

_QUANTITY = re.compile(
    r"^\s*(?P<number>[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)"
    r"\s*(?P<unit>[A-Za-zµμ]*)\s*$"
)

_DISPLAY_PREFIXES = (
    (1e9, "G"),
    (1e6, "M"),
    (1e3, "k"),
    (1.0, ""),
    (1e-3, "m"),
    (1e-6, "µ"),
    (1e-9, "n"),
    (1e-12, "p"),
)


def split_key(key: str) -> Tuple[str, Optional[str]]:
    """
    Split a unit-suffixed key into its base name and suffix.

    The longest matching suffix wins, so ``rate_per_ms`` splits into
    ``("rate", "per_ms")`` and ``length_um`` into ``("length", "um")``.

    Returns:
        tuple[str, str or None]:
            Base name and suffix, or the key itself and ``None``
            for dimensionless keys.
    """
    for suffix in sorted(UNIT_SUFFIXES, key=len, reverse=True):
        tail = f"_{suffix}"
        if key.endswith(tail) and len(key) > len(tail):
            return key[:-len(tail)], suffix
    return key, None


def to_si(key: str, value: Any) -> Tuple[str, Any]:
    base, suffix = split_key(key)
    if suffix is None or value is None or isinstance(value, (bool, str)):
        return base, value
    return base, float(value) * UNIT_SUFFIXES[suffix][0]


def from_si(value: float, suffix: Optional[str]) -> float:
    if suffix is None:
        return value
    return value / UNIT_SUFFIXES[suffix][0]


def section_to_si(section: Dict[str, Any]) -> Dict[str, Any]:
    """
    Convert a config section with unit-suffixed keys to a dictionary of
    base names and SI values.
    """
    converted = {}
    for key, value in section.items():
        if isinstance(value, dict):
            converted[key] = section_to_si(value)
            continue
        base, si_value = to_si(key, value)
        converted[base] = si_value
    return converted


def parse_quantity(text: str) -> Tuple[float, Optional[str]]:
    """
    Parse a number with an optional SI-prefixed unit.

    Examples:
        ``"5.3MHz"`` gives ``(2*pi*5.3e6, "rad/s")``,
        ``"44.6 um"`` gives ``(4.46e-5, "m")``,
        ``"4.2e5"`` gives ``(420000.0, None)``.
        Symbols with a case-sensitive prefix are tried first, so ``"1Ms"``
        is a megasecond while ``"30 UM"`` falls back to micrometres.

    Returns:
        tuple[float, str or None]:
            SI value and its dimension, or ``None`` for a bare number.
    """
    match = _QUANTITY.match(text)
    if match is None:
        raise ConfigError(f"cannot parse quantity {text!r}", source=text)

    number = float(match.group("number"))
    unit = match.group("unit")
    if not unit:
        return number, None

    for symbol, (factor, dimension) in _SYMBOLS.items():
        if unit.endswith(symbol):
            prefix = unit[:-len(symbol)]
            if prefix in _PREFIXES:
                return number * _PREFIXES[prefix] * factor, dimension

    # case-insensitive spellings follow the key suffixes: mhz, UM, Ns
    suffix = UNIT_SUFFIXES.get(unit.lower())
    if suffix is not None:
        factor, dimension = suffix
        return number * factor, dimension
    raise ConfigError(f"unknown unit {unit!r}", source=text)


def convert_override(key: str, text: str, stored: Any = None) -> Any:
    """
    Turn the textual value of a ``--set`` override into the value stored
    under `key`, expressed in the unit of the key's suffix.

    Args:
        key (str):
            Unit-suffixed key the value is stored under.
        text (str):
            Value as typed on the command line.
        stored (Any):
            Value currently stored under `key`. A textual setting keeps
            `text` verbatim; a flag only accepts ``true`` or ``false``.

    Raises:
        ConfigError: If `text` does not parse as a value for `key`.
    """
    if isinstance(stored, str):
        return text.strip()

    lowered = text.strip().lower()
    if stored is None or isinstance(stored, bool):
        if lowered in ("true", "false"):
            return lowered == "true"
        if isinstance(stored, bool):
            raise ConfigError(
                f"{key} expects true or false, got {text!r}",
                source=text,
                field=key,
            )

    _, suffix = split_key(key)
    try:
        value, dimension = parse_quantity(text)
    except ConfigError as error:
        raise ConfigError(
            f"cannot parse {text.strip()!r} as a value",
            source=text,
            field=key,
        ) from error

    if dimension is None:
        return value
    if suffix is None:
        raise ConfigError(
            f"{key} is dimensionless, got a value with units",
            source=text,
            field=key,
        )
    factor, expected = UNIT_SUFFIXES[suffix]
    if dimension != expected:
        raise ConfigError(
            f"expected a quantity in {expected}, got {dimension}",
            source=text,
            field=key,
        )
    # drop the rounding noise of the prefix round trip, 30um -> 30.0
    return float(f"{value / factor:.12g}")


def format_quantity(value: float, unit: str = "", digits: int = 3) -> str:
    """
    Render a value with the most readable SI prefix and `digits`
    significant figures, e.g. ``format_quantity(8.3e3, "Hz")`` gives
    ``"8.30 kHz"``.
    """
    if value is None:
        return "n/a"
    if value != value or value in (float("inf"), float("-inf")):
        return f"{value} {unit}".strip()
    if value == 0 or not unit:
        return f"{_significant(value, digits)} {unit}".strip()

    magnitude = abs(value)
    for scale, prefix in _DISPLAY_PREFIXES:
        if magnitude >= scale:
            break
    return f"{_significant(value / scale, digits)} {prefix}{unit}"


def format_time(seconds: float, digits: int = 3) -> str:
    """Readable time plus the raw value in seconds."""
    if seconds is None:
        return "n/a"
    return f"{format_quantity(seconds, 's', digits)} ({seconds:.6g} s)"


def _significant(value: float, digits: int) -> str:
    if value == 0:
        return "0"
    exponent = floor(log10(abs(value)))
    if exponent >= 6 or exponent < -4:
        return f"{value:.{digits - 1}e}"
    decimals = max(digits - 1 - exponent, 0)
    return f"{value:.{decimals}f}"
