"""
Shipped species and presets, and the layered configuration built from them.

A configuration is a dictionary of sections (``species``, ``cavity``,
``trap``, ``gate``, ``machine``) whose fields carry unit-suffixed keys, as
in the JSON data files. Presets are merged first, then config files, then
``--set`` overrides; later layers win. Conversion to SI happens only when
the physical objects are built.
"""
import json
import logging
from copy import deepcopy
from functools import lru_cache
from os import listdir
from os.path import (
    abspath,
    basename,
    isfile,
    join,
    splitext,
)
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from iondesign.core import (
    CavityConfig,
    IonSpecies,
    TrapConfig,
)
from iondesign.exceptions import (
    ConfigError,
    DomainError,
    UsageError,
)
from iondesign.units import (
    convert_override,
    parse_quantity,
    section_to_si,
    split_key,
)

__all__ = [
    "SECTIONS",
    "build_cavity",
    "build_species",
    "build_trap",
    "get_path",
    "load_config",
    "load_preset",
    "load_species",
    "merge",
    "preset_names",
    "read_config_file",
    "set_path",
    "species_names",
    "species_record",
]

logger = logging.getLogger(__name__)

DATA_DIRECTORY = join(abspath(join(__file__, "..")), "data")
SPECIES_DIRECTORY = join(DATA_DIRECTORY, "species")
PRESETS_DIRECTORY = join(DATA_DIRECTORY, "presets")

SECTIONS = ("species", "cavity", "trap", "gate", "machine")
_META_KEYS = ("include", "description")
_TEXT_FIELDS = frozenset({"name", "kind", "species", "gate_source"})

_SPECIES_FIELDS = frozenset({
    "name",
    "mass",
    "wavelength",
    "linewidth",
    "dipole",
    "hyperfine_splitting",
})
_CAVITY_FIELDS = frozenset({
    "kind",
    "length",
    "finesse",
    "mirror_curvature",
    "waist",
    "radius",
    "reference_radius",
    "g_over_gamma",
    "g_over_kappa",
    "quality_factor",
})
_TRAP_FIELDS = frozenset({
    "n_ions",
    "spacing_multiple",
    "geometry_factor",
    "axial_frequency",
})


def _names(directory: str) -> Tuple[str, ...]:
    return tuple(sorted(
        splitext(name)[0]
        for name in listdir(directory)
        if name.endswith(".json")
    ))


def species_names() -> Tuple[str, ...]:
    return _names(SPECIES_DIRECTORY)


def preset_names() -> Tuple[str, ...]:
    return _names(PRESETS_DIRECTORY)


def read_config_file(path: str) -> Dict[str, Any]:
    """
    Read one JSON config document.

    Raises:
        ConfigError:
            When the file is missing, is not valid JSON (the error carries
            the line number), or has a top-level key that is not a known
            section.
    """
    if not isfile(path):
        raise ConfigError("no such config file", source=path)
    with open(path, "r", encoding="utf-8") as config_file:
        text = config_file.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(error.msg, source=path, line=error.lineno) from None

    if not isinstance(document, dict):
        raise ConfigError("top level must be an object", source=path)
    for key, value in document.items():
        if key not in SECTIONS and key not in _META_KEYS:
            raise ConfigError(f"unknown section {key!r}", source=path)
        if key in SECTIONS[1:] and not isinstance(value, dict):
            raise ConfigError("section must be an object", source=path,
                              field=key)
    return document


@lru_cache(maxsize=None)
def _species_document(name: str) -> Mapping[str, Any]:
    path = join(SPECIES_DIRECTORY, f"{name}.json")
    if not isfile(path):
        raise ConfigError(
            f"unknown species {name!r}; known: {', '.join(species_names())}",
            field="species",
        )
    with open(path, "r", encoding="utf-8") as species_file:
        try:
            document = json.load(species_file)
        except json.JSONDecodeError as error:
            raise ConfigError(
                error.msg,
                source=path,
                line=error.lineno,
            ) from None
    return MappingProxyType(document)


def species_record(name: str) -> Mapping[str, Any]:
    """Read-only view of a shipped species file, unit-suffixed keys."""
    return _species_document(name)


@lru_cache(maxsize=None)
def load_species(name: str) -> IonSpecies:
    """Shipped species by registry name, e.g. ``"cs"``."""
    return build_species(dict(_species_document(name)))


def merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep merge of two config layers, `update` winning. Within a section a
    key of `update` also replaces any key of `base` with the same base
    name, so ``length_um`` overrides an inherited ``length_mm``.
    """
    merged = deepcopy(base)
    for key, value in update.items():
        current = merged.get(key)
        if isinstance(value, dict) and isinstance(current, dict):
            section = dict(current)
            for field, field_value in value.items():
                stem = split_key(field)[0]
                for existing in list(section):
                    if existing != field and split_key(existing)[0] == stem:
                        del section[existing]
                section[field] = deepcopy(field_value)
            merged[key] = section
        else:
            merged[key] = deepcopy(value)
    return merged


def load_preset(name: str, _chain: Sequence[str] = ()) -> Dict[str, Any]:
    """
    Shipped preset with its ``include`` list resolved; included presets are
    merged in order, then the preset itself.

    Raises:
        ConfigError:
            For an unknown preset or an include cycle.
    """
    if name in _chain:
        cycle = " -> ".join(tuple(_chain) + (name,))
        raise ConfigError(f"include cycle {cycle}", field="include")
    path = join(PRESETS_DIRECTORY, f"{name}.json")
    if not isfile(path):
        raise ConfigError(
            f"unknown preset {name!r}; known: {', '.join(preset_names())}"
        )
    return _resolve(read_config_file(path), tuple(_chain) + (name,))


def _resolve(document: Dict[str, Any], chain: Sequence[str]):
    config: Dict[str, Any] = {}
    includes = document.get("include", [])
    if isinstance(includes, str):
        includes = [includes]
    for included in includes:
        config = merge(config, load_preset(included, chain))
    own = {
        key: value for key, value in document.items()
        if key not in _META_KEYS
    }
    return merge(config, own)


def get_path(config: Dict[str, Any], path: str) -> Tuple[str, Any]:
    """
    Find the stored key and value behind a dotted path such as
    ``cavity.finesse`` or ``cavity.length``.

    Raises:
        UsageError:
            When the path names no stored field.
    """
    section_name, field = _split_path(path)
    if field is None:
        if section_name not in config:
            raise UsageError(f"unknown parameter path {path!r}", field=path)
        return section_name, config[section_name]
    section = config.get(section_name)
    if not isinstance(section, dict):
        raise UsageError(f"unknown parameter path {path!r}", field=path)
    key = _find_key(section, field)
    if key is None:
        raise UsageError(f"unknown parameter path {path!r}", field=path)
    return key, section[key]


def set_path(
    config: Dict[str, Any],
    path: str,
    text: str,
    strict: bool = False,
) -> Dict[str, Any]:
    """
    Apply one ``path=value`` override in place.

    A bare number is read in the unit of the stored key; a number with a
    unit (``5.3MHz``, ``44.6um``) is converted to it. A field not present
    yet is stored in SI, unless `strict` is set, in which case it is a
    usage error.

    Returns:
        dict:
            The updated `config`.
    """
    section_name, field = _split_path(path)
    if field is None:
        config[section_name] = text.strip()
        return config

    section = config.setdefault(section_name, {})
    if not isinstance(section, dict):
        # a species given by registry name
        raise UsageError(
            f"cannot set {path!r}: {section_name} is not a section",
            field=path,
        )
    key = _find_key(section, field)
    if key is None:
        if strict:
            raise UsageError(f"unknown parameter path {path!r}", field=path)
        key, value = field, _new_value(field, text)
    else:
        stored = section[key]
        if stored is None and split_key(key)[0] in _TEXT_FIELDS:
            stored = ""
        value = convert_override(key, text, stored)
        counted = isinstance(stored, int) and not isinstance(stored, bool)
        if counted and isinstance(value, float) and value.is_integer():
            value = int(value)

    section[key] = value
    logger.debug(f"Override {section_name}.{key} = {value!r}")
    return config


def _split_path(path: str) -> Tuple[str, Optional[str]]:
    parts = path.strip().split(".")
    if len(parts) > 2 or not all(parts):
        raise UsageError(f"malformed parameter path {path!r}", field=path)
    if parts[0] not in SECTIONS:
        raise UsageError(f"unknown section in {path!r}", field=path)
    return parts[0], parts[1] if len(parts) == 2 else None


def _find_key(section: Dict[str, Any], field: str) -> Optional[str]:
    if field in section:
        return field
    for key in section:
        if split_key(key)[0] == field:
            return key
    return None


def _new_value(field: str, text: str) -> Any:
    if field in _TEXT_FIELDS or field in _META_KEYS:
        return text.strip()
    if split_key(field)[1] is not None:
        return convert_override(field, text)
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        value, _ = parse_quantity(text)
    except ConfigError as error:
        raise ConfigError(
            f"cannot parse {text.strip()!r} as a value",
            source=text,
            field=field,
        ) from error
    return value


def load_config(
    presets: Iterable[str] = (),
    files: Iterable[str] = (),
    overrides: Iterable[str] = (),
) -> Dict[str, Any]:
    """
    Layered configuration: `presets`, then config `files`, then
    ``path=value`` `overrides`.
    """
    config: Dict[str, Any] = {}
    for preset in presets:
        config = merge(config, load_preset(preset))
    for path in files:
        document = read_config_file(path)
        config = merge(config, _resolve(document, (basename(path),)))
    for override in overrides:
        if "=" not in override:
            raise UsageError(
                f"override {override!r} is not of the form path=value",
                field="--set",
            )
        path, text = override.split("=", 1)
        set_path(config, path, text)
    return config


def _require(section: str, record: Dict[str, Any], fields: List[str]):
    for field in fields:
        if record.get(field) is None:
            raise UsageError(
                f"missing parameter {field!r}",
                field=f"{section}.{field}",
            )


def _check_fields(section: str, record: Dict[str, Any], known) -> None:
    for field in record:
        if field not in known:
            raise ConfigError(
                f"unknown {section} field {field!r}",
                field=f"{section}.{field}",
            )


def _build(section: str, builder, *args):
    try:
        return builder(*args)
    except DomainError as error:
        raise ConfigError(str(error), field=section) from error


def build_species(entry: Any) -> IonSpecies:
    """
    Species from a config ``species`` entry: a registry name or an inline
    record with unit-suffixed keys.
    """
    if entry is None:
        raise UsageError("missing parameter 'species'", field="species")
    if isinstance(entry, str):
        return load_species(entry)
    record = section_to_si(dict(entry))
    _check_fields("species", record, _SPECIES_FIELDS)
    _require("species", record, ["mass", "wavelength"])
    return _build("species", IonSpecies.from_record, record)


def build_cavity(config: Dict[str, Any]) -> CavityConfig:
    species = build_species(config.get("species"))
    if "cavity" not in config:
        raise UsageError("missing section 'cavity'", field="cavity")
    record = section_to_si(config["cavity"])
    _check_fields("cavity", record, _CAVITY_FIELDS)
    kind = record.get("kind", CavityConfig.FABRY_PEROT)
    if kind == CavityConfig.MICROSPHERE:
        _require("cavity", record, ["radius", "g_over_gamma"])
    else:
        _require("cavity", record, ["length", "finesse"])
    return _build("cavity", CavityConfig.from_record, species, record)


def build_trap(config: Dict[str, Any]) -> TrapConfig:
    species = build_species(config.get("species"))
    if "trap" not in config:
        raise UsageError("missing section 'trap'", field="trap")
    record = section_to_si(config["trap"])
    _check_fields("trap", record, _TRAP_FIELDS)
    _require("trap", record, ["n_ions"])
    return _build("trap", TrapConfig.from_record, species, record)
