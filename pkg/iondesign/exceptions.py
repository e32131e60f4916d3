from typing import Optional

__all__ = [
    "ConfigError",
    "DomainError",
    "IntegrationError",
    "IonDesignError",
    "StepSizeUnderflowError",
    "UsageError",
]


class IonDesignError(Exception):
    """Base class of every error raised by :mod:`iondesign`."""


class DomainError(IonDesignError, ValueError):
    """A physical input lies outside the domain of a formula."""


class ConfigError(IonDesignError):
    """
    A configuration file or override could not be parsed.

    Args:
        message (str):
            What went wrong.
        source (str, optional):
            File name or override text the error comes from.
        line (int, optional):
            Line number inside `source`, when known.
        field (str, optional):
            Dotted config path of the offending field.
    """

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.source = source
        self.line = line
        self.field = field

        location = ""
        if source is not None:
            location = source if line is None else f"{source}:{line}"
        if field is not None:
            location = f"{location} [{field}]" if location else f"[{field}]"
        super().__init__(f"{location}: {message}" if location else message)


class UsageError(ConfigError):
    """Command line usage error: missing parameter, unknown sweep path."""


class IntegrationError(IonDesignError):
    """The dynamics integrator cannot proceed."""


class StepSizeUnderflowError(IntegrationError):
    """Step halving was exhausted before the requested tolerance was met."""
