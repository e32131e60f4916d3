"""
Reports printed by the command line and exported as CSV.
"""
import json
import logging
from typing import (
    Any,
    Dict,
    List,
    NamedTuple,
    Optional,
    Tuple,
)

from pandas import DataFrame

from iondesign.units import (
    format_quantity,
    format_time,
)

__all__ = [
    "Report",
    "ReportRow",
]

logger = logging.getLogger(__name__)


class ReportRow(NamedTuple):
    key: str
    label: str
    value: Any
    unit: str = ""
    time: bool = False


class Report:
    """
    Titled list of sections, each a list of labelled values.

    Every value is stored at full precision under a stable column `key`;
    the text rendering rounds to three significant figures. The resolved
    configuration the values were computed from is echoed at the end.

    Args:
        title (str):
            Heading of the report.
        config (dict, optional):
            Configuration to echo.
    """

    def __init__(self, title: str, config: Optional[Dict[str, Any]] = None):
        self._title = title
        self._config = config
        self._sections: List[Tuple[str, List[ReportRow]]] = []
        self._advisories: List[str] = []
        self._valid = True

    @property
    def title(self) -> str:
        return self._title

    @property
    def config(self) -> Optional[Dict[str, Any]]:
        return self._config

    @property
    def valid(self) -> bool:
        return self._valid

    @property
    def advisories(self) -> Tuple[str, ...]:
        return tuple(self._advisories)

    def section(self, name: str) -> "Report":
        self._sections.append((name, []))
        return self

    def add(
        self,
        key: str,
        label: str,
        value: Any,
        unit: str = "",
        time: bool = False,
    ) -> "Report":
        """Append a value to the last section; `time` values are in s."""
        if not self._sections:
            self.section("")
        self._sections[-1][1].append(ReportRow(key, label, value, unit, time))
        return self

    def advise(self, *messages: str) -> "Report":
        for message in messages:
            if message not in self._advisories:
                self._advisories.append(message)
        return self

    def invalidate(self, reason: str) -> "Report":
        self._valid = False
        return self.advise(reason)

    def rows(self) -> List[ReportRow]:
        return [row for _, rows in self._sections for row in rows]

    def scalars(self) -> Dict[str, Any]:
        """Column name to full-precision value, plus the `invalid` flag."""
        values = {row.key: row.value for row in self.rows()}
        values["invalid"] = not self._valid
        return values

    def to_frame(self) -> DataFrame:
        return DataFrame([self.scalars()])

    def write_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, index=False)
        logger.info(f"Wrote {path}")

    def render(self) -> str:
        width = max([len(row.label) for row in self.rows()] + [0])
        lines = [self._title, "=" * len(self._title)]
        for name, rows in self._sections:
            if name:
                lines += ["", name, "-" * len(name)]
            for row in rows:
                lines.append(f"  {row.label:<{width}}  {_render(row)}")

        if self._advisories:
            lines += ["", "Advisories", "----------"]
            lines += [f"  ! {advisory}" for advisory in self._advisories]
        if not self._valid:
            lines += ["", "RESULT INVALID: model breakdown or failed check"]
        if self._config is not None:
            lines += ["", "Configuration", "-------------"]
            lines += json.dumps(self._config, indent=2, sort_keys=True,
                                default=str).splitlines()
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def _render(row: ReportRow) -> str:
    if isinstance(row.value, bool):
        return "yes" if row.value else "no"
    if row.value is None:
        return "n/a"
    if isinstance(row.value, str):
        return row.value
    if isinstance(row.value, int):
        return f"{row.value} {row.unit}".strip()
    if row.time:
        return format_time(float(row.value))
    return format_quantity(float(row.value), row.unit)
