"""
Design-space sweeps: evaluate a report over a grid of one parameter.
"""
import logging
from copy import deepcopy
from multiprocessing import (
    Manager,
    Process,
)
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Sequence,
)

from numpy import (
    array_split,
    geomspace,
    linspace,
    ndarray,
)
from pandas import DataFrame

from iondesign.exceptions import (
    IonDesignError,
    UsageError,
)
from iondesign.registry import (
    get_path,
    set_path,
)
from iondesign.report import Report

__all__ = [
    "SweepSpec",
    "run_sweep",
    "sweep_values",
]

logger = logging.getLogger(__name__)

ReportCommand = Callable[[Dict[str, Any]], Report]


class SweepSpec:
    """
    One swept parameter.

    Args:
        parameter (str):
            Dotted config path, e.g. ``cavity.finesse``.
        scale (str):
            ``"linear"`` or ``"log"``.
        start (float):
            First value, in the unit of the stored key.
        stop (float):
            Last value, in the unit of the stored key.
        points (int):
            Number of values, at least 2.

    Raises:
        UsageError:
            For fewer than two points, equal endpoints, an unknown scale or
            non-positive endpoints on a log scale.
    """

    LINEAR = "linear"
    LOG = "log"

    def __init__(
        self,
        parameter: str,
        scale: str,
        start: float,
        stop: float,
        points: int,
    ):
        if scale not in (SweepSpec.LINEAR, SweepSpec.LOG):
            raise UsageError(f"unknown sweep scale {scale!r}", field="scale")
        if int(points) != points or points < 2:
            raise UsageError(
                f"a sweep needs at least 2 points, got {points}",
                field="points",
            )
        if start == stop:
            raise UsageError("sweep start and stop are equal", field="stop")
        if scale == SweepSpec.LOG and not (start > 0 and stop > 0):
            raise UsageError(
                "a log sweep needs positive endpoints",
                field="start",
            )
        self._parameter = parameter
        self._scale = scale
        self._start = float(start)
        self._stop = float(stop)
        self._points = int(points)

    @property
    def parameter(self) -> str:
        return self._parameter

    @property
    def scale(self) -> str:
        return self._scale

    @property
    def start(self) -> float:
        return self._start

    @property
    def stop(self) -> float:
        return self._stop

    @property
    def points(self) -> int:
        return self._points

    def __repr__(self) -> str:
        return (
            f"SweepSpec({self._parameter!r}, {self._scale!r}, "
            f"{self._start:g}, {self._stop:g}, {self._points})"
        )


def sweep_values(spec: SweepSpec) -> ndarray:
    if spec.scale == SweepSpec.LOG:
        return geomspace(spec.start, spec.stop, spec.points)
    return linspace(spec.start, spec.stop, spec.points)


def run_sweep(
    command: ReportCommand,
    config: Dict[str, Any],
    spec: SweepSpec,
    processes_number: int = 1,
) -> DataFrame:
    """
    Evaluate `command` at every value of `spec` and collect the report
    scalars, one row per value, in sweep order.

    Points whose report is invalid, or whose evaluation raises a domain
    error, are kept with the `invalid` flag set.

    Args:
        command (callable):
            Builds a :class:`Report` from a configuration; must be
            picklable when `processes_number` exceeds 1.
        config (dict):
            Base configuration; it is not modified.
        spec (SweepSpec):
            Swept parameter.
        processes_number (int):
            Number of processes to use.

    Raises:
        UsageError:
            When the swept parameter is not present in `config`.
    """
    key, current = get_path(config, spec.parameter)
    integral = isinstance(current, int) and not isinstance(current, bool)
    values = sweep_values(spec)
    if integral:
        values = values.round()
    logger.info(f"Sweeping {spec.parameter} ({key}) over {len(values)} points")

    indexed = list(enumerate(values.tolist()))
    if processes_number <= 1:
        rows = _evaluate(command, config, spec.parameter, indexed, integral)
    else:
        manager = Manager()
        shared_rows = manager.list()
        processes = [
            Process(
                target=_sweep_process,
                kwargs={
                    "output_rows": shared_rows,
                    "command": command,
                    "config": config,
                    "parameter": spec.parameter,
                    "points": [tuple(point) for point in chunk],
                    "integral": integral,
                },
            ) for chunk in array_split(indexed, processes_number)
            if len(chunk)
        ]
        for process in processes:
            process.start()
        for process in processes:
            process.join()
        rows = list(shared_rows)

    rows.sort(key=lambda row: row[0])
    frame = DataFrame([row[1] for row in rows])
    columns = [spec.parameter] + [
        column for column in frame.columns if column != spec.parameter
    ]
    return frame[columns]


def _sweep_process(
    output_rows: List,
    command: ReportCommand,
    config: Dict[str, Any],
    parameter: str,
    points: Sequence,
    integral: bool,
) -> None:
    output_rows.extend(
        _evaluate(command, config, parameter, points, integral)
    )


def _evaluate(command, config, parameter, points, integral) -> List:
    rows = []
    for index, value in points:
        index = int(index)
        value = int(value) if integral else float(value)
        logger.info(f"| Point {index + 1}: {parameter} = {value:g}")
        point_config = set_path(
            deepcopy(config),
            parameter,
            repr(value),
            strict=True,
        )
        try:
            row = command(point_config).scalars()
        except UsageError:
            raise
        except IonDesignError as error:
            logger.warning(f"{parameter} = {value:g}: {error}")
            row = {"invalid": True, "error": str(error)}
        row[parameter] = value
        rows.append((index, row))
    return rows
