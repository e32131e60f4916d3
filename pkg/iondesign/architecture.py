r"""
Fault-tolerant machine model: block structure, ancilla staggering,
low-level error correction, correction cadence and algorithm runtime.

Logical qubits are stored in blocks of physical qubits, one block per trap
(or microsphere). Each data block is served by a pool of ancilla blocks
that are prepared in parallel and staggered in time. One correction cycle
lasts as long as it takes for the next verified ancilla to become ready.
"""
import logging
from dataclasses import (
    asdict,
    dataclass,
    fields,
)
from math import ceil
from typing import (
    Any,
    Dict,
    NamedTuple,
    Optional,
    Tuple,
)

from iondesign.constants import SECONDS_PER_WEEK
from iondesign.exceptions import (
    ConfigError,
    DomainError,
)
from iondesign.utilities import (
    require_non_negative,
    require_positive,
)

__all__ = [
    "LowLevelCorrection",
    "MachineConfig",
    "MachineEstimate",
    "MachineLayout",
    "NoiseCheck",
    "Runtime",
    "ancilla_ready_delay",
    "correction_time",
    "estimate_machine",
    "low_level_ec",
    "machine_layout",
    "memory_noise_check",
    "total_runtime",
]

logger = logging.getLogger(__name__)

# Relative slack when comparing quoted thresholds.
_ROUNDING = 1e-9


@dataclass(frozen=True)
class MachineConfig:
    """
    Parameters of the fault-tolerant machine.

    `stated_block_traps` and `stated_total_traps` are quoted design totals;
    they are reported next to the counts derived from the block arithmetic
    and never used to adjust them.
    """
    logical_qubits: int = 100
    toffoli_count: int = 1_000_000
    block_physical_qubits: int = 127
    block_logical_qubits: int = 29
    extra_qubits_per_block: int = 13
    ancilla_blocks_per_data: int = 40
    ancilla_prep_steps: int = 5000
    parallel_preparations: int = 10
    ancilla_ready_delay_steps: int = 500
    corrections_per_toffoli: int = 8
    ec_speed_factor: float = 10.0
    base_gate_p: float = 2e-3
    target_gate_p: float = 1e-4
    memory_noise_per_step: float = 1e-6
    switch_traps: int = 62
    stated_block_traps: Optional[int] = 138
    stated_total_traps: Optional[int] = 200

    def __post_init__(self):
        require_positive(
            logical_qubits=self.logical_qubits,
            block_physical_qubits=self.block_physical_qubits,
            block_logical_qubits=self.block_logical_qubits,
            ancilla_prep_steps=self.ancilla_prep_steps,
            parallel_preparations=self.parallel_preparations,
            ancilla_ready_delay_steps=self.ancilla_ready_delay_steps,
            corrections_per_toffoli=self.corrections_per_toffoli,
            ec_speed_factor=self.ec_speed_factor,
            base_gate_p=self.base_gate_p,
            target_gate_p=self.target_gate_p,
            memory_noise_per_step=self.memory_noise_per_step,
        )
        require_non_negative(
            toffoli_count=self.toffoli_count,
            extra_qubits_per_block=self.extra_qubits_per_block,
            ancilla_blocks_per_data=self.ancilla_blocks_per_data,
            switch_traps=self.switch_traps,
        )
        if self.block_logical_qubits > self.block_physical_qubits:
            raise DomainError(
                "a block cannot hold more logical than physical qubits"
            )

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "MachineConfig":
        """
        Build a config from a ``machine`` section. Keys that do not name a
        field are rejected; gate-source keys are left to the caller.
        """
        known = {field.name for field in fields(cls)}
        values = {}
        for key, value in record.items():
            if key in known:
                values[key] = value
            elif key not in _GATE_SOURCE_KEYS:
                raise ConfigError(
                    f"unknown machine field {key!r}",
                    field=f"machine.{key}",
                )
        return cls(**values)

    @property
    def ions_per_trap(self) -> int:
        return self.block_physical_qubits + self.extra_qubits_per_block

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


# Machine-section keys that choose the physical gate rather than the layout.
_GATE_SOURCE_KEYS = frozenset({
    "gate_source",
    "base_gate_rate",
    "base_gate_time",
})


class MachineLayout(NamedTuple):
    """
    Trap counts with every term labelled; `discrepancies` lists the quoted
    totals the derived counts do not reproduce.
    """
    data_blocks: int
    ancilla_blocks: int
    block_traps: int
    switch_traps: int
    total_traps: int
    stated_block_traps: Optional[int]
    stated_total_traps: Optional[int]
    discrepancies: Tuple[str, ...]

    def terms(self) -> Dict[str, int]:
        return {
            "data blocks": self.data_blocks,
            "ancilla blocks": self.ancilla_blocks,
            "switch traps": self.switch_traps,
        }


def machine_layout(config: MachineConfig) -> MachineLayout:
    r"""
    Count traps: :math:`\lceil n_L / k \rceil` data blocks, each with its
    pool of ancilla blocks, plus traps used only to switch information
    paths between blocks.
    """
    data_blocks = ceil(config.logical_qubits / config.block_logical_qubits)
    ancilla_blocks = data_blocks * config.ancilla_blocks_per_data
    block_traps = data_blocks + ancilla_blocks
    total_traps = block_traps + config.switch_traps

    discrepancies = []
    stated = (
        ("data and ancilla traps", block_traps, config.stated_block_traps),
        ("total traps", total_traps, config.stated_total_traps),
    )
    for label, derived, quoted in stated:
        if quoted is not None and quoted != derived:
            discrepancies.append(
                f"{label}: derived {derived}, stated {quoted}"
            )
            logger.info(discrepancies[-1])

    return MachineLayout(
        data_blocks=data_blocks,
        ancilla_blocks=ancilla_blocks,
        block_traps=block_traps,
        switch_traps=config.switch_traps,
        total_traps=total_traps,
        stated_block_traps=config.stated_block_traps,
        stated_total_traps=config.stated_total_traps,
        discrepancies=tuple(discrepancies),
    )


class LowLevelCorrection(NamedTuple):
    p: float
    rate: float
    advisories: Tuple[str, ...] = ()


def low_level_ec(
    base_p: float,
    base_rate: float,
    speed_factor: float = 10.0,
    target_p: float = 1e-4,
    reference_p: float = 2e-3,
) -> LowLevelCorrection:
    """
    Gate obtained from a low-level correction layer tailored to the
    physical errors: gates of failure `reference_p` become gates of
    failure `target_p` at a cost of `speed_factor` in speed. Other inputs
    scale the failure probability by the same ratio.
    """
    require_positive(
        base_p=base_p,
        base_rate=base_rate,
        speed_factor=speed_factor,
        target_p=target_p,
        reference_p=reference_p,
    )
    advisories = ()
    if base_p > reference_p:
        advisories = (
            f"base gate failure {base_p:.3g} is above {reference_p:.3g}, "
            "where the correction mapping is quoted",
        )
        logger.warning(advisories[0])
    return LowLevelCorrection(
        p=base_p / reference_p * target_p,
        rate=base_rate / speed_factor,
        advisories=advisories,
    )


def ancilla_ready_delay(prep_steps: int, parallel_preparations: int) -> float:
    """Steps between successive ready ancillas when preparations overlap."""
    require_positive(
        prep_steps=prep_steps,
        parallel_preparations=parallel_preparations,
    )
    return prep_steps / parallel_preparations


def correction_time(corrected_gate_time: float, delay_steps: float) -> float:
    """Duration of one correction cycle, one corrected gate per step."""
    require_non_negative(
        corrected_gate_time=corrected_gate_time,
        delay_steps=delay_steps,
    )
    return delay_steps * corrected_gate_time


class Runtime(NamedTuple):
    seconds: float
    weeks: float


def total_runtime(config: MachineConfig, correction_time: float) -> Runtime:
    require_non_negative(correction_time=correction_time)
    seconds = (
        config.toffoli_count
        * config.corrections_per_toffoli
        * correction_time
    )
    return Runtime(seconds=seconds, weeks=seconds / SECONDS_PER_WEEK)


class NoiseCheck(NamedTuple):
    gate_passed: bool
    memory_passed: bool
    gate_margin: float
    memory_margin: float

    @property
    def passed(self) -> bool:
        return self.gate_passed and self.memory_passed


def memory_noise_check(
    gate_p: float,
    mem_p: float,
    config: MachineConfig,
) -> NoiseCheck:
    """
    Compare gate and memory noise against the thresholds under which the
    algorithm can be stabilized. Margins are threshold over supplied
    value, so a margin of at least 1 passes.
    """
    require_positive(gate_p=gate_p, mem_p=mem_p)
    gate_margin = config.target_gate_p / gate_p
    memory_margin = config.memory_noise_per_step / mem_p
    check = NoiseCheck(
        gate_passed=gate_margin >= 1 - _ROUNDING,
        memory_passed=memory_margin >= 1 - _ROUNDING,
        gate_margin=gate_margin,
        memory_margin=memory_margin,
    )
    if not check.gate_passed:
        logger.warning(
            f"gate failure {gate_p:.3g} exceeds the threshold "
            f"{config.target_gate_p:.3g}"
        )
    if not check.memory_passed:
        logger.warning(
            f"memory noise {mem_p:.3g} exceeds the threshold "
            f"{config.memory_noise_per_step:.3g}"
        )
    return check


class MachineEstimate(NamedTuple):
    data_blocks: int
    total_blocks: int
    total_traps: int
    physical_gate_time: float
    corrected_gate_time: float
    correction_time: float
    total_runtime: float
    runtime_weeks: float
    corrected_gate_p: float
    layout: MachineLayout
    noise: NoiseCheck
    advisories: Tuple[str, ...] = ()


def estimate_machine(
    config: MachineConfig,
    base_rate: float,
    base_p: Optional[float] = None,
) -> MachineEstimate:
    """
    End-to-end estimate: physical gate, low-level correction, correction
    cycle and total runtime of `config.toffoli_count` Toffoli gates.

    Args:
        config (MachineConfig):
            Machine description.
        base_rate (float):
            Rate of the physical two-qubit gate, 1/s.
        base_p (float, optional):
            Failure probability of the physical gate; defaults to
            `config.base_gate_p`.
    """
    if base_p is None:
        base_p = config.base_gate_p
    layout = machine_layout(config)
    corrected = low_level_ec(
        base_p=base_p,
        base_rate=base_rate,
        speed_factor=config.ec_speed_factor,
        target_p=config.target_gate_p,
        reference_p=config.base_gate_p,
    )
    corrected_gate_time = 1 / corrected.rate
    cycle = correction_time(
        corrected_gate_time,
        config.ancilla_ready_delay_steps,
    )
    runtime = total_runtime(config, cycle)
    noise = memory_noise_check(
        gate_p=corrected.p,
        mem_p=config.memory_noise_per_step,
        config=config,
    )
    logger.info(
        f"Machine: {layout.total_traps} traps, correction cycle {cycle:.3g} s,"
        f" runtime {runtime.weeks:.3g} weeks"
    )

    advisories = corrected.advisories + layout.discrepancies
    return MachineEstimate(
        data_blocks=layout.data_blocks,
        total_blocks=layout.block_traps,
        total_traps=layout.total_traps,
        physical_gate_time=1 / base_rate,
        corrected_gate_time=corrected_gate_time,
        correction_time=cycle,
        total_runtime=runtime.seconds,
        runtime_weeks=runtime.weeks,
        corrected_gate_p=corrected.p,
        layout=layout,
        noise=noise,
        advisories=advisories,
    )
