r"""
Time evolution of small quantum systems with loss.

States evolve under :math:`i \dot\psi = H_{\rm eff}(t) \psi` with the
non-Hermitian Hamiltonian

.. math::
    H_{\rm eff} = H - \frac{i}{2} \sum_k \Gamma_k |k\rangle\langle k|,

so that norm lost from the state vector is the probability of a decay
event. Hamiltonians may be stacked along leading axes, in which case every
member of the batch evolves in the same pass.
"""
import logging
from typing import (
    Callable,
    NamedTuple,
    Optional,
)

from numpy import (
    abs as np_abs,
    all as np_all,
    asarray,
    complex128,
    einsum,
    eye,
    isfinite,
    linspace,
    ndarray,
    sqrt,
    stack,
    sum as np_sum,
)
from numpy.linalg import matrix_power
from scipy.linalg import expm

from iondesign.exceptions import (
    DomainError,
    IntegrationError,
    StepSizeUnderflowError,
)
from iondesign.utilities import require_positive

__all__ = [
    "DriveProfile",
    "EvolutionResult",
    "MAX_DIMENSION",
    "evolve",
    "propagate",
]

logger = logging.getLogger(__name__)

MAX_DIMENSION = 16
MIN_TOLERANCE = 1e-12
MAX_TOLERANCE = 1e-4

HamiltonianBuilder = Callable[[float], ndarray]

# Gauss-Legendre nodes of the fourth-order Magnus step.
_GAUSS_OFFSET = sqrt(3) / 6
_COMMUTATOR_WEIGHT = sqrt(3) / 12


class DriveProfile:
    """
    Amplitude of a laser drive over a pulse.

    Args:
        shape (str):
            ``"constant"`` or ``"linear_ramp"`` (rising from zero to
            `peak` over `duration`).
        peak (float):
            Peak Rabi frequency, rad/s.
        duration (float):
            Pulse length, s.
    """

    CONSTANT = "constant"
    LINEAR_RAMP = "linear_ramp"

    def __init__(self, shape: str, peak: float, duration: float):
        if shape not in (DriveProfile.CONSTANT, DriveProfile.LINEAR_RAMP):
            raise DomainError(f"unknown drive shape {shape!r}")
        require_positive(duration=duration)
        self._shape = shape
        self._peak = float(peak)
        self._duration = float(duration)

    @property
    def shape(self) -> str:
        return self._shape

    @property
    def peak(self) -> float:
        return self._peak

    @property
    def duration(self) -> float:
        return self._duration

    def __call__(self, t):
        if self._shape == DriveProfile.CONSTANT:
            return self._peak
        return self._peak * t / self._duration

    def complement(self, t):
        """The counter-propagating drive; the two always sum to peak."""
        return self._peak - self(t)


class EvolutionResult(NamedTuple):
    """
    Outcome of :func:`evolve`.

    `history` holds the state at every step of the accepted run, including
    the initial one, when recording was requested.
    `leaked_norm` is the loss relative to the norm of the initial state.
    """
    final_state: ndarray
    final_populations: ndarray
    leaked_norm: ndarray
    infidelity: Optional[ndarray]
    steps: int
    times: Optional[ndarray] = None
    history: Optional[ndarray] = None


def _generator(builder, decay_rates, t) -> ndarray:
    r"""Return :math:`A(t) = -i H_{\rm eff}(t)`."""
    hamiltonian = asarray(builder(t), dtype=complex128)
    if not np_all(isfinite(hamiltonian)):
        raise IntegrationError(f"Hamiltonian has non-finite entries at t={t}")
    decay = decay_rates[..., :, None] * eye(hamiltonian.shape[-1])
    return -1j * hamiltonian - decay / 2


def _apply(operator: ndarray, state: ndarray) -> ndarray:
    return einsum("...ij,...j->...i", operator, state)


def propagate(
    builder: HamiltonianBuilder,
    decay_rates,
    state,
    duration: float,
    steps: int,
    method: str = "magnus4",
    time_dependent: bool = True,
    record: bool = False,
):
    r"""
    Fixed-step propagation of `state` over `duration`.

    Args:
        builder (callable):
            Maps a time to the Hamiltonian :math:`H(t)`, shape
            ``(..., d, d)``.
        decay_rates (array_like):
            Population decay rate of every basis state, shape ``(..., d)``.
        state (array_like):
            Initial state, shape ``(d, )`` or ``(..., d)``.
        duration (float):
            Propagation time, s.
        steps (int):
            Number of equal steps.
        method (str):
            ``"magnus4"`` (fourth-order Magnus exponential integrator) or
            ``"rk4"`` (classical Runge-Kutta).
        time_dependent (bool):
            When false the Hamiltonian is built once and the step
            propagator reused.
        record (bool):
            Also return the state after every step.

    Returns:
        ndarray or tuple[ndarray, ndarray]:
            Final state, and the ``(steps + 1, ..., d)`` history when
            `record` is set.
    """
    decay_rates = asarray(decay_rates, dtype="float64")
    dt = duration / steps
    history = [asarray(state, dtype=complex128)]

    if not time_dependent:
        generator = _generator(builder, decay_rates, 0.0)
        if method == "magnus4":
            step_operator = expm(generator * dt)
        elif method == "rk4":
            step_operator = _rk4_operator(generator, dt)
        else:
            raise DomainError(f"unknown integration method {method!r}")
        current = history[0]
        if not record:
            return _apply(matrix_power(step_operator, steps), current)
        for _ in range(steps):
            current = _apply(step_operator, current)
            history.append(current)
        return current, stack(history)

    if method == "magnus4":
        step = _magnus4_step
    elif method == "rk4":
        step = _rk4_step
    else:
        raise DomainError(f"unknown integration method {method!r}")

    current = history[0]
    for index in range(steps):
        current = step(builder, decay_rates, current, index * dt, dt)
        if record:
            history.append(current)
    return (current, stack(history)) if record else current


def _magnus4_step(builder, decay_rates, state, t, dt):
    first = _generator(builder, decay_rates, t + (0.5 - _GAUSS_OFFSET) * dt)
    second = _generator(builder, decay_rates, t + (0.5 + _GAUSS_OFFSET) * dt)
    commutator = second @ first - first @ second
    exponent = (
        dt / 2 * (first + second)
        + _COMMUTATOR_WEIGHT * dt ** 2 * commutator
    )
    return _apply(expm(exponent), state)


def _rk4_step(builder, decay_rates, state, t, dt):
    start = _generator(builder, decay_rates, t)
    middle = _generator(builder, decay_rates, t + dt / 2)
    end = _generator(builder, decay_rates, t + dt)
    k1 = _apply(start, state)
    k2 = _apply(middle, state + dt / 2 * k1)
    k3 = _apply(middle, state + dt / 2 * k2)
    k4 = _apply(end, state + dt * k3)
    return state + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk4_operator(generator, dt):
    term = generator * dt
    square = term @ term
    cube = square @ term
    identity = eye(term.shape[-1])
    return identity + term + square / 2 + cube / 6 + cube @ term / 24


def evolve(
    builder: HamiltonianBuilder,
    decay_rates,
    initial_state,
    duration: float,
    tolerance: float = 1e-8,
    target=None,
    method: str = "magnus4",
    time_dependent: bool = True,
    initial_steps: int = 64,
    max_halvings: int = 14,
    record: bool = False,
) -> EvolutionResult:
    """
    Propagate with step halving until two successive runs agree.

    The step count starts at `initial_steps` and doubles until the largest
    amplitude difference between the runs with `n` and `2n` steps is below
    `tolerance`; the finer run is returned.

    Args:
        builder (callable):
            Maps a time to the Hamiltonian, shape ``(..., d, d)``.
        decay_rates (array_like):
            Population decay rate of every basis state, rad/s.
        initial_state (array_like):
            Initial state vector.
        duration (float):
            Evolution time, s.
        tolerance (float):
            Required agreement, between 1e-12 and 1e-4.
        target (array_like, optional):
            State against which the infidelity is reported.
        method (str):
            See :func:`propagate`.
        time_dependent (bool):
            See :func:`propagate`.
        initial_steps (int):
            Step count of the first run.
        max_halvings (int):
            Number of step halvings before giving up.
        record (bool):
            Keep the full history of the accepted run.

    Raises:
        DomainError:
            For a dimension above 16 or a tolerance out of range.
        IntegrationError:
            For a non-finite Hamiltonian.
        StepSizeUnderflowError:
            When `max_halvings` halvings do not reach `tolerance`.
    """
    state = asarray(initial_state, dtype=complex128)
    dimension = state.shape[-1]
    if dimension > MAX_DIMENSION:
        raise DomainError(
            f"state dimension {dimension} exceeds {MAX_DIMENSION}"
        )
    if not MIN_TOLERANCE <= tolerance <= MAX_TOLERANCE:
        raise DomainError(
            f"tolerance must lie in [{MIN_TOLERANCE}, {MAX_TOLERANCE}], "
            f"got {tolerance}"
        )
    require_positive(duration=duration)

    options = {
        "builder": builder,
        "decay_rates": decay_rates,
        "state": state,
        "duration": duration,
        "method": method,
        "time_dependent": time_dependent,
    }
    steps = initial_steps
    coarse = propagate(steps=steps, **options)
    difference = float("inf")
    for _ in range(max_halvings):
        steps *= 2
        fine = propagate(steps=steps, **options)
        difference = float(np_abs(fine - coarse).max())
        logger.debug(f"{steps} steps: change {difference:.3g}")
        if difference < tolerance:
            break
        coarse = fine
    else:
        raise StepSizeUnderflowError(
            f"no convergence to {tolerance:.3g} after {max_halvings} "
            f"step halvings ({steps} steps, last change {difference:.3g})"
        )

    times = history = None
    if record:
        fine, history = propagate(steps=steps, record=True, **options)
        times = linspace(0, duration, steps + 1)

    populations = np_abs(fine) ** 2
    initial_norm = np_sum(np_abs(state) ** 2, axis=-1)
    leaked_norm = initial_norm - np_sum(populations, axis=-1)
    infidelity = None
    if target is not None:
        target = asarray(target, dtype=complex128)
        overlap = einsum("...i,...i->...", target.conj(), fine)
        infidelity = 1 - np_abs(overlap) ** 2

    return EvolutionResult(
        final_state=fine,
        final_populations=populations,
        leaked_norm=leaked_norm,
        infidelity=infidelity,
        steps=steps,
        times=times,
        history=history,
    )
