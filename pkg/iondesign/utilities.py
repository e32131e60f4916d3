from numpy import (
    abs as np_abs,
    all as np_all,
    asarray,
    isfinite,
    maximum,
)

from iondesign.exceptions import DomainError

__all__ = [
    "relative_difference",
    "require_non_negative",
    "require_positive",
    "require_probability",
]


def require_positive(**values) -> None:
    """
    Raise :class:`DomainError` naming the first argument that is not
    strictly positive and finite.

    Args:
        **values (float or ndarray):
            Named quantities to check.
    """
    for name, value in values.items():
        array = asarray(value, dtype="float64")
        if not (np_all(isfinite(array)) and np_all(array > 0)):
            raise DomainError(f"{name} must be positive, got {value!r}")


def require_non_negative(**values) -> None:
    for name, value in values.items():
        array = asarray(value, dtype="float64")
        if not (np_all(isfinite(array)) and np_all(array >= 0)):
            raise DomainError(f"{name} must be non-negative, got {value!r}")


def require_probability(
    name: str,
    value: float,
    lower: float = 0.0,
    upper: float = 1.0,
    inclusive: bool = False,
) -> None:
    """
    Check that `value` lies in the interval (`lower`, `upper`),
    or [`lower`, `upper`] when `inclusive` is set.
    """
    if inclusive:
        inside = lower <= value <= upper
    else:
        inside = lower < value < upper
    if not inside:
        bounds = (
            f"[{lower}, {upper}]" if inclusive else f"({lower}, {upper})"
        )
        raise DomainError(f"{name} must lie in {bounds}, got {value!r}")


def relative_difference(x, y):
    """
    Symmetric relative difference :math:`|x - y| / \\max(|x|, |y|)`,
    zero when both are zero.
    """
    x = asarray(x, dtype="float64")
    y = asarray(y, dtype="float64")
    scale = maximum(np_abs(x), np_abs(y))
    difference = np_abs(x - y)
    return difference / maximum(scale, 1e-300)
