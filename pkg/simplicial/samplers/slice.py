"""Univariate slice sampling with step-out and shrinkage."""
from typing import Callable
import numpy as np

from ..errors import InvalidArgumentError


def slice_step_univariate(
    current: float,
    log_conditional: Callable[[float], float],
    width: float,
    rng: np.random.Generator,
    max_expansions: int = 100,
    max_shrinks: int = 200,
    tolerance: float = 1e-12,
) -> float:
    """
    One slice-sampling update of a scalar.

    The level is log f(current) + log(1 - U), so it can equal the current
    density but never exceed it and `current` is always inside the slice.
    Step-out stops after `max_expansions` widenings on each side; if that cap
    is hit the current value is returned unchanged. Shrinkage ends at the
    first point inside the slice, or returns `current` once the bracket is
    narrower than `tolerance` (relative) or `max_shrinks` is reached.
    """
    if not np.isfinite(width) or width <= 0:
        raise InvalidArgumentError(f"slice width must be positive, got {width}")
    current = float(current)
    current_log = log_conditional(current)
    if not np.isfinite(current_log):
        raise InvalidArgumentError(f"conditional is not finite at the current point {current}")

    level = current_log + np.log1p(-rng.random())

    left = current - width * rng.random()
    right = left + width
    expansions = 0
    while log_conditional(left) > level:
        left -= width
        expansions += 1
        if expansions > max_expansions:
            print(f"⚠️  Slice step-out cap reached at {current:.6g}; keeping current value")
            return current
    expansions = 0
    while log_conditional(right) > level:
        right += width
        expansions += 1
        if expansions > max_expansions:
            print(f"⚠️  Slice step-out cap reached at {current:.6g}; keeping current value")
            return current

    bracket_floor = tolerance * (1.0 + abs(current))
    for _ in range(max_shrinks):
        candidate = left + rng.random() * (right - left)
        if log_conditional(candidate) >= level:
            return float(candidate)
        if candidate < current:
            left = candidate
        else:
            right = candidate
        if right - left <= bracket_floor:
            return current
    return current
