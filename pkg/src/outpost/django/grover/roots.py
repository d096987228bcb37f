import logging
import math
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy import optimize

from .exceptions import InvalidArgument

logger = logging.getLogger(__name__)

VectorFunction = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def _polish(coefficients, x: float) -> float:
    a, b, c, d = coefficients
    value = ((a * x + b) * x + c) * x + d
    slope = (3 * a * x + 2 * b) * x + c
    if slope == 0:
        return x
    candidate = x - value / slope
    if abs(((a * candidate + b) * candidate + c) * candidate + d) < abs(value):
        return candidate
    return x


def real_cubic_roots(
    a: float, b: float, c: float, d: float, tolerance: float = 1e-10
) -> tuple[float, ...]:
    """
    Real roots of a·x³ + b·x² + c·x + d = 0 in ascending order.

    Closed form solution of the depressed cubic: the trigonometric form when
    there are three distinct real roots, Cardano's form otherwise. A complex
    pair whose imaginary part is below `tolerance` is reported as a double
    real root. Every root gets one Newton step on the original cubic.
    """
    if a == 0:
        raise InvalidArgument("Leading coefficient of cubic must not vanish")
    p = (3 * a * c - b * b) / (3 * a * a)
    q = (2 * b**3 - 9 * a * b * c + 27 * a * a * d) / (27 * a**3)
    shift = -b / (3 * a)
    half = q / 2
    third = p / 3
    discriminant = half * half + third**3
    scale = max(half * half, abs(third) ** 3)

    if scale == 0:
        depressed = [0.0, 0.0, 0.0]
    elif abs(discriminant) <= tolerance * scale:
        if third == 0:
            depressed = [0.0, 0.0, 0.0]
        else:
            depressed = [3 * q / p, -3 * q / (2 * p), -3 * q / (2 * p)]
    elif discriminant < 0:
        radius = 2 * math.sqrt(-third)
        angle = math.acos(max(-1.0, min(1.0, 3 * q / (p * radius)))) / 3
        depressed = [
            radius * math.cos(angle - 2 * math.pi * m / 3) for m in range(3)
        ]
    else:
        root = math.sqrt(discriminant)
        u = float(np.cbrt(-half + root))
        v = float(np.cbrt(-half - root))
        depressed = [u + v]
        if abs(math.sqrt(3) / 2 * (u - v)) <= tolerance:
            depressed.extend([-(u + v) / 2] * 2)

    coefficients = (a, b, c, d)
    return tuple(sorted(_polish(coefficients, t + shift) for t in depressed))


def quadratic_roots(a: float, b: float, c: float) -> tuple[float, ...]:
    """
    Real roots of a·x² + b·x + c = 0 in ascending order, empty if complex.
    """
    if a == 0:
        if b == 0:
            return ()
        return (-c / b,)
    discriminant = b * b - 4 * a * c
    if discriminant < 0:
        return ()
    # Avoids cancellation in the root of smaller magnitude.
    q = -0.5 * (b + math.copysign(math.sqrt(discriminant), b))
    if q == 0:
        return (0.0, 0.0)
    return tuple(sorted((q / a, c / q)))


def _scalar(func: VectorFunction) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        return float(func(np.array([x]))[0])

    return wrapped


def sign_change_roots(
    func: VectorFunction, grid: npt.NDArray[np.float64], tolerance: float
) -> list[float]:
    """
    Scan a vectorized function on a grid and refine every sign change by
    bisection.
    """
    values = func(grid)
    scalar = _scalar(func)
    roots = [float(grid[i]) for i in np.flatnonzero(values == 0)]
    for i in np.flatnonzero(values[:-1] * values[1:] < 0):
        root = optimize.bisect(scalar, grid[i], grid[i + 1], xtol=tolerance)
        logger.debug(f"Refined sign change in [{grid[i]}, {grid[i + 1]}] to {root}")
        roots.append(float(root))
    return sorted(roots)


def local_minima(
    func: VectorFunction, grid: npt.NDArray[np.float64], tolerance: float
) -> list[tuple[float, float]]:
    """
    Scan a vectorized function on a grid and refine every strict interior
    local minimum by golden section search.

    Returns (x, f(x)) pairs in ascending x.
    """
    values = func(grid)
    scalar = _scalar(func)
    interior = np.flatnonzero(
        (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    )
    minima = []
    for i in interior + 1:
        x = optimize.golden(
            scalar, brack=(grid[i - 1], grid[i], grid[i + 1]), tol=tolerance
        )
        x = min(max(float(x), grid[i - 1]), grid[i + 1])
        minima.append((x, scalar(x)))
    return minima
