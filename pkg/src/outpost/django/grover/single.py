"""
Closed forms of the single step operation with matched phases β = -α.
"""
import logging
import math
from dataclasses import dataclass

from .exceptions import (
    Degenerate,
    InvalidArgument,
    OutOfDomain,
)
from .operators import check_fraction
from .roots import real_cubic_roots

logger = logging.getLogger(__name__)

PLATEAU_THRESHOLD = 25 / 27


@dataclass(frozen=True)
class ExtremaRecord:
    lambda_max: float
    lambda_min: float
    p_at_max: float
    p_at_min: float
    max_in_range: bool
    min_in_range: bool

    @property
    def out_of_range(self) -> bool:
        return not (self.max_in_range and self.min_in_range)


def _coefficients(alpha: float) -> tuple[float, float, float]:
    cos = math.cos(alpha)
    return (
        5 - 4 * cos,
        -4 * (1 - cos) * (2 - cos),
        4 * (1 - cos) ** 2,
    )


def p_k1(frac, alpha: float):
    """
    Success probability of one matched step, cubic in λ.

    Accepts a scalar or an array of marked fractions.
    """
    linear, quadratic, cubic = _coefficients(alpha)
    return frac * (linear + quadratic * frac + cubic * frac * frac)


def matched_phase_for_unity(frac: float, mirror: bool = False) -> float:
    """
    Oracle phase α = -β for which one step finds the marked states with
    certainty. Only λ in [1/4, 1] admits such a phase.
    """
    frac = float(frac)
    if not (0.25 <= frac <= 1.0):
        raise OutOfDomain(
            f"No single step phase reaches P = 1 for λ = {frac}, use λ in [1/4, 1]"
        )
    alpha = math.acos(max(-1.0, min(1.0, 1 - 1 / (2 * frac))))
    return -alpha if mirror else alpha


def extrema_k1(alpha: float) -> ExtremaRecord:
    cos = math.cos(alpha)
    if 1 - cos <= 1e-15:
        raise Degenerate(f"P(λ) = λ for α = {alpha}, the curve has no extrema")
    lambda_max = 1 / (2 * (1 - cos))
    lambda_min = (5 - 4 * cos) / (6 * (1 - cos))
    record = ExtremaRecord(
        lambda_max=lambda_max,
        lambda_min=lambda_min,
        p_at_max=1.0,
        p_at_min=(1 + cos) * (5 - 4 * cos) ** 2 / (27 * (1 - cos)),
        max_in_range=0 < lambda_max <= 1,
        min_in_range=0 < lambda_min <= 1,
    )
    if record.out_of_range:
        logger.debug(f"Extrema for α = {alpha} lie outside (0, 1]: {record}")
    return record


def average_probability(alpha: float, lower: float = 0.0, upper: float = 1.0) -> float:
    """
    Mean of the single step success probability over [lower, upper].
    """
    lower = check_fraction(lower)
    upper = check_fraction(upper)
    if upper <= lower:
        raise InvalidArgument(f"Empty averaging range [{lower}, {upper}]")
    linear, quadratic, cubic = _coefficients(alpha)

    def antiderivative(x):
        return linear * x**2 / 2 + quadratic * x**3 / 3 + cubic * x**4 / 4

    return (antiderivative(upper) - antiderivative(lower)) / (upper - lower)


def threshold_range(alpha: float, threshold: float = PLATEAU_THRESHOLD) -> float:
    """
    Measure of the set of λ in (0, 1] on which the single step success
    probability is at least `threshold`.
    """
    linear, quadratic, cubic = _coefficients(alpha)
    if cubic == 0:
        # α = 0: P = λ
        return max(0.0, 1.0 - max(threshold, 0.0))
    crossings = [
        r for r in real_cubic_roots(cubic, quadratic, linear, -threshold) if 0 < r < 1
    ]
    edges = [0.0] + crossings + [1.0]
    measure = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        if right > left and p_k1((left + right) / 2, alpha) >= threshold:
            measure += right - left
    return measure

