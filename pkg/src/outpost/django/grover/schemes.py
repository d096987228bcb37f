"""
The earlier phase convention with U = I - (1 - e^{iθ})·Σ|t><t| and
V = I - (1 - e^{iφ})·|s><s|, and the classical sampling baseline.

The diffusion step of the convention used everywhere else in this package
equals e^{iβ} times V at φ = -β, so both conventions give the same
probabilities while the amplitudes differ by a global phase.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .conf import settings
from .exceptions import (
    ContractViolation,
    InvalidArgument,
    OutOfDomain,
)
from .operators import (
    Operator2,
    PhasePair,
    PhaseSchedule,
    check_fraction,
    initial_state,
    stage_amplitudes,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LongPhasePair:
    theta: float
    phi: float

    @classmethod
    def from_pair(cls, pair: PhasePair) -> "LongPhasePair":
        return cls(theta=pair.alpha, phi=-pair.beta)

    @property
    def matched(self) -> bool:
        return math.isclose(self.theta, self.phi, rel_tol=0, abs_tol=1e-12)


class MatchedFraction(NamedTuple):
    value: float
    limit: bool


class Equivalence(NamedTuple):
    probability_gap: float
    amplitude_gap: float


class ClassicalProbability(NamedTuple):
    exact: float
    approximate: float
    exhausted: bool


def build_long_operator(pair: LongPhasePair, frac: float) -> Operator2:
    frac = check_fraction(frac)
    et = np.exp(1j * pair.theta)
    factor = 1 - np.exp(1j * pair.phi)
    mixed = math.sqrt(frac * (1 - frac))
    return np.array(
        [
            [1 - factor * (1 - frac), -factor * et * mixed],
            [-factor * mixed, (1 - factor * frac) * et],
        ],
        dtype=complex,
    )


def long_amplitude(pair: LongPhasePair, frac: float) -> complex:
    """
    Unmarked amplitude after one step of the earlier convention.
    """
    frac = check_fraction(frac)
    factor = 1 - np.exp(1j * pair.phi)
    return complex(
        math.sqrt(1 - frac)
        * (1 - factor * (1 - frac) - factor * np.exp(1j * pair.theta) * frac)
    )


def long_matched_lambda(theta: float) -> MatchedFraction:
    """
    Marked fraction at which one step with φ = θ succeeds with certainty.

    θ = π is the 0/0 limit of (cos θ + 1) / (2·sin²θ) and reports 1/4 with
    the limit flag set.
    """
    theta = float(theta)
    if not (math.pi / 3 - 1e-12 <= theta <= math.pi):
        raise OutOfDomain(f"θ = {theta} is not within [π/3, π]")
    if math.pi - theta <= 1e-12:
        logger.warning(f"Using the limit λ = 1/4 for θ = {theta}")
        return MatchedFraction(value=0.25, limit=True)
    return MatchedFraction(
        value=min(1.0, (math.cos(theta) + 1) / (2 * math.sin(theta) ** 2)), limit=False
    )


def _long_evolution(pair: LongPhasePair, frac: float, k: int):
    operator = build_long_operator(pair, frac)
    state = initial_state(frac)
    for _ in range(k):
        state = operator @ state
    return state


def scheme_equivalence_check(
    alpha: float, beta: float, frac: float, k: int, strict: bool = False
) -> Equivalence:
    """
    Compare k steps of G(α, β) against k steps of the earlier convention with
    θ = α and φ = -β.

    With `strict` a probability gap above the configured tolerance raises
    ContractViolation.
    """
    if k < 1:
        raise InvalidArgument(f"Number of steps must be at least 1, got {k}")
    frac = check_fraction(frac)
    u, d = stage_amplitudes(PhaseSchedule.repeated(alpha, k, beta=beta), [frac])
    ours = np.array([u[-1, 0], d[-1, 0]])
    theirs = _long_evolution(LongPhasePair(theta=alpha, phi=-beta), frac, k)
    result = Equivalence(
        probability_gap=float(np.max(np.abs(np.abs(ours) ** 2 - np.abs(theirs) ** 2))),
        amplitude_gap=float(np.max(np.abs(ours - theirs))),
    )
    if strict and result.probability_gap > settings.GROVER_EQUIVALENCE_TOLERANCE:
        raise ContractViolation(
            f"Schemes disagree by {result.probability_gap} for α = {alpha}, "
            f"β = {beta}, λ = {frac}, k = {k}"
        )
    return result


def marked_fraction(marked: int, size: int) -> float:
    if size < 1:
        raise InvalidArgument(f"Database size must be at least 1, got {size}")
    if not (1 <= marked <= size):
        raise InvalidArgument(f"Marked count {marked} is not within [1, {size}]")
    return marked / size


def classical_probability(frac: float, k: int, size: int) -> ClassicalProbability:
    """
    Probability that k draws without replacement from a database of `size`
    entries hit at least one marked entry, with the with-replacement
    approximation 1 - (1 - λ)^k.
    """
    frac = check_fraction(frac)
    if size < 1:
        raise InvalidArgument(f"Database size must be at least 1, got {size}")
    if k < 0:
        raise InvalidArgument(f"Number of draws must not be negative, got {k}")
    marked = round(frac * size)
    if marked < 1 or not math.isclose(marked, frac * size, rel_tol=0, abs_tol=1e-9):
        raise InvalidArgument(f"λ = {frac} is not a positive multiple of 1/{size}")
    approximate = 1 - (1 - frac) ** k
    if k > size - marked + 1:
        return ClassicalProbability(exact=1.0, approximate=approximate, exhausted=True)
    miss = 1.0
    for n in range(k):
        miss *= 1 - marked / (size - n)
    return ClassicalProbability(exact=1 - miss, approximate=approximate, exhausted=False)
