"""
Repetition of a single matched step G(α, -α).

The step has unit determinant and trace 2·cos φ, so every power of it is a
combination of the step itself and the identity. All functions here work in
the eigenphase φ, with x = (1 - cos α)·λ and cos φ = 1 - x.
"""
import logging
import math
from dataclasses import dataclass
from typing import (
    NamedTuple,
    Optional,
)

import numpy as np

from .conf import settings
from .exceptions import (
    Degenerate,
    InvalidArgument,
)
from .operators import (
    Operator2,
    PhasePair,
    build_operator,
    check_fraction,
)
from .roots import sign_change_roots

logger = logging.getLogger(__name__)

DEGENERATE_SINE = 1e-12


@dataclass(frozen=True)
class EigenphaseRecord:
    x: float
    phi: float


class IterationCount(NamedTuple):
    iterations: int
    estimate: int


class EnvelopeValue(NamedTuple):
    value: float
    degenerate: bool


def _check_stages(k: int) -> int:
    if k < 1:
        raise InvalidArgument(f"Number of repetitions must be at least 1, got {k}")
    return int(k)


def _check_amplifying(alpha: float) -> float:
    shift = 1 - math.cos(alpha)
    if shift <= 1e-15:
        raise Degenerate(f"Oracle phase α = {alpha} leaves the state unchanged")
    return shift


def eigenphase(alpha: float, frac: float) -> EigenphaseRecord:
    frac = check_fraction(frac)
    x = min(2.0, max(0.0, (1 - math.cos(alpha)) * frac))
    return EigenphaseRecord(x=x, phi=math.acos(1 - x))


def closed_form_power(alpha: float, frac: float, k: int) -> Operator2:
    """
    k-th power of the matched step from its two eigenphases.

    Raises Degenerate when sin φ vanishes; use operator_power to fall back on
    repeated multiplication.
    """
    k = _check_stages(k)
    record = eigenphase(alpha, frac)
    sine = math.sin(record.phi)
    if sine < DEGENERATE_SINE:
        raise Degenerate(
            f"Eigenphase φ = {record.phi} is degenerate for α = {alpha}, λ = {frac}"
        )
    step = build_operator(PhasePair(alpha, -alpha), frac)
    return (
        step * math.sin(k * record.phi) - np.eye(2) * math.sin((k - 1) * record.phi)
    ) / sine


def operator_power(alpha: float, frac: float, k: int) -> Operator2:
    try:
        return closed_form_power(alpha, frac, k)
    except Degenerate as e:
        logger.debug(f"Falling back to matrix power: {e}")
        return np.linalg.matrix_power(build_operator(PhasePair(alpha, -alpha), frac), k)


def u_k_closed(alpha: float, frac: float, k: int) -> float:
    """
    Real unmarked amplitude after k matched steps.
    """
    k = _check_stages(k)
    record = eigenphase(alpha, frac)
    sine = math.sin(record.phi)
    if sine < DEGENERATE_SINE:
        raise Degenerate(
            f"Eigenphase φ = {record.phi} is degenerate for α = {alpha}, λ = {frac}"
        )
    return (
        math.sqrt(1 - frac)
        * (
            math.sin(k * record.phi) * (1 - 2 * record.x)
            - math.sin((k - 1) * record.phi)
        )
        / sine
    )


def amplitude_phase_form(alpha: float, frac: float) -> tuple[float, float]:
    """
    Amplitude A and offset θ with u_k = A·cos(k·φ + θ) for every k.
    """
    record = eigenphase(alpha, frac)
    if record.x >= 2:
        raise Degenerate(f"No phase form for x = 2 (α = {alpha}, λ = {frac})")
    amplitude = math.sqrt(2 * (1 - frac) / (2 - record.x))
    return amplitude, math.atan(math.sqrt(record.x / (2 - record.x)))


def grover_amplitude(frac: float, k: int):
    return np.cos((2 * k + 1) * np.arcsin(np.sqrt(frac)))


def grover_probability(frac, k: int):
    """
    Success probability of k plain Grover steps, scalar or vectorized over λ.
    """
    if np.any(np.asarray(frac) < 0) or np.any(np.asarray(frac) > 1):
        raise InvalidArgument(f"Marked fraction {frac} is not within [0, 1]")
    return np.sin((2 * k + 1) * np.arcsin(np.sqrt(frac))) ** 2


def optimal_iterations(frac: float) -> IterationCount:
    """
    Number of plain Grover steps that brings the success probability closest
    to one, next to the large-k estimate ⌊π / (4√λ)⌋.

    Half-integer values round down.
    """
    frac = check_fraction(frac)
    if frac == 0:
        raise InvalidArgument("Iteration count is undefined for λ = 0")
    theta = math.asin(math.sqrt(frac))
    value = (math.pi / (2 * theta) - 1) / 2
    return IterationCount(
        iterations=max(0, math.ceil(value - 0.5)),
        estimate=math.floor(math.pi / (4 * math.sqrt(frac))),
    )


def unity_roots_single_phase(
    alpha: float,
    k: int,
    points: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> list[float]:
    """
    Marked fractions in (0, 1] where k matched steps with oracle phase α
    succeed with certainty, ascending.

    The search runs in the eigenphase: roots of
    sin(kφ)·(1 - 2x) - sin((k - 1)φ) divided by sin φ, bracketed on a grid
    over (0, π) and refined by bisection.
    """
    k = _check_stages(k)
    shift = _check_amplifying(alpha)
    points = points or settings.GROVER_SCAN_POINTS
    tolerance = tolerance or settings.GROVER_REFINE_TOLERANCE
    grid = np.linspace(0, math.pi, points + 1)[1:-1]

    def reduced(phi):
        x = 1 - np.cos(phi)
        return (np.sin(k * phi) * (1 - 2 * x) - np.sin((k - 1) * phi)) / np.sin(phi)

    lambdas = [
        (1 - math.cos(phi)) / shift
        for phi in sign_change_roots(reduced, grid, tolerance)
    ]
    roots = [min(lam, 1.0) for lam in lambdas if 0 < lam <= 1 + tolerance]
    logger.debug(f"Found {len(roots)} unity roots for α = {alpha}, k = {k}")
    return roots


def min_lambda_estimate(alpha: float, k: int) -> float:
    """
    Large-k estimate of the smallest marked fraction with certain success.
    """
    k = _check_stages(k)
    shift = _check_amplifying(alpha)
    return math.pi**2 / (8 * k * k) / shift


def p_min_envelope(frac: float, alpha: float) -> EnvelopeValue:
    """
    Lower envelope of the success probability over all repetition counts.
    """
    frac = check_fraction(frac)
    cos = math.cos(alpha)
    denominator = 2 - (1 - cos) * frac
    if denominator <= 1e-15:
        logger.warning(f"Envelope is 0/0 at α = {alpha}, λ = {frac}")
        return EnvelopeValue(value=0.0, degenerate=True)
    return EnvelopeValue(value=frac * (1 + cos) / denominator, degenerate=False)


def envelope_curve(lambdas, alpha: float):
    lambdas = np.asarray(lambdas, dtype=float)
    cos = math.cos(alpha)
    denominator = 2 - (1 - cos) * lambdas
    safe = np.where(denominator > 1e-15, denominator, 1.0)
    return np.where(denominator > 1e-15, lambdas * (1 + cos) / safe, 0.0)
