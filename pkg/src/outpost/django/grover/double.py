"""
Two stage phase matching with β₁ = -α₂ and β₂ = -α₁.

Under this matching the unmarked amplitude after two steps is real and equals
q(λ)·√(1-λ) with the quadratic factor q(λ) = 1 + b·λ + a·λ².
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import (
    Infeasible,
    InvalidArgument,
)
from .operators import (
    PhaseSchedule,
    normalize_phase,
)
from .roots import (
    quadratic_roots,
    real_cubic_roots,
)

logger = logging.getLogger(__name__)

ROOT_FLOOR = (3 - math.sqrt(5)) / 8
VERIFY_TOLERANCE = 1e-9
ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class TwoPhaseSolution:
    alpha1: float
    alpha2: float
    lambda_roots: tuple[float, float]

    @property
    def beta1(self) -> float:
        return -self.alpha2

    @property
    def beta2(self) -> float:
        return -self.alpha1

    @property
    def schedule(self) -> PhaseSchedule:
        return PhaseSchedule.matched((self.alpha1, self.alpha2))


class Discriminant(NamedTuple):
    value: float
    degenerate: bool


def quadratic_coefficients(alpha1: float, alpha2: float) -> tuple[float, float, float]:
    """
    Coefficients (a, b, c) of q(λ) = a·λ² + b·λ + c.
    """
    cos1, cos2 = math.cos(alpha1), math.cos(alpha2)
    a = 4 * (1 - cos1) * (1 - cos2)
    b = 2 * ((1 - cos1) * (-2 + cos2) - math.sin(alpha1) * math.sin(alpha2))
    return a, b, 1.0


def u2_real(frac, alpha1: float, alpha2: float):
    """
    Real unmarked amplitude after the matched two stage operation. Accepts a
    scalar or an array of marked fractions.
    """
    a, b, c = quadratic_coefficients(alpha1, alpha2)
    return (c + b * frac + a * frac * frac) * np.sqrt(1 - frac)


def unit_roots(alpha1: float, alpha2: float) -> tuple[float, ...]:
    """
    Real roots of the quadratic factor, the marked fractions with P₂ = 1.
    """
    return quadratic_roots(*quadratic_coefficients(alpha1, alpha2))


def smaller_root(alpha1: float, alpha2: float):
    roots = unit_roots(alpha1, alpha2)
    return roots[0] if roots else None


def discriminant_surface(alpha1: float, alpha2: float) -> Discriminant:
    a, b, c = quadratic_coefficients(alpha1, alpha2)
    return Discriminant(value=b * b - 4 * a * c, degenerate=abs(a) <= 1e-15)


def _cubic_for_cos_alpha2(lambda1: float, lambda2: float) -> tuple[float, ...]:
    total = lambda1 + lambda2
    product = lambda1 * lambda2
    return (
        8 * product,
        4 * total * (1 - total) - 8 * product,
        8 * total**2 - 12 * total - 8 * product + 4,
        -4 * total**2 + 8 * total - 5 + 8 * product,
    )


def _clip_cosine(value: float):
    if abs(value) > 1 + ANGLE_SLACK:
        return None
    return max(-1.0, min(1.0, value))


def _residual(alpha1: float, alpha2: float, lambdas) -> float:
    a, b, c = quadratic_coefficients(alpha1, alpha2)
    return max(abs(c + b * x + a * x * x) for x in lambdas)


def solve_phases_for_roots(lambda1: float, lambda2: float) -> list[TwoPhaseSolution]:
    """
    All matched phase pairs (α₁, α₂) whose two stage operation reaches P = 1
    at both prescribed marked fractions, sorted by α₁.

    cos α₂ solves a cubic fixed by the sum and product of the roots, cos α₁
    follows from the product alone. Squaring loses the sign of sin α₁·sin α₂,
    so both sign choices are tried and every candidate is verified.
    """
    lambda1, lambda2 = float(lambda1), float(lambda2)
    if not (0 < lambda1 <= lambda2 <= 1):
        raise InvalidArgument(
            f"Target fractions must satisfy 0 < λ₁ <= λ₂ <= 1, got ({lambda1}, {lambda2})"
        )
    targets = (lambda1, lambda2)
    product = lambda1 * lambda2
    solutions: list[TwoPhaseSolution] = []
    for cos2 in real_cubic_roots(*_cubic_for_cos_alpha2(lambda1, lambda2)):
        cos2 = _clip_cosine(cos2)
        if cos2 is None or cos2 >= 1:
            continue
        cos1 = _clip_cosine(1 - 1 / (4 * (1 - cos2) * product))
        if cos1 is None:
            continue
        alpha1, alpha2 = math.acos(cos1), math.acos(cos2)
        for candidate in ((alpha1, alpha2), (alpha1, -alpha2)):
            residual = _residual(*candidate, targets)
            if residual > VERIFY_TOLERANCE:
                logger.debug(f"Rejected candidate {candidate}, residual {residual}")
                continue
            if any(
                abs(normalize_phase(candidate[0] - s.alpha1)) < 1e-6
                and abs(normalize_phase(candidate[1] - s.alpha2)) < 1e-6
                for s in solutions
            ):
                continue
            solutions.append(
                TwoPhaseSolution(
                    alpha1=candidate[0], alpha2=candidate[1], lambda_roots=targets
                )
            )
    if not solutions:
        raise Infeasible(
            f"No real phases reach P = 1 at both λ₁ = {lambda1} and λ₂ = {lambda2}"
        )
    logger.info(f"Found {len(solutions)} phase pairs for roots {targets}")
    return sorted(solutions, key=lambda s: (s.alpha1, s.alpha2))


SQRT5 = math.sqrt(5)
_MIXED = (5 - 3 * SQRT5) / math.sqrt(2 * SQRT5)


def perturbation_growth(eps1, eps2, published: bool = False):
    """
    Second order growth of the smaller unit root when α₁ = π + ε₁ and
    α₂ = π + ε₂.

    The default coefficients follow from expanding the smaller root of the
    quadratic factor. `published=True` uses the older coefficients 2√5 and
    22 - 8√5, which keep the sign structure but overestimate the growth.
    """
    if published:
        return (
            (2 * SQRT5 * eps1 + _MIXED * eps2) ** 2 + (22 - 8 * SQRT5) * eps2**2
        ) / 160
    return (
        (math.sqrt(2 * SQRT5) * eps1 + _MIXED * eps2) ** 2 + (20 - 8 * SQRT5) * eps2**2
    ) / 160
