"""
Fitting of matched phase schedules and analysis of their probability
landscape.

Only the oracle phases α₁..α_k are free, the diffusion phases follow from
β_j = -α_{k-j+1}. Under that rule the unmarked amplitude stays real, which is
what makes certain success at isolated marked fractions possible.
"""
import logging
import math
from dataclasses import (
    dataclass,
    field,
)
from enum import Enum
from typing import (
    NamedTuple,
    Optional,
    Sequence,
)

import numpy as np
import numpy.typing as npt
from scipy import optimize

from .conf import settings
from .exceptions import InvalidArgument
from .operators import (
    PhaseSchedule,
    ProbabilityProfile,
    normalize_phase,
    probability_profile,
    stage_amplitudes,
    success_probability,
)
from .roots import (
    local_minima,
    sign_change_roots,
)

logger = logging.getLogger(__name__)

UNIT_ROOT_TOLERANCE = 1e-8
REAL_TOLERANCE = 1e-9


class Objective(str, Enum):
    SUM_OF_SQUARES = "sum-of-squares"
    SUM_OF_ABSOLUTE = "sum-of-absolute"


class Landscape(NamedTuple):
    roots: tuple[float, ...]
    minima: tuple[tuple[float, float], ...]


def default_grid(spec: Optional[Sequence] = None) -> tuple[float, ...]:
    lower, upper, count = spec or settings.GROVER_FIT_GRID
    return tuple(np.linspace(lower, upper, int(count)).tolist())


@dataclass(frozen=True)
class FitConfig:
    k: int
    lambda_grid: tuple[float, ...] = field(default_factory=default_grid)
    objective: Objective = field(
        default_factory=lambda: Objective(settings.GROVER_FIT_OBJECTIVE)
    )
    restarts: int = field(default_factory=lambda: settings.GROVER_FIT_RESTARTS)
    seed: int = field(default_factory=lambda: settings.GROVER_FIT_SEED)

    def __post_init__(self):
        grid = tuple(float(x) for x in self.lambda_grid)
        object.__setattr__(self, "lambda_grid", grid)
        object.__setattr__(self, "objective", Objective(self.objective))
        if self.k < 1:
            raise InvalidArgument(f"Number of stages must be at least 1, got {self.k}")
        if self.restarts < 1:
            raise InvalidArgument(f"At least one restart is needed, not {self.restarts}")
        grid = np.asarray(self.lambda_grid)
        if grid.size < 10:
            raise InvalidArgument(f"Fit grid needs at least 10 points, got {grid.size}")
        if np.any(np.diff(grid) <= 0):
            raise InvalidArgument("Fit grid must be strictly increasing")
        if grid[0] <= 0 or grid[-1] > 1:
            raise InvalidArgument("Fit grid must lie within (0, 1]")

    @property
    def grid(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.lambda_grid)


@dataclass(frozen=True)
class FitReport:
    schedule: PhaseSchedule
    objective_value: float
    unit_roots: tuple[float, ...]
    local_minima: tuple[tuple[float, float], ...]
    converged: bool
    config: FitConfig
    restart: int = 0

    def profile(self, grid=None) -> ProbabilityProfile:
        return stage_profiles(self.schedule, self.config.grid if grid is None else grid)

    def min_probability(self, grid=None) -> float:
        return float(self.profile(grid).final.min())


def fit_objective(
    schedule: PhaseSchedule, grid, objective: Objective = Objective.SUM_OF_SQUARES
) -> float:
    """
    Deviation of the final success probability from one, summed over the grid.
    """
    chi = 1 - success_probability(schedule, grid)
    if Objective(objective) is Objective.SUM_OF_ABSOLUTE:
        return float(np.sum(np.abs(chi)))
    return float(np.sum(chi * chi))


def canonical_phases(alphas: Sequence[float]) -> tuple[float, ...]:
    """
    Wrap phases onto (-π, π] and pick the sign such that the first phase
    away from zero is positive. Negating every phase mirrors the amplitudes
    and leaves the probabilities unchanged.
    """
    wrapped = [normalize_phase(a) for a in alphas]
    for a in wrapped:
        if abs(a) > 1e-12:
            if a < 0:
                wrapped = [normalize_phase(-b) for b in wrapped]
            break
    return tuple(wrapped)


def fit_schedule(config: FitConfig) -> FitReport:
    """
    Multi-start simplex search over the oracle phases.

    Start points are drawn uniformly from [0, 2π)^k with the configured seed,
    every local search is restarted once from its own result, and the best
    objective wins with ties going to the earlier restart.
    """
    grid = config.grid
    rng = np.random.default_rng(config.seed)
    starts = rng.uniform(0, 2 * math.pi, size=(config.restarts, config.k))
    options = {
        "maxiter": settings.GROVER_FIT_MAXITER,
        "xatol": settings.GROVER_FIT_TOLERANCE,
        "fatol": settings.GROVER_FIT_TOLERANCE,
        "adaptive": config.k > 2,
    }

    def objective(alphas):
        return fit_objective(PhaseSchedule.matched(alphas), grid, config.objective)

    best = None
    best_restart = -1
    for restart, x0 in enumerate(starts):
        result = optimize.minimize(objective, x0, method="Nelder-Mead", options=options)
        result = optimize.minimize(
            objective, result.x, method="Nelder-Mead", options=options
        )
        logger.debug(
            f"Restart {restart}: objective {result.fun} after {result.nfev} evaluations"
        )
        if best is None or result.fun < best.fun:
            best, best_restart = result, restart

    if not best.success:
        logger.warning(f"Best fit for k = {config.k} did not converge: {best.message}")
    schedule = PhaseSchedule.matched(canonical_phases(best.x))
    landscape = unit_roots_and_minima(schedule, (0.0, 1.0))
    logger.info(
        f"Fitted {config.k} stages with objective {best.fun} from restart {best_restart}"
    )
    return FitReport(
        schedule=schedule,
        objective_value=float(best.fun),
        unit_roots=landscape.roots,
        local_minima=landscape.minima,
        converged=bool(best.success),
        config=config,
        restart=best_restart,
    )


def unit_roots_and_minima(
    schedule: PhaseSchedule,
    bracket: tuple[float, float],
    points: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> Landscape:
    """
    Marked fractions with certain success and the interior local minima of
    the final success probability within the bracket.

    The trivial root λ = 1 is never reported. With the matching rule the
    unmarked amplitude is real and its sign changes bracket the roots.
    Otherwise roots are the minima of |u|² that reach zero.
    """
    if not len(schedule):
        raise InvalidArgument("Schedule must not be empty")
    lower, upper = bracket
    if not (0 <= lower < upper <= 1):
        raise InvalidArgument(f"Bracket {bracket} is not an interval within [0, 1]")
    points = points or settings.GROVER_SCAN_POINTS
    tolerance = tolerance or settings.GROVER_REFINE_TOLERANCE
    grid = np.linspace(lower, upper, points)
    interior = grid[grid < 1]

    def final_u(lambdas):
        u, _ = stage_amplitudes(schedule, lambdas)
        return u[-1]

    if (
        schedule.satisfies_matching_rule()
        and np.max(np.abs(final_u(interior).imag)) <= REAL_TOLERANCE
    ):
        roots = sign_change_roots(
            lambda lam: final_u(lam).real / np.sqrt(1 - lam), interior, tolerance
        )
    else:
        roots = [
            lam
            for lam, value in local_minima(
                lambda lam: np.abs(final_u(lam)) ** 2, interior, tolerance
            )
            if value <= UNIT_ROOT_TOLERANCE
        ]

    def final_p(lambdas):
        return success_probability(schedule, lambdas)

    minima = local_minima(final_p, grid, tolerance)
    logger.debug(f"Found {len(roots)} unit roots and {len(minima)} minima")
    return Landscape(roots=tuple(roots), minima=tuple(minima))


def stage_profiles(schedule: PhaseSchedule, grid) -> ProbabilityProfile:
    return probability_profile(schedule, grid)


def single_phase_repeat_profile(alpha: float, k: int, grid) -> ProbabilityProfile:
    """
    Profiles of k identical matched steps (α, -α), which oscillate in λ
    instead of staying close to one.
    """
    if k < 1:
        raise InvalidArgument(f"Number of stages must be at least 1, got {k}")
    return probability_profile(PhaseSchedule.repeated(alpha, k), grid)


def profile_distance(first: PhaseSchedule, second: PhaseSchedule, grid) -> float:
    return float(
        np.max(np.abs(success_probability(first, grid) - success_probability(second, grid)))
    )
