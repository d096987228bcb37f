import logging
import math
from dataclasses import dataclass
from typing import (
    Iterable,
    Iterator,
    Optional,
    Sequence,
)

import numpy as np
import numpy.typing as npt
import pandas as pd

from .exceptions import InvalidArgument

logger = logging.getLogger(__name__)

Operator2 = npt.NDArray[np.complex128]

MATCHING_TOLERANCE = 1e-12

# Oracle phases of the six stage schedule obtained by least squares fitting of
# P6 to unity on 0 < λ <= 1, in units of π. Diffusion phases follow the
# matching rule.
SIX_STAGE_ALPHAS = tuple(
    f * math.pi
    for f in (
        1.20560132,
        1.29806396,
        1.31701508,
        1.33356767,
        0.47289426,
        1.66668634,
    )
)


def normalize_phase(phase: float) -> float:
    """
    Map a phase in radians onto (-π, π].
    """
    wrapped = math.remainder(phase, 2 * math.pi)
    if wrapped <= -math.pi:
        return math.pi
    return wrapped


def check_fraction(frac: float) -> float:
    frac = float(frac)
    if not math.isfinite(frac) or not (0.0 <= frac <= 1.0):
        raise InvalidArgument(f"Marked fraction {frac} is not within [0, 1]")
    return frac


def check_grid(grid: Iterable[float]) -> npt.NDArray[np.float64]:
    lambdas = np.asarray(list(grid), dtype=float)
    if lambdas.ndim != 1 or lambdas.size == 0:
        raise InvalidArgument("Grid of marked fractions must not be empty")
    if not np.all(np.isfinite(lambdas)) or lambdas.min() < 0 or lambdas.max() > 1:
        raise InvalidArgument("Grid of marked fractions must lie within [0, 1]")
    if np.any(np.diff(lambdas) <= 0):
        raise InvalidArgument("Grid of marked fractions must be strictly increasing")
    return lambdas


@dataclass(frozen=True)
class PhasePair:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidArgument(
                f"Phases must be finite, got ({self.alpha}, {self.beta})"
            )

    def normalized(self) -> "PhasePair":
        return PhasePair(normalize_phase(self.alpha), normalize_phase(self.beta))


@dataclass(frozen=True)
class PhaseSchedule:
    """
    Ordered phase pairs, the first pair is applied first.
    """

    pairs: tuple[PhasePair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @classmethod
    def from_phases(
        cls, alphas: Sequence[float], betas: Sequence[float]
    ) -> "PhaseSchedule":
        if len(alphas) != len(betas):
            raise InvalidArgument(
                f"Got {len(alphas)} oracle phases but {len(betas)} diffusion phases"
            )
        return cls(tuple(PhasePair(float(a), float(b)) for a, b in zip(alphas, betas)))

    @classmethod
    def matched(cls, alphas: Sequence[float]) -> "PhaseSchedule":
        """
        Build a schedule whose diffusion phases obey β_j = -α_{k-j+1}.
        """
        alphas = [float(a) for a in alphas]
        return cls.from_phases(alphas, [-a for a in reversed(alphas)])

    @classmethod
    def repeated(
        cls, alpha: float, k: int, beta: Optional[float] = None
    ) -> "PhaseSchedule":
        if k < 0:
            raise InvalidArgument(f"Number of stages must not be negative, got {k}")
        pair = PhasePair(float(alpha), float(-alpha if beta is None else beta))
        return cls((pair,) * k)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[PhasePair]:
        return iter(self.pairs)

    @property
    def alphas(self) -> tuple[float, ...]:
        return tuple(p.alpha for p in self.pairs)

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(p.beta for p in self.pairs)

    def prefix(self, j: int) -> "PhaseSchedule":
        return PhaseSchedule(self.pairs[:j])

    def reversed(self) -> "PhaseSchedule":
        return PhaseSchedule(self.pairs[::-1])

    def normalized(self) -> "PhaseSchedule":
        return PhaseSchedule(tuple(p.normalized() for p in self.pairs))

    def satisfies_matching_rule(self, tolerance: float = MATCHING_TOLERANCE) -> bool:
        # Phases are periodic, so (π, π) counts as matched.
        k = len(self.pairs)
        return all(
            abs(normalize_phase(p.alpha + self.pairs[k - 1 - j].beta)) <= tolerance
            for j, p in enumerate(self.pairs)
        )


@dataclass(frozen=True)
class Amplitudes:
    u: complex
    d: complex

    @property
    def probability(self) -> float:
        return abs(self.d) ** 2

    @property
    def norm(self) -> float:
        return abs(self.u) ** 2 + abs(self.d) ** 2


@dataclass(frozen=True)
class ProbabilityProfile:
    """
    Success probabilities P_j(λ) sampled on a grid, one row per stage.
    """

    lambdas: npt.NDArray[np.float64]
    stages: npt.NDArray[np.float64]

    @property
    def k(self) -> int:
        return self.stages.shape[0]

    @property
    def final(self) -> npt.NDArray[np.float64]:
        if self.k == 0:
            return self.lambdas.copy()
        return self.stages[-1]

    def stage(self, j: int) -> npt.NDArray[np.float64]:
        if j == 0:
            return self.lambdas.copy()
        return self.stages[j - 1]

    def to_frame(self) -> pd.DataFrame:
        columns = {"lambda": self.lambdas}
        columns.update({f"P{j}": row for j, row in enumerate(self.stages, start=1)})
        return pd.DataFrame(columns)


def operator_entries(alpha: float, beta: float, lambdas):
    ea = np.exp(1j * alpha)
    eb = np.exp(1j * beta)
    lambdas = np.asarray(lambdas, dtype=float)
    rest = 1.0 - lambdas
    mixed = np.sqrt(lambdas * rest)
    return (
        (1 - eb) * rest + eb,
        (ea - ea * eb) * mixed,
        (1 - eb) * mixed,
        (ea - ea * eb) * lambdas + ea * eb,
    )


def build_operator(pair: PhasePair, frac: float) -> Operator2:
    """
    One Grover step G(α, β) in the {|R>, |T>} basis.
    """
    frac = check_fraction(frac)
    g11, g12, g21, g22 = operator_entries(pair.alpha, pair.beta, frac)
    return np.array([[g11, g12], [g21, g22]], dtype=complex)


def initial_state(frac: float) -> npt.NDArray[np.complex128]:
    frac = check_fraction(frac)
    return np.array([math.sqrt(1 - frac), math.sqrt(frac)], dtype=complex)


def is_unitary(matrix: Operator2, tolerance: float = 1e-12) -> bool:
    matrix = np.asarray(matrix)
    identity = np.eye(matrix.shape[0])
    return bool(
        np.allclose(matrix.conj().T @ matrix, identity, rtol=0, atol=tolerance)
        and abs(abs(np.linalg.det(matrix)) - 1) <= tolerance
    )


def stage_amplitudes(schedule: PhaseSchedule, lambdas):
    """
    Evolve the database state through every stage of the schedule for all
    marked fractions at once.

    Returns the arrays (u, d) of shape (k + 1, len(lambdas)); row j holds the
    amplitudes after the first j pairs.
    """
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=float))
    u = np.empty((len(schedule) + 1,) + lambdas.shape, dtype=complex)
    d = np.empty_like(u)
    u[0] = np.sqrt(1 - lambdas)
    d[0] = np.sqrt(lambdas)
    for j, pair in enumerate(schedule, start=1):
        g11, g12, g21, g22 = operator_entries(pair.alpha, pair.beta, lambdas)
        u[j] = g11 * u[j - 1] + g12 * d[j - 1]
        d[j] = g21 * u[j - 1] + g22 * d[j - 1]
    return u, d


def apply_schedule(schedule: PhaseSchedule, frac: float) -> Amplitudes:
    frac = check_fraction(frac)
    u, d = stage_amplitudes(schedule, [frac])
    return Amplitudes(complex(u[-1, 0]), complex(d[-1, 0]))


def success_probability(schedule: PhaseSchedule, lambdas) -> npt.NDArray[np.float64]:
    _, d = stage_amplitudes(schedule, lambdas)
    return np.abs(d[-1]) ** 2


def probability_profile(schedule: PhaseSchedule, grid) -> ProbabilityProfile:
    lambdas = check_grid(grid)
    _, d = stage_amplitudes(schedule, lambdas)
    logger.debug(f"Sampled {len(schedule)} stages on {lambdas.size} marked fractions")
    return ProbabilityProfile(lambdas=lambdas, stages=np.abs(d[1:]) ** 2)
