"""
Full register simulation over all 2^n basis states.

Used to cross-check the two dimensional reduction in `operators`: the oracle
multiplies marked amplitudes by e^{iα}, the diffusion step acts as
e^{iβ}·I + (1 - e^{iβ})·|s><s| with |s> the uniform superposition.
"""
import logging
import math
from dataclasses import dataclass
from typing import (
    Iterable,
    NamedTuple,
    Optional,
)

import numpy as np
import numpy.typing as npt

from .conf import settings
from .exceptions import (
    ContractViolation,
    InvalidArgument,
    ResourceBound,
)
from .operators import (
    PhaseSchedule,
    stage_amplitudes,
)

logger = logging.getLogger(__name__)


def check_qubits(n: int) -> int:
    if not (1 <= n <= settings.GROVER_STATEVECTOR_MAX_QUBITS):
        raise ResourceBound(
            f"Register of {n} qubits is outside "
            f"1..{settings.GROVER_STATEVECTOR_MAX_QUBITS}"
        )
    return int(n)


@dataclass(frozen=True)
class StateVector:
    amplitudes: npt.NDArray[np.complex128]
    n: int

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.n,):
            raise InvalidArgument(
                f"Expected {2 ** self.n} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probability(self, marked: "MarkedSet") -> float:
        return float(np.sum(np.abs(self.amplitudes[marked.index]) ** 2))


@dataclass(frozen=True)
class MarkedSet:
    indices: frozenset[int]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(int(i) for i in self.indices))
        size = 2**self.n
        if not self.indices:
            raise InvalidArgument("At least one basis state must be marked")
        if any(not (0 <= i < size) for i in self.indices):
            raise InvalidArgument(f"Marked indices must lie within [0, {size})")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def index(self) -> npt.NDArray[np.intp]:
        return np.fromiter(sorted(self.indices), dtype=np.intp)

    @property
    def fraction(self) -> float:
        return len(self.indices) / 2**self.n


class CrossCheck(NamedTuple):
    max_gap: float
    uniformity_gap: float
    probabilities: tuple[float, ...]


def init_database(n: int) -> StateVector:
    n = check_qubits(n)
    size = 2**n
    return StateVector(np.full(size, 1 / math.sqrt(size), dtype=complex), n)


def apply_oracle(state: StateVector, marked: MarkedSet, alpha: float) -> StateVector:
    amplitudes = state.amplitudes.copy()
    amplitudes[marked.index] *= np.exp(1j * alpha)
    return StateVector(amplitudes, state.n)


def apply_diffusion(state: StateVector, beta: float) -> StateVector:
    phase = np.exp(1j * beta)
    mean = state.amplitudes.mean()
    return StateVector(phase * state.amplitudes + (1 - phase) * mean, state.n)


def random_marked_set(
    n: int, count: int, rng: Optional[np.random.Generator] = None
) -> MarkedSet:
    n = check_qubits(n)
    if not (1 <= count <= 2**n):
        raise InvalidArgument(f"Marked count {count} is not within [1, {2 ** n}]")
    rng = rng or np.random.default_rng()
    return MarkedSet(frozenset(rng.choice(2**n, size=count, replace=False).tolist()), n)


def marked_set(n: int, indices: Iterable[int]) -> MarkedSet:
    return MarkedSet(frozenset(indices), check_qubits(n))


def _spread(values: npt.NDArray[np.complex128]) -> float:
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values - values[0])))


def cross_check(
    schedule: PhaseSchedule, n: int, marked: MarkedSet, strict: bool = False
) -> CrossCheck:
    """
    Run the schedule on the full register and on the two dimensional model
    with λ = M / 2^n and compare the success probability after every stage.

    The uniformity gap is the largest spread among marked amplitudes and
    among unmarked amplitudes over all stages. With `strict` either gap above
    the configured tolerance raises ContractViolation.
    """
    n = check_qubits(n)
    if len(schedule) > settings.GROVER_STATEVECTOR_MAX_STAGES:
        raise ResourceBound(
            f"Schedule of {len(schedule)} stages exceeds "
            f"{settings.GROVER_STATEVECTOR_MAX_STAGES}"
        )
    if marked.n != n:
        raise InvalidArgument(f"Marked set is for {marked.n} qubits, not {n}")
    _, d = stage_amplitudes(schedule, [marked.fraction])
    reduced = np.abs(d[1:, 0]) ** 2
    unmarked = np.ones(2**n, dtype=bool)
    unmarked[marked.index] = False

    state = init_database(n)
    probabilities = []
    gap = uniformity = 0.0
    for j, pair in enumerate(schedule):
        state = apply_diffusion(apply_oracle(state, marked, pair.alpha), pair.beta)
        probability = state.probability(marked)
        probabilities.append(probability)
        gap = max(gap, abs(probability - reduced[j]))
        uniformity = max(
            uniformity,
            _spread(state.amplitudes[marked.index]),
            _spread(state.amplitudes[unmarked]),
        )
    logger.debug(f"Cross check on {n} qubits, M = {len(marked)}: gap {gap}")
    result = CrossCheck(
        max_gap=gap, uniformity_gap=uniformity, probabilities=tuple(probabilities)
    )
    tolerance = settings.GROVER_VERIFY_TOLERANCE
    if strict and max(gap, uniformity) > tolerance:
        raise ContractViolation(
            f"Full register disagrees with the reduced model by {gap} "
            f"(uniformity {uniformity}), tolerance {tolerance}"
        )
    return result
