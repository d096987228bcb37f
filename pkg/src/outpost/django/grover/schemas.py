import math
from typing import Optional

from django.utils.translation import gettext as _
from pydantic import (
    BaseModel,
    Field,
    model_validator,
)

from .double import TwoPhaseSolution
from .fitting import (
    FitReport,
    Landscape,
    Objective,
)
from .operators import PhaseSchedule
from .statevector import CrossCheck


def significant(value: float, digits: int) -> float:
    return float(f"{value:.{digits}g}")


class PhaseScheduleSchema(BaseModel):
    alphas: list[float] = Field(
        ..., description=_("Oracle phases in radians, first stage first")
    )
    betas: Optional[list[float]] = Field(
        None,
        description=_(
            "Diffusion phases in radians, derived from the matching rule if omitted"
        ),
    )

    @model_validator(mode="after")
    def check_phases(self):
        if not self.alphas:
            raise ValueError(_("Schedule needs at least one stage"))
        if self.betas is not None and len(self.betas) != len(self.alphas):
            raise ValueError(
                _("Got {alphas} oracle phases but {betas} diffusion phases").format(
                    alphas=len(self.alphas), betas=len(self.betas)
                )
            )
        if not all(math.isfinite(p) for p in self.alphas + (self.betas or [])):
            raise ValueError(_("Phases must be finite"))
        return self

    def to_schedule(self) -> PhaseSchedule:
        if self.betas is None:
            schedule = PhaseSchedule.matched(self.alphas)
        else:
            schedule = PhaseSchedule.from_phases(self.alphas, self.betas)
        return schedule.normalized()

    @classmethod
    def from_schedule(cls, schedule: PhaseSchedule, digits: Optional[int] = None):
        def rounded(values):
            if digits is None:
                return list(values)
            return [significant(v, digits) for v in values]

        return cls(alphas=rounded(schedule.alphas), betas=rounded(schedule.betas))


class LocalMinimumSchema(BaseModel):
    fraction: float = Field(..., description=_("Marked fraction of the minimum"))
    probability: float = Field(..., description=_("Success probability at the minimum"))


class FitReportSchema(BaseModel):
    k: int = Field(..., description=_("Number of stages"))
    objective: Objective = Field(..., description=_("Objective that was minimized"))
    objective_value: float = Field(..., description=_("Objective of the best fit"))
    converged: bool = Field(
        ..., description=_("Whether the best local search met its tolerances")
    )
    restarts: int = Field(..., description=_("Number of random restarts"))
    restart: int = Field(..., description=_("Restart that produced the best fit"))
    seed: int = Field(..., description=_("Seed of the random start points"))
    schedule: PhaseScheduleSchema = Field(..., description=_("Fitted phases"))
    unit_roots: list[float] = Field(
        ..., description=_("Marked fractions with certain success")
    )
    local_minima: list[LocalMinimumSchema] = Field(
        ..., description=_("Interior local minima of the success probability")
    )

    @classmethod
    def from_report(cls, report: FitReport, digits: int) -> "FitReportSchema":
        return cls(
            k=report.config.k,
            objective=report.config.objective,
            objective_value=report.objective_value,
            converged=report.converged,
            restarts=report.config.restarts,
            restart=report.restart,
            seed=report.config.seed,
            schedule=PhaseScheduleSchema.from_schedule(report.schedule, digits),
            unit_roots=list(report.unit_roots),
            local_minima=[
                LocalMinimumSchema(fraction=x, probability=p)
                for x, p in report.local_minima
            ],
        )


class TwoPhaseSolutionSchema(BaseModel):
    alpha1: float = Field(..., description=_("Oracle phase of the first stage"))
    alpha2: float = Field(..., description=_("Oracle phase of the second stage"))
    beta1: float = Field(..., description=_("Diffusion phase of the first stage"))
    beta2: float = Field(..., description=_("Diffusion phase of the second stage"))
    lambda_roots: tuple[float, float] = Field(
        ..., description=_("Marked fractions with certain success")
    )

    @classmethod
    def from_solution(cls, solution: TwoPhaseSolution) -> "TwoPhaseSolutionSchema":
        return cls(
            alpha1=solution.alpha1,
            alpha2=solution.alpha2,
            beta1=solution.beta1,
            beta2=solution.beta2,
            lambda_roots=solution.lambda_roots,
        )


class CrossCheckSchema(BaseModel):
    n: int = Field(..., description=_("Number of qubits"))
    marked: int = Field(..., description=_("Number of marked basis states"))
    max_gap: float = Field(
        ..., description=_("Largest success probability gap to the reduced model")
    )
    uniformity_gap: float = Field(
        ..., description=_("Largest spread among marked or unmarked amplitudes")
    )
    equivalence_gap: Optional[float] = Field(
        None, description=_("Largest probability gap to the earlier phase convention")
    )
    probabilities: list[float] = Field(
        ..., description=_("Success probability after every stage")
    )
    passed: bool = Field(..., description=_("Whether all gaps are within tolerance"))

    @classmethod
    def from_check(
        cls,
        check: CrossCheck,
        n: int,
        marked: int,
        passed: bool,
        equivalence_gap: Optional[float] = None,
    ) -> "CrossCheckSchema":
        return cls(
            n=n,
            marked=marked,
            max_gap=check.max_gap,
            uniformity_gap=check.uniformity_gap,
            equivalence_gap=equivalence_gap,
            probabilities=list(check.probabilities),
            passed=passed,
        )


class LandscapeSchema(BaseModel):
    unit_roots: list[float] = Field(
        ..., description=_("Marked fractions with certain success")
    )
    local_minima: list[LocalMinimumSchema] = Field(
        ..., description=_("Interior local minima of the success probability")
    )

    @classmethod
    def from_landscape(cls, landscape: Landscape) -> "LandscapeSchema":
        return cls(
            unit_roots=list(landscape.roots),
            local_minima=[
                LocalMinimumSchema(fraction=x, probability=p)
                for x, p in landscape.minima
            ],
        )
