import math
from collections.abc import Sequence
from typing import Optional

from django.core.exceptions import ValidationError
from django.utils.deconstruct import deconstructible
from django.utils.translation import gettext_lazy as _


@deconstructible
class GridValidator(object):
    """
    Validate a (min, max, count) grid specification of marked fractions.
    """

    code = "invalid"

    def __init__(self, min_count: int = 2, lower: float = 0.0, upper: float = 1.0):
        self._min_count = min_count
        self._lower = lower
        self._upper = upper

    def __call__(self, spec: Sequence) -> None:
        lower, upper, count = spec
        if count < self._min_count:
            raise ValidationError(
                _("Grid needs at least {allowed} points, got {found}").format(
                    allowed=self._min_count, found=count
                ),
                self.code,
            )
        if not lower < upper:
            raise ValidationError(
                _("Grid minimum {lower} must be below its maximum {upper}").format(
                    lower=lower, upper=upper
                ),
                self.code,
            )
        if lower < self._lower or upper > self._upper:
            raise ValidationError(
                _("Grid must lie within [{lower}, {upper}]").format(
                    lower=self._lower, upper=self._upper
                ),
                self.code,
            )


@deconstructible
class PhaseListValidator(object):
    """
    Validate a list of phases in radians
    """

    code = "invalid"

    def __init__(self, length: Optional[int] = None):
        self._length = length

    def __call__(self, phases: Sequence[float]) -> None:
        if not phases:
            raise ValidationError(_("At least one phase is required"), self.code)
        if self._length is not None and len(phases) != self._length:
            raise ValidationError(
                _("Expected {allowed} phases, got {found}").format(
                    allowed=self._length, found=len(phases)
                ),
                self.code,
            )
        if not all(math.isfinite(p) for p in phases):
            raise ValidationError(_("Phases must be finite"), self.code)


@deconstructible
class QubitValidator(object):
    code = "invalid"

    def __init__(self, maximum: int):
        self._maximum = maximum

    def __call__(self, n: int) -> None:
        if not (1 <= n <= self._maximum):
            raise ValidationError(
                _("Register size {found} is outside 1..{allowed}").format(
                    found=n, allowed=self._maximum
                ),
                "resource",
            )
