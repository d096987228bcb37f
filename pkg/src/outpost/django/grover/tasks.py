import logging

from celery import shared_task

from .conf import settings
from .fitting import (
    FitConfig,
    fit_schedule,
)
from .schemas import FitReportSchema

logger = logging.getLogger(__name__)


class FitTask:
    @shared_task(bind=True, name=f"{__name__}.Fit:schedule")
    def fit(task, k: int, **overrides) -> dict:
        if "lambda_grid" in overrides:
            overrides["lambda_grid"] = tuple(overrides["lambda_grid"])
        config = FitConfig(k=k, **overrides)
        logger.info(f"Fitting {k} stages with {config.restarts} restarts")
        report = fit_schedule(config)
        return FitReportSchema.from_report(
            report, settings.GROVER_REPORT_DIGITS
        ).model_dump(mode="json")
