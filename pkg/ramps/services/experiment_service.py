"""
Experiment Service for the rampcast application.

This module runs a configured experiment and records it in the database:
1. Run status tracking (pending → processing → completed/failed)
2. Pipeline execution and CSV artifacts
3. One ModelResult row per (dataset, model)

Created on: October 13, 2025
"""

import logging
import traceback
from typing import Optional

from django.db import transaction
from django.utils import timezone

from ..models import ExperimentRun, ModelResult
from .experiment_config import ExperimentConfig
from .pipeline import ExperimentResult, run_experiment

# Set up logging
logger = logging.getLogger(__name__)


class ExperimentService:
    """
    Service class to run and record one experiment.

    Attributes:
        run_id (int): ID of the ExperimentRun to process
        run (ExperimentRun): run model instance
        config (ExperimentConfig): parsed experiment configuration

    Example:
        >>> run = ExperimentService.create_run(cfg, config_text)
        >>> result = ExperimentService(run.id, cfg).process()
    """

    def __init__(self, run_id: int, config: ExperimentConfig):
        """
        Initialize the service with a run ID.

        Raises:
            ExperimentRun.DoesNotExist: If the run doesn't exist
        """
        self.run_id = run_id
        self.config = config

        try:
            self.run = ExperimentRun.objects.get(id=run_id)
            logger.info(f"ExperimentService initialized for run {run_id}: '{self.run.name}'")
        except ExperimentRun.DoesNotExist:
            logger.error(f"Experiment run with ID {run_id} does not exist")
            raise

    @staticmethod
    def create_run(config: ExperimentConfig, config_text: str = '') -> ExperimentRun:
        """Create a pending ExperimentRun for a configuration."""
        return ExperimentRun.objects.create(
            name=config.name,
            datasets=[d.label for d in config.datasets],
            seed=config.seed,
            config_text=config_text,
            output_dir=config.output_dir,
        )

    def _set_status(self, status: str, error_message: Optional[str] = None) -> None:
        self.run.status = status
        self.run.error_message = error_message
        self.run.updated_at = timezone.now()
        self.run.save()

    def _store_results(self, result: ExperimentResult) -> int:
        rows = []
        for dataset in result.datasets:
            for report in dataset.reports:
                entropy = dataset.entropies.get(report.model_id, {})
                rows.append(ModelResult(
                    run=self.run,
                    dataset=dataset.label,
                    model_id=report.model_id,
                    rmse=report.rmse,
                    nmse=report.nmse,
                    r2=report.r2,
                    u1=report.u1,
                    u2=report.u2,
                    r_up=report.r_up,
                    r_down=report.r_down,
                    cpu_time=report.cpu_time if self.config.report_timing else None,
                    wt_entropy=entropy.get('wt_entropy'),
                    emd_entropy=entropy.get('emd_entropy'),
                    hyper=dataset.hyper.get(report.model_id, {}),
                    error=report.error,
                ))
        with transaction.atomic():
            ModelResult.objects.bulk_create(rows)
        return len(rows)

    def process(self) -> Optional[ExperimentResult]:
        """
        Run the experiment and persist its results.

        Returns:
            ExperimentResult | None: the result, or None if the run failed
        """
        try:
            logger.info("=" * 60)
            logger.info(f"Starting experiment run {self.run_id}: '{self.run.name}'")
            logger.info("=" * 60)

            logger.info("STEP 1: Updating run status to 'processing'...")
            self._set_status('processing')
            logger.info("✓ Status updated successfully")

            logger.info("STEP 2: Running the forecasting pipeline...")
            result = run_experiment(self.config, output_dir=self.run.output_dir or None)
            logger.info(f"✓ Pipeline produced {len(result.reports)} report rows")

            logger.info("STEP 3: Saving model results to database...")
            saved = self._store_results(result)
            logger.info(f"✓ {saved} model results saved")

            logger.info("STEP 4: Marking run as completed...")
            self._set_status('completed')

            best = self.run.best_result()
            logger.info("=" * 60)
            logger.info(f"✓✓✓ SUCCESSFULLY COMPLETED RUN {self.run_id} ✓✓✓")
            if best is not None:
                logger.info(f"Best RMSE: {best.model_id} on {best.dataset} ({best.rmse:.4f} m/s)")
            logger.info("=" * 60)
            return result

        except Exception as e:
            logger.error("=" * 60)
            logger.error(f"✗✗✗ ERROR IN EXPERIMENT RUN {self.run_id} ✗✗✗")
            logger.error(f"Error Type: {type(e).__name__}")
            logger.error(f"Error Message: {str(e)}")
            logger.error("Full Traceback:")
            logger.error(traceback.format_exc())
            logger.error("=" * 60)

            try:
                self._set_status('failed', f"{type(e).__name__}: {e}"[:500])
                logger.info("Run status updated to 'failed'")
            except Exception as save_error:
                logger.error(f"Failed to update run status: {str(save_error)}")
            return None
