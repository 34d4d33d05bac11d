"""
Django models for the rampcast application.

This module defines the run ledger written by `rampcast run --record`:
- Experiment runs and their processing status
- One result row per (dataset, model) with metrics and entropies

Created on: October 13, 2025
"""

# ============================================
# 1. IMPORT REQUIRED MODULES
# ============================================
from django.db import models


# ============================================
# 2. EXPERIMENT RUN MODEL
# ============================================

class ExperimentRun(models.Model):
    """
    One execution of an experiment configuration.

    Status moves pending → processing → completed/failed.

    Attributes:
        name (CharField): experiment name from the config file
        datasets (JSONField): dataset labels in run order
        seed (IntegerField): base random seed
        config_text (TextField): raw configuration file contents
        output_dir (CharField): directory holding the CSV artifacts
        status (CharField): processing status
        error_message (TextField): failure reason when status is failed
        created_at / updated_at (DateTimeField): timestamps
    """

    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('processing', 'Processing'),
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    name = models.CharField(
        max_length=200,
        default='experiment',
        help_text='Experiment name'
    )

    datasets = models.JSONField(
        default=list,
        help_text='Dataset labels in run order'
    )

    seed = models.IntegerField(
        default=0,
        help_text='Base random seed'
    )

    config_text = models.TextField(
        blank=True,
        default='',
        help_text='Raw experiment configuration'
    )

    output_dir = models.CharField(
        max_length=500,
        blank=True,
        default='',
        help_text='Directory of written CSV artifacts'
    )

    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default='pending',
        db_index=True,
        help_text='Current processing status'
    )

    error_message = models.TextField(
        blank=True,
        null=True,
        help_text='Error message if the run failed'
    )

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['-created_at']
        verbose_name = 'Experiment run'
        verbose_name_plural = 'Experiment runs'

    def __str__(self):
        return f"{self.name} ({self.status})"

    @property
    def is_completed(self):
        return self.status == 'completed'

    @property
    def is_failed(self):
        return self.status == 'failed'

    def best_result(self, dataset=None):
        """
        Lowest-RMSE successful result, optionally within one dataset.

        Returns:
            ModelResult | None
        """
        results = self.results.filter(rmse__isnull=False, error='')
        if dataset is not None:
            results = results.filter(dataset=dataset)
        return results.order_by('rmse', 'model_id').first()


# ============================================
# 3. MODEL RESULT MODEL
# ============================================

class ModelResult(models.Model):
    """
    Metrics of one model on one dataset of a run.

    Metric columns are null where undefined or when the model failed
    (error is then non-empty).
    """

    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='results',
        help_text='Run this result belongs to'
    )

    dataset = models.CharField(max_length=100)
    model_id = models.CharField(max_length=20, db_index=True)

    rmse = models.FloatField(null=True, blank=True)
    nmse = models.FloatField(null=True, blank=True)
    r2 = models.FloatField(null=True, blank=True)
    u1 = models.FloatField(null=True, blank=True)
    u2 = models.FloatField(null=True, blank=True)
    r_up = models.FloatField(null=True, blank=True)
    r_down = models.FloatField(null=True, blank=True)
    cpu_time = models.FloatField(null=True, blank=True)

    wt_entropy = models.FloatField(null=True, blank=True, help_text='Log energy entropy of the WT low band')
    emd_entropy = models.FloatField(null=True, blank=True, help_text='Log energy entropy of the EMD low band')

    hyper = models.JSONField(default=dict, blank=True, help_text='Chosen hyperparameters')
    error = models.TextField(blank=True, default='', help_text='Error tag if the model failed')

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['run', 'dataset', 'id']
        constraints = [
            models.UniqueConstraint(fields=['run', 'dataset', 'model_id'], name='unique_run_dataset_model'),
        ]

    def __str__(self):
        return f"{self.dataset}/{self.model_id}"

    @property
    def failed(self):
        return bool(self.error)
