"""
Tests for the run ledger models and ExperimentService.
"""
import pytest

from ramps.models import ExperimentRun, ModelResult
from ramps.services import experiment_service
from ramps.services.experiment_service import ExperimentService

from .factories import ExperimentRunFactory, ModelResultFactory

pytestmark = pytest.mark.django_db


class TestModels:
    def test_defaults(self):
        run = ExperimentRunFactory()
        assert run.status == 'pending'
        assert not run.is_completed and not run.is_failed
        assert str(run) == f'{run.name} (pending)'

    def test_best_result_skips_failures(self):
        run = ExperimentRunFactory()
        ModelResultFactory(run=run, model_id='persistence', rmse=1.5)
        ModelResultFactory(run=run, model_id='lssvr', rmse=0.7)
        ModelResultFactory(run=run, model_id='tsvr', rmse=None, error='ConvergenceError: stalled')
        ModelResultFactory(run=run, dataset='walney', model_id='gbm', rmse=0.2)

        assert run.best_result().model_id == 'gbm'
        assert run.best_result('amrumbank').model_id == 'lssvr'
        assert run.results.get(model_id='tsvr').failed

    def test_best_result_of_empty_run(self):
        assert ExperimentRunFactory().best_result() is None

    def test_one_result_per_dataset_and_model(self):
        from django.db import IntegrityError, transaction

        result = ModelResultFactory()
        with pytest.raises(IntegrityError), transaction.atomic():
            ModelResultFactory(run=result.run, dataset=result.dataset, model_id=result.model_id)


class TestExperimentService:
    def test_unknown_run(self, small_config):
        with pytest.raises(ExperimentRun.DoesNotExist):
            ExperimentService(999999, small_config)

    def test_create_run(self, small_config):
        run = ExperimentService.create_run(small_config, 'site = amrumbank\n')
        assert run.datasets == ['amrumbank']
        assert run.seed == 5
        assert run.output_dir == small_config.output_dir
        assert run.config_text == 'site = amrumbank\n'

    def test_successful_run_stores_every_result(self, small_config):
        cfg = small_config.with_overrides(models=('persistence', 'gbm'))
        run = ExperimentService.create_run(cfg)

        result = ExperimentService(run.id, cfg).process()

        run.refresh_from_db()
        assert result is not None
        assert run.is_completed
        assert run.error_message is None
        rows = list(run.results.order_by('model_id'))
        assert [r.model_id for r in rows] == ['gbm', 'persistence']
        assert all(r.rmse is not None and r.cpu_time is None for r in rows)
        assert rows[0].hyper['n_trees'] == 30
        assert ModelResult.objects.filter(run=run).count() == len(result.reports)

    def test_failure_marks_the_run_failed(self, small_config, monkeypatch):
        def broken(*args, **kwargs):
            raise OSError('disk full')

        monkeypatch.setattr(experiment_service, 'run_experiment', broken)
        run = ExperimentService.create_run(small_config)

        assert ExperimentService(run.id, small_config).process() is None

        run.refresh_from_db()
        assert run.is_failed
        assert run.error_message == 'OSError: disk full'
        assert not run.results.exists()
