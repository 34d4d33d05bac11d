"""
Management command to run a full forecasting experiment from a configuration file.
"""
from django.core.management import call_command
from django.core.management.base import CommandError

from ramps.conf import rampcast_setting
from ramps.services.evalx import format_table
from ramps.services.experiment_config import load_experiment_config
from ramps.services.experiment_service import ExperimentService
from ramps.services.pipeline import run_experiment

from ._base import RampcastCommand


class Command(RampcastCommand):
    help = 'Run the forecasting protocol for every configured dataset and model, then print the result table'

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help='Experiment configuration file (key = value)')
        parser.add_argument('--output-dir', help='Artifact directory (overrides output_dir in the file)')
        parser.add_argument('--record', action='store_true', help='Store the run and its results in the database')

    def run(self, **options):
        cfg = load_experiment_config(options['config'])
        if options['output_dir']:
            cfg = cfg.with_overrides(output_dir=options['output_dir'])

        if options['record'] or rampcast_setting('RECORD_RUNS'):
            call_command('migrate', interactive=False, verbosity=0)
            with open(options['config'], encoding='utf-8') as handle:
                run = ExperimentService.create_run(cfg, handle.read())
            result = ExperimentService(run.id, cfg).process()
            if result is None:
                run.refresh_from_db()
                raise CommandError(f"run {run.id} failed: {run.error_message}", returncode=1)
        else:
            result = run_experiment(cfg)

        self.emit(format_table(result.reports, include_timing=cfg.report_timing))
