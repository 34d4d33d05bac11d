"""
Management command to fit one forecasting model and save it as a JSON record.
"""
import os

from ramps.services.data_io import load_csv, split_index
from ramps.services.experiment_config import DECOMPOSITION_CAUSAL, MODEL_NAMES, experiment_config_from_mapping
from ramps.services.model_store import save_model
from ramps.services.pipeline import build_causal_features, build_features, fit_forecaster, split_features

from ._base import RampcastCommand

# Command options that map one-to-one onto experiment configuration keys
CONFIG_OPTIONS = (
    'seed', 'split_frac', 'eps', 'grid_min_exp', 'grid_max_exp', 'grid_step', 'kernel_train_rows',
    'gbm_loss', 'persistence_mode', 'decomposition', 'threads',
)


class Command(RampcastCommand):
    help = 'Fit a model on the training part of a hub-height speed series and save it as JSON'

    def add_arguments(self, parser):
        parser.add_argument('--data', required=True, help='Input timestamp,speed_mps CSV at hub height')
        parser.add_argument('--dt', type=int, default=600, help='Expected sampling interval in seconds')
        parser.add_argument('--model', required=True, choices=MODEL_NAMES, help='Model to fit')
        parser.add_argument('--out', required=True, help='Output model JSON path')
        parser.add_argument('--split-frac', type=float, help='Training fraction (default: 0.8)')
        parser.add_argument('--seed', type=int, help='Random seed for the forest')
        parser.add_argument('--sigma', type=float, help='RBF bandwidth; with --C skips the grid search')
        parser.add_argument('--C', type=float, help='Cost parameter; with --sigma skips the grid search')
        parser.add_argument('--eps', type=float, help='Insensitive margin of the epsilon models')
        parser.add_argument('--grid-min-exp', type=int, help='Smallest grid exponent (default: -10)')
        parser.add_argument('--grid-max-exp', type=int, help='Largest grid exponent (default: 10)')
        parser.add_argument('--grid-step', type=int, help='Grid exponent stride (default: 5)')
        parser.add_argument('--kernel-train-rows', type=int, help='Most recent rows for kernel models (0 = all)')
        parser.add_argument('--trees', type=int, help='Number of trees of rfr / gbm')
        parser.add_argument('--gbm-loss', help='squared_error or absolute_error')
        parser.add_argument('--persistence-mode', help='last, two_window or mean_of_two')
        parser.add_argument('--decomposition', help='full (whole series) or causal')
        parser.add_argument('--threads', type=int, help='Worker processes for grid search and forests')

    def run(self, **options):
        values = {'data': options['data'], 'dt': str(options['dt']), 'models': options['model']}
        for key in CONFIG_OPTIONS:
            if options.get(key) is not None:
                values[key] = str(options[key])
        if options.get('trees') is not None:
            values['rfr_trees'] = values['gbm_trees'] = str(options['trees'])
        cfg = experiment_config_from_mapping(values, base_dir=os.getcwd())
        if options['sigma'] is not None and options['C'] is not None:
            cfg = cfg.with_overrides(grid=[(options['sigma'], options['C'])])

        series = load_csv(cfg.datasets[0].path, cfg.dt, height=cfg.data_height)
        split = split_index(len(series), cfg.split_frac)
        if cfg.decomposition == DECOMPOSITION_CAUSAL:
            train, _ = build_causal_features(series.values, split.train_end)
        else:
            train, _ = split_features(build_features(series.values), split.train_end)

        model, hyper = fit_forecaster(options['model'], train, cfg)
        meta = {
            'model_id': options['model'],
            'hyper': hyper,
            'decomposition': cfg.decomposition,
            'train_end': split.train_end,
            'dt': cfg.dt,
        }
        save_model(model, options['out'], meta)
