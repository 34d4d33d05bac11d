"""
Tests for experiment configuration parsing.
"""
import os
from pathlib import Path

import pytest

from ramps.exceptions import ConfigError
from ramps.services.data_io import SITES
from ramps.services.experiment_config import (
    DatasetSpec,
    HyperGrid,
    experiment_config_from_mapping,
    load_experiment_config,
)

EXPERIMENTS_DIR = Path(__file__).resolve().parents[2] / 'experiments'


class TestSampleConfigs:
    def test_amrumbank(self):
        cfg = load_experiment_config(str(EXPERIMENTS_DIR / 'amrumbank.cfg'))
        assert cfg.name == 'amrumbank-march'
        assert [d.label for d in cfg.datasets] == ['amrumbank']
        assert cfg.site is SITES['amrumbank']
        assert (cfg.n, cfg.dt, cfg.seed) == (4464, 600, 7)
        assert len(cfg.models) == 7
        assert len(cfg.grid.pairs()) == 25
        assert cfg.chart is True
        assert os.path.isabs(cfg.output_dir)
        assert cfg.output_dir.endswith(os.path.join('rampcast_out', 'amrumbank'))

    def test_offshore(self):
        cfg = load_experiment_config(str(EXPERIMENTS_DIR / 'offshore.cfg'))
        assert len(cfg.datasets) == 6
        assert all(d.site.kind == 'offshore' for d in cfg.datasets)
        assert cfg.report_timing is False
        assert cfg.models == ('persistence', 'lssvr', 'rfr', 'gbm')

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_experiment_config(str(tmp_path / 'absent.cfg'))

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / 'small.cfg'
        path.write_text('# comment\n\nsite = clyde\nmodels = persistence, gbm\nthreads = 2\n')
        cfg = load_experiment_config(str(path))
        assert cfg.models == ('persistence', 'gbm')
        assert cfg.threads == 2


class TestParsing:
    def test_defaults(self):
        cfg = experiment_config_from_mapping({'site': 'gansu'})
        assert cfg.n == 4464 and cfg.dt == 600
        assert cfg.threshold_frac == 0.10 and cfg.split_frac == 0.8
        assert cfg.grid == HyperGrid(-10, 10, 5)
        assert cfg.rfr_mtry is None
        assert cfg.roughness_length is None
        assert cfg.roughness_for(cfg.datasets[0]) == SITES['gansu'].roughness_length

    def test_environment_does_not_override_the_file(self, monkeypatch):
        monkeypatch.setenv('seed', '99')
        monkeypatch.setenv('n', '100')
        cfg = experiment_config_from_mapping({'site': 'gansu', 'seed': '7'})
        assert cfg.seed == 7
        assert cfg.n == 4464

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'site': 'gansu', 'learning_rate': '0.1'})
        assert excinfo.value.key == 'learning_rate'

    @pytest.mark.parametrize('key, value', [('n', 'many'), ('chart', 'maybe'), ('grid_step', '0.5')])
    def test_bad_value(self, key, value):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'site': 'gansu', key: value})
        assert excinfo.value.key == key

    def test_site_and_sites_are_exclusive(self):
        with pytest.raises(ConfigError):
            experiment_config_from_mapping({'site': 'gansu', 'sites': 'clyde,walney'})

    def test_dataset_is_required(self):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'name': 'nothing'})
        assert excinfo.value.key == 'site'

    def test_unknown_site(self):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'sites': 'clyde,atlantis'})
        assert excinfo.value.key == 'sites'

    def test_unknown_model(self):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'site': 'gansu', 'models': 'persistence,lstm'})
        assert excinfo.value.key == 'models'

    def test_data_file_resolves_against_base_dir(self, tmp_path):
        cfg = experiment_config_from_mapping({'data': 'march.csv', 'roughness_length': '0.03'}, str(tmp_path))
        assert cfg.datasets == (DatasetSpec('march', None, os.path.join(str(tmp_path), 'march.csv')),)
        assert cfg.roughness_for(cfg.datasets[0]) == 0.03

    def test_data_file_without_roughness(self, tmp_path):
        cfg = experiment_config_from_mapping({'data': 'march.csv'}, str(tmp_path))
        with pytest.raises(ConfigError):
            cfg.roughness_for(cfg.datasets[0])

    def test_invalid_turbine(self):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'site': 'gansu', 'cut_in': '30'})
        assert excinfo.value.key == 'turbine'

    @pytest.mark.parametrize('key, value', [
        ('threshold_frac', '1.0'),
        ('split_frac', '0'),
        ('gbm_loss', 'huber'),
        ('persistence_mode', 'seasonal'),
        ('decomposition', 'online'),
        ('roughness_length', '-1'),
    ])
    def test_out_of_range(self, key, value):
        with pytest.raises(ConfigError) as excinfo:
            experiment_config_from_mapping({'site': 'gansu', key: value})
        assert excinfo.value.key == key


class TestHyperGrid:
    def test_full_grid(self):
        pairs = HyperGrid(-10, 10, 1).pairs()
        assert len(pairs) == 441
        assert pairs[0] == (2.0 ** -10, 2.0 ** -10)
        assert pairs[1] == (2.0 ** -9, 2.0 ** -10)
        assert pairs[-1] == (2.0 ** 10, 2.0 ** 10)

    def test_default_grid(self):
        assert HyperGrid().values() == [2.0 ** k for k in (-10, -5, 0, 5, 10)]

    @pytest.mark.parametrize('args', [(0, 1, 0), (3, 1, 1)])
    def test_invalid(self, args):
        with pytest.raises(ConfigError):
            HyperGrid(*args)
