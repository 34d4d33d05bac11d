"""
Shared fixtures for the rampcast test suite.
"""
import numpy as np
import pytest

from ramps.services.atmos import TurbineSpec
from ramps.services.data_io import WindSeries, export_csv, get_site, synth_series
from ramps.services.experiment_config import DatasetSpec, ExperimentConfig, HyperGrid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def turbine():
    return TurbineSpec()


@pytest.fixture
def amrumbank():
    return get_site('amrumbank')


@pytest.fixture
def short_series(amrumbank):
    """600 ten-minute samples at 10 m."""
    return synth_series(amrumbank, 600, seed=3)


@pytest.fixture
def series_csv(tmp_path, short_series):
    path = tmp_path / 'speeds.csv'
    export_csv(short_series, str(path))
    return path


@pytest.fixture
def write_series(tmp_path):
    """Write values as a timestamp,speed_mps CSV and return its path."""

    def write(values, name='series.csv', dt=600):
        path = tmp_path / name
        export_csv(WindSeries.from_values(values, dt=dt), str(path))
        return path

    return write


@pytest.fixture
def small_config(tmp_path, amrumbank):
    """Desk-sized experiment: short series, tiny grid, small ensembles."""
    return ExperimentConfig(
        name='unit',
        datasets=(DatasetSpec('amrumbank', amrumbank),),
        n=600,
        seed=5,
        models=('persistence', 'lssvr', 'rfr', 'gbm'),
        grid=HyperGrid(-1, 1, 1),
        kernel_train_rows=200,
        rfr_trees=10,
        gbm_trees=30,
        output_dir=str(tmp_path / 'out'),
        report_timing=False,
    )
