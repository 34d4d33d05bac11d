"""
Tests for saving and restoring trained models.
"""
import json

import numpy as np
import pytest

from ramps.exceptions import ConfigError
from ramps.services.ensembles import fit_gbm, fit_rfr, fit_tree, predict_forest, predict_gbm, predict_tree
from ramps.services.model_store import (
    RECORD_FORMAT,
    PersistenceModel,
    from_record,
    load_model,
    save_model,
    to_record,
)
from ramps.services.svr import EPS_TSVR, LSSVR, Kernel, fit_variant, predict


@pytest.fixture
def data(rng):
    X = rng.normal(size=(40, 3))
    y = X[:, 0] - 2.0 * X[:, 1] + rng.normal(0.0, 0.05, size=40)
    return X, y


@pytest.mark.parametrize('variant', [LSSVR, EPS_TSVR])
def test_svr_predictions_survive_a_file_round_trip(tmp_path, data, variant):
    X, y = data
    model = fit_variant(variant, X, y, Kernel('rbf', 1.3), 2.0)
    path = tmp_path / 'model.json'
    save_model(model, str(path), meta={'model_id': variant, 'train_end': 40})

    restored, meta = load_model(str(path))
    np.testing.assert_array_equal(predict(restored, X), predict(model, X))
    assert restored.hyper == model.hyper
    assert meta == {'model_id': variant, 'train_end': 40}


def test_tree_models_survive_a_record_round_trip(data):
    X, y = data
    tree = fit_tree(X, y, max_depth=4)
    forest = fit_rfr(X, y, n_trees=3, seed=5)
    gbm = fit_gbm(X, y, n_trees=10)

    for model, predictor in ((tree, predict_tree), (forest, predict_forest), (gbm, predict_gbm)):
        record = json.loads(json.dumps(to_record(model)))
        restored, _ = from_record(record)
        np.testing.assert_array_equal(predictor(restored, X), predictor(model, X))


def test_persistence_model_record():
    record = to_record(PersistenceModel('mean_of_two'))
    assert record['kind'] == 'persistence'
    assert from_record(record)[0] == PersistenceModel('mean_of_two')


@pytest.mark.parametrize('change, key', [
    ({'format': 'pickle'}, 'format'),
    ({'version': 99}, 'version'),
    ({'kind': 'neural_net'}, 'kind'),
])
def test_bad_records_are_rejected(change, key):
    record = {**to_record(PersistenceModel('last')), **change}
    with pytest.raises(ConfigError) as excinfo:
        from_record(record)
    assert excinfo.value.key == key


def test_invalid_json_file(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"format": "' + RECORD_FORMAT)
    with pytest.raises(ConfigError):
        load_model(str(path))


def test_unknown_object_cannot_be_saved():
    with pytest.raises(TypeError):
        to_record(object())
