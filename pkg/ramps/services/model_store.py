"""
JSON model records for the rampcast application.

Every trained model serializes to

    {"format": "rampcast-model", "version": 1, "kind": <kind>, "model": {...}, "meta": {...}}

where kind is one of 'svr', 'tree', 'forest', 'gbm' or 'persistence'.
Coefficient vectors are stored as plain lists; floats survive the
round-trip exactly because json writes repr().
"""

import json
import logging
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..exceptions import ConfigError
from .ensembles import ForestModel, GbmModel, RegressionTree
from .svr import Kernel, SvrModel

# Set up logging
logger = logging.getLogger(__name__)

RECORD_FORMAT = 'rampcast-model'
RECORD_VERSION = 1


class PersistenceModel:
    """Stateless persistence baseline, stored so `predict` treats it like any model."""

    def __init__(self, mode: str):
        self.mode = mode

    def __eq__(self, other):
        return isinstance(other, PersistenceModel) and other.mode == self.mode

    def __repr__(self):
        return f'PersistenceModel(mode={self.mode!r})'


def _array(values) -> list:
    return np.asarray(values, dtype=np.float64).tolist()


def _tree_to_dict(tree: RegressionTree) -> Dict[str, Any]:
    return {
        'feature': tree.feature.tolist(),
        'threshold': _array(tree.threshold),
        'left': tree.left.tolist(),
        'right': tree.right.tolist(),
        'value': _array(tree.value),
        'n_features': tree.n_features,
        'max_depth': tree.max_depth,
        'min_leaf': tree.min_leaf,
    }


def _tree_from_dict(data: Dict[str, Any]) -> RegressionTree:
    return RegressionTree(
        feature=np.asarray(data['feature'], dtype=int),
        threshold=np.asarray(data['threshold'], dtype=np.float64),
        left=np.asarray(data['left'], dtype=int),
        right=np.asarray(data['right'], dtype=int),
        value=np.asarray(data['value'], dtype=np.float64),
        n_features=int(data['n_features']),
        max_depth=data['max_depth'],
        min_leaf=int(data['min_leaf']),
    )


def to_record(model, meta: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Convert a trained model into a JSON-ready record."""
    if isinstance(model, SvrModel):
        kind = 'svr'
        body = {
            'variant': model.variant,
            'kernel': model.kernel.to_dict(),
            'support_data': np.asarray(model.support_data).tolist(),
            'weights': [_array(w) for w in model.weights],
            'biases': [float(b) for b in model.biases],
            'x_mean': _array(model.x_mean),
            'x_scale': _array(model.x_scale),
            'hyper': dict(model.hyper),
        }
    elif isinstance(model, RegressionTree):
        kind, body = 'tree', _tree_to_dict(model)
    elif isinstance(model, ForestModel):
        kind = 'forest'
        body = {
            'trees': [_tree_to_dict(t) for t in model.trees],
            'mtry': model.mtry,
            'seed': model.seed,
            'bootstrap': model.bootstrap,
        }
    elif isinstance(model, GbmModel):
        kind = 'gbm'
        body = {
            'f0': model.f0,
            'stages': [_tree_to_dict(t) for t in model.stages],
            'eta': model.eta,
            'loss': model.loss,
            'n_features': model.n_features,
        }
    elif isinstance(model, PersistenceModel):
        kind, body = 'persistence', {'mode': model.mode}
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return {
        'format': RECORD_FORMAT,
        'version': RECORD_VERSION,
        'kind': kind,
        'model': body,
        'meta': dict(meta or {}),
    }


def from_record(record: Dict[str, Any]) -> Tuple[Any, Dict[str, Any]]:
    """
    Rebuild a model from its record.

    Returns:
        (model, meta)

    Raises:
        ConfigError: if the record has the wrong format tag, version or kind
    """
    if record.get('format') != RECORD_FORMAT:
        raise ConfigError(f"not a rampcast model record (format={record.get('format')!r})", key='format')
    if record.get('version') != RECORD_VERSION:
        raise ConfigError(f"unsupported model record version {record.get('version')!r}", key='version')

    kind = record.get('kind')
    body = record['model']
    if kind == 'svr':
        model = SvrModel(
            variant=body['variant'],
            kernel=Kernel(**body['kernel']),
            support_data=np.asarray(body['support_data'], dtype=np.float64),
            weights=tuple(np.asarray(w, dtype=np.float64) for w in body['weights']),
            biases=tuple(float(b) for b in body['biases']),
            x_mean=np.asarray(body['x_mean'], dtype=np.float64),
            x_scale=np.asarray(body['x_scale'], dtype=np.float64),
            hyper=dict(body['hyper']),
        )
    elif kind == 'tree':
        model = _tree_from_dict(body)
    elif kind == 'forest':
        model = ForestModel(
            trees=tuple(_tree_from_dict(t) for t in body['trees']),
            mtry=int(body['mtry']),
            seed=int(body['seed']),
            bootstrap=bool(body['bootstrap']),
        )
    elif kind == 'gbm':
        model = GbmModel(
            f0=float(body['f0']),
            stages=tuple(_tree_from_dict(t) for t in body['stages']),
            eta=float(body['eta']),
            loss=body['loss'],
            n_features=int(body['n_features']),
        )
    elif kind == 'persistence':
        model = PersistenceModel(body['mode'])
    else:
        raise ConfigError(f"unknown model kind {kind!r}", key='kind')
    return model, dict(record.get('meta', {}))


def save_model(model, path: str, meta: Optional[Dict[str, Any]] = None) -> None:
    record = to_record(model, meta)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(record, handle)
        handle.write('\n')
    logger.info(f"Saved {record['kind']} model to {path}")


def load_model(path: str) -> Tuple[Any, Dict[str, Any]]:
    """Load a model record from disk; returns (model, meta)."""
    try:
        with open(path, encoding='utf-8') as handle:
            record = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}", key='format') from exc
    model, meta = from_record(record)
    logger.debug(f"Loaded {record['kind']} model from {path}")
    return model, meta
