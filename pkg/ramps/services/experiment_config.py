"""
Experiment configuration for `rampcast run`.

Config files are flat `key = value` text read with python-decouple's
RepositoryEnv; values are cast with decouple (`Csv`, bool casting) the same
way config/settings.py reads the environment, but the process environment
is never consulted. Blank lines and lines starting with '#' are ignored.

Example file:

    name = amrumbank-march
    site = amrumbank
    n = 4464
    seed = 7
    models = persistence,eps_svr,lssvr,tsvr,eps_tsvr,rfr,gbm
    grid_step = 5
"""

from dataclasses import dataclass, field, replace
import logging
import math
import os
from typing import Any, Dict, List, Mapping, Optional, Tuple

from decouple import Config, Csv, RepositoryEnv, Undefined, UndefinedValueError, undefined

from ..conf import rampcast_setting
from ..exceptions import ConfigError, DomainError
from .atmos import TurbineSpec
from .data_io import SiteSpec, get_site
from .ensembles import GBM_LOSSES, PERSISTENCE_MODES, PERSISTENCE_TWO_WINDOW, SQUARED_ERROR
from .evalx import U2_PRINTED, U2_VARIANTS

# Set up logging
logger = logging.getLogger(__name__)

MODEL_NAMES = ('persistence', 'eps_svr', 'lssvr', 'tsvr', 'eps_tsvr', 'rfr', 'gbm')
KERNEL_MODELS = ('eps_svr', 'lssvr', 'tsvr', 'eps_tsvr')

DECOMPOSITION_FULL = 'full'
DECOMPOSITION_CAUSAL = 'causal'
DECOMPOSITION_MODES = (DECOMPOSITION_FULL, DECOMPOSITION_CAUSAL)

KNOWN_KEYS = frozenset({
    'name', 'site', 'sites', 'data', 'data_height', 'n', 'dt', 'seed',
    'hub_height', 'roughness_length', 'rotor_diameter', 'rated_speed', 'cut_in', 'cut_out',
    'air_density', 'cp', 'models', 'threshold_frac', 'split_frac',
    'grid_min_exp', 'grid_max_exp', 'grid_step', 'eps', 'solver_tol', 'solver_max_iter',
    'kernel_train_rows', 'rfr_trees', 'rfr_mtry', 'gbm_trees', 'gbm_eta', 'gbm_max_depth',
    'gbm_min_leaf', 'gbm_loss', 'persistence_mode', 'decomposition', 'u2_variant',
    'output_dir', 'chart', 'report_timing', 'threads',
})


@dataclass(frozen=True)
class HyperGrid:
    """
    Powers-of-two grid over RBF bandwidth sigma and cost C.

    Attributes:
        min_exp (int): smallest exponent
        max_exp (int): largest exponent
        step (int): exponent stride
    """

    min_exp: int = -10
    max_exp: int = 10
    step: int = 5

    def __post_init__(self):
        if self.step < 1 or self.min_exp > self.max_exp:
            raise ConfigError(
                f"grid exponents must satisfy min <= max with step >= 1, got "
                f"{self.min_exp}..{self.max_exp} step {self.step}",
                key='grid_step',
            )

    def values(self) -> List[float]:
        return [2.0 ** k for k in range(self.min_exp, self.max_exp + 1, self.step)]

    def pairs(self) -> List[Tuple[float, float]]:
        """(sigma, C) candidates, ordered by C then sigma."""
        values = self.values()
        return [(sigma, C) for C in values for sigma in values]


@dataclass(frozen=True)
class DatasetSpec:
    """One dataset of an experiment: a catalog site or a CSV file."""

    label: str
    site: Optional[SiteSpec] = None
    path: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything `run_experiment` needs.

    Defaults for the model sizes and solver settings come from the RAMPCAST
    settings dict when a field is not set in the file.
    """

    name: str = 'experiment'
    datasets: Tuple[DatasetSpec, ...] = ()
    data_height: float = 10.0
    n: int = 4464
    dt: int = 600
    seed: int = 0
    turbine: TurbineSpec = field(default_factory=TurbineSpec)
    roughness_length: Optional[float] = None
    models: Tuple[str, ...] = MODEL_NAMES
    threshold_frac: float = 0.10
    split_frac: float = 0.8
    grid: HyperGrid = field(default_factory=HyperGrid)
    eps: float = 0.01
    solver_tol: float = 1e-6
    solver_max_iter: int = 200000
    kernel_train_rows: int = 1000
    rfr_trees: int = 200
    rfr_mtry: Optional[int] = None
    gbm_trees: int = 500
    gbm_eta: float = 0.05
    gbm_max_depth: int = 3
    gbm_min_leaf: int = 5
    gbm_loss: str = SQUARED_ERROR
    persistence_mode: str = PERSISTENCE_TWO_WINDOW
    decomposition: str = DECOMPOSITION_FULL
    u2_variant: str = U2_PRINTED
    output_dir: str = 'rampcast_out'
    chart: bool = False
    report_timing: bool = True
    threads: int = 1

    def __post_init__(self):
        if not 0 < self.threshold_frac < 1:
            raise ConfigError(f"threshold_frac must lie in (0, 1), got {self.threshold_frac}", key='threshold_frac')
        if not 0 < self.split_frac < 1:
            raise ConfigError(f"split_frac must lie in (0, 1), got {self.split_frac}", key='split_frac')
        if not self.models:
            raise ConfigError("at least one model is required", key='models')
        unknown = [m for m in self.models if m not in MODEL_NAMES]
        if unknown:
            raise ConfigError(
                f"unknown model(s) {', '.join(unknown)}; choose from {', '.join(MODEL_NAMES)}", key='models'
            )
        for key, value, allowed in (
            ('gbm_loss', self.gbm_loss, GBM_LOSSES),
            ('persistence_mode', self.persistence_mode, PERSISTENCE_MODES),
            ('decomposition', self.decomposition, DECOMPOSITION_MODES),
            ('u2_variant', self.u2_variant, U2_VARIANTS),
        ):
            if value not in allowed:
                raise ConfigError(f"{key} must be one of {', '.join(allowed)}, got {value!r}", key=key)
        for key in ('n', 'dt', 'rfr_trees', 'gbm_trees', 'threads', 'solver_max_iter'):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1, got {getattr(self, key)}", key=key)
        if self.kernel_train_rows < 0:
            raise ConfigError("kernel_train_rows must be >= 0 (0 = all rows)", key='kernel_train_rows')
        if not 0 < self.gbm_eta <= 1:
            raise ConfigError(f"gbm_eta must lie in (0, 1], got {self.gbm_eta}", key='gbm_eta')
        if self.eps < 0 or self.solver_tol <= 0:
            raise ConfigError("eps must be >= 0 and solver_tol > 0", key='eps' if self.eps < 0 else 'solver_tol')

    @property
    def site(self) -> Optional[SiteSpec]:
        """Site of the first dataset."""
        return self.datasets[0].site if self.datasets else None

    def roughness_for(self, dataset: DatasetSpec) -> float:
        if self.roughness_length is not None:
            return self.roughness_length
        if dataset.site is not None:
            return dataset.site.roughness_length
        raise ConfigError(
            f"dataset {dataset.label!r} has no catalog site; set roughness_length", key='roughness_length'
        )

    def with_overrides(self, **changes) -> 'ExperimentConfig':
        return replace(self, **changes)


# ============================================
# PARSING
# ============================================

def _defaults() -> Dict[str, Any]:
    return {
        'solver_tol': rampcast_setting('SOLVER_TOL'),
        'solver_max_iter': rampcast_setting('SOLVER_MAX_ITER'),
        'kernel_train_rows': rampcast_setting('KERNEL_TRAIN_ROWS'),
        'rfr_trees': rampcast_setting('RFR_TREES'),
        'gbm_trees': rampcast_setting('GBM_TREES'),
        'gbm_eta': rampcast_setting('GBM_ETA'),
        'gbm_max_depth': rampcast_setting('GBM_MAX_DEPTH'),
        'gbm_min_leaf': rampcast_setting('GBM_MIN_LEAF'),
        'eps': rampcast_setting('DEFAULT_EPS'),
        'threshold_frac': rampcast_setting('RAMP_THRESHOLD'),
        'split_frac': rampcast_setting('SPLIT_FRAC'),
        'output_dir': str(rampcast_setting('OUTPUT_DIR')),
        'threads': int(rampcast_setting('THREADS')),
    }


class FileConfig(Config):
    """decouple Config that reads its repository only; os.environ never overrides a file key."""

    def get(self, option, default=undefined, cast=undefined):
        if option in self.repository:
            value = self.repository[option]
        elif isinstance(default, Undefined):
            raise UndefinedValueError(f"{option} not found and no default was given")
        else:
            value = default
        if isinstance(cast, Undefined):
            cast = self._cast_do_nothing
        elif cast is bool:
            cast = self._cast_boolean
        return cast(value)


def _optional_int(value: str) -> Optional[int]:
    return None if str(value).strip().lower() in ('', 'none', 'auto') else int(value)


def _optional_float(value: str) -> Optional[float]:
    return None if str(value).strip().lower() in ('', 'none') else float(value)


def experiment_config_from_mapping(values: Mapping[str, str], base_dir: str = '.') -> ExperimentConfig:
    """
    Build an ExperimentConfig from raw string values.

    Relative `data` and `output_dir` paths resolve against base_dir.

    Raises:
        ConfigError: on unknown keys, unparseable values or invalid settings
    """
    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}", key=unknown[0])

    config = FileConfig(dict(values))
    defaults = _defaults()

    def get(key, default, cast=str):
        try:
            return config(key, default=default, cast=cast)
        except (ValueError, TypeError, UndefinedValueError) as exc:
            raise ConfigError(f"invalid value for {key!r}: {exc}", key=key) from exc

    if 'site' in values and 'sites' in values:
        raise ConfigError("set either 'site' or 'sites', not both", key='sites')
    slugs = get('sites', '', Csv()) if 'sites' in values else get('site', '', Csv())
    data = get('data', '')

    try:
        sites = [get_site(slug) for slug in slugs]
    except ConfigError as exc:
        raise ConfigError(str(exc), key='sites' if 'sites' in values else 'site') from exc

    if data:
        path = data if os.path.isabs(data) else os.path.join(base_dir, data)
        if len(sites) > 1:
            raise ConfigError("a data file takes at most one site (for its roughness length)", key='sites')
        label = slugs[0] if slugs else os.path.splitext(os.path.basename(data))[0]
        datasets = (DatasetSpec(label, sites[0] if sites else None, path),)
    else:
        if not sites:
            raise ConfigError("set 'site', 'sites' or 'data'", key='site')
        datasets = tuple(DatasetSpec(slug.strip().lower(), site) for slug, site in zip(slugs, sites))

    try:
        turbine = TurbineSpec(
            rotor_diameter=get('rotor_diameter', 120.0, float),
            hub_height=get('hub_height', 90.0, float),
            rated_speed=get('rated_speed', 12.0, float),
            cut_in=get('cut_in', 3.0, float),
            cut_out=get('cut_out', 25.0, float),
            air_density=get('air_density', 1.225, float),
            cp=get('cp', 0.45, float),
        )
    except DomainError as exc:
        raise ConfigError(f"invalid turbine: {exc}", key='turbine') from exc

    output_dir = get('output_dir', defaults['output_dir'])
    if not os.path.isabs(output_dir):
        output_dir = os.path.join(base_dir, output_dir)

    models = tuple(dict.fromkeys(m.strip().lower() for m in get('models', ','.join(MODEL_NAMES), Csv()) if m.strip()))

    cfg = ExperimentConfig(
        name=get('name', 'experiment'),
        datasets=datasets,
        data_height=get('data_height', 10.0, float),
        n=get('n', 4464, int),
        dt=get('dt', 600, int),
        seed=get('seed', 0, int),
        turbine=turbine,
        roughness_length=get('roughness_length', '', _optional_float),
        models=models,
        threshold_frac=get('threshold_frac', defaults['threshold_frac'], float),
        split_frac=get('split_frac', defaults['split_frac'], float),
        grid=HyperGrid(
            get('grid_min_exp', -10, int),
            get('grid_max_exp', 10, int),
            get('grid_step', 5, int),
        ),
        eps=get('eps', defaults['eps'], float),
        solver_tol=get('solver_tol', defaults['solver_tol'], float),
        solver_max_iter=get('solver_max_iter', defaults['solver_max_iter'], int),
        kernel_train_rows=get('kernel_train_rows', defaults['kernel_train_rows'], int),
        rfr_trees=get('rfr_trees', defaults['rfr_trees'], int),
        rfr_mtry=get('rfr_mtry', 'auto', _optional_int),
        gbm_trees=get('gbm_trees', defaults['gbm_trees'], int),
        gbm_eta=get('gbm_eta', defaults['gbm_eta'], float),
        gbm_max_depth=get('gbm_max_depth', defaults['gbm_max_depth'], int),
        gbm_min_leaf=get('gbm_min_leaf', defaults['gbm_min_leaf'], int),
        gbm_loss=get('gbm_loss', SQUARED_ERROR),
        persistence_mode=get('persistence_mode', PERSISTENCE_TWO_WINDOW),
        decomposition=get('decomposition', DECOMPOSITION_FULL),
        u2_variant=get('u2_variant', U2_PRINTED),
        output_dir=output_dir,
        chart=get('chart', False, bool),
        report_timing=get('report_timing', True, bool),
        threads=get('threads', defaults['threads'], int),
    )
    if cfg.roughness_length is not None and not (cfg.roughness_length > 0 and math.isfinite(cfg.roughness_length)):
        raise ConfigError(f"roughness_length must be > 0, got {cfg.roughness_length}", key='roughness_length')
    return cfg


def load_experiment_config(path: str) -> ExperimentConfig:
    """
    Read an experiment configuration file.

    Raises:
        FileNotFoundError: if the file does not exist
        ConfigError: on invalid content
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"experiment config not found: {path}")
    repository = RepositoryEnv(path)
    cfg = experiment_config_from_mapping(repository.data, base_dir=os.path.dirname(os.path.abspath(path)))
    logger.info(
        f"Loaded experiment {cfg.name!r} from {path}: datasets={[d.label for d in cfg.datasets]}, "
        f"models={list(cfg.models)}, grid={len(cfg.grid.pairs())} pairs"
    )
    return cfg
