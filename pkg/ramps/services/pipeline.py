"""
Experiment pipeline for the rampcast application.

This module orchestrates the forecasting protocol per dataset:
1. Hub-height transform and power conversion
2. Chronological 80/20 split
3. Wavelet feature construction (full-series or causal)
4. Per-model grid search, fit and test-window prediction (timed)
5. Speed metrics, ramp errors and log energy entropy
6. Report, band, prediction, ramp and entropy CSV artifacts

Created on: October 13, 2025
"""

from dataclasses import dataclass, field
import logging
import math
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed
import numpy as np
import pandas as pd

from ..exceptions import DomainError, RampcastError, SearchError, ShapeError, SizeError
from . import svr
from .atmos import TurbineSpec, detect_ramps, log_law_transform, power_curve
from .data_io import WindSeries, iso_timestamps, load_csv, split_index, synth_series
from .ensembles import (
    ForestModel,
    GbmModel,
    first_forecast_index,
    fit_gbm,
    fit_rfr,
    persistence_forecast,
    predict_forest,
    predict_gbm,
)
from .evalx import EvaluationReport, metrics, ramp_errors, rmse, timed, write_report
from .experiment_config import (
    DECOMPOSITION_CAUSAL,
    KERNEL_MODELS,
    DatasetSpec,
    ExperimentConfig,
    HyperGrid,
)
from .model_store import PersistenceModel
from .sigproc import DEFAULT_LEVELS, bands_frame, dwt_decompose, emd_decompose, log_energy_entropy

# Set up logging
logger = logging.getLogger(__name__)

VALIDATION_FRACTION = 0.25


# ============================================
# 1. FEATURES
# ============================================

@dataclass(frozen=True)
class FeatureMatrix:
    """
    Supervised rows for one-step-ahead speed forecasting.

    Attributes:
        rows (np.ndarray): band values [A5, D1, ..., D5] at timestep t
        targets (np.ndarray): speed at t + 1
        index_map (np.ndarray): source timestep t of each row
        columns (tuple[str]): band names
    """

    rows: np.ndarray
    targets: np.ndarray
    index_map: np.ndarray
    columns: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.rows) != len(self.targets) or len(self.rows) != len(self.index_map):
            raise ShapeError("feature rows, targets and index map must have equal length")

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def X(self) -> np.ndarray:
        return self.rows

    @property
    def y(self) -> np.ndarray:
        return self.targets

    def select(self, rows: Union[slice, np.ndarray]) -> 'FeatureMatrix':
        return FeatureMatrix(self.rows[rows], self.targets[rows], self.index_map[rows], self.columns)

    def tail(self, count: int) -> 'FeatureMatrix':
        """Most recent `count` rows (all rows when count is 0 or larger than the matrix)."""
        if count <= 0 or count >= len(self):
            return self
        return self.select(slice(len(self) - count, None))


def _values(series: Union[WindSeries, Sequence[float]]) -> np.ndarray:
    return series.values if isinstance(series, WindSeries) else np.asarray(series, dtype=np.float64)


def build_features(series: Union[WindSeries, Sequence[float]], levels: int = DEFAULT_LEVELS) -> FeatureMatrix:
    """
    Decompose the whole series once and pair each timestep's bands with the next speed.

    Args:
        series: wind speed series (long enough for a `levels`-deep db4 DWT)
        levels (int): decomposition depth

    Returns:
        FeatureMatrix: len(series) - 1 rows of levels + 1 band columns

    Raises:
        SizeError: if the series is too short to decompose
    """
    values = _values(series)
    bands = dwt_decompose(values, levels)
    return FeatureMatrix(
        rows=bands.matrix()[:-1],
        targets=values[1:].copy(),
        index_map=np.arange(len(values) - 1),
        columns=tuple(bands.column_names()),
    )


def build_causal_features(
    series: Union[WindSeries, Sequence[float]],
    train_end: int,
    levels: int = DEFAULT_LEVELS,
) -> Tuple[FeatureMatrix, FeatureMatrix]:
    """
    Features that never look past the forecast origin.

    Training rows come from decomposing s(0..train_end-1) only. Test row t
    (t >= train_end - 1) takes the last band values of the decomposition
    of the history s(0..t).

    Returns:
        (train, test) feature matrices
    """
    values = _values(series)
    if not 2 <= train_end < len(values):
        raise SizeError(f"training end {train_end} must lie in [2, {len(values) - 1}]")
    train_bands = dwt_decompose(values[:train_end], levels)
    columns = tuple(train_bands.column_names())
    train = FeatureMatrix(
        rows=train_bands.matrix()[:-1],
        targets=values[1:train_end].copy(),
        index_map=np.arange(train_end - 1),
        columns=columns,
    )
    origins = np.arange(train_end - 1, len(values) - 1)
    rows = np.array([dwt_decompose(values[:t + 1], levels).matrix()[-1] for t in origins])
    test = FeatureMatrix(rows=rows, targets=values[origins + 1].copy(), index_map=origins, columns=columns)
    return train, test


def split_features(features: FeatureMatrix, train_end: int) -> Tuple[FeatureMatrix, FeatureMatrix]:
    """Rows whose target lies before train_end train; the rest test."""
    is_train = features.index_map + 1 < train_end
    return features.select(is_train), features.select(~is_train)


# ============================================
# 2. GRID SEARCH
# ============================================

@dataclass(frozen=True)
class GridSearchResult:
    """Winning (sigma, C) pair and the search record."""

    sigma: float
    C: float
    validation_rmse: float
    candidates: int
    scores: Tuple[Tuple[float, float, float], ...] = ()
    failures: Tuple[str, ...] = ()


def _score_candidate(variant, fit_rows, val_rows, sigma, C, eps, tol, max_iter):
    try:
        model = svr.fit_variant(variant, fit_rows.X, fit_rows.y, svr.Kernel('rbf', sigma), C, eps, tol, max_iter)
        score = rmse(val_rows.y, svr.predict(model, val_rows.X))
    except (RampcastError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return sigma, C, None, f"sigma={sigma:g}, C={C:g}: {type(exc).__name__}: {exc}"
    if not math.isfinite(score):
        return sigma, C, None, f"sigma={sigma:g}, C={C:g}: non-finite validation RMSE"
    return sigma, C, score, None


def grid_search(
    train: FeatureMatrix,
    variant: str,
    grid: Union[HyperGrid, Sequence[Tuple[float, float]]],
    eps: float = svr.DEFAULT_EPS,
    tol: float = svr.DEFAULT_TOL,
    max_iter: int = svr.DEFAULT_MAX_ITER,
    n_jobs: int = 1,
) -> GridSearchResult:
    """
    Choose the RBF bandwidth and cost of a kernel model on a chronological holdout.

    The last 25% of the training rows validate; the rest fit. The pair with
    the lowest validation RMSE wins, ties going to the smaller C and then
    the smaller sigma.

    Args:
        train (FeatureMatrix): training rows in time order
        variant (str): eps_svr, lssvr, tsvr or eps_tsvr
        grid: HyperGrid or explicit (sigma, C) pairs
        eps (float): insensitive margin for the epsilon models
        tol (float), max_iter (int): solver controls
        n_jobs (int): joblib workers over candidates

    Returns:
        GridSearchResult: the winning pair

    Raises:
        SizeError: if the training rows cannot be split into fit/validation parts
        SearchError: if every candidate failed
    """
    pairs = grid.pairs() if isinstance(grid, HyperGrid) else [tuple(p) for p in grid]
    if not pairs:
        raise DomainError("hyperparameter grid is empty")
    holdout = max(1, int(math.floor(len(train) * VALIDATION_FRACTION)))
    if len(train) - holdout < 2:
        raise SizeError(f"{len(train)} training rows are too few for a fit/validation split")
    fit_rows = train.select(slice(0, len(train) - holdout))
    val_rows = train.select(slice(len(train) - holdout, None))

    logger.debug(f"Grid search {variant}: {len(pairs)} candidates, {len(fit_rows)} fit / {len(val_rows)} validation rows")
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_score_candidate)(variant, fit_rows, val_rows, sigma, C, eps, tol, max_iter)
        for sigma, C in pairs
    )

    scores = [(sigma, C, score) for sigma, C, score, _ in outcomes if score is not None]
    failures = [failure for *_, failure in outcomes if failure is not None]
    for sigma, C, score in scores:
        logger.debug(f"  {variant} sigma={sigma:g} C={C:g}: validation RMSE {score:.6f}")
    if not scores:
        raise SearchError(f"all {len(pairs)} {variant} candidates failed", failures)

    sigma, C, best = min(scores, key=lambda s: (s[2], s[1], s[0]))
    if failures:
        logger.warning(f"{len(failures)} of {len(pairs)} {variant} candidates failed; first: {failures[0]}")
    logger.info(f"Grid search {variant}: sigma={sigma:g}, C={C:g}, validation RMSE={best:.6f}")
    return GridSearchResult(sigma, C, best, len(pairs), tuple(scores), tuple(failures))


# ============================================
# 3. MODEL FITTING / FORECASTING
# ============================================

def fit_forecaster(model_id: str, train: FeatureMatrix, cfg: ExperimentConfig) -> Tuple[Any, Dict[str, Any]]:
    """
    Fit one of the seven models on training rows.

    Returns:
        (model, hyper) where hyper records the chosen hyperparameters
    """
    if model_id == 'persistence':
        return PersistenceModel(cfg.persistence_mode), {'mode': cfg.persistence_mode}

    if model_id in KERNEL_MODELS:
        rows = train.tail(cfg.kernel_train_rows)
        search = grid_search(
            rows, model_id, cfg.grid, eps=cfg.eps, tol=cfg.solver_tol,
            max_iter=cfg.solver_max_iter, n_jobs=cfg.threads,
        )
        model = svr.fit_variant(
            model_id, rows.X, rows.y, svr.Kernel('rbf', search.sigma), search.C,
            eps=cfg.eps, tol=cfg.solver_tol, max_iter=cfg.solver_max_iter,
        )
        hyper = {
            'sigma': search.sigma,
            'C': search.C,
            'eps': cfg.eps,
            'validation_rmse': search.validation_rmse,
            'train_rows': len(rows),
        }
        return model, hyper

    if model_id == 'rfr':
        model = fit_rfr(
            train.X, train.y, n_trees=cfg.rfr_trees, mtry=cfg.rfr_mtry,
            seed=cfg.seed, n_jobs=cfg.threads,
        )
        return model, {'n_trees': cfg.rfr_trees, 'mtry': model.mtry, 'seed': cfg.seed}

    if model_id == 'gbm':
        model = fit_gbm(
            train.X, train.y, n_trees=cfg.gbm_trees, eta=cfg.gbm_eta,
            max_depth=cfg.gbm_max_depth, min_leaf=cfg.gbm_min_leaf, loss=cfg.gbm_loss,
        )
        return model, {
            'n_trees': cfg.gbm_trees, 'eta': cfg.gbm_eta, 'max_depth': cfg.gbm_max_depth,
            'min_leaf': cfg.gbm_min_leaf, 'loss': cfg.gbm_loss,
        }

    raise DomainError(f"unknown model {model_id!r}")


def forecast(model: Any, features: FeatureMatrix, values: np.ndarray) -> np.ndarray:
    """
    Predict s(t + 1) for every feature row.

    The persistence model ignores the features and reads the series itself
    at each row's source timestep; rows too early for its mode fall back
    to the last value.
    """
    if isinstance(model, PersistenceModel):
        origins = features.index_map
        first = first_forecast_index(model.mode)
        if len(values) < 2:
            raise SizeError("persistence needs at least 2 samples")
        ahead = persistence_forecast(values, model.mode)
        return np.where(origins >= first, ahead[np.maximum(origins - first, 0)], values[origins])
    if isinstance(model, svr.SvrModel):
        return svr.predict(model, features.X)
    if isinstance(model, ForestModel):
        return predict_forest(model, features.X)
    if isinstance(model, GbmModel):
        return predict_gbm(model, features.X)
    raise DomainError(f"cannot forecast with {type(model).__name__}")


# ============================================
# 4. ENTROPY ANALYSIS
# ============================================

def ramp_signal(predicted_speed, turbine: TurbineSpec) -> np.ndarray:
    """Per-unit ramp signal (P(t + 1) - P(t)) / P_nom of a speed series."""
    speed = np.clip(np.asarray(predicted_speed, dtype=np.float64), 0.0, None)
    return np.diff(power_curve(speed, turbine)) / turbine.nominal_power


def entropy_analysis(predicted_speed, turbine: TurbineSpec) -> Dict[str, float]:
    """
    Log energy entropy of the low-frequency part of a predicted ramp signal.

    The ramp signal is decomposed by the 5-level db4 DWT (A5 band) and by
    EMD (last IMF plus residue).

    Returns:
        dict: {'wt_entropy': float, 'emd_entropy': float}

    Raises:
        SizeError: if the ramp signal is too short for the DWT
    """
    signal = ramp_signal(predicted_speed, turbine)
    wt_low = dwt_decompose(signal).approximation
    emd_low = emd_decompose(signal).low_frequency()
    return {
        'wt_entropy': log_energy_entropy(wt_low),
        'emd_entropy': log_energy_entropy(emd_low),
    }


# ============================================
# 5. EXPERIMENT
# ============================================

@dataclass
class DatasetResult:
    """Everything one dataset of a run produced."""

    label: str
    test_timestamps: np.ndarray
    actual_speed: np.ndarray
    actual_power: np.ndarray
    events: list
    bands: pd.DataFrame
    reports: List[EvaluationReport] = field(default_factory=list)
    predictions: Dict[str, np.ndarray] = field(default_factory=dict)
    hyper: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    entropies: Dict[str, Dict[str, Optional[float]]] = field(default_factory=dict)


@dataclass
class ExperimentResult:
    """Results of all datasets plus the paths of written artifacts."""

    datasets: List[DatasetResult] = field(default_factory=list)
    paths: Dict[str, str] = field(default_factory=dict)

    @property
    def reports(self) -> List[EvaluationReport]:
        return [report for dataset in self.datasets for report in dataset.reports]


def acquire_series(cfg: ExperimentConfig, dataset: DatasetSpec, index: int = 0) -> WindSeries:
    """Load the dataset's CSV, or synthesize it from its site (seed offset by dataset index)."""
    if dataset.path:
        return load_csv(dataset.path, cfg.dt, height=cfg.data_height)
    if dataset.site is None:
        raise DomainError(f"dataset {dataset.label!r} has neither a data file nor a site")
    return synth_series(dataset.site, cfg.n, dt=cfg.dt, seed=cfg.seed + index, height=cfg.data_height)


def run_dataset(cfg: ExperimentConfig, dataset: DatasetSpec, series: WindSeries) -> DatasetResult:
    """Run the protocol on one series; per-model failures become error-tagged rows."""
    turbine = cfg.turbine
    label = dataset.label

    logger.info("STEP 1: Transforming speeds to hub height...")
    hub = log_law_transform(series, cfg.roughness_for(dataset), turbine.hub_height)
    values = hub.values
    logger.info(f"✓ {len(hub)} samples at {turbine.hub_height} m, mean {values.mean():.3f} m/s")

    logger.info("STEP 2: Converting to power and splitting chronologically...")
    power = power_curve(values, turbine)
    split = split_index(len(hub), cfg.split_frac)
    logger.info(f"✓ Train {split.train_end} / test {split.test_size} samples")

    logger.info(f"STEP 3: Building wavelet features ({cfg.decomposition} decomposition)...")
    if cfg.decomposition == DECOMPOSITION_CAUSAL:
        train, test = build_causal_features(values, split.train_end)
        band_source = dwt_decompose(values[:split.train_end])
        band_stamps = hub.timestamps[:split.train_end]
    else:
        train, test = split_features(build_features(values), split.train_end)
        band_source = dwt_decompose(values)
        band_stamps = hub.timestamps
    bands = bands_frame(band_source, iso_timestamps(band_stamps))
    logger.info(f"✓ {len(train)} training rows, {len(test)} test rows, columns {list(train.columns)}")

    logger.info("STEP 4: Labeling actual ramp events in the test window...")
    actual_speed = values[split.train_end:]
    actual_power = power[split.train_end:]
    events = detect_ramps(actual_power, cfg.threshold_frac, turbine)
    logger.info(f"✓ {len(events)} ramp events at {cfg.threshold_frac:.0%} of nominal power")

    result = DatasetResult(
        label=label,
        test_timestamps=hub.timestamps[split.train_end:],
        actual_speed=actual_speed,
        actual_power=actual_power,
        events=events,
        bands=bands,
    )

    logger.info(f"STEP 5: Training and evaluating {len(cfg.models)} model(s)...")
    for idx, model_id in enumerate(cfg.models, 1):
        try:
            def train_and_predict():
                model, hyper = fit_forecaster(model_id, train, cfg)
                return forecast(model, test, values), hyper

            (predicted, hyper), seconds = timed(train_and_predict)
            if not np.all(np.isfinite(predicted)):
                raise DomainError("model produced non-finite predictions")
            report = metrics(actual_speed, predicted, model_id=model_id, u2_variant=cfg.u2_variant)
            predicted_power = power_curve(np.clip(predicted, 0.0, None), turbine)
            report.r_up, report.r_down = ramp_errors(actual_power, predicted_power, events, turbine.nominal_power)
            report.cpu_time = seconds
            report.dataset = label
            result.predictions[model_id] = predicted
            result.hyper[model_id] = hyper
            logger.info(
                f"  [{idx}/{len(cfg.models)}] {model_id}: RMSE={report.rmse:.4f} m/s in {seconds:.2f} s"
            )
        except Exception as e:
            logger.error(f"  [{idx}/{len(cfg.models)}] {model_id} failed: {type(e).__name__}: {e}", exc_info=True)
            report = EvaluationReport(model_id=model_id, dataset=label, error=f"{type(e).__name__}: {e}")
        result.reports.append(report)

    logger.info("STEP 6: Log energy entropy of predicted ramp signals...")
    for model_id, predicted in result.predictions.items():
        try:
            result.entropies[model_id] = entropy_analysis(predicted, turbine)
        except RampcastError as e:
            logger.warning(f"Entropy analysis skipped for {model_id}: {e}")
            result.entropies[model_id] = {'wt_entropy': None, 'emd_entropy': None}
            continue
        wt, emd = result.entropies[model_id]['wt_entropy'], result.entropies[model_id]['emd_entropy']
        relation = 'exceeds' if wt > emd else 'does not exceed'
        logger.info(f"  {model_id}: WT entropy {wt:.2f} {relation} EMD entropy {emd:.2f}")

    return result


def write_artifacts(result: ExperimentResult, cfg: ExperimentConfig, output_dir: str) -> Dict[str, str]:
    """Write report.csv, bands.csv, predictions.csv, ramps.csv, entropy.csv and optional charts."""
    os.makedirs(output_dir, exist_ok=True)
    paths = {name: os.path.join(output_dir, f'{name}.csv') for name in ('report', 'bands', 'predictions', 'ramps', 'entropy')}

    write_report(result.reports, paths['report'], include_timing=cfg.report_timing)

    bands = pd.concat([d.bands.assign(dataset=d.label) for d in result.datasets], ignore_index=True)
    bands = bands[['dataset'] + [c for c in bands.columns if c != 'dataset']]
    bands.to_csv(paths['bands'], index=False, lineterminator='\n')

    frames, ramp_rows, entropy_rows = [], [], []
    for d in result.datasets:
        frame = pd.DataFrame({
            'dataset': d.label,
            'timestamp': iso_timestamps(d.test_timestamps),
            'actual': d.actual_speed,
        })
        for model_id in cfg.models:
            frame[model_id] = d.predictions.get(model_id, np.full(len(frame), np.nan))
        frames.append(frame)
        stamps = iso_timestamps(d.test_timestamps)
        for event in d.events:
            ramp_rows.append({
                'dataset': d.label, 'index': event.index, 'timestamp': stamps[event.index],
                'direction': event.direction, 'magnitude_w': event.magnitude,
            })
        for model_id, values in d.entropies.items():
            entropy_rows.append({'dataset': d.label, 'model': model_id, **values})

    pd.concat(frames, ignore_index=True).to_csv(paths['predictions'], index=False, na_rep='NA', lineterminator='\n')
    pd.DataFrame(ramp_rows, columns=['dataset', 'index', 'timestamp', 'direction', 'magnitude_w']).to_csv(
        paths['ramps'], index=False, lineterminator='\n'
    )
    pd.DataFrame(entropy_rows, columns=['dataset', 'model', 'wt_entropy', 'emd_entropy']).to_csv(
        paths['entropy'], index=False, na_rep='NA', lineterminator='\n'
    )

    if cfg.chart:
        from .charts import plot_predictions

        for d in result.datasets:
            chart_path = os.path.join(output_dir, f'chart_{d.label}.svg')
            plot_predictions(d.test_timestamps, d.actual_speed, d.predictions, chart_path, title=f'{cfg.name}: {d.label}')
            paths[f'chart_{d.label}'] = chart_path

    logger.info(f"Artifacts written to {output_dir}")
    return paths


def run_experiment(
    cfg: ExperimentConfig,
    data: Optional[WindSeries] = None,
    output_dir: Optional[str] = None,
    write: bool = True,
) -> ExperimentResult:
    """
    Run the full protocol on every dataset of the configuration.

    Args:
        cfg (ExperimentConfig): the experiment
        data (WindSeries | None): series to use instead of loading or
            synthesizing the (single) configured dataset
        output_dir (str | None): artifact directory, default cfg.output_dir
        write (bool): write CSV artifacts

    Returns:
        ExperimentResult: per-dataset results and artifact paths
    """
    datasets = list(cfg.datasets) or [DatasetSpec(cfg.name)]
    if data is not None and len(datasets) > 1:
        raise DomainError("an explicit series can only replace a single configured dataset")

    logger.info("=" * 60)
    logger.info(f"Starting experiment {cfg.name!r}: {len(datasets)} dataset(s), models {list(cfg.models)}")
    logger.info("=" * 60)

    result = ExperimentResult()
    for index, dataset in enumerate(datasets):
        logger.info(f"Dataset {index + 1}/{len(datasets)}: {dataset.label}")
        series = data if data is not None else acquire_series(cfg, dataset, index)
        result.datasets.append(run_dataset(cfg, dataset, series))

    if write:
        result.paths = write_artifacts(result, cfg, output_dir or cfg.output_dir)

    failed = [r for r in result.reports if r.failed]
    logger.info("=" * 60)
    logger.info(f"✓ Experiment {cfg.name!r} finished: {len(result.reports)} report rows, {len(failed)} failed")
    logger.info("=" * 60)
    return result
