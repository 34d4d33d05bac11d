"""
Forecast evaluation for the rampcast application.

Provides:
- Speed error metrics: RMSE, NMSE, R^2, Theil U1 and Theil U2
- Ramp magnitude errors R^up / R^down in per-unit power
- timed(): wall-clock timing of a training closure
- Report CSV writer and console table in the result-table column order
"""

from dataclasses import asdict, dataclass
import logging
import math
import time
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..exceptions import DomainError, ShapeError
from .atmos import RAMP_DOWN, RAMP_UP, RampEvent

# Set up logging
logger = logging.getLogger(__name__)

U2_PRINTED = 'printed'
U2_PERSISTENCE = 'persistence'
U2_VARIANTS = (U2_PRINTED, U2_PERSISTENCE)

METRIC_FIELDS = ('rmse', 'nmse', 'r2', 'u1', 'u2', 'r_up', 'r_down', 'cpu_time')
REPORT_COLUMNS = ('dataset', 'model') + METRIC_FIELDS + ('error',)
TABLE_HEADERS = {
    'rmse': 'RMSE', 'nmse': 'NMSE', 'r2': 'R2', 'u1': 'U1', 'u2': 'U2',
    'r_up': 'R_up', 'r_down': 'R_down', 'cpu_time': 'CPU time',
}


@dataclass
class EvaluationReport:
    """
    One row of the result table.

    Metric fields are None where undefined (zero variance, zero actual
    values in the U2 range, no ramp events of that direction, or a failed
    model).

    Attributes:
        model_id (str): model label
        dataset (str): dataset label
        rmse (float | None): m/s
        nmse (float | None): dimensionless
        r2 (float | None): dimensionless, not clamped
        u1 (float | None): in [0, 1]
        u2 (float | None): dimensionless
        r_up (float | None): per-unit mean absolute ramp-up error
        r_down (float | None): per-unit mean absolute ramp-down error
        cpu_time (float | None): training + prediction seconds
        error (str): error tag when the model failed, else ''
    """

    model_id: str
    dataset: str = ''
    rmse: Optional[float] = None
    nmse: Optional[float] = None
    r2: Optional[float] = None
    u1: Optional[float] = None
    u2: Optional[float] = None
    r_up: Optional[float] = None
    r_down: Optional[float] = None
    cpu_time: Optional[float] = None
    error: str = ''

    @property
    def failed(self) -> bool:
        return bool(self.error)

    def as_row(self) -> dict:
        row = asdict(self)
        row['model'] = row.pop('model_id')
        return {column: row[column] for column in REPORT_COLUMNS}


# ============================================
# 1. SPEED METRICS
# ============================================

def _paired(actual, predicted) -> Tuple[np.ndarray, np.ndarray]:
    s = np.asarray(actual, dtype=np.float64)
    s_hat = np.asarray(predicted, dtype=np.float64)
    if s.ndim != 1 or s_hat.ndim != 1 or len(s) != len(s_hat):
        raise ShapeError(f"actual {s.shape} and predicted {s_hat.shape} must be equal-length 1-D series")
    if len(s) == 0:
        raise ShapeError("metrics need nonempty series")
    return s, s_hat


def rmse(actual, predicted) -> float:
    s, s_hat = _paired(actual, predicted)
    return math.sqrt(float(np.mean((s_hat - s) ** 2)))


def _spread(s: np.ndarray) -> float:
    spread = float(np.sum((s - s.mean()) ** 2))
    if spread == 0:
        raise DomainError("actual series has zero variance")
    return spread


def nmse(actual, predicted) -> float:
    """sum (s_hat - s)^2 / sum (s - mean(s))^2"""
    s, s_hat = _paired(actual, predicted)
    return float(np.sum((s_hat - s) ** 2)) / _spread(s)


def r_squared(actual, predicted) -> float:
    """
    Explained-variance ratio sum (s_hat - mean(s))^2 / sum (s - mean(s))^2.

    Can exceed 1 for over-dispersed forecasts; it is never clamped.
    """
    s, s_hat = _paired(actual, predicted)
    return float(np.sum((s_hat - s.mean()) ** 2)) / _spread(s)


def theil_u1(actual, predicted) -> float:
    s, s_hat = _paired(actual, predicted)
    scale = math.sqrt(float(np.mean(s ** 2))) + math.sqrt(float(np.mean(s_hat ** 2)))
    if scale == 0:
        raise DomainError("Theil U1 is undefined when both series are identically zero")
    return math.sqrt(float(np.mean((s_hat - s) ** 2))) / scale


def theil_u2(actual, predicted, variant: str = U2_PRINTED) -> float:
    """
    Theil U2 over consecutive pairs i -> i + 1.

    Numerator terms are (s[i+1] - s_hat[i+1]) / s[i]. The printed
    denominator terms are (s[i+1] - s_hat[i]) / s[i]; the persistence
    variant uses (s[i+1] - s[i]) / s[i].

    Raises:
        DomainError: if an actual value in the divisor range is zero, the
            series has a single sample or the denominator vanishes
    """
    if variant not in U2_VARIANTS:
        raise DomainError(f"unknown U2 variant {variant!r}; choose one of: {', '.join(U2_VARIANTS)}")
    s, s_hat = _paired(actual, predicted)
    if len(s) < 2:
        raise DomainError("Theil U2 needs at least two samples")
    base = s[:-1]
    if np.any(base == 0):
        raise DomainError("Theil U2 is undefined when an actual value in the divisor range is zero")
    numerator = np.sqrt(np.mean(((s[1:] - s_hat[1:]) / base) ** 2))
    reference = s_hat[:-1] if variant == U2_PRINTED else s[:-1]
    denominator = np.sqrt(np.mean(((s[1:] - reference) / base) ** 2))
    if denominator == 0:
        raise DomainError("Theil U2 denominator is zero")
    return float(numerator / denominator)


def _defined(name: str, func: Callable[[], float]) -> Optional[float]:
    try:
        return func()
    except DomainError as exc:
        logger.debug(f"{name} reported as NA: {exc}")
        return None


def metrics(
    actual,
    predicted,
    model_id: str = '',
    u2_variant: str = U2_PRINTED,
) -> EvaluationReport:
    """
    Compute the five speed metrics.

    Undefined metrics become None; the others are still computed.

    Raises:
        ShapeError: if the series lengths differ or are empty

    Example:
        >>> report = metrics([1.0, 2.0, 3.0], [2.0, 2.0, 2.0])
        >>> round(report.rmse, 4), report.r2, report.nmse
        (0.8165, 0.0, 1.0)
    """
    s, s_hat = _paired(actual, predicted)
    return EvaluationReport(
        model_id=model_id,
        rmse=rmse(s, s_hat),
        nmse=_defined('NMSE', lambda: nmse(s, s_hat)),
        r2=_defined('R2', lambda: r_squared(s, s_hat)),
        u1=_defined('U1', lambda: theil_u1(s, s_hat)),
        u2=_defined('U2', lambda: theil_u2(s, s_hat, u2_variant)),
    )


# ============================================
# 2. RAMP ERRORS
# ============================================

def ramp_errors(
    actual_power,
    predicted_power,
    events: Iterable[RampEvent],
    p_nom: float,
) -> Tuple[Optional[float], Optional[float]]:
    """
    Per-unit mean absolute ramp magnitude error at the actual event indices.

    For an event at index k, the actual ramp is P(k) - P(k-1) and the
    predicted ramp is P_hat(k) - P_hat(k-1). Each direction averages
    |predicted - actual| / p_nom over its events.

    Returns:
        (r_up, r_down): None for a direction without events

    Raises:
        ShapeError: if the power series lengths differ
        IndexError: if an event index lies outside [1, len - 1]
    """
    p = np.asarray(actual_power, dtype=np.float64)
    p_hat = np.asarray(predicted_power, dtype=np.float64)
    if p.shape != p_hat.shape or p.ndim != 1:
        raise ShapeError(f"actual {p.shape} and predicted {p_hat.shape} power must be equal-length 1-D series")
    if not p_nom > 0:
        raise DomainError(f"nominal power must be positive, got {p_nom}")

    errors = {RAMP_UP: [], RAMP_DOWN: []}
    for event in events:
        k = event.index
        if not 1 <= k < len(p):
            raise IndexError(f"ramp event index {k} outside [1, {len(p) - 1}]")
        actual_delta = p[k] - p[k - 1]
        predicted_delta = p_hat[k] - p_hat[k - 1]
        errors[event.direction].append(abs(predicted_delta - actual_delta) / p_nom)

    def mean_or_none(values: List[float]) -> Optional[float]:
        return float(np.mean(values)) if values else None

    return mean_or_none(errors[RAMP_UP]), mean_or_none(errors[RAMP_DOWN])


# ============================================
# 3. TIMING
# ============================================

def timed(func: Callable[..., Any], *args, **kwargs) -> Tuple[Any, float]:
    """Run func and return (result, elapsed seconds) on a monotonic clock."""
    start = time.perf_counter()
    result = func(*args, **kwargs)
    return result, max(time.perf_counter() - start, 0.0)


# ============================================
# 4. REPORT OUTPUT
# ============================================

def report_frame(reports: Sequence[EvaluationReport], include_timing: bool = True) -> pd.DataFrame:
    frame = pd.DataFrame([r.as_row() for r in reports], columns=list(REPORT_COLUMNS))
    if not include_timing:
        frame['cpu_time'] = None
    return frame


def write_report(reports: Sequence[EvaluationReport], path: str, include_timing: bool = True) -> None:
    """
    Write report rows as CSV.

    Undefined metrics are written as NA; floats use shortest round-trip
    formatting so identical runs produce identical bytes.
    """
    frame = report_frame(reports, include_timing)
    frame['error'] = frame['error'].fillna('')
    frame.to_csv(path, index=False, na_rep='NA', lineterminator='\n')
    logger.info(f"Wrote {len(frame)} report rows to {path}")


def read_report(path: str) -> List[EvaluationReport]:
    frame = pd.read_csv(path, keep_default_na=False, na_values=['NA'], dtype={'dataset': str, 'error': str})
    reports = []
    for row in frame.to_dict('records'):
        values = {
            name: (None if pd.isna(row[name]) else float(row[name])) for name in METRIC_FIELDS
        }
        reports.append(
            EvaluationReport(model_id=row['model'], dataset=row['dataset'], error=row['error'] or '', **values)
        )
    return reports


def format_table(reports: Sequence[EvaluationReport], include_timing: bool = True) -> str:
    """Fixed-width table: dataset, model, RMSE ... CPU time."""
    frame = report_frame(reports, include_timing).drop(columns=['error'])
    frame = frame.rename(columns={**TABLE_HEADERS, 'dataset': 'Dataset', 'model': 'Model'})

    def cell(value) -> str:
        if value is None or (isinstance(value, float) and math.isnan(value)):
            return 'NA'
        return f'{value:.4f}'

    for column in TABLE_HEADERS.values():
        frame[column] = frame[column].map(cell)
    failed = [r for r in reports if r.failed]
    text = frame.to_string(index=False)
    if failed:
        text += '\n' + '\n'.join(f'{r.dataset}/{r.model_id}: {r.error}' for r in failed)
    return text
