"""
Wind-speed series data model and I/O for the rampcast application.

This module provides:
- WindSeries, the immutable uniformly sampled series every stage consumes
- SiteSpec and the catalog of the twelve calibrated wind-farm sites
- CSV ingestion and export (`timestamp,speed_mps`)
- A seeded AR(1) generator calibrated to a site's mean and SD
- Chronological train/test splitting
"""

from dataclasses import dataclass
import logging
import math
import os
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.signal import lfilter

from ..exceptions import ConfigError, DomainError, SampleError, ShapeError, SizeError, SpacingError

# Set up logging
logger = logging.getLogger(__name__)

# 2019-03-01T00:00:00Z, start of the month the site statistics describe
DEFAULT_START_EPOCH = 1551398400

# 10-minute persistence of wind speed
AR_COEFFICIENT = 0.97

CSV_HEADER = ('timestamp', 'speed_mps')
TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M:%SZ'


# ============================================
# 1. DOMAIN TYPES
# ============================================

def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class WindSeries:
    """
    Uniformly sampled wind-speed series.

    Attributes:
        timestamps (np.ndarray): int64 epoch seconds, strictly increasing by dt
        values (np.ndarray): wind speed in m/s, finite and non-negative
        dt (int): sampling interval in seconds
        height (float): measurement height above ground in metres

    Both arrays are made read-only, so a series can be shared freely
    between workers.
    """

    timestamps: np.ndarray
    values: np.ndarray
    dt: int
    height: float = 10.0

    def __post_init__(self):
        timestamps = np.array(self.timestamps, dtype=np.int64)
        values = np.array(self.values, dtype=np.float64)

        if timestamps.ndim != 1 or values.ndim != 1 or len(timestamps) != len(values):
            raise ShapeError(
                f"timestamps ({timestamps.shape}) and values ({values.shape}) "
                f"must be 1-D arrays of equal length"
            )
        if len(values) < 2:
            raise SizeError(f"a WindSeries needs at least 2 samples, got {len(values)}")
        if self.dt <= 0:
            raise DomainError(f"sampling interval must be positive, got {self.dt}")
        if self.height <= 0:
            raise DomainError(f"measurement height must be positive, got {self.height}")

        bad = np.flatnonzero(~np.isfinite(values) | (values < 0))
        if bad.size:
            row = int(bad[0])
            raise SampleError(f"row {row}: invalid wind speed {values[row]!r}", row=row)

        steps = np.diff(timestamps)
        off = np.flatnonzero(steps != self.dt)
        if off.size:
            row = int(off[0]) + 1
            raise SpacingError(
                f"row {row}: spacing {int(steps[row - 1])} s differs from dt={self.dt} s",
                row=row,
            )

        object.__setattr__(self, 'timestamps', _frozen(timestamps))
        object.__setattr__(self, 'values', _frozen(values))
        object.__setattr__(self, 'dt', int(self.dt))
        object.__setattr__(self, 'height', float(self.height))

    def __len__(self) -> int:
        return len(self.values)

    def slice(self, start: int, stop: Optional[int] = None) -> 'WindSeries':
        """Return the contiguous sub-series [start, stop)."""
        return WindSeries(self.timestamps[start:stop], self.values[start:stop], self.dt, self.height)

    def with_values(self, values: np.ndarray, height: Optional[float] = None) -> 'WindSeries':
        """Return a series on the same time grid with new values (and optionally height)."""
        return WindSeries(self.timestamps, values, self.dt, self.height if height is None else height)

    @classmethod
    def from_values(
        cls,
        values,
        dt: int = 600,
        height: float = 10.0,
        start: int = DEFAULT_START_EPOCH,
    ) -> 'WindSeries':
        """Build a series on a regular grid starting at `start` (epoch seconds)."""
        values = np.asarray(values, dtype=np.float64)
        timestamps = start + dt * np.arange(len(values), dtype=np.int64)
        return cls(timestamps, values, dt, height)


@dataclass(frozen=True)
class SiteSpec:
    """
    Wind-farm site description used to calibrate synthetic series.

    Attributes:
        name (str): display label
        roughness_length (float): surface roughness z0 in metres
        mean_speed (float): mean wind speed at measurement height (m/s)
        sd_speed (float): standard deviation of wind speed (m/s)
        kind (str): 'onshore' or 'offshore'
    """

    name: str
    roughness_length: float
    mean_speed: float
    sd_speed: float
    kind: str = 'onshore'

    def __post_init__(self):
        if self.roughness_length <= 0:
            raise DomainError(f"roughness length must be > 0, got {self.roughness_length}")
        if self.sd_speed < 0:
            raise DomainError(f"speed SD must be >= 0, got {self.sd_speed}")
        if self.kind not in ('onshore', 'offshore'):
            raise DomainError(f"site kind must be 'onshore' or 'offshore', got {self.kind!r}")


@dataclass(frozen=True)
class SplitIndex:
    """Chronological split point: rows [0, train_end) train, [train_end, total) test."""

    train_end: int
    total: int

    def __post_init__(self):
        if not 0 < self.train_end < self.total:
            raise SizeError(f"split point {self.train_end} must lie strictly inside (0, {self.total})")

    @property
    def test_size(self) -> int:
        return self.total - self.train_end


# ============================================
# 2. SITE CATALOG
# ============================================

ONSHORE_Z0 = 0.005
OFFSHORE_Z0 = 0.0002

# March 2019 statistics of the twelve studied wind farms
SITES: Dict[str, SiteSpec] = {
    'amakhala_emoyeni': SiteSpec('Amakhala Emoyeni, SA', ONSHORE_Z0, 6.264, 3.198, 'onshore'),
    'clyde': SiteSpec('Clyde, Scotland', ONSHORE_Z0, 3.829, 1.626, 'onshore'),
    'gansu': SiteSpec('Gansu, China', ONSHORE_Z0, 4.000, 2.477, 'onshore'),
    'mccain_foods': SiteSpec('McCain Foods, UK', ONSHORE_Z0, 6.491, 3.519, 'onshore'),
    'shephards_flat': SiteSpec('Shephards Flat, USA', ONSHORE_Z0, 6.074, 2.618, 'onshore'),
    'akhfenir': SiteSpec('Akhfenir, Morocco', ONSHORE_Z0, 3.096, 1.505, 'onshore'),
    'amrumbank': SiteSpec('Amrumbank, Germany', OFFSHORE_Z0, 11.176, 4.962, 'offshore'),
    'anholt': SiteSpec('Anholt, Denmark', OFFSHORE_Z0, 8.999, 3.537, 'offshore'),
    'gemini': SiteSpec('Gemini, Netherlands', OFFSHORE_Z0, 7.577, 4.174, 'offshore'),
    'horns_rev_2': SiteSpec('HornsRev 2, Denmark', OFFSHORE_Z0, 11.183, 4.546, 'offshore'),
    'veja_mate': SiteSpec('Veja Mate, Germany', OFFSHORE_Z0, 11.490, 4.685, 'offshore'),
    'walney': SiteSpec('Walney, UK', OFFSHORE_Z0, 11.342, 5.015, 'offshore'),
}


def get_site(slug: str) -> SiteSpec:
    """
    Look up a catalog site by slug (case-insensitive, '-' and ' ' treated as '_').

    Raises:
        ConfigError: if the slug is not in the catalog
    """
    key = slug.strip().lower().replace('-', '_').replace(' ', '_')
    try:
        return SITES[key]
    except KeyError:
        raise ConfigError(
            f"unknown site {slug!r}; choose one of: {', '.join(sorted(SITES))}",
            key='site',
        ) from None


# ============================================
# 3. CSV INGESTION / EXPORT
# ============================================

def _looks_numeric(cell) -> bool:
    try:
        float(cell)
        return True
    except (TypeError, ValueError):
        return False


def load_csv(path: str, dt_expected: int, height: float = 10.0) -> WindSeries:
    """
    Load a two-column `timestamp,speed_mps` CSV into a validated WindSeries.

    The header row is optional. Rows are sorted by timestamp before the
    spacing check, and row numbers in errors count data rows from 0.

    Args:
        path (str): CSV file path
        dt_expected (int): required sampling interval in seconds
        height (float): measurement height of the speeds in metres

    Returns:
        WindSeries: the validated series

    Raises:
        SpacingError: if consecutive timestamps are not dt_expected apart
        SampleError: if a speed is negative, NaN or not a number
        SizeError: if the file holds fewer than two rows

    Example:
        >>> series = load_csv('amrumbank_march.csv', dt_expected=600)
        >>> len(series), series.dt
        (4464, 600)
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"wind speed file not found: {path}")

    try:
        frame = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise SizeError(f"{path} contains no rows") from None

    if frame.shape[1] != 2:
        raise ShapeError(f"{path}: expected 2 columns (timestamp, speed), found {frame.shape[1]}")

    if len(frame) and not _looks_numeric(frame.iat[0, 1]):
        logger.debug(f"Treating first line of {path} as a header: {list(frame.iloc[0])}")
        frame = frame.iloc[1:].reset_index(drop=True)

    if len(frame) < 2:
        raise SizeError(f"{path}: need at least 2 data rows, found {len(frame)}")

    speeds = pd.to_numeric(frame[1].str.strip(), errors='coerce').to_numpy(dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(speeds) | (speeds < 0))
    if bad.size:
        row = int(bad[0])
        raise SampleError(f"row {row}: invalid wind speed {frame.iat[row, 1]!r}", row=row)

    try:
        stamps = pd.to_datetime(frame[0].str.strip(), utc=True, format='ISO8601')
    except (ValueError, TypeError) as exc:
        raise SampleError(f"{path}: unparseable ISO-8601 timestamp ({exc})") from exc
    if stamps.isna().any():
        row = int(np.flatnonzero(stamps.isna().to_numpy())[0])
        raise SampleError(f"row {row}: missing timestamp", row=row)
    epoch = ((stamps - pd.Timestamp(0, tz='UTC')) // pd.Timedelta(seconds=1)).to_numpy(dtype=np.int64)

    order = np.argsort(epoch, kind='stable')
    series = WindSeries(epoch[order], speeds[order], dt_expected, height)

    logger.info(f"Loaded {len(series)} samples from {path} (dt={dt_expected} s, height={height} m)")
    return series


def iso_timestamps(epoch_seconds) -> np.ndarray:
    """Format epoch seconds as `YYYY-MM-DDTHH:MM:SSZ` strings."""
    stamps = pd.to_datetime(np.asarray(epoch_seconds, dtype=np.int64), unit='s', utc=True)
    return stamps.strftime(TIMESTAMP_FORMAT).to_numpy()


def series_frame(series: WindSeries) -> pd.DataFrame:
    return pd.DataFrame({CSV_HEADER[0]: iso_timestamps(series.timestamps), CSV_HEADER[1]: series.values})


def export_csv(series: WindSeries, path: str) -> None:
    """
    Write a series as `timestamp,speed_mps` CSV.

    Speeds are written with shortest round-trip float formatting, so
    load_csv() reproduces them bit-exactly.
    """
    series_frame(series).to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Exported {len(series)} samples to {path}")


# ============================================
# 4. SYNTHETIC GENERATION
# ============================================

def _calibrate(z: np.ndarray, mean: float, sd: float, max_rounds: int = 60) -> np.ndarray:
    """Affinely map a unit-moment path so that, after clipping at 0, it hits mean/sd."""
    scale, shift = sd, mean
    values = np.clip(scale * z + shift, 0.0, None)
    for _ in range(max_rounds):
        got_mean, got_sd = values.mean(), values.std()
        if abs(got_mean - mean) <= 1e-10 * max(mean, 1.0) and abs(got_sd - sd) <= 1e-10 * max(sd, 1.0):
            break
        shift += mean - got_mean
        if got_sd > 0:
            scale *= sd / got_sd
        values = np.clip(scale * z + shift, 0.0, None)
    return values


def synth_series(
    site: SiteSpec,
    n: int,
    dt: int = 600,
    seed: int = 0,
    height: float = 10.0,
    start: int = DEFAULT_START_EPOCH,
) -> WindSeries:
    """
    Generate a seeded AR(1) wind-speed series calibrated to a site.

    x(t) = 0.97 x(t-1) + e(t) with Gaussian innovations, rescaled to the
    site's mean and SD and clipped at zero. The result is a pure function
    of (site, n, dt, seed).

    Args:
        site (SiteSpec): site whose mean/SD calibrate the series
        n (int): number of samples (>= 2)
        dt (int): sampling interval in seconds
        seed (int): random seed
        height (float): measurement height of the generated speeds

    Returns:
        WindSeries: synthetic series

    Raises:
        SizeError: if n < 2

    Example:
        >>> series = synth_series(get_site('amrumbank'), n=4464, seed=7)
        >>> round(series.values.mean(), 2)
        11.18
    """
    if n < 2:
        raise SizeError(f"synthetic series needs n >= 2, got {n}")

    if site.sd_speed == 0:
        values = np.full(n, max(site.mean_speed, 0.0))
    else:
        rng = np.random.default_rng(seed)
        innovations = rng.standard_normal(n) * math.sqrt(1.0 - AR_COEFFICIENT ** 2)
        innovations[0] = rng.standard_normal()
        path = lfilter([1.0], [1.0, -AR_COEFFICIENT], innovations)
        spread = path.std()
        z = (path - path.mean()) / spread if spread > 0 else np.zeros(n)
        values = _calibrate(z, site.mean_speed, site.sd_speed)

    logger.debug(
        f"Synthesized {n} samples for {site.name}: mean={values.mean():.3f}, sd={values.std():.3f}"
    )
    return WindSeries.from_values(values, dt=dt, height=height, start=start)


# ============================================
# 5. CHRONOLOGICAL SPLIT
# ============================================

def split_index(total: int, train_frac: float) -> SplitIndex:
    """
    Compute the chronological split point for `total` rows.

    Raises:
        DomainError: if train_frac is not in (0, 1)
        SizeError: if either part would hold fewer than 2 rows
    """
    if not 0 < train_frac < 1:
        raise DomainError(f"train fraction must lie in (0, 1), got {train_frac}")
    train_end = int(math.floor(total * train_frac + 0.5))
    if train_end < 2 or total - train_end < 2:
        raise SizeError(
            f"splitting {total} rows at {train_frac} gives parts of "
            f"{train_end} and {total - train_end} rows; each needs at least 2"
        )
    return SplitIndex(train_end, total)


def split_train_test(series: WindSeries, train_frac: float) -> Tuple[WindSeries, WindSeries]:
    """
    Split a series chronologically (no shuffling) into train and test parts.

    Example:
        >>> train, test = split_train_test(WindSeries.from_values(np.ones(100)), 0.8)
        >>> len(train), len(test)
        (80, 20)
    """
    split = split_index(len(series), train_frac)
    return series.slice(0, split.train_end), series.slice(split.train_end, None)
