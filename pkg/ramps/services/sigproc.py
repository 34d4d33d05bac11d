"""
Signal decomposition for the rampcast application.

Provides:
- dwt_decompose: multilevel db4 DWT reconstructed into full-length bands
- emd_decompose: empirical mode decomposition with natural cubic envelopes
- log_energy_entropy: randomness measure of a decomposed signal
"""

from dataclasses import dataclass
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import pywt
from scipy.interpolate import CubicSpline

from ..exceptions import SizeError

# Set up logging
logger = logging.getLogger(__name__)

DEFAULT_WAVELET = 'db4'
DEFAULT_LEVELS = 5
BOUNDARY_MODE = 'symmetric'

EMD_MIN_LENGTH = 8
EMD_MAX_SIFTS = 50
EMD_SD_THRESHOLD = 0.2
EMD_MIRRORED_EXTREMA = 2

ENTROPY_FLOOR = 1e-12


# ============================================
# 1. WAVELET BANDS
# ============================================

@dataclass(frozen=True)
class WaveletBands:
    """
    Full-length per-level reconstructions of a multilevel DWT.

    Attributes:
        approximation (np.ndarray): A_L band, same length as the input
        details (tuple[np.ndarray]): D1..D_L bands (D1 finest), same length as the input
        wavelet (str): filter identifier, 'db4'
        levels (int): decomposition depth L
    """

    approximation: np.ndarray
    details: Tuple[np.ndarray, ...]
    wavelet: str = DEFAULT_WAVELET
    levels: int = DEFAULT_LEVELS

    @property
    def a5(self) -> np.ndarray:
        return self.approximation

    def detail(self, level: int) -> np.ndarray:
        """D_level, 1-based (1 = finest)."""
        return self.details[level - 1]

    def column_names(self) -> List[str]:
        return [f'A{self.levels}'] + [f'D{k}' for k in range(1, self.levels + 1)]

    def matrix(self) -> np.ndarray:
        """Bands as columns [A_L, D1, ..., D_L], one row per timestep."""
        return np.column_stack([self.approximation, *self.details])

    def reconstruct(self) -> np.ndarray:
        return self.approximation + np.sum(self.details, axis=0)


def min_dwt_length(levels: int, wavelet: str = DEFAULT_WAVELET) -> int:
    """Shortest series accepted by dwt_decompose: 2**levels * filter length."""
    return (2 ** levels) * pywt.Wavelet(wavelet).dec_len


def dwt_decompose(series: Sequence[float], levels: int = DEFAULT_LEVELS, wavelet: str = DEFAULT_WAVELET) -> WaveletBands:
    """
    Decompose a series into time-aligned approximation and detail bands.

    Runs a decimated multilevel DWT with symmetric boundary extension, then
    inverts it once per component with every other component zeroed. The
    bands therefore sum back to the input (perfect reconstruction) and
    decompose linearly.

    Args:
        series: 1-D signal
        levels (int): decomposition depth (>= 1)
        wavelet (str): PyWavelets filter name

    Returns:
        WaveletBands: A_levels plus D1..D_levels, each as long as the input

    Raises:
        SizeError: if the series is shorter than 2**levels * filter length

    Example:
        >>> bands = dwt_decompose(np.ones(256))
        >>> float(np.abs(bands.details[0]).max()) < 1e-10
        True
    """
    # PyWavelets rejects read-only buffers such as WindSeries.values
    x = np.array(series, dtype=np.float64)
    if levels < 1:
        raise SizeError(f"decomposition depth must be >= 1, got {levels}")
    needed = min_dwt_length(levels, wavelet)
    if x.ndim != 1 or len(x) < needed:
        raise SizeError(
            f"{levels}-level {wavelet} decomposition needs at least {needed} samples, got {x.shape}"
        )

    n = len(x)
    coeffs = pywt.wavedec(x, wavelet, mode=BOUNDARY_MODE, level=levels)

    def band(keep: int) -> np.ndarray:
        parts = [c if k == keep else np.zeros_like(c) for k, c in enumerate(coeffs)]
        return pywt.waverec(parts, wavelet, mode=BOUNDARY_MODE)[:n]

    # coeffs = [cA_L, cD_L, ..., cD_1]
    approximation = band(0)
    details = tuple(band(levels + 1 - k) for k in range(1, levels + 1))
    return WaveletBands(approximation, details, wavelet, levels)


# ============================================
# 2. EMPIRICAL MODE DECOMPOSITION
# ============================================

@dataclass(frozen=True)
class EmdResult:
    """
    Intrinsic mode functions plus residual trend.

    Attributes:
        imfs (tuple[np.ndarray]): IMFs from fastest to slowest, full length
        residue (np.ndarray): what remains after removing all IMFs
    """

    imfs: Tuple[np.ndarray, ...]
    residue: np.ndarray

    def reconstruct(self) -> np.ndarray:
        if not self.imfs:
            return self.residue.copy()
        return np.sum(self.imfs, axis=0) + self.residue

    def low_frequency(self) -> np.ndarray:
        """Slowest oscillation plus trend: last IMF + residue."""
        if not self.imfs:
            return self.residue.copy()
        return self.imfs[-1] + self.residue


def find_extrema(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Indices of interior local maxima and minima.

    Flat runs take the slope sign that precedes them, so a plateau yields
    a single extremum at its last sample.
    """
    slope = np.sign(np.diff(x))
    carry = np.where(slope != 0, np.arange(len(slope)), 0)
    np.maximum.accumulate(carry, out=carry)
    slope = slope[carry]
    turns = np.diff(slope)
    maxima = np.flatnonzero(turns < 0) + 1
    minima = np.flatnonzero(turns > 0) + 1
    # A leading flat run has slope 0 and would register a half turn
    maxima = maxima[slope[maxima - 1] > 0]
    minima = minima[slope[minima - 1] < 0]
    return maxima, minima


def count_zero_crossings(x: np.ndarray) -> int:
    signs = np.sign(x)
    signs = signs[signs != 0]
    return int(np.count_nonzero(np.diff(signs)))


def is_imf(x: np.ndarray) -> bool:
    """Extrema count and zero-crossing count differ by at most one."""
    maxima, minima = find_extrema(x)
    return abs(len(maxima) + len(minima) - count_zero_crossings(x)) <= 1


def _envelope(x: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Natural cubic spline through extrema, with the nearest extrema mirrored at each end."""
    n = len(x)
    last = n - 1
    head = idx[:EMD_MIRRORED_EXTREMA]
    tail = idx[-EMD_MIRRORED_EXTREMA:]
    head = head[head > 0]
    tail = tail[tail < last]
    knots = np.concatenate([-head[::-1], idx, 2 * last - tail[::-1]]).astype(np.float64)
    values = np.concatenate([x[head[::-1]], x[idx], x[tail[::-1]]])
    knots, unique_at = np.unique(knots, return_index=True)
    values = values[unique_at]
    if len(knots) < 2:
        return np.full(n, values[0] if len(values) else 0.0)
    return CubicSpline(knots, values, bc_type='natural')(np.arange(n, dtype=np.float64))


def _is_trend(x: np.ndarray) -> bool:
    maxima, minima = find_extrema(x)
    return len(maxima) == 0 or len(minima) == 0 or len(maxima) + len(minima) < 3


def _sift(residue: np.ndarray) -> Tuple[np.ndarray, int]:
    h = residue.copy()
    for iteration in range(1, EMD_MAX_SIFTS + 1):
        maxima, minima = find_extrema(h)
        if len(maxima) == 0 or len(minima) == 0:
            return h, iteration - 1
        mean = 0.5 * (_envelope(h, maxima) + _envelope(h, minima))
        energy = float(np.sum(h * h))
        updated = h - mean
        sd = float(np.sum(mean * mean)) / energy if energy > 0 else 0.0
        h = updated
        if sd < EMD_SD_THRESHOLD and is_imf(h):
            return h, iteration
    logger.debug(f"Sifting stopped at the {EMD_MAX_SIFTS}-iteration cap")
    return h, EMD_MAX_SIFTS


def emd_decompose(series: Sequence[float], max_imfs: int = 5) -> EmdResult:
    """
    Empirical mode decomposition.

    Sifting uses natural cubic envelopes through the extrema, two extrema
    mirrored at each end, and stops when the Cauchy SD drops below 0.2 with
    the IMF property holding, or after 50 sifts. Decomposition stops when
    the residue has no oscillation left (monotone / fewer than 3 extrema),
    is numerically zero, or max_imfs IMFs were extracted. A sift that ends
    without the IMF property is left in the residue and ends the
    decomposition, so every returned IMF satisfies it.

    Args:
        series: 1-D signal (length >= 8)
        max_imfs (int): cap on the number of IMFs

    Returns:
        EmdResult: IMFs (fast to slow) and residue; they sum to the input

    Raises:
        SizeError: if the series has fewer than 8 samples
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or len(x) < EMD_MIN_LENGTH:
        raise SizeError(f"EMD needs at least {EMD_MIN_LENGTH} samples, got {x.shape}")

    scale = float(np.max(np.abs(x))) if len(x) else 0.0
    imfs: List[np.ndarray] = []
    residue = x.copy()

    while len(imfs) < max_imfs:
        if _is_trend(residue):
            break
        if np.ptp(residue) <= 1e-12 * max(scale, 1e-300):
            break
        imf, sifts = _sift(residue)
        if not is_imf(imf):
            logger.warning(
                f"Sift {len(imfs) + 1} ended after {sifts} iterations without the IMF property; "
                f"keeping it in the residue"
            )
            break
        imfs.append(imf)
        residue = residue - imf
        logger.debug(f"IMF {len(imfs)} extracted after {sifts} sifts")

    residue = x - np.sum(imfs, axis=0) if imfs else x.copy()
    return EmdResult(tuple(imfs), residue)


# ============================================
# 3. LOG ENERGY ENTROPY
# ============================================

def log_energy_entropy(signal: Sequence[float], floor: float = ENTROPY_FLOOR) -> float:
    """
    Log energy entropy: sum over t of ln(max(h(t)^2, floor)).

    Example:
        >>> round(log_energy_entropy([np.e, 1.0]), 12)
        2.0
    """
    h = np.asarray(signal, dtype=np.float64)
    if h.size == 0:
        raise SizeError("log energy entropy needs a nonempty signal")
    return float(np.sum(np.log(np.maximum(h * h, floor))))


# ============================================
# 4. EXPORT
# ============================================

def bands_frame(bands: WaveletBands, timestamps: Optional[np.ndarray] = None) -> pd.DataFrame:
    frame = pd.DataFrame(bands.matrix(), columns=bands.column_names())
    if timestamps is not None:
        frame.insert(0, 'timestamp', timestamps)
    return frame


def emd_frame(result: EmdResult, timestamps: Optional[np.ndarray] = None) -> pd.DataFrame:
    columns = {f'IMF{k}': imf for k, imf in enumerate(result.imfs, start=1)}
    columns['residue'] = result.residue
    frame = pd.DataFrame(columns)
    if timestamps is not None:
        frame.insert(0, 'timestamp', timestamps)
    return frame
