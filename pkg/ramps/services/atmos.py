"""
Atmospheric and turbine transforms for the rampcast application.

This module covers the physical part of the pipeline:
1. Logarithmic-law extrapolation of wind speed to hub height
2. The turbine power curve (speed -> power)
3. Ramp-event labeling on a power series
"""

from dataclasses import dataclass
import logging
import math
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from ..exceptions import DomainError, SizeError
from .data_io import WindSeries

# Set up logging
logger = logging.getLogger(__name__)

RAMP_UP = 'up'
RAMP_DOWN = 'down'


# ============================================
# 1. DOMAIN TYPES
# ============================================

@dataclass(frozen=True)
class TurbineSpec:
    """
    Wind turbine used for power conversion and ramp thresholds.

    Defaults describe the 120 m rotor / 90 m hub machine rated at 12 m/s.

    Attributes:
        rotor_diameter (float): m
        hub_height (float): m
        rated_speed (float): m/s
        cut_in (float): m/s
        cut_out (float): m/s
        air_density (float): kg/m^3
        cp (float): power coefficient below rated speed
    """

    rotor_diameter: float = 120.0
    hub_height: float = 90.0
    rated_speed: float = 12.0
    cut_in: float = 3.0
    cut_out: float = 25.0
    air_density: float = 1.225
    cp: float = 0.45

    def __post_init__(self):
        if not 0 <= self.cut_in < self.rated_speed < self.cut_out:
            raise DomainError(
                f"turbine speeds must satisfy 0 <= cut_in < rated < cut_out, got "
                f"{self.cut_in}, {self.rated_speed}, {self.cut_out}"
            )
        if self.rotor_diameter <= 0 or self.hub_height <= 0:
            raise DomainError("rotor diameter and hub height must be positive")
        if self.air_density <= 0 or self.cp <= 0:
            raise DomainError("air density and power coefficient must be positive")

    @property
    def swept_area(self) -> float:
        return math.pi * (self.rotor_diameter / 2.0) ** 2

    @property
    def nominal_power(self) -> float:
        """Power at rated speed in W: 0.5 * rho * A * cp * v_rated^3."""
        return 0.5 * self.air_density * self.swept_area * self.cp * self.rated_speed ** 3


@dataclass(frozen=True)
class RampEvent:
    """
    One ramp event between timesteps index-1 and index.

    Attributes:
        index (int): timestep of P(t + dt)
        direction (str): 'up' or 'down'
        magnitude (float): signed power change in W
    """

    index: int
    direction: str
    magnitude: float


# ============================================
# 2. HEIGHT TRANSFORM
# ============================================

def log_law_transform(series: WindSeries, z0: float, target_height: float) -> WindSeries:
    """
    Extrapolate a wind-speed series to another height with the logarithmic law.

    Every value is scaled by ln(target_height / z0) / ln(series.height / z0).

    Args:
        series (WindSeries): speeds at series.height
        z0 (float): surface roughness length in metres
        target_height (float): height to extrapolate to in metres

    Returns:
        WindSeries: speeds at target_height

    Raises:
        DomainError: if z0 <= 0 or either height is not above z0

    Example:
        >>> hub = log_law_transform(WindSeries.from_values([5.0, 5.0]), 0.005, 90.0)
        >>> round(hub.values[0], 3)
        6.445
    """
    if z0 <= 0:
        raise DomainError(f"roughness length must be > 0, got {z0}")
    if series.height <= z0 or target_height <= z0:
        raise DomainError(
            f"log law needs heights above z0={z0} m "
            f"(measurement {series.height} m, target {target_height} m)"
        )
    factor = math.log(target_height / z0) / math.log(series.height / z0)
    logger.debug(f"Log-law factor {series.height} m -> {target_height} m (z0={z0}): {factor:.6f}")
    return series.with_values(series.values * factor, height=target_height)


# ============================================
# 3. POWER CURVE
# ============================================

def power_curve(speed: Union[float, Sequence[float], np.ndarray], turbine: TurbineSpec):
    """
    Convert wind speed (m/s) to turbine power (W).

    Zero below cut-in and from cut-out upwards, cubic 0.5*rho*A*cp*v^3 on
    [cut_in, rated), flat at nominal power on [rated, cut_out).

    Args:
        speed: scalar or array of non-negative speeds
        turbine (TurbineSpec): the turbine

    Returns:
        float or np.ndarray: power in W, same shape as the input

    Raises:
        DomainError: on negative or non-finite speeds
    """
    v = np.asarray(speed, dtype=np.float64)
    if np.any(~np.isfinite(v)) or np.any(v < 0):
        raise DomainError("power curve is defined for finite speeds >= 0")

    coefficient = 0.5 * turbine.air_density * turbine.swept_area * turbine.cp
    power = np.where(
        v < turbine.cut_in,
        0.0,
        np.where(
            v < turbine.rated_speed,
            coefficient * v ** 3,
            np.where(v < turbine.cut_out, turbine.nominal_power, 0.0),
        ),
    )
    if power.ndim == 0:
        return float(power)
    return power


# ============================================
# 4. RAMP LABELING
# ============================================

def ramp_deltas(power: Sequence[float]) -> np.ndarray:
    """Consecutive power differences P(t + dt) - P(t)."""
    p = np.asarray(power, dtype=np.float64)
    return np.diff(p)


def detect_ramps(power: Sequence[float], threshold_frac: float, turbine: TurbineSpec) -> List[RampEvent]:
    """
    Label ramp events in a power series.

    For each consecutive pair dP = P(t + dt) - P(t). An up event is emitted
    when dP >= threshold_frac * P_nom and a down event when
    dP <= -threshold_frac * P_nom. Boundary values count as events.

    Args:
        power: power series in W (length >= 2)
        threshold_frac (float): ramp threshold as a fraction of nominal power
        turbine (TurbineSpec): turbine providing P_nom

    Returns:
        list[RampEvent]: events in index order

    Example:
        >>> p_nom = TurbineSpec().nominal_power
        >>> events = detect_ramps([0.20 * p_nom, 0.35 * p_nom, 0.30 * p_nom], 0.10, TurbineSpec())
        >>> [(e.index, e.direction) for e in events]
        [(1, 'up')]
    """
    p = np.asarray(power, dtype=np.float64)
    if p.ndim != 1 or len(p) < 2:
        raise SizeError(f"ramp detection needs a power series of length >= 2, got {p.shape}")
    if not 0 < threshold_frac < 1:
        raise DomainError(f"ramp threshold fraction must lie in (0, 1), got {threshold_frac}")

    threshold = threshold_frac * turbine.nominal_power
    deltas = ramp_deltas(p)

    events = []
    for i in np.flatnonzero((deltas >= threshold) | (deltas <= -threshold)):
        delta = float(deltas[i])
        events.append(RampEvent(int(i) + 1, RAMP_UP if delta > 0 else RAMP_DOWN, delta))

    up_count = sum(1 for e in events if e.direction == RAMP_UP)
    logger.debug(
        f"Detected {len(events)} ramp events ({up_count} up, {len(events) - up_count} down) "
        f"at threshold {threshold_frac:.2%} of {turbine.nominal_power / 1e6:.3f} MW"
    )
    return events


def export_ramps(events: Sequence[RampEvent], path: str) -> None:
    """Write events as `index,direction,magnitude_w` CSV."""
    frame = pd.DataFrame(
        {
            'index': [e.index for e in events],
            'direction': [e.direction for e in events],
            'magnitude_w': [e.magnitude for e in events],
        },
        columns=['index', 'direction', 'magnitude_w'],
    )
    frame.to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Exported {len(events)} ramp events to {path}")
