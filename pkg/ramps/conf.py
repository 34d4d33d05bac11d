"""
Access to the RAMPCAST settings dict with built-in fallbacks.

The numerical services work without Django; only the orchestration layer
consults settings, and it does so through rampcast_setting().
"""

from typing import Any

DEFAULTS = {
    'THREADS': 1,
    'SOLVER_TOL': 1e-6,
    'SOLVER_MAX_ITER': 200000,
    'OUTPUT_DIR': 'rampcast_out',
    'RECORD_RUNS': False,
    'RFR_TREES': 200,
    'GBM_TREES': 500,
    'GBM_ETA': 0.05,
    'GBM_MAX_DEPTH': 3,
    'GBM_MIN_LEAF': 5,
    'DEFAULT_EPS': 0.01,
    'KERNEL_TRAIN_ROWS': 1000,
    'RAMP_THRESHOLD': 0.10,
    'SPLIT_FRAC': 0.8,
}


def rampcast_setting(name: str) -> Any:
    """
    Return one RAMPCAST setting.

    Falls back to DEFAULTS when Django settings are not configured or the
    key is absent from settings.RAMPCAST.
    """
    try:
        from django.conf import settings
        if settings.configured:
            overrides = getattr(settings, 'RAMPCAST', {})
            if name in overrides:
                return overrides[name]
    except ImportError:  # pragma: no cover - Django is a hard dependency
        pass
    return DEFAULTS[name]
