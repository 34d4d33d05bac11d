"""
Django settings for the rampcast project.

This settings file configures the wind ramp forecasting application with:
- The ramps app (services, management commands, run ledger)
- SQLite storage for recorded experiment runs
- RAMPCAST defaults for solvers, ensembles and output paths
- Console (stderr) and file logging

Generated on: October 13, 2025
"""

# ============================================
# 1. IMPORT NECESSARY MODULES
# ============================================
from pathlib import Path
import os

# Environment variable management (install: pip install python-decouple)
try:
    from decouple import config
except ImportError:
    # Fallback if python-decouple is not installed
    def config(key, default='', cast=str):
        return os.environ.get(key, default)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# ============================================
# SECURITY SETTINGS
# ============================================

# No web surface; the key only satisfies Django's startup checks
SECRET_KEY = config('SECRET_KEY', default='django-insecure-rampcast-dev-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# ============================================
# 2. APPLICATION DEFINITION - INSTALLED APPS
# ============================================

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',

    # Local apps
    'ramps',  # Wind ramp forecasting app
]


# ============================================
# DATABASE CONFIGURATION
# ============================================

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('RAMPCAST_DB', default=str(BASE_DIR / 'db.sqlite3')),
    }
}


# ============================================
# INTERNATIONALIZATION
# ============================================

LANGUAGE_CODE = 'en-us'

TIME_ZONE = config('TIME_ZONE', default='UTC')

USE_I18N = False

USE_TZ = True


# ============================================
# LOGGING CONFIGURATION
# ============================================

LOG_DIR = Path(config('RAMPCAST_LOG_DIR', default=str(BASE_DIR / 'logs')))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        # stdout is reserved for command output
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
        'file': {
            'class': 'logging.FileHandler',
            'filename': LOG_DIR / 'rampcast.log',
            'formatter': 'verbose',
            'delay': True,
        },
    },
    'root': {
        'handlers': ['console'],
        'level': config('LOG_LEVEL', default='WARNING'),
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': config('DJANGO_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        'ramps': {
            'handlers': ['console', 'file'],
            'level': config('RAMPCAST_LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}

# Create logs directory
os.makedirs(LOG_DIR, exist_ok=True)


# ============================================
# DEFAULT PRIMARY KEY FIELD TYPE
# ============================================

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ============================================
# CUSTOM APPLICATION SETTINGS
# ============================================

# Rampcast specific settings (read through ramps.conf.rampcast_setting)
RAMPCAST = {
    'THREADS': config('RAMPCAST_THREADS', default=1, cast=int),
    'SOLVER_TOL': config('RAMPCAST_SOLVER_TOL', default=1e-6, cast=float),
    'SOLVER_MAX_ITER': config('RAMPCAST_SOLVER_MAX_ITER', default=200000, cast=int),
    'OUTPUT_DIR': config('RAMPCAST_OUTPUT_DIR', default='rampcast_out'),
    'RECORD_RUNS': config('RAMPCAST_RECORD_RUNS', default=False, cast=bool),
    'RFR_TREES': 200,  # 1000 in the full protocol
    'GBM_TREES': 500,  # 10000 in the full protocol
    'GBM_ETA': 0.05,
    'GBM_MAX_DEPTH': 3,
    'GBM_MIN_LEAF': 5,
    'DEFAULT_EPS': 0.01,
    'KERNEL_TRAIN_ROWS': 1000,
    'RAMP_THRESHOLD': 0.10,
    'SPLIT_FRAC': 0.8,
}
