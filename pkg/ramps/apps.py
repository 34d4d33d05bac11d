"""
Django app configuration for the rampcast application.
"""

from django.apps import AppConfig


class RampsConfig(AppConfig):
    """
    Configuration for the ramps application.

    This app holds the wind ramp forecasting services, the `rampcast`
    management commands and the optional run ledger.
    """
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ramps'
    verbose_name = 'Wind Ramp Forecasting'
