"""
Rampcast Configuration Package

Django settings for the wind ramp forecasting project. The `rampcast`
console script and manage.py both load config.settings.
"""
