"""Wind power ramp forecasting with wavelet features and SVR / ensemble models."""

__version__ = '1.0.0'
