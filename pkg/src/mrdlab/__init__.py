"""Exact rank-metric coding toolkit and decoder-error-probability lab."""

__version__ = "0.1.0"
