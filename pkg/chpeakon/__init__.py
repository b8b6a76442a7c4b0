"""Camassa–Holm multi-peakons: direct dynamics, spectral transforms and asymptotics."""

__version__ = "1.0.0"
