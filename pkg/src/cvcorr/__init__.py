"""Gaussian correlation measures, entanglement protocols and vector-field polarimetry."""

__version__ = "0.1.0"
