"""Gaussian correlation dynamics of two oscillators coupled through classical gravitational channels."""

__version__ = "1.0.0"
