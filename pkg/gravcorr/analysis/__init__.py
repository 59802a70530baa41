"""Correlation series, peaks, asymptotes and parameter sweeps."""
