"""Covariance propagation, trajectories and stationary states."""
