"""Dense real matrix kernels."""
