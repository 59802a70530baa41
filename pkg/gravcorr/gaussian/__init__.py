"""Two-mode Gaussian states: validation, spectra and correlation measures."""
