"""Sub-commands of the gravcorr CLI, one module each."""
