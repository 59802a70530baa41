import gc
import logging
import threading
from typing import Any, Dict

import psutil

logger = logging.getLogger(__name__)

# Resident-set growth (MB) above which a run is reported at WARNING level
HIGH_DELTA_MB = 200.0


def _rss_mb() -> float:
    return psutil.Process().memory_info().rss / 1024 / 1024


class MemoryMonitor:
    """
    Track resident memory across a long computation (sweeps, dense trajectories).
    """

    def __init__(self, operation_name: str = "operation"):
        self.operation_name = operation_name
        self.start_memory = 0.0
        self.peak_memory = 0.0
        self.end_memory = 0.0
        self._lock = threading.Lock()

    def __enter__(self) -> "MemoryMonitor":
        gc.collect()
        self.start_memory = _rss_mb()
        self.peak_memory = self.start_memory
        logger.debug(f"Memory monitor started for '{self.operation_name}': {self.start_memory:.2f} MB")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.check_memory()
        self.end_memory = _rss_mb()
        delta = self.end_memory - self.start_memory
        level = logging.WARNING if delta > HIGH_DELTA_MB else logging.DEBUG
        logger.log(level,
                   f"Memory usage for '{self.operation_name}': "
                   f"Start: {self.start_memory:.2f} MB, "
                   f"End: {self.end_memory:.2f} MB, "
                   f"Delta: {delta:+.2f} MB, "
                   f"Peak: {self.peak_memory:.2f} MB")

    def check_memory(self) -> float:
        """Sample resident memory and update the peak; safe to call from worker threads."""
        current = _rss_mb()
        with self._lock:
            self.peak_memory = max(self.peak_memory, current)
        return current


def get_process_memory_info() -> Dict[str, Any]:
    """Memory figures reported by ``--verbose`` runs."""
    memory = psutil.virtual_memory()
    process = psutil.Process()
    return {
        "system_available_mb": memory.available / 1024 / 1024,
        "process_memory_mb": process.memory_info().rss / 1024 / 1024,
        "process_memory_percent": process.memory_percent(),
    }
