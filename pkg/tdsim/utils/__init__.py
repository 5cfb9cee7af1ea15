"""Utility functions and classes for tdsim."""

from .benchmarking import PerformanceMonitor, timer
from .cache_manager import CacheManager
from .logger import Logger, configure_logging, get_logger
from .rng import child_seed, rng_stream, seed_sequence

__all__ = [
    "CacheManager",
    "Logger",
    "PerformanceMonitor",
    "child_seed",
    "configure_logging",
    "get_logger",
    "rng_stream",
    "seed_sequence",
    "timer",
]
