"""Modulos utilitarios."""

from tep_lab.utils.performance import PerformanceTracker, StageTiming

__all__ = [
    "PerformanceTracker",
    "StageTiming",
]
