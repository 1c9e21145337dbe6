"""Medicao de tempo das etapas pesadas (enumeracao, censo, busca)."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterator

logger = logging.getLogger(__name__)


@dataclass
class StageTiming:
    """Uma etapa cronometrada; `items` conta instancias ou estados percorridos."""

    stage: str
    items: int = 0
    duration_ms: float = 0.0

    @property
    def throughput(self) -> float:
        if self.items <= 0 or self.duration_ms <= 0:
            return 0.0
        return round(self.items * 1000 / self.duration_ms, 2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage,
            "items": self.items,
            "duration_ms": self.duration_ms,
            "items_per_second": self.throughput,
        }


class PerformanceTracker:
    """Cronometra as etapas de um comando; o resumo vai para o relatorio."""

    def __init__(self) -> None:
        self._stages: list[StageTiming] = []

    @contextmanager
    def track(self, stage: str, item_count: int = 0) -> Iterator[StageTiming]:
        """Mede o bloco; o chamador pode corrigir `items` quando so sabe a contagem no fim."""
        timing = StageTiming(stage, item_count)
        start = time.perf_counter()
        try:
            yield timing
        finally:
            timing.duration_ms = round((time.perf_counter() - start) * 1000, 2)
            self._stages.append(timing)
            logger.info(
                "Etapa %s: %.2fms (%d itens, %.2f/s)",
                stage,
                timing.duration_ms,
                timing.items,
                timing.throughput,
            )

    def get_total_time(self) -> float:
        """Tempo total em ms."""
        return round(sum(t.duration_ms for t in self._stages), 2)

    def get_summary(self) -> dict[str, Any]:
        summary: dict[str, Any] = {
            "total_time_ms": self.get_total_time(),
            "stages": [t.to_dict() for t in self._stages],
        }
        if self._stages:
            summary["slowest_stage"] = max(self._stages, key=lambda t: t.duration_ms).stage
        return summary


def index_batches(total: int, batch_count: int) -> list[tuple[int, int]]:
    """Divide range(total) em ate `batch_count` intervalos contiguos [inicio, fim)."""
    if total <= 0:
        return []
    size = max(1, -(-total // max(1, batch_count)))
    return [(start, min(start + size, total)) for start in range(0, total, size)]
