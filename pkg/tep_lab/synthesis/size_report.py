"""Relatorio de tamanho de programas compilados."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

from tep_lab.core.program import BranchingProgram
from tep_lab.errors import CompilationError

logger = logging.getLogger(__name__)


@dataclass
class SizeReport:
    """Larguras por camada, saidas e total."""

    k: int
    h: int
    widths: list[int] = field(default_factory=list)
    pebbles: list[int] = field(default_factory=list)
    kinds: list[str] = field(default_factory=list)
    outputs: int = 0
    total: int = 0

    @property
    def formula_total(self) -> int:
        """Soma de k^{p_t} sobre as camadas, mais k saidas."""
        return sum(self.k**p for p in self.pebbles) + self.k

    @property
    def max_width(self) -> int:
        return max(self.widths, default=0)

    @property
    def scaled_total(self) -> float:
        """total / k^h."""
        return self.total / self.k**self.h

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "h": self.h,
            "layers": [
                {"width": w, "pebbles": p, "kind": kind}
                for w, p, kind in zip(self.widths, self.pebbles, self.kinds)
            ],
            "outputs": self.outputs,
            "total": self.total,
            "formula_total": self.formula_total,
        }


def size_report(bp: BranchingProgram) -> SizeReport:
    """Exige os metadados de camada gravados pelo compilador."""
    if not bp.layers:
        raise CompilationError("Programa sem metadados de camada")
    report = SizeReport(
        k=bp.k,
        h=bp.shape.h,
        widths=[layer.width for layer in bp.layers],
        pebbles=[layer.pebbles for layer in bp.layers],
        kinds=[layer.query_kind for layer in bp.layers],
        outputs=sum(len(states) for states in bp.output_states().values()),
        total=bp.state_count(),
    )
    logger.info(
        "Tamanho: camadas %s + %d saidas = %d", report.widths, report.outputs, report.total
    )
    return report


def exponent_fit(programs_by_k: dict[int, BranchingProgram]) -> dict[int, float]:
    """log_k(total) para cada k, aproximado em ponto flutuante.

    Serve para exibir a tendencia; comparacoes exatas de tamanho usam os totais inteiros.
    """
    return {
        k: math.log(bp.state_count()) / math.log(k) for k, bp in sorted(programs_by_k.items())
    }
