"""Censo de gargalos: quantas instancias caem em cada estado supercritico.

Cada pipeline mapeia uma instancia ao seu estado supercritico. Se nenhum
estado recebe mais que k^m / k^e instancias, o programa tem pelo menos k^e
estados distintos.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from tep_lab.analyzers.critical_states import det_thrifty_supercritical
from tep_lab.analyzers.independent_schedule import (
    BITWISE_THRIFTY,
    NODE_INDEPENDENT_RO,
    independent_schedule,
    independent_supercritical,
)
from tep_lab.analyzers.pebbling_algorithm import ro_det_supercritical
from tep_lab.analyzers.reach_sets import StateValueProfile, reach_sets
from tep_lab.analyzers.read_once_pebbling import ro_supercritical
from tep_lab.config import LabSettings, load_settings
from tep_lab.core.execution import canonical_path, run_deterministic
from tep_lab.core.log_value import LogValue
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import TepInstance, input_length, instance_count, instance_from_index
from tep_lab.errors import AnalysisError, BudgetExceededError
from tep_lab.utils.performance import index_batches

logger = logging.getLogger(__name__)

_CHUNKS_PER_JOB = 4


@dataclass(frozen=True)
class PreparedPipeline:
    """Pipeline ligado a um programa (e ao perfil, quando necessario)."""

    name: str
    bp: BranchingProgram
    profile: StateValueProfile | None = None

    def supercritical(self, instance: TepInstance) -> int:
        return PIPELINES[self.name].locate(self, instance)


@dataclass(frozen=True)
class Pipeline:
    name: str
    exponent: Callable[[int], Fraction]
    locate: Callable[[PreparedPipeline, TepInstance], int]
    needs_profile: bool = False

    def prepare(
        self, bp: BranchingProgram, settings: LabSettings | None = None
    ) -> PreparedPipeline:
        profile = reach_sets(bp, settings) if self.needs_profile else None
        return PreparedPipeline(self.name, bp, profile)


def _height(h: int) -> Fraction:
    return Fraction(h)


def _half_ceil(h: int) -> Fraction:
    return Fraction(math.ceil(h / 2) + 1)


def _half(h: int) -> Fraction:
    return Fraction(h, 2) + 1


def _locate_det_thrifty(prepared: PreparedPipeline, instance: TepInstance) -> int:
    return det_thrifty_supercritical(run_deterministic(prepared.bp, instance))


def _locate_ro_thrifty(prepared: PreparedPipeline, instance: TepInstance) -> int:
    return ro_supercritical(canonical_path(prepared.bp, instance), "syntactic")


def _locate_ro_det(prepared: PreparedPipeline, instance: TepInstance) -> int:
    return ro_det_supercritical(run_deterministic(prepared.bp, instance))


def _locate_independent(prepared: PreparedPipeline, instance: TepInstance, variant: str) -> int:
    path = canonical_path(prepared.bp, instance)
    schedule = independent_schedule(prepared.bp, path, variant, prepared.profile)
    state, _ = independent_supercritical(path, schedule, variant)
    return state


def _locate_bitwise(prepared: PreparedPipeline, instance: TepInstance) -> int:
    return _locate_independent(prepared, instance, BITWISE_THRIFTY)


def _locate_niro(prepared: PreparedPipeline, instance: TepInstance) -> int:
    return _locate_independent(prepared, instance, NODE_INDEPENDENT_RO)


PIPELINES: dict[str, Pipeline] = {
    "det-thrifty": Pipeline("det-thrifty", _height, _locate_det_thrifty),
    "ro-thrifty": Pipeline("ro-thrifty", _half_ceil, _locate_ro_thrifty),
    "ro-det": Pipeline("ro-det", _height, _locate_ro_det),
    "bitwise-thrifty": Pipeline("bitwise-thrifty", _half, _locate_bitwise, needs_profile=True),
    "ni-ro": Pipeline("ni-ro", _half, _locate_niro, needs_profile=True),
}


def get_pipeline(name: str) -> Pipeline:
    try:
        return PIPELINES[name]
    except KeyError:
        raise ValueError(
            f"Pipeline desconhecido: {name}. Use {', '.join(PIPELINES)}"
        ) from None


def format_power(k: int, exponent: Fraction) -> str:
    """k^e como inteiro quando e e inteiro; senao 'k^(p/q)'."""
    if exponent.denominator == 1:
        if exponent >= 0:
            return str(k ** int(exponent))
        return str(Fraction(1, k ** int(-exponent)))
    return f"{k}^({exponent.numerator}/{exponent.denominator})"


@dataclass
class CensusReport:
    pipeline: str
    h: int
    k: int
    exponent: Fraction
    total: int
    counts: dict[int, int] = field(default_factory=dict)
    unmapped: int = 0
    failure: dict[str, Any] | None = None

    @property
    def m(self) -> int:
        return input_length(self.h, self.k)

    @property
    def bound_exponent(self) -> Fraction:
        return self.m - self.exponent

    @property
    def max_bucket(self) -> int:
        return max(self.counts.values(), default=0)

    @property
    def distinct_states(self) -> int:
        return len(self.counts)

    @property
    def passed(self) -> bool:
        """max bucket <= k^(m - e), comparado sem ponto flutuante."""
        if self.max_bucket == 0:
            return True
        return LogValue(Fraction(self.max_bucket), self.k).compare(self.bound_exponent) <= 0

    @property
    def certified(self) -> bool:
        """Todas as instancias mapeadas e o limite respeitado: >= k^e estados."""
        return self.passed and self.unmapped == 0 and sum(self.counts.values()) == self.total

    @property
    def bound(self) -> str:
        return format_power(self.k, self.bound_exponent)

    @property
    def floor(self) -> str:
        return format_power(self.k, self.exponent)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pipeline": self.pipeline,
            "h": self.h,
            "k": self.k,
            "total": self.total,
            "counts": {str(state): count for state, count in sorted(self.counts.items())},
            "max": self.max_bucket,
            "bound": self.bound,
            "verdict": "pass" if self.passed else "fail",
            "distinct_states": self.distinct_states,
            "floor": self.floor,
            "certified": self.certified,
            "unmapped": self.unmapped,
            "failure": self.failure,
        }


@dataclass
class _ChunkResult:
    counts: Counter[int]
    unmapped: int = 0
    failure: dict[str, Any] | None = None


def _count_range(work: tuple[PreparedPipeline, int, int]) -> _ChunkResult:
    prepared, start, stop = work
    shape, k = prepared.bp.shape, prepared.bp.k
    result = _ChunkResult(Counter())
    for index in range(start, stop):
        instance = instance_from_index(shape, k, index)
        try:
            result.counts[prepared.supercritical(instance)] += 1
        except AnalysisError as exc:
            result.unmapped += 1
            if result.failure is None:
                result.failure = {"index": index, "message": str(exc), **exc.context}
    return result


def bottleneck_census(
    bp: BranchingProgram,
    pipeline: str | Pipeline,
    settings: LabSettings | None = None,
) -> CensusReport:
    """Mapeia cada instancia ao seu estado supercritico e confere o limite."""
    settings = settings or load_settings()
    if isinstance(pipeline, str):
        pipeline = get_pipeline(pipeline)
    h, k = bp.shape.h, bp.k
    total = instance_count(h, k)
    if total > settings.enumeration_cap:
        logger.error("Censo exige %d instancias; limite %d", total, settings.enumeration_cap)
        raise BudgetExceededError(
            f"Censo exige enumeracao exaustiva de {total} instancias",
            settings.enumeration_cap,
            total,
        )

    prepared = pipeline.prepare(bp, settings)
    work_items = [
        (prepared, start, stop)
        for start, stop in index_batches(total, settings.jobs * _CHUNKS_PER_JOB)
    ]
    if settings.jobs > 1 and len(work_items) > 1:
        with ProcessPoolExecutor(max_workers=settings.jobs) as executor:
            results = list(executor.map(_count_range, work_items))
    else:
        results = [_count_range(item) for item in work_items]

    report = CensusReport(pipeline.name, h, k, pipeline.exponent(h), total)
    merged: Counter[int] = Counter()
    for result in results:
        merged.update(result.counts)
        report.unmapped += result.unmapped
        if report.failure is None:
            report.failure = result.failure
    report.counts = dict(merged)

    logger.info(
        "Censo %s: max=%d limite=%s estados=%d (%s)",
        pipeline.name,
        report.max_bucket,
        report.bound,
        report.distinct_states,
        "ok" if report.passed else "falhou",
    )
    if report.unmapped:
        logger.info(
            "Censo %s: %d instancias sem estado supercritico", pipeline.name, report.unmapped
        )
    return report


def census_counting_violations(report: CensusReport, profile: StateValueProfile) -> list[int]:
    """Estados cuja contagem do censo excede k^(m - p_gamma)."""
    violations = []
    for state, count in sorted(report.counts.items()):
        if count * profile.k**profile.node_count > profile.total * profile.accept_product(state):
            violations.append(state)
    return violations
