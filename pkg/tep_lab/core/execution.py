"""Semantica de execucao: caminhos de computacao induzidos por uma instancia."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from tep_lab.config import LabSettings, load_settings
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import QueryId, TepInstance
from tep_lab.errors import BudgetExceededError, NoCompletePathError, NotDeterministicError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComputationPath:
    """Sequencia s0 -(a1)-> s1 -(a2)-> ... consistente com a instancia."""

    states: tuple[int, ...]
    labels: tuple[int, ...]
    queries: tuple[QueryId | None, ...]
    instance: TepInstance
    output: int | None = None

    def __len__(self) -> int:
        return len(self.states)

    @property
    def complete(self) -> bool:
        """Termina em um estado de saida."""
        return self.output is not None

    def query_nodes(self) -> list[int]:
        """No consultado em cada estado de consulta, na ordem do caminho."""
        return [q.node for q in self.queries if q is not None]

    def prefix(self, index: int) -> tuple[int, ...]:
        """C0: estados estritamente antes do indice."""
        return self.states[:index]

    def suffix(self, index: int) -> tuple[int, ...]:
        """C1: estados a partir do indice, inclusive."""
        return self.states[index:]

    def answered_queries(self, end: int) -> list[tuple[QueryId, int]]:
        """Consultas feitas antes do indice `end`, com as respostas."""
        return [
            (query, self.labels[j])
            for j, query in enumerate(self.queries[:end])
            if query is not None
        ]


def _make_path(
    bp: BranchingProgram, states: list[int], labels: list[int], instance: TepInstance
) -> ComputationPath:
    queries = tuple(bp.query(s) for s in states)
    return ComputationPath(
        tuple(states), tuple(labels), queries, instance, bp.output_value(states[-1])
    )


def run_deterministic(bp: BranchingProgram, instance: TepInstance) -> ComputationPath:
    """Segue a unica aresta consistente em cada estado ate uma saida."""
    if not bp.is_deterministic:
        logger.error("run_deterministic chamado em programa nao deterministico")
        raise NotDeterministicError("Programa nao e deterministico")
    states = [bp.start]
    labels: list[int] = []
    while True:
        query = bp.query(states[-1])
        if query is None:
            break
        answer = instance.answer(query)
        (target,) = bp.successors(states[-1], answer)
        labels.append(answer)
        states.append(target)
    return _make_path(bp, states, labels, instance)


def consistent_reach(
    bp: BranchingProgram, instance: TepInstance
) -> tuple[frozenset[int], frozenset[int]]:
    """(alcancados, atravessados): estados em algum caminho / em algum caminho completo."""
    reached = {bp.start}
    frontier = [bp.start]
    while frontier:
        state = frontier.pop()
        query = bp.query(state)
        if query is None:
            continue
        for target in bp.successors(state, instance.answer(query)):
            if target not in reached:
                reached.add(target)
                frontier.append(target)

    completes: set[int] = set()
    for state in reversed(bp.topological_order()):
        if state not in reached:
            continue
        query = bp.query(state)
        if query is None:
            completes.add(state)
        elif any(t in completes for t in bp.successors(state, instance.answer(query))):
            completes.add(state)
    return frozenset(reached), frozenset(completes)


def enumerate_complete_paths(
    bp: BranchingProgram, instance: TepInstance, settings: LabSettings | None = None
) -> list[ComputationPath]:
    """Todos os caminhos completos consistentes, em ordem lexicografica."""
    settings = settings or load_settings()
    _, through = consistent_reach(bp, instance)
    if bp.start not in through:
        return []

    paths: list[ComputationPath] = []
    stack: list[tuple[list[int], list[int]]] = [([bp.start], [])]
    while stack:
        states, labels = stack.pop()
        query = bp.query(states[-1])
        if query is None:
            paths.append(_make_path(bp, states, labels, instance))
            if len(paths) > settings.path_cap:
                raise BudgetExceededError(
                    f"Mais de {settings.path_cap} caminhos completos",
                    limit=settings.path_cap,
                )
            continue
        answer = instance.answer(query)
        for target in reversed(bp.successors(states[-1], answer)):
            if target in through:
                stack.append((states + [target], labels + [answer]))
    return paths


def canonical_path(bp: BranchingProgram, instance: TepInstance) -> ComputationPath:
    """Menor caminho completo na ordem (rotulo, id do sucessor)."""
    _, through = consistent_reach(bp, instance)
    if bp.start not in through:
        raise NoCompletePathError(f"Nenhum caminho completo para a instancia {instance.values}")
    states = [bp.start]
    labels: list[int] = []
    while True:
        query = bp.query(states[-1])
        if query is None:
            break
        answer = instance.answer(query)
        target = min(t for t in bp.successors(states[-1], answer) if t in through)
        labels.append(answer)
        states.append(target)
    return _make_path(bp, states, labels, instance)
