"""Pebbling de caminhos em programas deterministicos read-once.

Cada estado e processado em duas fases. A memoria (consultas feitas antes do
estado) define Range, equivalencia e atividade de cada no; depois a consulta
anterior vira pebble (preta para folha, cinza para funcao) e uma passada de
baixo para cima limpa as pebbles que deixaram de ser necessarias.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any

from tep_lab.core.execution import ComputationPath
from tep_lab.core.tree import Func, Leaf, TepInstance, TreeShape
from tep_lab.errors import AnalysisError, IllegalMoveError
from tep_lab.pebbling.configuration import BlackSlide, Game, PlaceBlackLeaf, RemovePebble
from tep_lab.pebbling.sequence import PebbleSequence

logger = logging.getLogger(__name__)

TableKey = tuple[int, int, int]
GreyLabel = tuple[int, int, int]


@dataclass
class AnalysisMemory:
    """Memoria do algoritmo em um estado: consultas anteriores e o que delas se deduz."""

    k: int
    leaves: dict[int, int] = field(default_factory=dict)
    table: dict[TableKey, int] = field(default_factory=dict)
    ranges: dict[int, frozenset[int]] = field(default_factory=dict)
    complete: dict[int, bool] = field(default_factory=dict)
    classes: dict[int, list[frozenset[int]]] = field(default_factory=dict)
    active: dict[int, bool] = field(default_factory=dict)

    def class_of(self, node: int, value: int) -> int:
        for index, members in enumerate(self.classes[node]):
            if value in members:
                return index
        raise KeyError((node, value))

    def equivalent(self, node: int, a1: int, a2: int) -> bool:
        return a1 == a2 or self.class_of(node, a1) == self.class_of(node, a2)

    def has_gap(self, node: int) -> bool:
        return not self.complete[node]

    def relevant_queries(self, shape: TreeShape, node: int) -> int:
        """Consultas f_i(x, y) ja feitas com x, y nos Ranges dos filhos."""
        if shape.is_leaf(node):
            return 0
        left, right = shape.children(node)
        return sum(
            1
            for (n, x, y) in self.table
            if n == node and x in self.ranges[left] and y in self.ranges[right]
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "ranges": {str(i): sum(1 << (a - 1) for a in r) for i, r in self.ranges.items()},
            "classes": {
                str(i): [sorted(members) for members in parts]
                for i, parts in self.classes.items()
            },
            "active": {str(i): flag for i, flag in self.active.items()},
        }


def build_memory(shape: TreeShape, k: int, path: ComputationPath, end: int) -> AnalysisMemory:
    """Memoria a partir das consultas nos indices < end."""
    memory = AnalysisMemory(k)
    for query, answer in path.answered_queries(end):
        if isinstance(query, Leaf):
            memory.leaves[query.node] = answer
        else:
            memory.table[(query.node, query.x, query.y)] = answer

    full = frozenset(range(1, k + 1))
    for node in shape.bottom_up():
        if shape.is_leaf(node):
            queried = node in memory.leaves
            memory.complete[node] = queried
            memory.ranges[node] = frozenset({memory.leaves[node]}) if queried else full
            continue
        left, right = shape.children(node)
        pairs = [(x, y) for x in memory.ranges[left] for y in memory.ranges[right]]
        complete = all((node, x, y) in memory.table for x, y in pairs)
        memory.complete[node] = complete
        memory.ranges[node] = (
            frozenset(memory.table[(node, x, y)] for x, y in pairs) if complete else full
        )

    for node in shape.nodes:
        _update_classes(shape, memory, node)
        parent = shape.parent(node)
        parent_active = True if parent is None else memory.active[parent]
        memory.active[node] = parent_active and len(memory.classes[node]) > 1
    return memory


def _update_classes(shape: TreeShape, memory: AnalysisMemory, node: int) -> None:
    values = sorted(memory.ranges[node])
    parent = shape.parent(node)
    if parent is None:
        memory.classes[node] = [frozenset({a}) for a in values]
        return
    sibling = shape.sibling(node)
    left = shape.is_left_child(node)
    groups: dict[Any, set[int]] = defaultdict(set)
    for a in values:
        signature: list[int] | None = []
        for b in sorted(memory.ranges[sibling]):
            key = (parent, a, b) if left else (parent, b, a)
            if key not in memory.table:
                signature = None
                break
            assert signature is not None
            signature.append(memory.class_of(parent, memory.table[key]))
        group_key: Any = ("own", a) if signature is None else tuple(signature)
        groups[group_key].add(a)
    memory.classes[node] = sorted((frozenset(g) for g in groups.values()), key=min)


@dataclass(frozen=True)
class TraceConfiguration:
    """Pretas (no, valor) e cinzas (no, a, b, c) associadas a um estado."""

    black: tuple[tuple[int, int], ...] = ()
    grey: tuple[tuple[int, int, int, int], ...] = ()

    @property
    def cost(self) -> int:
        return len(self.black) + len(self.grey)

    @property
    def black_nodes(self) -> tuple[int, ...]:
        return tuple(node for node, _ in self.black)

    def to_dict(self) -> dict[str, Any]:
        return {
            "black": [f"[{i},{a}]" for i, a in self.black],
            "grey": [f"[{2 * i},{a}]&[{2 * i + 1},{b}]=>[{i},{c}]" for i, a, b, c in self.grey],
        }


@dataclass(frozen=True)
class PebbleEvent:
    """Colocacao ou remocao de preta durante o processamento do estado `index`."""

    index: int
    kind: str
    node: int


@dataclass
class AnalysisTrace:
    path: ComputationPath
    memories: list[AnalysisMemory] = field(default_factory=list)
    configurations: list[TraceConfiguration] = field(default_factory=list)
    events: list[PebbleEvent] = field(default_factory=list)

    @property
    def shape(self) -> TreeShape:
        return self.path.instance.shape

    def pebble_counts(self) -> list[int]:
        return [config.cost for config in self.configurations]

    def to_dict(self, supercritical: int | None = None) -> dict[str, Any]:
        return {
            "states": list(self.path.states),
            "memories": [m.to_dict() for m in self.memories],
            "configurations": [c.to_dict() for c in self.configurations],
            "supercritical": supercritical,
        }


class _PebbleBoard:
    def __init__(self, trace: AnalysisTrace) -> None:
        self.trace = trace
        self.black: dict[int, int] = {}
        self.grey: dict[int, set[GreyLabel]] = defaultdict(set)
        self.ever_black: set[int] = set()

    def place_black(self, index: int, node: int, value: int) -> None:
        if node in self.ever_black:
            return
        self.ever_black.add(node)
        self.black[node] = value
        self.trace.events.append(PebbleEvent(index, "place", node))

    def remove_black(self, index: int, node: int) -> None:
        if self.black.pop(node, None) is not None:
            self.trace.events.append(PebbleEvent(index, "remove", node))

    def snapshot(self) -> TraceConfiguration:
        return TraceConfiguration(
            tuple(sorted(self.black.items())),
            tuple(sorted((i, a, b, c) for i, labels in self.grey.items() for a, b, c in labels)),
        )


def _require_read_once(path: ComputationPath) -> None:
    seen = set()
    for index, query in enumerate(path.queries):
        if query is None:
            continue
        if query in seen:
            raise AnalysisError(
                f"Consulta {query} repetida no caminho",
                {"index": index, "state": path.states[index]},
            )
        seen.add(query)


def pebbling_trace(path: ComputationPath) -> AnalysisTrace:
    """Executa o algoritmo de pebbling sobre o caminho, estado a estado."""
    _require_read_once(path)
    instance = path.instance
    shape, k = instance.shape, instance.k
    trace = AnalysisTrace(path)
    board = _PebbleBoard(trace)

    for index in range(len(path)):
        memory = build_memory(shape, k, path, index)
        trace.memories.append(memory)

        if index > 0:
            previous = path.queries[index - 1]
            answer = path.labels[index - 1]
            if isinstance(previous, Leaf):
                board.place_black(index, previous.node, answer)
            elif isinstance(previous, Func):
                board.grey[previous.node].add((previous.x, previous.y, answer))

        for node in shape.bottom_up():
            if not memory.active[node]:
                board.grey.pop(node, None)
                if len(memory.ranges[node]) == 1:
                    (value,) = memory.ranges[node]
                    board.place_black(index, node, value)
            if shape.is_internal(node) and (not memory.active[node] or memory.complete[node]):
                for child in shape.children(node):
                    board.remove_black(index, child)
            parent = shape.parent(node)
            if parent is not None and parent in board.grey:
                position = 0 if shape.is_left_child(node) else 1
                board.grey[parent] = {
                    label
                    for label in board.grey[parent]
                    if label[position] in memory.ranges[node]
                }
        trace.configurations.append(board.snapshot())

    logger.debug(
        "Traco de %d estados; pebbles por estado %s", len(path), trace.pebble_counts()
    )
    return trace


def check_efficient(path: ComputationPath, trace: AnalysisTrace) -> bool:
    """Nenhum no ativo acumula k - 1 consultas relevantes."""
    shape, k = path.instance.shape, path.instance.k
    for memory in trace.memories:
        for node in shape.internal_nodes:
            if memory.active[node] and memory.relevant_queries(shape, node) >= k - 1:
                return False
    return True


def ro_det_supercritical_index(trace: AnalysisTrace) -> int:
    """Indice do primeiro estado com pelo menos h pebbles (pretas ou cinzas)."""
    h = trace.shape.h
    for index, config in enumerate(trace.configurations):
        if config.cost >= h:
            return index
    raise AnalysisError(
        f"Nenhum estado com {h} pebbles no caminho",
        {"path": list(trace.path.states), "counts": trace.pebble_counts()},
    )


def ro_det_supercritical(path: ComputationPath, trace: AnalysisTrace | None = None) -> int:
    """Estado supercritico do pipeline deterministico read-once."""
    trace = trace or pebbling_trace(path)
    return path.states[ro_det_supercritical_index(trace)]


def strip_grey(trace: AnalysisTrace) -> PebbleSequence:
    """Sequencia preta das micro-configuracoes, sem as cinzas.

    Marcadores: indice do estado cuja configuracao final coincide com a atual.
    """
    shape = trace.shape
    seq = PebbleSequence.start(Game.BLACK, shape.h)
    seq.mark(0)
    events = iter(trace.events)
    pending = next(events, None)
    try:
        for index in range(len(trace.configurations)):
            while pending is not None and pending.index == index:
                if pending.kind == "remove":
                    seq.apply(RemovePebble(pending.node))
                elif shape.is_leaf(pending.node):
                    seq.apply(PlaceBlackLeaf(pending.node))
                else:
                    seq.apply(BlackSlide(pending.node))
                pending = next(events, None)
            seq.mark(index)
    except IllegalMoveError as exc:
        raise AnalysisError(
            f"Micro-configuracao preta ilegal: {exc.rule}",
            {"path": list(trace.path.states), "node": pending.node if pending else None},
        ) from exc
    return seq


def check_trace_invariants(trace: AnalysisTrace, instance: TepInstance) -> list[str]:
    """Violacoes das invariantes do traco; lista vazia quando todas valem."""
    shape = trace.shape
    problems: list[str] = []
    for index in range(1, len(trace.memories)):
        before, after = trace.memories[index - 1], trace.memories[index]
        for node in shape.nodes:
            if not after.ranges[node] <= before.ranges[node]:
                problems.append(f"estado {index}: Range({node}) cresceu")
            if after.active[node] and not before.active[node]:
                problems.append(f"estado {index}: no {node} voltou a ser ativo")
            for members in before.classes[node]:
                kept = sorted(members & after.ranges[node])
                if any(not after.equivalent(node, kept[0], a) for a in kept[1:]):
                    problems.append(f"estado {index}: equivalencia de {node} refinou")

    placed: dict[int, int] = defaultdict(int)
    for event in trace.events:
        if event.kind == "place":
            placed[event.node] += 1
    problems.extend(f"no {n} recebeu preta {c} vezes" for n, c in placed.items() if c > 1)

    for index, (memory, config) in enumerate(zip(trace.memories, trace.configurations)):
        for node, value in config.black:
            if instance.node_value(node) != value:
                problems.append(f"estado {index}: preta [{node},{value}] incorreta")
        for node, a, b, _ in config.grey:
            left, right = shape.children(node)
            if a not in memory.ranges[left] or b not in memory.ranges[right]:
                problems.append(f"estado {index}: cinza em {node} fora dos Ranges")

    if trace.configurations and 1 not in trace.configurations[-1].black_nodes:
        problems.append("configuracao final sem preta na raiz")
    return problems


def _all_active_have_gaps(memory: AnalysisMemory, shape: TreeShape) -> bool:
    return all(memory.has_gap(n) for n in shape.nodes if memory.active[n])


def _configs_match(
    first: TraceConfiguration,
    second: TraceConfiguration,
    memory: AnalysisMemory,
) -> bool:
    if first.black != second.black:
        return False
    first_grey = {(i, a, b): c for i, a, b, c in first.grey}
    second_grey = {(i, a, b): c for i, a, b, c in second.grey}
    if first_grey.keys() != second_grey.keys():
        return False
    return all(
        c == second_grey[key] or _equivalent_in_range(memory, key[0], c, second_grey[key])
        for key, c in first_grey.items()
    )


def _equivalent_in_range(memory: AnalysisMemory, node: int, c: int, d: int) -> bool:
    in_range = c in memory.ranges[node] and d in memory.ranges[node]
    return in_range and memory.equivalent(node, c, d)


def check_identical_configurations(traces: list[AnalysisTrace]) -> list[str]:
    """Configuracoes de dois caminhos no mesmo estado coincidem a menos de equivalencia.

    Vale quando todo no ativo tem lacuna nos dois caminhos.
    """
    by_state: dict[int, list[tuple[AnalysisTrace, int]]] = defaultdict(list)
    for trace in traces:
        shape = trace.shape
        for index, state in enumerate(trace.path.states):
            if _all_active_have_gaps(trace.memories[index], shape):
                by_state[state].append((trace, index))

    problems: list[str] = []
    for state, entries in sorted(by_state.items()):
        reference, ref_index = entries[0]
        for other, index in entries[1:]:
            if not _configs_match(
                reference.configurations[ref_index],
                other.configurations[index],
                reference.memories[ref_index],
            ):
                problems.append(
                    f"estado {state}: configuracoes diferem entre caminhos "
                    f"{list(reference.path.states)} e {list(other.path.states)}"
                )
    return problems


def pebble_count_steps(trace: AnalysisTrace) -> list[int]:
    """Indices onde o total de pebbles cresce mais de 1 em relacao ao estado anterior."""
    counts = trace.pebble_counts()
    return [i for i in range(1, len(counts)) if counts[i] - counts[i - 1] > 1]
