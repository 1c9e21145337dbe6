"""Estados criticos, pebbling preto por caminho e tags de valores aprendidos.

Um caminho completo em um programa deterministico e thrifty consulta todo no,
e cada filho antes do pai. O estado critico de cada no gera um movimento do
jogo preto; o primeiro estado com h pebbles e o supercritico, e o tag
(estado, v, x) identifica a instancia a partir dele.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from tep_lab.core.execution import ComputationPath, run_deterministic
from tep_lab.core.program import BranchingProgram
from tep_lab.core.tree import Func, QueryId, TepInstance, TreeShape, non_thrifty_slots
from tep_lab.errors import AnalysisError
from tep_lab.pebbling.configuration import BlackSlide, Game, PlaceBlackLeaf
from tep_lab.pebbling.sequence import PebbleSequence

logger = logging.getLogger(__name__)

CriticalMap = dict[int, int]


def _last_query_before(path: ComputationPath, node: int, end: int) -> int | None:
    for index in range(end - 1, -1, -1):
        query = path.queries[index]
        if query is not None and query.node == node:
            return index
    return None


def det_thrifty_critical_states(path: ComputationPath) -> CriticalMap:
    """No -> indice no caminho do seu estado critico.

    Raiz: ultima consulta a raiz. Demais: ultima consulta antes do estado
    critico do pai.
    """
    shape = path.instance.shape
    critical: CriticalMap = {}
    for node in shape.nodes:
        parent = shape.parent(node)
        end = len(path) if parent is None else critical[parent]
        index = _last_query_before(path, node, end)
        if index is None:
            raise AnalysisError(
                f"No {node} nao e consultado antes do estado critico do pai",
                {"node": node, "parent": parent, "path": list(path.states)},
            )
        critical[node] = index
    return critical


def critical_order_holds(critical: CriticalMap, shape: TreeShape) -> bool:
    """Todo indice critico de filho precede o do pai."""
    return all(
        critical[node] < critical[parent]
        for node in shape.nodes
        if (parent := shape.parent(node)) is not None
    )


def det_thrifty_pebbling(
    path: ComputationPath, critical: CriticalMap | None = None
) -> PebbleSequence:
    """Um movimento preto por estado critico.

    A configuracao inicial fica associada ao primeiro estado critico; cada
    configuracao produzida, ao estado critico seguinte, e a ultima, ao estado
    de saida. Os marcadores sao indices no caminho.
    """
    shape = path.instance.shape
    critical = critical or det_thrifty_critical_states(path)
    order = sorted(critical, key=critical.__getitem__)
    seq = PebbleSequence.start(Game.BLACK, shape.h)
    seq.mark(critical[order[0]])
    for position, node in enumerate(order):
        if position + 1 < len(order):
            following = critical[order[position + 1]]
        else:
            following = len(path) - 1
        if shape.is_leaf(node):
            seq.apply(PlaceBlackLeaf(node), marker=following)
        else:
            seq.apply(BlackSlide(node, frozenset(shape.children(node))), marker=following)
    return seq


def supercritical_index(seq: PebbleSequence, pebbles: int) -> int:
    """Marcador da primeira configuracao com pelo menos `pebbles` pebbles."""
    for index, config in enumerate(seq.configurations):
        if config.cost >= pebbles and index in seq.markers:
            return int(seq.markers[index])
    raise AnalysisError(
        f"Nenhuma configuracao com {pebbles} pebbles",
        {"max": max(int(c.cost) for c in seq.configurations)},
    )


@dataclass(frozen=True)
class Tag:
    """Descricao curta de uma instancia a partir de um estado gargalo.

    Forma deterministica: (state, v, x). Forma semantica: (u, state, x), com
    u o codigo de Lehmer da permutacao de nos do caminho.
    """

    state: int
    x: tuple[int, ...]
    v: tuple[int, ...] = ()
    u: int | None = None

    @property
    def form(self) -> str:
        return "det" if self.u is None else "semantic"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"form": self.form, "state": self.state, "x": list(self.x)}
        if self.u is None:
            data["v"] = list(self.v)
        else:
            data["u"] = self.u
        return data


@dataclass
class LearningReplay:
    """Repete C1 acumulando valores aprendidos e consultados.

    Um no e aprendido quando o pai e consultado antes dele; o valor e o
    argumento correspondente da consulta do pai. O valor de um no consultado
    sem ter sido aprendido vem de `value_of`.
    """

    shape: TreeShape
    value_of: Callable[[int], int]
    known: dict[int, int] = field(default_factory=dict)
    queried: set[int] = field(default_factory=set)
    learned: list[int] = field(default_factory=list)
    unlearned: list[int] = field(default_factory=list)

    def observe(self, query: QueryId) -> int:
        """Processa a consulta e devolve a resposta thrifty esperada."""
        node = query.node
        if node not in self.queried:
            self.queried.add(node)
            if node not in self.known:
                self.known[node] = self.value_of(node)
                self.unlearned.append(node)
        if isinstance(query, Func):
            for child, argument in zip(self.shape.children(node), (query.x, query.y)):
                if child not in self.queried and child not in self.known:
                    self.known[child] = argument
                    self.learned.append(child)
        return self.known[node]

    def remaining(self, h: int) -> list[int]:
        """Nos de u2: fora de u1 e fora dos h primeiros aprendidos, em ordem crescente."""
        excluded = set(self.unlearned) | set(self.learned[:h])
        return [node for node in self.shape.nodes if node not in excluded]


def _fill_instance(
    shape: TreeShape, k: int, node_values: dict[int, int], free: Iterator[int]
) -> TepInstance:
    """Instancia com os valores de nos dados e os slots nao-thrifty tirados de `free`."""
    leaves = [node_values[i] for i in shape.leaves]
    tables: dict[int, list[list[int]]] = {}
    for node in shape.internal_nodes:
        left, right = shape.children(node)
        thrifty = (node_values[left], node_values[right])
        tables[node] = [
            [
                node_values[node] if (x, y) == thrifty else next(free)
                for y in range(1, k + 1)
            ]
            for x in range(1, k + 1)
        ]
    return TepInstance.from_parts(shape, k, leaves, tables)


def non_thrifty_values(instance: TepInstance) -> tuple[int, ...]:
    """Valores dos slots de tabela fora das consultas thrifty, em ordem canonica."""
    return tuple(instance.values[s] for s in non_thrifty_slots(instance))


def det_thrifty_tag(path: ComputationPath) -> Tag:
    """(estado supercritico, v = u1 u2, valores nao-thrifty)."""
    instance = path.instance
    shape = instance.shape
    seq = det_thrifty_pebbling(path)
    gamma = supercritical_index(seq, shape.h)
    replay = LearningReplay(shape, instance.node_value)
    for query in path.queries[gamma:]:
        if query is not None:
            replay.observe(query)
    if len(replay.learned) < shape.h:
        raise AnalysisError(
            f"Apenas {len(replay.learned)} nos aprendidos apos o supercritico",
            {"state": path.states[gamma], "learned": replay.learned},
        )
    v = tuple(instance.node_value(n) for n in replay.unlearned + replay.remaining(shape.h))
    expected = shape.node_count - shape.h
    if len(v) != expected:
        raise AnalysisError(
            f"Tag com {len(v)} valores de nos; esperado {expected}",
            {"state": path.states[gamma]},
        )
    return Tag(state=path.states[gamma], x=non_thrifty_values(instance), v=v)


def det_thrifty_untag(bp: BranchingProgram, tag: Tag) -> TepInstance:
    """Reconstroi a instancia repetindo C1 a partir do estado do tag."""
    shape, k = bp.shape, bp.k
    u1 = iter(tag.v)

    def next_value(node: int) -> int:
        try:
            return next(u1)
        except StopIteration:
            raise AnalysisError(
                "Tag sem valores suficientes em u1", {"state": tag.state, "node": node}
            ) from None

    replay = LearningReplay(shape, next_value)
    state = tag.state
    while not bp.is_output(state):
        query = bp.query(state)
        assert query is not None
        answer = replay.observe(query)
        targets = bp.successors(state, answer)
        if len(targets) != 1:
            raise AnalysisError(
                f"Estado {state} sem aresta unica para {answer}",
                {"state": state, "query": str(query)},
            )
        state = targets[0]

    node_values = dict(replay.known)
    rest = list(u1)
    remaining = replay.remaining(shape.h)
    if len(rest) != len(remaining):
        raise AnalysisError(
            f"u2 com {len(rest)} valores para {len(remaining)} nos",
            {"state": tag.state},
        )
    node_values.update(zip(remaining, rest))
    missing = [n for n in shape.nodes if n not in node_values]
    if missing:
        raise AnalysisError(f"Nos sem valor apos a repeticao: {missing}", {"state": tag.state})

    free_count = (k * k - 1) * len(shape.internal_nodes)
    if len(tag.x) != free_count:
        raise AnalysisError(
            f"x com {len(tag.x)} valores; esperado {free_count}", {"state": tag.state}
        )
    instance = _fill_instance(shape, k, node_values, iter(tag.x))
    if det_thrifty_tag(run_deterministic(bp, instance)) != tag:
        raise AnalysisError(
            "Instancia reconstruida nao reproduz o tag",
            {"state": tag.state, "values": list(instance.values)},
        )
    return instance


def det_thrifty_supercritical(path: ComputationPath) -> int:
    """Estado supercritico do caminho no pipeline deterministico thrifty."""
    seq = det_thrifty_pebbling(path)
    return path.states[supercritical_index(seq, path.instance.h)]
